#ifndef SKOTCH_GRAPH_HPP
#define SKOTCH_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace skotch {

/**
 * Immutable undirected simple graph. Adjacency lists are sorted; max_degree
 * is maintained on construction.
 */
struct Graph {
    int n = 0;
    std::vector<std::vector<int>> adj;
    int max_degree = 0;

    // Throws std::invalid_argument on self-loops, duplicates or out-of-range ids.
    static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

    int degree(int v) const { return int(adj[v].size()); }
    bool has_edge(int u, int v) const;
    std::vector<std::pair<int, int>> edges() const; // each with u < v
    size_t edge_count() const;

    // component id per vertex (ids assigned in order of smallest member)
    std::vector<int> components() const;
    std::vector<int> component_of(int v) const; // sorted vertex list
};

// Generators. All throw std::invalid_argument on bad parameters.
Graph gen_matching(int m);
Graph gen_path(int n);
Graph gen_complete_dary_tree(int d, int depth);
Graph gen_hypercube(int d); // d > 30 rejected
Graph gen_star_centers(int n, int d); // n disjoint stars of degree d; center first in each block
Graph gen_random_bounded(int n, int d, uint64_t seed);

// BFS order from root, continuing from the lowest-id unvisited vertex.
std::vector<int> bfs_order(const Graph& g, int root);
// Parent per vertex under the same traversal (-1 for roots).
std::vector<int> bfs_parents(const Graph& g, int root);

struct VertexColoring {
    std::vector<int> colors;
    int palette_size = 0;
};

// Greedy proper coloring of G^2 in vertex-id order; palette <= d^2+1.
VertexColoring distance2_coloring(const Graph& g);

struct EdgeColorCover {
    // matchings[i] lists the edges (u < v) of color class i
    std::vector<std::vector<std::pair<int, int>>> matchings;
    size_t count() const { return matchings.size(); }
};

// Proper edge coloring grouped by class: Misra-Gries (<= d+1 classes) in
// general, root-down greedy (<= d classes) on forests.
EdgeColorCover edge_color_cover(const Graph& g);

// Orientation with out-degree <= ceil(d/2) via Eulerian circuits.
// Deterministic in the graph alone. Returns directed edges (from, to).
std::vector<std::pair<int, int>> orient_halved(const Graph& g);

bool is_forest(const Graph& g);
bool is_path_forest(const Graph& g); // disjoint union of paths

// Text format: "p adj <n> <m>", one "u v" per line, '#' comments.
// Throws std::invalid_argument on malformed input, duplicates or self-loops.
Graph read_graph_text(std::istream& in);
void write_graph_text(std::ostream& out, const Graph& g);

// All-pairs-free BFS distance from a single source (n for unreachable).
std::vector<int> bfs_distance(const Graph& g, int src);

} // namespace skotch

#endif
