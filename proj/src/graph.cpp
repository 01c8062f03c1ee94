#include "skotch/graph.hpp"
#include "skotch/rng.hpp"
#include "skotch/bits.hpp"

#include <algorithm>
#include <cassert>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace skotch {

bool from_hex(const std::string& s, std::vector<uint8_t>& out) {
    if (s.size() % 2) return false;
    out.clear();
    out.reserve(s.size() / 2);
    auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    for (size_t i = 0; i < s.size(); i += 2) {
        int hi = nib(s[i]), lo = nib(s[i + 1]);
        if (hi < 0 || lo < 0) return false;
        out.push_back(uint8_t(hi << 4 | lo));
    }
    return true;
}

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n < 0) throw std::invalid_argument("negative vertex count");
    Graph g;
    g.n = n;
    g.adj.assign(n, {});
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw std::invalid_argument("edge endpoint out of range");
        if (u == v) throw std::invalid_argument("self-loop");
        auto key = std::minmax(u, v);
        if (!seen.insert({key.first, key.second}).second)
            throw std::invalid_argument("duplicate edge");
        g.adj[u].push_back(v);
        g.adj[v].push_back(u);
    }
    for (auto& a : g.adj) {
        std::sort(a.begin(), a.end());
        g.max_degree = std::max<int>(g.max_degree, int(a.size()));
    }
    return g;
}

bool Graph::has_edge(int u, int v) const {
    return std::binary_search(adj[u].begin(), adj[u].end(), v);
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> es;
    for (int u = 0; u < n; ++u)
        for (int v : adj[u])
            if (u < v) es.push_back({u, v});
    return es;
}

size_t Graph::edge_count() const {
    size_t s = 0;
    for (auto& a : adj) s += a.size();
    return s / 2;
}

std::vector<int> Graph::components() const {
    std::vector<int> comp(n, -1);
    int c = 0;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<int> stack{s};
        comp[s] = c;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : adj[u])
                if (comp[v] < 0) { comp[v] = c; stack.push_back(v); }
        }
        ++c;
    }
    return comp;
}

std::vector<int> Graph::component_of(int v) const {
    auto comp = components();
    std::vector<int> out;
    for (int u = 0; u < n; ++u)
        if (comp[u] == comp[v]) out.push_back(u);
    return out;
}

Graph gen_matching(int m) {
    if (m <= 0) throw std::invalid_argument("matching: m must be positive");
    std::vector<std::pair<int, int>> es;
    for (int i = 0; i < m; ++i) es.push_back({2 * i, 2 * i + 1});
    return Graph::from_edges(2 * m, es);
}

Graph gen_path(int n) {
    if (n <= 0) throw std::invalid_argument("path: n must be positive");
    std::vector<std::pair<int, int>> es;
    for (int i = 0; i + 1 < n; ++i) es.push_back({i, i + 1});
    return Graph::from_edges(n, es);
}

Graph gen_complete_dary_tree(int d, int depth) {
    if (d <= 0 || depth < 0) throw std::invalid_argument("dary-tree: bad parameters");
    // count vertices, guarding overflow
    long long total = 1, level = 1;
    for (int i = 0; i < depth; ++i) {
        level *= d;
        total += level;
        if (total > 2'000'000) throw std::invalid_argument("dary-tree: too large");
    }
    std::vector<std::pair<int, int>> es;
    // vertices in BFS layout: children of v are d*v+1 .. d*v+d
    for (int v = 0; v < int(total); ++v)
        for (int c = 1; c <= d; ++c) {
            long long ch = (long long)d * v + c;
            if (ch < total) es.push_back({v, int(ch)});
        }
    return Graph::from_edges(int(total), es);
}

Graph gen_hypercube(int d) {
    if (d <= 0 || d > 30) throw std::invalid_argument("hypercube: d out of range");
    int n = 1 << d;
    std::vector<std::pair<int, int>> es;
    for (int v = 0; v < n; ++v)
        for (int b = 0; b < d; ++b)
            if (!(v >> b & 1)) es.push_back({v, v | (1 << b)});
    return Graph::from_edges(n, es);
}

Graph gen_star_centers(int n, int d) {
    if (n <= 0 || d <= 0) throw std::invalid_argument("star-centers: bad parameters");
    std::vector<std::pair<int, int>> es;
    for (int i = 0; i < n; ++i) {
        int base = i * (d + 1);
        for (int j = 1; j <= d; ++j) es.push_back({base, base + j});
    }
    return Graph::from_edges(n * (d + 1), es);
}

Graph gen_random_bounded(int n, int d, uint64_t seed) {
    if (n <= 0 || d <= 0) throw std::invalid_argument("random-bounded: bad parameters");
    Stream rng{mix64(seed ^ 0x9a4e1c5b1ull)};
    std::vector<int> deg(n, 0);
    std::set<std::pair<int, int>> es;
    for (int attempts = 0; attempts < 8 * n * d; ++attempts) {
        int u = int(rng.below(n)), v = int(rng.below(n));
        if (u == v) continue;
        if (deg[u] >= d || deg[v] >= d) continue;
        auto key = std::minmax(u, v);
        if (es.insert({key.first, key.second}).second) { ++deg[u]; ++deg[v]; }
    }
    return Graph::from_edges(n, {es.begin(), es.end()});
}

static void bfs_walk(const Graph& g, int root,
                     std::vector<int>& order, std::vector<int>& parent) {
    order.clear();
    parent.assign(g.n, -1);
    std::vector<char> seen(g.n, 0);
    auto run = [&](int s) {
        size_t head = order.size();
        order.push_back(s);
        seen[s] = 1;
        while (head < order.size()) {
            int u = order[head++];
            for (int v : g.adj[u])
                if (!seen[v]) { seen[v] = 1; parent[v] = u; order.push_back(v); }
        }
    };
    if (root < 0 || root >= g.n) throw std::invalid_argument("bfs: bad root");
    run(root);
    for (int s = 0; s < g.n; ++s)
        if (!seen[s]) run(s);
}

std::vector<int> bfs_order(const Graph& g, int root) {
    std::vector<int> order, parent;
    bfs_walk(g, root, order, parent);
    return order;
}

std::vector<int> bfs_parents(const Graph& g, int root) {
    std::vector<int> order, parent;
    bfs_walk(g, root, order, parent);
    return parent;
}

std::vector<int> bfs_distance(const Graph& g, int src) {
    std::vector<int> dist(g.n, g.n);
    dist[src] = 0;
    std::vector<int> q{src};
    size_t head = 0;
    while (head < q.size()) {
        int u = q[head++];
        for (int v : g.adj[u])
            if (dist[v] == g.n) { dist[v] = dist[u] + 1; q.push_back(v); }
    }
    return dist;
}

VertexColoring distance2_coloring(const Graph& g) {
    VertexColoring vc;
    vc.colors.assign(g.n, -1);
    for (int v = 0; v < g.n; ++v) {
        std::set<int> used;
        for (int u : g.adj[v]) {
            if (vc.colors[u] >= 0) used.insert(vc.colors[u]);
            for (int w : g.adj[u])
                if (w != v && vc.colors[w] >= 0) used.insert(vc.colors[w]);
        }
        int c = 0;
        while (used.count(c)) ++c;
        vc.colors[v] = c;
        vc.palette_size = std::max(vc.palette_size, c + 1);
    }
    return vc;
}

bool is_forest(const Graph& g) {
    // forest iff every component has |E| = |V| - 1
    auto comp = g.components();
    int nc = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    return g.edge_count() + size_t(nc) == size_t(g.n);
}

bool is_path_forest(const Graph& g) {
    return g.max_degree <= 2 && is_forest(g);
}

// ---- edge coloring ----

namespace {

// Forest edge coloring with <= d classes: root-down greedy.
std::vector<int> forest_edge_colors(const Graph& g, int d,
                                    const std::vector<std::pair<int, int>>& es) {
    // edge index lookup
    std::vector<std::vector<std::pair<int, int>>> inc(g.n); // (neighbor, edge id)
    for (int e = 0; e < int(es.size()); ++e) {
        inc[es[e].first].push_back({es[e].second, e});
        inc[es[e].second].push_back({es[e].first, e});
    }
    std::vector<int> color(es.size(), -1);
    auto order = bfs_order(g, 0);
    auto parent = bfs_parents(g, 0);
    for (int v : order) {
        int parent_color = -1;
        for (auto [u, e] : inc[v])
            if (u == parent[v]) parent_color = color[e];
        int next = 0;
        for (auto [u, e] : inc[v]) {
            if (u == parent[v]) continue;
            if (next == parent_color) ++next;
            color[e] = next++;
            if (next == parent_color) ++next;
        }
        (void)d;
        assert(next <= d + (parent_color >= 0 ? 1 : 0));
    }
    return color;
}

// Misra-Gries: proper edge coloring with <= d+1 classes.
struct MisraGries {
    const Graph& g;
    int C; // d+1 colors
    const std::vector<std::pair<int, int>>& es;
    std::vector<int> color;                   // per edge, -1 = uncolored
    std::vector<std::vector<int>> at;         // at[v][c] = edge id or -1
    std::vector<std::vector<std::pair<int, int>>> inc; // (neighbor, edge id)

    MisraGries(const Graph& g_, const std::vector<std::pair<int, int>>& es_)
        : g(g_), C(g_.max_degree + 1), es(es_), color(es_.size(), -1),
          at(g_.n, std::vector<int>(C, -1)), inc(g_.n) {
        for (int e = 0; e < int(es.size()); ++e) {
            inc[es[e].first].push_back({es[e].second, e});
            inc[es[e].second].push_back({es[e].first, e});
        }
    }

    int free_color(int v) const {
        for (int c = 0; c < C; ++c)
            if (at[v][c] < 0) return c;
        assert(false);
        return -1;
    }
    bool is_free(int v, int c) const { return at[v][c] < 0; }

    void set(int e, int c) {
        auto [u, v] = es[e];
        if (color[e] >= 0) { at[u][color[e]] = at[v][color[e]] = -1; }
        color[e] = c;
        if (c >= 0) { at[u][c] = at[v][c] = e; }
    }

    int edge_between(int u, int v) const {
        for (auto [w, e] : inc[u])
            if (w == v) return e;
        return -1;
    }

    void invert_cd_path(int x, int c, int d) {
        // path from x along colors d, c, d, ...; swap c and d on it
        int v = x, want = d;
        std::vector<int> path;
        while (true) {
            int e = at[v][want];
            if (e < 0) break;
            path.push_back(e);
            v = es[e].first == v ? es[e].second : es[e].first;
            want = (want == d) ? c : d;
        }
        for (int e : path) set(e, -1);
        want = c; // after inversion the first edge carries c
        for (int e : path) { set(e, want); want = (want == d) ? c : d; }
    }

    void run() {
        for (int e0 = 0; e0 < int(es.size()); ++e0) {
            int x = es[e0].first;
            // maximal fan of x starting at the other endpoint
            std::vector<int> fan{es[e0].second};
            std::vector<char> in_fan(g.n, 0);
            in_fan[fan[0]] = 1;
            while (true) {
                int last = fan.back();
                int fc = free_color(last);
                int e = at[x][fc];
                if (e < 0) break;
                int z = es[e].first == x ? es[e].second : es[e].first;
                if (in_fan[z]) break;
                fan.push_back(z);
                in_fan[z] = 1;
            }
            int c = free_color(x);
            int d = free_color(fan.back());
            if (c != d) invert_cd_path(x, c, d);
            // first fan prefix ending at a vertex with d free
            int w = -1;
            for (size_t i = 0; i < fan.size(); ++i) {
                if (i > 0) {
                    int e = edge_between(x, fan[i]);
                    if (e < 0 || color[e] < 0 || !is_free(fan[i - 1], color[e]))
                        break; // fan property no longer holds past here
                }
                if (is_free(fan[i], d)) { w = int(i); break; }
            }
            assert(w >= 0);
            // rotate fan[0..w]
            for (int i = 0; i < w; ++i) {
                int enext = edge_between(x, fan[i + 1]);
                int cnext = color[enext];
                set(enext, -1);
                set(edge_between(x, fan[i]), cnext);
            }
            set(edge_between(x, fan[w]), d);
        }
    }
};

} // namespace

EdgeColorCover edge_color_cover(const Graph& g) {
    auto es = g.edges();
    EdgeColorCover cover;
    if (es.empty()) return cover;
    std::vector<int> color;
    int classes;
    if (is_forest(g)) {
        color = forest_edge_colors(g, g.max_degree, es);
        classes = g.max_degree;
    } else {
        MisraGries mg(g, es);
        mg.run();
        color = mg.color;
        classes = g.max_degree + 1;
    }
    int used = *std::max_element(color.begin(), color.end()) + 1;
    assert(used <= classes);
    (void)classes;
    cover.matchings.resize(used);
    for (int e = 0; e < int(es.size()); ++e)
        cover.matchings[color[e]].push_back(es[e]);
    return cover;
}

std::vector<std::pair<int, int>> orient_halved(const Graph& g) {
    // Pair odd-degree vertices within each component with virtual edges, take
    // an Eulerian circuit, orient along the traversal, drop virtual edges.
    struct Arc { int to; int edge; }; // edge < 0 marks virtual
    std::vector<std::vector<Arc>> mult(g.n);
    auto es = g.edges();
    for (int e = 0; e < int(es.size()); ++e) {
        mult[es[e].first].push_back({es[e].second, e});
        mult[es[e].second].push_back({es[e].first, e});
    }
    auto comp = g.components();
    int nc = g.n ? *std::max_element(comp.begin(), comp.end()) + 1 : 0;
    std::vector<std::vector<int>> odd(nc);
    for (int v = 0; v < g.n; ++v)
        if (g.degree(v) % 2) odd[comp[v]].push_back(v);
    int vid = -1;
    for (auto& o : odd)
        for (size_t i = 0; i + 1 < o.size(); i += 2) {
            mult[o[i]].push_back({o[i + 1], vid});
            mult[o[i + 1]].push_back({o[i], vid});
            --vid;
        }
    // Hierholzer per component
    std::vector<char> edge_used(es.size(), 0);
    std::vector<char> virt_used(size_t(-(vid + 1)), 0);
    std::vector<size_t> it(g.n, 0);
    std::vector<std::pair<int, int>> oriented;
    auto used = [&](int e) -> char& {
        return e >= 0 ? edge_used[e] : virt_used[-(e + 1)];
    };
    for (int s = 0; s < g.n; ++s) {
        if (mult[s].empty()) continue;
        bool any = false;
        for (auto& a : mult[s])
            if (!used(a.edge)) { any = true; break; }
        if (!any) continue;
        // iterative Hierholzer
        std::vector<int> circuit_vertices;
        std::vector<int> circuit_edges;
        std::vector<int> vstack{s};
        std::vector<int> estack; // arc taken into vstack[i+1]
        while (!vstack.empty()) {
            int u = vstack.back();
            bool advanced = false;
            while (it[u] < mult[u].size()) {
                Arc a = mult[u][it[u]];
                if (used(a.edge)) { ++it[u]; continue; }
                used(a.edge) = 1;
                vstack.push_back(a.to);
                estack.push_back(a.edge);
                advanced = true;
                break;
            }
            if (!advanced) {
                circuit_vertices.push_back(u);
                vstack.pop_back();
                if (!vstack.empty()) {
                    circuit_edges.push_back(estack.back());
                    estack.pop_back();
                }
            }
        }
        // circuit_vertices is the circuit reversed; orient edges along it
        std::reverse(circuit_vertices.begin(), circuit_vertices.end());
        std::reverse(circuit_edges.begin(), circuit_edges.end());
        for (size_t i = 0; i < circuit_edges.size(); ++i) {
            int e = circuit_edges[i];
            if (e >= 0) oriented.push_back({circuit_vertices[i], circuit_vertices[i + 1]});
        }
    }
    return oriented;
}

// ---- text format ----

Graph read_graph_text(std::istream& in) {
    std::string line;
    int n = -1;
    long long m = -1;
    std::vector<std::pair<int, int>> es;
    while (std::getline(in, line)) {
        size_t i = line.find_first_not_of(" \t\r");
        if (i == std::string::npos || line[i] == '#') continue;
        std::istringstream ls(line);
        if (n < 0) {
            std::string p, adj;
            if (!(ls >> p >> adj >> n >> m) || p != "p" || adj != "adj" || n < 0 || m < 0)
                throw std::invalid_argument("bad header line");
            continue;
        }
        int u, v;
        if (!(ls >> u >> v)) throw std::invalid_argument("bad edge line: " + line);
        std::string rest;
        if (ls >> rest) throw std::invalid_argument("trailing tokens on edge line");
        es.push_back({u, v});
    }
    if (n < 0) throw std::invalid_argument("missing header");
    if ((long long)es.size() != m) throw std::invalid_argument("edge count mismatch");
    return Graph::from_edges(n, es); // rejects dups/self-loops/out-of-range
}

void write_graph_text(std::ostream& out, const Graph& g) {
    auto es = g.edges();
    out << "p adj " << g.n << ' ' << es.size() << '\n';
    for (auto [u, v] : es) out << u << ' ' << v << '\n';
}

} // namespace skotch
