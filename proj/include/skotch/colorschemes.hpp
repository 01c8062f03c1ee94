#ifndef SKOTCH_COLORSCHEMES_HPP
#define SKOTCH_COLORSCHEMES_HPP

#include "skotch/scheme.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace skotch {

using Rational = boost::multiprecision::cpp_rational;

// 6-color greedy path scheme ("path6"): paths colored from their smallest-id
// endpoint, each color uniform among the 5 differing from the predecessor.
// Decode = colors differ. 3 bits per label.
SchemePtr make_path_scheme();

// Sequential 3d-color scheme ("seq3d(d)") for max_degree <= d: vertices in
// bfs_order, each color uniform among palette colors unused by already-colored
// neighbors. Decode = colors differ.
SchemePtr make_sequential_scheme(int d);

/**
 * Exhaustive enumeration of a greedy color scheme's output distribution.
 * Each legal coloring appears once; its probability is weight / total, both
 * exact integers (weight = prod over vertices of L / |allowed set|, total =
 * L^n with L = lcm(1..palette)). Colorings are packed 4 bits per vertex,
 * vertex v in bits [4v, 4v+4) from the LSB, so palette <= 16 and n <= 8.
 */
struct ColorAtom {
    uint32_t packed;
    unsigned __int128 weight;
};
struct ColorEnumeration {
    int n = 0;
    int palette = 0;
    unsigned __int128 total = 0;
    std::vector<ColorAtom> atoms;
    static int color_of(uint32_t packed, int v) { return packed >> (4 * v) & 0xf; }
};

// Throws std::invalid_argument if the scheme is not color-based, the graph is
// outside its domain, or palette^n exceeds the 10^8 enumeration budget.
ColorEnumeration enumerate_colorings(const Scheme& s, const Graph& g);

/**
 * Exact conditional distribution of the hidden vertices' colors given a
 * partial coloring `condition` (-1 = unconstrained; other vertices are
 * marginalized out). Returns (hidden color tuple, probability) pairs sorted
 * by tuple; probabilities sum to 1. Throws if the condition has zero mass.
 */
std::vector<std::pair<std::vector<int>, Rational>> exact_conditional_oracle(
    const Scheme& s, const Graph& g, const std::vector<int>& hidden,
    const std::vector<int>& condition);

// Color of a vertex label under a color-based scheme.
int label_color(const Scheme& s, LabelView v);

} // namespace skotch

#endif
