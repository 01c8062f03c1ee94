#ifndef SKOTCH_BOUNDED_HPP
#define SKOTCH_BOUNDED_HPP

#include "skotch/scheme.hpp"

namespace skotch {

/**
 * Covering-by-matchings scheme "cover(d,eps)": edge_color_cover splits the
 * graph into <= d+1 matchings, each labeled by an independent projective-plane
 * instance at order p, the first prime with p+1 >= 2d/eps (union bound over
 * the <= d classes a non-adjacent pair can share). Decode: any class where
 * both slots are present and incident. One-sided.
 */
SchemePtr make_covering_scheme(int d, uint64_t eps_num, uint64_t eps_den);

/**
 * Tree scheme "tree(d,eps)" for forests of max degree <= d: d matching
 * classes at per-class error eps/2 (p+1 >= 4/eps); each label carries the
 * class id of its parent edge, and decode checks only the two parent classes.
 * Roots point at a class they are unmatched in (class 0 if none).
 */
SchemePtr make_tree_scheme(int d, uint64_t eps_num, uint64_t eps_den);

/**
 * O(d) scheme "d2ret(d,eps)": distance-2 coloring plus a per-vertex XOR
 * retrieval store mapping each neighbor's color to this vertex's sub-label in
 * the corresponding color-pair matching (plane order by choose_order(eps)).
 * Decode retrieves both directions and incidence-checks; equal colors
 * decode 0. One-sided.
 */
SchemePtr make_bounded_degree_scheme(int d, uint64_t eps_num, uint64_t eps_den);

/**
 * Non-adversarial password baseline "pwd(d,eps)": orient_halved caps
 * out-degree at ceil(d/2); each vertex stores a ceil(log2(1/eps))-bit
 * password plus a retrieval of out-neighbor passwords keyed by their
 * distance-2 colors. Decode: either store yields the other's password.
 * One-sided, but deliberately not adaptive-resilient.
 */
SchemePtr make_password_scheme(int d, uint64_t eps_num, uint64_t eps_den);

// Fixed retrieval overhead declared by d2ret: XRTV1 header + seed (232 bits)
// plus the padding that widens every store to d cells and a byte boundary.
// label_bits - overhead is the quantity the asymptotic size bound applies to.
size_t d2ret_overhead_bits(int d, uint64_t eps_num, uint64_t eps_den);

} // namespace skotch

#endif
