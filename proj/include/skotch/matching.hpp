#ifndef SKOTCH_MATCHING_HPP
#define SKOTCH_MATCHING_HPP

#include "skotch/plane.hpp"
#include "skotch/scheme.hpp"

namespace skotch {

// Smallest prime p with p + 1 >= 2/eps, eps = num/den.
int choose_order(uint64_t eps_num, uint64_t eps_den);

/**
 * Projective-plane sketch for matchings at error eps = num/den: each edge is
 * labeled with an incident (element, element) pair of PG(2, p); decode tests
 * incidence. One-sided; forgery probability per non-adjacent pair <= 2/(p+1).
 * Label length ceil(log2(p^2+p+1)) bits.
 */
SchemePtr make_pp_matching(uint64_t eps_num, uint64_t eps_den);

/**
 * 3-coloring sketch for path forests: root of each path gets a uniform color,
 * every next vertex a uniform color different from its predecessor; decode is
 * color inequality. One-sided. 2 bits per label.
 */
SchemePtr make_color3();

// Shared access to a scheme's plane, for adversaries that exploit structure.
const Plane* pp_matching_plane(const Scheme& s);

} // namespace skotch

#endif
