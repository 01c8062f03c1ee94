#ifndef SKOTCH_PLANE_HPP
#define SKOTCH_PLANE_HPP

#include <array>
#include <cstdint>
#include <vector>

namespace skotch {

bool is_prime(uint64_t x);
// Smallest prime p with p + 1 >= threshold_num / threshold_den.
int prime_for_degree(uint64_t threshold_num, uint64_t threshold_den);

/**
 * Projective plane PG(2, p) over GF(p), p prime, under point-line duality:
 * the p^2+p+1 elements serve as both points and lines, and incidence is the
 * symmetric relation <u, v> = 0 (mod p).
 *
 * Elements are canonical triples (first nonzero coordinate 1) indexed
 *   i < p^2         -> (1, i / p, i mod p)
 *   p^2 <= i < p^2+p -> (0, 1, i - p^2)
 *   i = p^2 + p     -> (0, 0, 1)
 */
class Plane {
public:
    explicit Plane(int p); // throws std::invalid_argument unless p is prime

    int order() const { return p_; }
    int size() const { return n_; } // p^2 + p + 1

    std::array<int, 3> element(int i) const;
    int index(std::array<int, 3> t) const; // any nonzero triple; canonicalizes

    bool incident(int i, int j) const;
    // The p + 1 elements incident with i, sorted ascending.
    const std::vector<int>& incident_list(int i) const;

private:
    int p_;
    int n_;
    std::vector<int> inv_; // inv_[x] * x = 1 (mod p) for x in 1..p-1
    std::vector<std::vector<int>> inc_;
};

} // namespace skotch

#endif
