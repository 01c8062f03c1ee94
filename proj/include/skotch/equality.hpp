#ifndef SKOTCH_EQUALITY_HPP
#define SKOTCH_EQUALITY_HPP

#include "skotch/scheme.hpp"

namespace skotch {

/**
 * Reed-Solomon grid codeword over GF(2^8): an m-bit name is split into
 * D = ceil(m/8) byte coefficients of a polynomial evaluated at the first
 * q^2 field elements, laid out row-major in a q x q grid with q = ceil(sqrt(m)).
 * Distinct names agree on at most D-1 cells (relative distance
 * delta = 1 - (D-1)/q^2 >= 1/2).
 */
struct GridCodeword {
    int q = 0;                  // grid side
    int D = 0;                  // coefficient count
    std::vector<uint8_t> cells; // q*q, row-major
    uint8_t at(int row, int col) const { return cells[size_t(row) * q + col]; }
};

// m_bits <= 512 (q^2 must fit the 256-element field). Throws otherwise.
GridCodeword grid_encode(uint64_t name, int m_bits);

// GF(2^8) multiply (poly 0x11d), exposed for the test-side oracle.
uint8_t gf256_mul(uint8_t a, uint8_t b);

/**
 * SMMPC-style forest adjacency scheme "smmpc-forest(n,t)": names are vertex
 * ids in m = ceil(log2(n+1)) bits (value n reserved for roots' parent).
 * Each vertex stores t random columns of its own grid and t random rows of
 * its parent-name grid; decode accepts iff one direction's t^2 intersection
 * cells all agree. One-sided on forests.
 */
SchemePtr make_forest_equality_scheme(int n, int t);

// Label layout parameters, exposed for the size tests.
struct EqParams {
    int m = 0; // name bits
    int q = 0;
    int D = 0;
    size_t label_bits = 0; // 1 + 2*t*(16 + 8*q)
};
EqParams eq_params(int n, int t);

} // namespace skotch

#endif
