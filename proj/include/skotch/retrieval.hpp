#ifndef SKOTCH_RETRIEVAL_HPP
#define SKOTCH_RETRIEVAL_HPP

#include <cstdint>
#include <utility>
#include <vector>

namespace skotch {

/**
 * XOR retrieval structure: n table cells of r bits; querying key x XORs the
 * cells at x's k distinct seeded hash indices. For stored keys the result is
 * the stored value; for any other key it is the XOR of a nonempty subset of
 * stored values (plus nothing else), which preserves value min-entropy.
 */
class Retrieval {
public:
    // Builds over distinct keys < universe_size with r-bit values, retrying
    // derived seeds until the n x n index system is invertible over GF(2).
    // Throws std::invalid_argument on bad input, std::runtime_error after
    // 512 failed seeds.
    static Retrieval build(const std::vector<std::pair<uint64_t, uint64_t>>& pairs,
                           uint64_t universe_size, int r, uint64_t seed);

    uint64_t query(uint64_t x) const; // throws on x >= universe_size

    // Diagnostic: the subset S_x of stored keys with
    // query(x) = XOR of their values. Requires x outside the key set and a
    // structure that was built (not parsed). Throws otherwise.
    std::vector<uint64_t> out_of_set_subset(uint64_t x) const;

    // Hash indices of a key (k distinct values in [0, n)).
    std::vector<uint32_t> indices(uint64_t x) const;

    int n() const { return int(table_.size()); }
    int r() const { return r_; }
    int k() const { return k_; }
    uint64_t universe_size() const { return universe_; }
    uint64_t seed() const { return seed_; }
    const std::vector<uint64_t>& table() const { return table_; }

    // Bit-exact layout: magic "XRTV1"; n, r, k, universe_size 32-bit BE;
    // seed 64-bit BE; table row-major, r bits per cell, zero-padded to a byte.
    std::vector<uint8_t> serialize() const;
    static Retrieval parse(const uint8_t* data, size_t nbytes); // throws
    size_t serialized_bits() const { return 232 + (size_t(n()) * r_ + 7) / 8 * 8; }

    static int hash_count(int n); // the k-choice rule

private:
    Retrieval() = default;
    std::vector<uint64_t> table_;
    int r_ = 0;
    int k_ = 0;
    uint64_t universe_ = 0;
    uint64_t seed_ = 0;
    std::vector<std::pair<uint64_t, uint64_t>> pairs_; // build-side only
};

} // namespace skotch

#endif
