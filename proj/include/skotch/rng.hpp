#ifndef SKOTCH_RNG_HPP
#define SKOTCH_RNG_HPP

#include <cstdint>

namespace skotch {

// SplitMix64 finalizer; the basis of all randomness derivation in the library.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/**
 * Counter-based random stream with keyed splitting.
 *
 * Every source of randomness in the library is a Stream derived from a single
 * 64-bit master seed via child(tag) chains. Splitting is by key derivation,
 * not by state sharing, so substreams are independent of the order in which
 * they are consumed — encoding under a parallel schedule yields bit-identical
 * labels to the sequential order.
 */
class Stream {
public:
    explicit Stream(uint64_t key) : key_(key) {}

    uint64_t next() { return mix64(key_ ^ mix64(ctr_++ ^ 0x632be59bd9b4e019ULL)); }

    // Derived stream, independent of this stream's position.
    Stream child(uint64_t tag) const {
        return Stream(mix64(key_ ^ mix64(tag ^ 0xd1b54a32d192ed03ULL)));
    }
    Stream child(uint64_t a, uint64_t b) const { return child(a).child(b); }

    // Uniform in [0, n), unbiased by rejection.
    uint64_t below(uint64_t n) {
        if (n <= 1) return 0;
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do { x = next(); } while (x >= limit);
        return x % n;
    }

    bool coin() { return next() & 1; }

    uint64_t key() const { return key_; }

private:
    uint64_t key_;
    uint64_t ctr_ = 0;
};

} // namespace skotch

#endif
