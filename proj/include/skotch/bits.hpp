#ifndef SKOTCH_BITS_HPP
#define SKOTCH_BITS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace skotch {

// MSB-first bit packing used by every label layout.
class BitWriter {
public:
    void put(uint64_t value, int bits) {
        for (int i = bits - 1; i >= 0; --i) push_bit((value >> i) & 1);
    }
    void push_bit(int b) {
        if (pos_ % 8 == 0) data_.push_back(0);
        if (b) data_.back() |= uint8_t(1u << (7 - pos_ % 8));
        ++pos_;
    }
    void put_bytes(const uint8_t* p, size_t n) {
        for (size_t i = 0; i < n; ++i) put(p[i], 8);
    }
    size_t bit_count() const { return pos_; }
    const std::vector<uint8_t>& bytes() const { return data_; }
    std::vector<uint8_t> take() { pos_ = 0; return std::move(data_); }

private:
    std::vector<uint8_t> data_;
    size_t pos_ = 0;
};

class BitReader {
public:
    BitReader(const uint8_t* p, size_t nbytes) : p_(p), nbits_(nbytes * 8) {}
    uint64_t get(int bits) {
        uint64_t v = 0;
        for (int i = 0; i < bits; ++i) v = (v << 1) | get_bit();
        return v;
    }
    int get_bit() {
        if (pos_ >= nbits_) return 0; // zero padding past the end
        int b = (p_[pos_ / 8] >> (7 - pos_ % 8)) & 1;
        ++pos_;
        return b;
    }
    void skip(size_t bits) { pos_ += bits; }
    size_t position() const { return pos_; }

private:
    const uint8_t* p_;
    size_t nbits_;
    size_t pos_ = 0;
};

inline std::string to_hex(const uint8_t* p, size_t n) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(2 * n);
    for (size_t i = 0; i < n; ++i) {
        s.push_back(digits[p[i] >> 4]);
        s.push_back(digits[p[i] & 0xf]);
    }
    return s;
}

// Returns false on malformed input.
bool from_hex(const std::string& s, std::vector<uint8_t>& out);

inline void put_u32_be(std::vector<uint8_t>& v, uint32_t x) {
    v.push_back(uint8_t(x >> 24)); v.push_back(uint8_t(x >> 16));
    v.push_back(uint8_t(x >> 8));  v.push_back(uint8_t(x));
}
inline void put_u64_be(std::vector<uint8_t>& v, uint64_t x) {
    put_u32_be(v, uint32_t(x >> 32));
    put_u32_be(v, uint32_t(x));
}
inline uint32_t get_u32_be(const uint8_t* p) {
    return (uint32_t(p[0]) << 24) | (uint32_t(p[1]) << 16) | (uint32_t(p[2]) << 8) | p[3];
}
inline uint64_t get_u64_be(const uint8_t* p) {
    return (uint64_t(get_u32_be(p)) << 32) | get_u32_be(p + 4);
}

} // namespace skotch

#endif
