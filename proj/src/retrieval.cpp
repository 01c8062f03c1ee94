#include "skotch/retrieval.hpp"
#include "skotch/bits.hpp"
#include "skotch/rng.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace skotch {

namespace {

constexpr uint64_t kEmptyTag = 0x7e6d5c4b3a291807ULL;

// k distinct indices in [0, n) by rejection from a counter-keyed hash
std::vector<uint32_t> hash_indices(uint64_t seed, uint64_t key, int k, int n) {
    std::vector<uint32_t> idx;
    idx.reserve(k);
    Stream s = Stream(seed).child(key);
    while (int(idx.size()) < k) {
        uint32_t i = uint32_t(s.below(uint64_t(n)));
        if (std::find(idx.begin(), idx.end(), i) == idx.end()) idx.push_back(i);
    }
    return idx;
}

// Solves C a = rhs over GF(2) with r-bit word rhs entries. rows[i] is a
// bitmask row of width n (n <= 64 here is NOT assumed: blocks of 64).
struct Gf2System {
    int n;
    std::vector<std::vector<uint64_t>> rows; // n x ceil(n/64)
    std::vector<uint64_t> rhs;

    explicit Gf2System(int n_) : n(n_), rows(n_, std::vector<uint64_t>((n_ + 63) / 64, 0)),
                                 rhs(n_, 0) {}

    void set(int row, int col) { rows[row][col / 64] |= uint64_t(1) << (col % 64); }

    // returns false if singular; on success sol holds the unique solution
    bool solve(std::vector<uint64_t>& sol) {
        int blocks = (n + 63) / 64;
        std::vector<int> where(n, -1);
        int row = 0;
        for (int col = 0; col < n && row < n; ++col) {
            int pivot = -1;
            for (int i = row; i < n; ++i)
                if (rows[i][col / 64] >> (col % 64) & 1) { pivot = i; break; }
            if (pivot < 0) continue;
            std::swap(rows[pivot], rows[row]);
            std::swap(rhs[pivot], rhs[row]);
            for (int i = 0; i < n; ++i) {
                if (i == row || !(rows[i][col / 64] >> (col % 64) & 1)) continue;
                for (int b = 0; b < blocks; ++b) rows[i][b] ^= rows[row][b];
                rhs[i] ^= rhs[row];
            }
            where[col] = row++;
        }
        if (row < n) return false;
        sol.assign(n, 0);
        for (int col = 0; col < n; ++col) sol[col] = rhs[where[col]];
        return true;
    }
};

} // namespace

int Retrieval::hash_count(int n) {
    if (n == 0) return 0;
    int lg = 0;
    while ((1 << lg) < n + 1) ++lg; // ceil(log2(n+1))
    // k must be odd (an even-weight row is orthogonal to the all-ones vector
    // over GF(2), so even k makes the system singular for every seed) and
    // < n (k = n makes all rows identical).
    int k = std::max(3, lg) | 1;
    while (k >= n && k > 1) k -= 2;
    return std::max(k, 1);
}

Retrieval Retrieval::build(const std::vector<std::pair<uint64_t, uint64_t>>& pairs,
                           uint64_t universe_size, int r, uint64_t seed) {
    if (r < 1 || r > 64) throw std::invalid_argument("retrieval: r out of range");
    if (universe_size == 0 || universe_size > 0xffffffffull)
        throw std::invalid_argument("retrieval: bad universe size");
    if (pairs.size() > 0x7fffffff) throw std::invalid_argument("retrieval: too many keys");
    {
        std::vector<uint64_t> keys;
        for (auto& [key, value] : pairs) {
            if (key >= universe_size) throw std::invalid_argument("retrieval: key outside universe");
            if (r < 64 && value >> r) throw std::invalid_argument("retrieval: value too wide");
            keys.push_back(key);
        }
        std::sort(keys.begin(), keys.end());
        if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
            throw std::invalid_argument("retrieval: duplicate key");
    }

    Retrieval rs;
    rs.r_ = r;
    rs.universe_ = universe_size;
    rs.pairs_ = pairs;
    int n = int(pairs.size());
    rs.k_ = hash_count(n);
    Stream seeds{seed};
    for (int attempt = 0; attempt < 512; ++attempt) {
        uint64_t s = seeds.next();
        if (n == 0) { rs.seed_ = s; return rs; }
        Gf2System sys(n);
        for (int i = 0; i < n; ++i) {
            for (uint32_t j : hash_indices(s, pairs[i].first, rs.k_, n)) sys.set(i, int(j));
            sys.rhs[i] = pairs[i].second;
        }
        if (sys.solve(rs.table_)) { rs.seed_ = s; return rs; }
    }
    throw std::runtime_error("retrieval: no invertible system after 512 seeds");
}

std::vector<uint32_t> Retrieval::indices(uint64_t x) const {
    return hash_indices(seed_, x, k_, n());
}

uint64_t Retrieval::query(uint64_t x) const {
    if (x >= universe_) throw std::invalid_argument("retrieval: key outside universe");
    if (table_.empty()) {
        uint64_t v = mix64(seed_ ^ kEmptyTag);
        return r_ == 64 ? v : v & ((uint64_t(1) << r_) - 1);
    }
    uint64_t acc = 0;
    for (uint32_t i : indices(x)) acc ^= table_[i];
    return acc;
}

std::vector<uint64_t> Retrieval::out_of_set_subset(uint64_t x) const {
    if (x >= universe_) throw std::invalid_argument("retrieval: key outside universe");
    if (pairs_.empty() && table_.empty())
        throw std::invalid_argument("retrieval: empty structure has no subsets");
    if (pairs_.size() != table_.size())
        throw std::invalid_argument("retrieval: subsets need a built (not parsed) structure");
    for (auto& [key, value] : pairs_)
        if (key == x) throw std::invalid_argument("retrieval: key is stored");
    // lambda with lambda^T = (C^T)^{-1} row_x^T gives query(x) = sum_i lambda_i f(y_i)
    int n = int(table_.size());
    Gf2System sys(n); // C^T: entry (i, j) = C[j][i]
    for (int j = 0; j < n; ++j)
        for (uint32_t i : indices(pairs_[j].first)) sys.rows[i][j / 64] ^= uint64_t(1) << (j % 64);
    for (uint32_t i : indices(x)) sys.rhs[i] ^= 1;
    std::vector<uint64_t> lambda;
    if (!sys.solve(lambda)) throw std::runtime_error("retrieval: inconsistent state");
    std::vector<uint64_t> subset;
    for (int j = 0; j < n; ++j)
        if (lambda[j]) subset.push_back(pairs_[j].first);
    return subset;
}

std::vector<uint8_t> Retrieval::serialize() const {
    std::vector<uint8_t> out{'X', 'R', 'T', 'V', '1'};
    put_u32_be(out, uint32_t(table_.size()));
    put_u32_be(out, uint32_t(r_));
    put_u32_be(out, uint32_t(k_));
    put_u32_be(out, uint32_t(universe_));
    put_u64_be(out, seed_);
    BitWriter w;
    for (uint64_t cell : table_) w.put(cell, r_);
    auto bytes = w.take();
    out.insert(out.end(), bytes.begin(), bytes.end());
    return out;
}

Retrieval Retrieval::parse(const uint8_t* data, size_t nbytes) {
    if (nbytes < 29 || std::memcmp(data, "XRTV1", 5) != 0)
        throw std::invalid_argument("retrieval: bad magic");
    Retrieval rs;
    uint32_t n = get_u32_be(data + 5);
    rs.r_ = int(get_u32_be(data + 9));
    rs.k_ = int(get_u32_be(data + 13));
    rs.universe_ = get_u32_be(data + 17);
    rs.seed_ = get_u64_be(data + 21);
    if (rs.r_ < 1 || rs.r_ > 64 || rs.universe_ == 0 || rs.k_ != hash_count(int(n)))
        throw std::invalid_argument("retrieval: bad header fields");
    size_t table_bytes = (size_t(n) * rs.r_ + 7) / 8;
    if (nbytes != 29 + table_bytes)
        throw std::invalid_argument("retrieval: length mismatch");
    BitReader r(data + 29, table_bytes);
    rs.table_.resize(n);
    for (uint32_t i = 0; i < n; ++i) rs.table_[i] = r.get(rs.r_);
    return rs;
}

} // namespace skotch
