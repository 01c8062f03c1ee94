#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "skotch/bits.hpp"
#include "skotch/retrieval.hpp"
#include "skotch/rng.hpp"

#include <algorithm>
#include <map>
#include <set>

using namespace skotch;

namespace {

// Independent GF(2) rank oracle over the index-set rows.
int gf2_rank(std::vector<std::vector<uint32_t>> rows, int cols) {
    int rank = 0;
    std::vector<uint64_t> basis(cols, 0);
    auto to_mask = [&](const std::vector<uint32_t>& idx) {
        uint64_t m = 0;
        for (uint32_t i : idx) m ^= uint64_t(1) << i;
        return m;
    };
    std::vector<uint64_t> masks;
    for (auto& r : rows) masks.push_back(to_mask(r));
    for (uint64_t m : masks) {
        for (int b = cols - 1; b >= 0; --b) {
            if (!((m >> b) & 1)) continue;
            if (!basis[b]) {
                basis[b] = m;
                ++rank;
                break;
            }
            m ^= basis[b];
        }
    }
    return rank;
}

std::vector<std::pair<uint64_t, uint64_t>> random_pairs(int n, int r,
                                                        uint64_t universe,
                                                        Stream& rng) {
    std::set<uint64_t> keys;
    while (int(keys.size()) < n) keys.insert(rng.below(universe));
    std::vector<std::pair<uint64_t, uint64_t>> pairs;
    for (uint64_t k : keys) pairs.emplace_back(k, rng.below(uint64_t(1) << r));
    return pairs;
}

} // namespace

TEST_CASE("single stored key") {
    Retrieval rs = Retrieval::build({{5, 0b101}}, 16, 3, 1);
    CHECK(rs.n() == 1);
    CHECK(rs.query(5) == 0b101);
    for (uint64_t x = 0; x < 16; ++x)
        if (x != 5) {
            CHECK(rs.query(x) == 0b101); // rank-1 system: S_x = {5} always
            CHECK(rs.out_of_set_subset(x) == std::vector<uint64_t>{5});
        }
    CHECK_THROWS(rs.out_of_set_subset(5)); // stored key rejected
    CHECK_THROWS(rs.query(16));            // out of universe
}

TEST_CASE("empty structure returns one fixed r-bit value") {
    Retrieval rs = Retrieval::build({}, 100, 5, 77);
    uint64_t v = rs.query(0);
    CHECK(v < 32);
    for (uint64_t x = 1; x < 100; ++x) CHECK(rs.query(x) == v);
    // deterministic given the seed, varies across seeds
    CHECK(Retrieval::build({}, 100, 5, 77).query(3) == v);
    std::set<uint64_t> vals;
    for (uint64_t s = 0; s < 64; ++s)
        vals.insert(Retrieval::build({}, 100, 5, s).query(0));
    CHECK(vals.size() > 16);
}

TEST_CASE("n=8 exact retrieval and full rank") {
    Stream rng{3};
    auto pairs = random_pairs(8, 4, 100, rng);
    Retrieval rs = Retrieval::build(pairs, 100, 4, 9);
    for (auto [k, v] : pairs) CHECK(rs.query(k) == v);
    std::vector<std::vector<uint32_t>> rows;
    for (auto [k, v] : pairs) rows.push_back(rs.indices(k));
    CHECK(gf2_rank(rows, rs.n()) == 8);
}

TEST_CASE("exact retrieval on 1000 random structures") {
    Stream rng{11};
    for (int t = 0; t < 1000; ++t) {
        int n = 1 + int(rng.below(12));
        int r = 1 + int(rng.below(10));
        uint64_t universe = uint64_t(2 * n + 1 + rng.below(50));
        auto pairs = random_pairs(n, r, universe, rng);
        Retrieval rs = Retrieval::build(pairs, universe, r, rng.next());
        for (auto [k, v] : pairs) CHECK(rs.query(k) == v);
        // hash indices distinct for every key in the universe
        for (uint64_t x = 0; x < universe; ++x) {
            auto idx = rs.indices(x);
            CHECK(std::set<uint32_t>(idx.begin(), idx.end()).size() == idx.size());
        }
    }
}

TEST_CASE("out-of-set subset witness") {
    Stream rng{21};
    for (int t = 0; t < 1000; ++t) {
        int n = 1 + int(rng.below(6));
        uint64_t universe = uint64_t(n + 2 + rng.below(30));
        auto pairs = random_pairs(n, 4, universe, rng);
        Retrieval rs = Retrieval::build(pairs, universe, 4, rng.next());
        std::set<uint64_t> stored;
        for (auto [k, v] : pairs) stored.insert(k);
        for (uint64_t x = 0; x < universe; ++x) {
            if (stored.count(x)) continue;
            auto sub = rs.out_of_set_subset(x);
            CHECK(!sub.empty());
            uint64_t acc = 0;
            for (uint64_t y : sub) {
                CHECK(stored.count(y));
                for (auto [k, v] : pairs)
                    if (k == y) acc ^= v;
            }
            CHECK(acc == rs.query(x));
        }
    }
}

TEST_CASE("n=3 subset matches brute force over the 7 nonempty subsets") {
    Stream rng{5};
    auto pairs = random_pairs(3, 6, 32, rng);
    Retrieval rs = Retrieval::build(pairs, 32, 6, 17);
    // distinct values make subsets distinguishable by XOR with high chance;
    // compare against the witness directly instead of relying on uniqueness
    for (uint64_t x = 0; x < 32; ++x) {
        bool stored = false;
        for (auto [k, v] : pairs) stored = stored || k == x;
        if (stored) continue;
        auto sub = rs.out_of_set_subset(x);
        std::sort(sub.begin(), sub.end());
        // brute force: some nonempty subset must explain the query result
        bool found = false;
        for (int mask = 1; mask < 8; ++mask) {
            uint64_t acc = 0;
            std::vector<uint64_t> keys;
            for (int i = 0; i < 3; ++i)
                if (mask >> i & 1) {
                    acc ^= pairs[i].second;
                    keys.push_back(pairs[i].first);
                }
            if (acc == rs.query(x) && keys == sub) found = true;
        }
        CHECK(found);
    }
}

TEST_CASE("out-of-set query is uniform over rebuilds (chi-square)") {
    // n=3, r=2: fixed keys and out-of-set key, fresh values + seed per rebuild
    std::map<uint64_t, int> hist;
    Stream rng{31};
    const int rebuilds = 10000;
    for (int t = 0; t < rebuilds; ++t) {
        std::vector<std::pair<uint64_t, uint64_t>> pairs{
            {2, rng.below(4)}, {5, rng.below(4)}, {9, rng.below(4)}};
        Retrieval rs = Retrieval::build(pairs, 16, 2, rng.next());
        ++hist[rs.query(11)];
    }
    CHECK(hist.size() == 4);
    double chi2 = 0, expect = rebuilds / 4.0;
    for (auto [v, c] : hist) chi2 += (c - expect) * (c - expect) / expect;
    CHECK(chi2 < 16.27); // 3 dof, p = 0.001
}

TEST_CASE("min-entropy >= K by exact enumeration (n <= 3, K <= 3)") {
    for (int n = 1; n <= 3; ++n)
        for (int K = 1; K <= 3; ++K) {
            const int r = 3;
            std::vector<uint64_t> keys{4, 9, 13};
            keys.resize(n);
            const uint64_t out_key = 7;
            // enumerate all value assignments from a 2^K-value set
            std::map<uint64_t, int> hist;
            int total = 0;
            for (int assign = 0; assign < (1 << (K * n)); ++assign) {
                std::vector<std::pair<uint64_t, uint64_t>> pairs;
                for (int i = 0; i < n; ++i)
                    pairs.emplace_back(keys[i], (assign >> (K * i)) & ((1 << K) - 1));
                Retrieval rs = Retrieval::build(pairs, 16, r, /*seed=*/12345);
                ++hist[rs.query(out_key)];
                ++total;
            }
            int max_count = 0;
            for (auto [v, c] : hist) max_count = std::max(max_count, c);
            // max outcome probability <= 2^-K
            CHECK(max_count * (1 << K) <= total);
        }
}

TEST_CASE("serialization layout and round-trip") {
    Stream rng{41};
    auto pairs = random_pairs(5, 9, 64, rng);
    Retrieval rs = Retrieval::build(pairs, 64, 9, 1234567);
    auto bytes = rs.serialize();
    CHECK(rs.serialized_bits() == 232 + (5 * 9 + 7) / 8 * 8);
    CHECK(bytes.size() * 8 == rs.serialized_bits());
    CHECK(std::string(bytes.begin(), bytes.begin() + 5) == "XRTV1");
    CHECK(get_u32_be(bytes.data() + 5) == 5);   // n
    CHECK(get_u32_be(bytes.data() + 9) == 9);   // r
    CHECK(get_u32_be(bytes.data() + 13) == uint32_t(rs.k()));
    CHECK(get_u32_be(bytes.data() + 17) == 64); // universe
    CHECK(get_u64_be(bytes.data() + 21) == rs.seed());

    Retrieval back = Retrieval::parse(bytes.data(), bytes.size());
    CHECK(back.n() == rs.n());
    CHECK(back.table() == rs.table());
    for (uint64_t x = 0; x < 64; ++x) CHECK(back.query(x) == rs.query(x));

    // malformed input rejected
    CHECK_THROWS(Retrieval::parse(bytes.data(), 10));
    auto bad = bytes;
    bad[0] = 'Y';
    CHECK_THROWS(Retrieval::parse(bad.data(), bad.size()));
}

TEST_CASE("build input validation") {
    CHECK_THROWS(Retrieval::build({{1, 0}, {1, 1}}, 8, 2, 0)); // duplicate key
    CHECK_THROWS(Retrieval::build({{9, 0}}, 8, 2, 0));         // key >= universe
    CHECK_THROWS(Retrieval::build({{1, 4}}, 8, 2, 0));         // value too wide
    CHECK_THROWS(Retrieval::build({{1, 0}}, 8, 0, 0));         // r out of range
    CHECK_THROWS(Retrieval::build({{1, 0}}, 8, 65, 0));
}

TEST_CASE("k follows the prescribed rule: Theta(log n), odd, below n") {
    CHECK(Retrieval::hash_count(1) == 1);
    CHECK(Retrieval::hash_count(2) == 1);
    CHECK(Retrieval::hash_count(3) == 1);
    CHECK(Retrieval::hash_count(4) == 3);
    CHECK(Retrieval::hash_count(8) == 5);  // max(3, ceil(log2(9))) | 1
    CHECK(Retrieval::hash_count(100) == 7);
    for (int n = 1; n <= 200; ++n) {
        int k = Retrieval::hash_count(n);
        CHECK(k % 2 == 1); // even-weight rows are singular over GF(2)
        CHECK((n == 1 || k < n));
    }
}
