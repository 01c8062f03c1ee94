#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "skotch/graph.hpp"
#include "skotch/rng.hpp"
#include "skotch/scheme.hpp"

#include <map>
#include <sstream>

using namespace skotch;

TEST_CASE("label map storage and views") {
    LabelMap m;
    m.init("toy2", 2, 3);
    CHECK(m.stride == 1);
    CHECK(m.buf.size() == 3);
    m.slot(1)[0] = 0x40;
    CHECK(m.view(1).nbits == 2);
    CHECK(m.view(1).data[0] == 0x40);
    CHECK(m.view(0) == m.view(2));
    CHECK_FALSE(m.view(0) == m.view(1));
}

TEST_CASE("label map text round-trip") {
    SchemePtr s = make_toy2();
    Graph g = gen_matching(3);
    LabelMap m = s->encode(g, 99);
    std::stringstream ss;
    write_label_map(ss, m);
    LabelMap back = read_label_map(ss);
    CHECK(back.scheme == m.scheme);
    CHECK(back.label_bits == m.label_bits);
    CHECK(back.n == m.n);
    CHECK(back.buf == m.buf);
}

TEST_CASE("label map input validation") {
    std::stringstream empty("");
    CHECK_THROWS_AS(read_label_map(empty), std::invalid_argument);
    std::stringstream badmagic("labels v1 toy2 2 1\n40\n");
    CHECK_THROWS_AS(read_label_map(badmagic), std::invalid_argument);
    std::stringstream truncated("skotch-labels v1 toy2 2 2\n40\n");
    CHECK_THROWS_AS(read_label_map(truncated), std::invalid_argument);
    std::stringstream badhex("skotch-labels v1 toy2 2 1\nzz\n");
    CHECK_THROWS_AS(read_label_map(badhex), std::invalid_argument);
    std::stringstream badlen("skotch-labels v1 toy2 2 1\n4040\n");
    CHECK_THROWS_AS(read_label_map(badlen), std::invalid_argument);
    // padding past the 2 label bits must be zero
    std::stringstream pad("skotch-labels v1 toy2 2 1\n41\n");
    CHECK_THROWS_AS(read_label_map(pad), std::invalid_argument);
    std::stringstream trailing("skotch-labels v1 toy2 2 1\n40\n40\n");
    CHECK_THROWS_AS(read_label_map(trailing), std::invalid_argument);
    std::stringstream ok("skotch-labels v1 toy2 2 1\n40\n");
    CHECK(read_label_map(ok).view(0).data[0] == 0x40);
}

TEST_CASE("toy2 shares one value per component") {
    SchemePtr s = make_toy2();
    Graph g = Graph::from_edges(6, {{0, 1}, {1, 2}, {4, 5}}); // comp {0,1,2} {3} {4,5}
    for (uint64_t seed = 0; seed < 20; ++seed) {
        LabelMap m = s->encode(g, seed);
        CHECK(m.view(0) == m.view(1));
        CHECK(m.view(1) == m.view(2));
        CHECK(m.view(4) == m.view(5));
        for (auto [u, v] : g.edges()) CHECK(s->decode(m.view(u), m.view(v)));
    }
    // all four values occur across seeds
    std::map<int, int> hist;
    for (uint64_t seed = 0; seed < 400; ++seed)
        ++hist[s->encode(g, seed).view(3).data[0] >> 6];
    CHECK(hist.size() == 4);
    CHECK(s->one_sided());
    CHECK(s->label_space(g) == 4);
    REQUIRE(s->enum_hook() != nullptr);
    CHECK(s->enum_hook()->atom_count(g, {0, 1, 2}) == 4);
}

TEST_CASE("toy2 random-pair collision rate is 1/4 in exact enumeration") {
    // two components; hook atoms are independent per component, so count
    // agreeing pairs across the 4 x 4 joint outcomes
    SchemePtr s = make_toy2();
    Graph g = gen_matching(2);
    const EnumHook* hook = s->enum_hook();
    int hits = 0, total = 0;
    hook->for_each_atom(g, {0, 1}, 0, [&](const auto& la) {
        hook->for_each_atom(g, {2, 3}, 0, [&](const auto& lb) {
            ++total;
            LabelView u{la[0].data(), 2}, v{lb[0].data(), 2};
            hits += s->decode(u, v);
        });
    });
    CHECK(total == 16);
    CHECK(hits == 4); // exactly 1/4
}

TEST_CASE("coin2 is two-sided and decodes by difference") {
    SchemePtr s = make_coin2();
    CHECK_FALSE(s->one_sided());
    Graph g = gen_path(2);
    int agree = 0;
    for (uint64_t seed = 0; seed < 2000; ++seed) {
        LabelMap m = s->encode(g, seed);
        bool d = s->decode(m.view(0), m.view(1));
        CHECK(d == ((m.view(0).data[0] >> 7) != (m.view(1).data[0] >> 7)));
        agree += d;
    }
    CHECK(agree > 800); // fair coins differ about half the time
    CHECK(agree < 1200);
}

TEST_CASE("amplify_and concatenates independent copies") {
    SchemePtr inner = make_toy2();
    SchemePtr amp = amplify_and(inner, 3);
    CHECK(amp->name() == "and(toy2,3)");
    CHECK(amp->one_sided());
    Graph g = gen_matching(2);
    CHECK(amp->label_bits(g) == 6);
    LabelMap m = amp->encode(g, 5);
    // each copy equals the inner scheme encoded under the derived child seed
    for (int i = 0; i < 3; ++i) {
        LabelMap part = inner->encode(g, Stream(5).child(uint64_t(i)).key());
        for (int v = 0; v < g.n; ++v) {
            int got = (m.view(v).data[0] >> (6 - 2 * i)) & 3;
            CHECK(got == part.view(v).data[0] >> 6);
        }
    }
    // decode = all copies agree
    for (auto [u, v] : g.edges()) CHECK(amp->decode(m.view(u), m.view(v)));
    CHECK_THROWS_AS(amplify_and(inner, 0), std::invalid_argument);
}

TEST_CASE("amplify_majority votes") {
    SchemePtr maj = amplify_majority(make_coin2(), 3);
    CHECK(maj->name() == "majority(coin2,3)");
    CHECK_FALSE(maj->one_sided());
    CHECK_THROWS_AS(amplify_majority(make_coin2(), 2), std::invalid_argument);
    Graph g = gen_path(2);
    CHECK(maj->label_bits(g) == 3);
    // majority of three independent "differ" coins: verify against a direct
    // bit-count on the labels
    for (uint64_t seed = 0; seed < 200; ++seed) {
        LabelMap m = maj->encode(g, seed);
        int votes = 0;
        for (int i = 0; i < 3; ++i) {
            int a = (m.view(0).data[0] >> (7 - i)) & 1;
            int b = (m.view(1).data[0] >> (7 - i)) & 1;
            votes += a != b;
        }
        CHECK(maj->decode(m.view(0), m.view(1)) == (votes >= 2));
    }
}

TEST_CASE("encoding is deterministic in the seed") {
    for (SchemePtr s : {make_toy2(), make_coin2(), amplify_and(make_toy2(), 2)}) {
        Graph g = gen_matching(4);
        LabelMap a = s->encode(g, 123), b = s->encode(g, 123), c = s->encode(g, 124);
        CHECK(a.buf == b.buf);
        CHECK(a.buf != c.buf);
    }
}
