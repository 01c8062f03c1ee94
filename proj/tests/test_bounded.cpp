#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "skotch/acd.hpp"
#include "skotch/bounded.hpp"
#include "skotch/graph.hpp"
#include "skotch/rng.hpp"

#include <algorithm>
#include <set>

using namespace skotch;

namespace {

// decode(u, v) must be 1 for every edge, every seed
void check_edges_decode(const Scheme& s, const Graph& g, int seeds) {
    REQUIRE(s.accepts(g));
    for (uint64_t seed = 0; seed < uint64_t(seeds); ++seed) {
        LabelMap m = s.encode(g, seed);
        for (auto [u, v] : g.edges()) CHECK(s.decode(m.view(u), m.view(v)));
    }
}

// empirical decode rate of a fixed non-adjacent pair over fresh encodings
double pair_rate(const Scheme& s, const Graph& g, int u, int v, int seeds) {
    int hits = 0;
    for (uint64_t seed = 0; seed < uint64_t(seeds); ++seed) {
        LabelMap m = s.encode(g, seed);
        hits += s.decode(m.view(u), m.view(v));
    }
    return double(hits) / seeds;
}

} // namespace

TEST_CASE("constructor validation") {
    for (auto make : {make_covering_scheme, make_tree_scheme,
                      make_bounded_degree_scheme, make_password_scheme}) {
        CHECK_THROWS_AS(make(0, 1, 4), std::invalid_argument);
        CHECK_THROWS_AS(make(3, 0, 4), std::invalid_argument);
        CHECK_THROWS_AS(make(3, 1, 0), std::invalid_argument);
        CHECK_THROWS_AS(make(3, 4, 4), std::invalid_argument); // eps must be < 1
        CHECK_THROWS_AS(make(3, 5, 4), std::invalid_argument);
    }
}

TEST_CASE("names, domains and label sizes") {
    SchemePtr cover = make_covering_scheme(2, 1, 2);
    CHECK(cover->name() == "cover(2,1/2)");
    CHECK(cover->one_sided());
    // 2d/eps = 8 -> plane order 7, 57 elements, 6 bits each; (d+1) slots of
    // (presence + element) = 3 * 7
    CHECK(cover->label_bits(gen_path(5)) == 21);
    CHECK(cover->accepts(gen_path(5)));
    std::string why;
    CHECK_FALSE(cover->accepts(gen_complete_dary_tree(3, 1), &why));
    CHECK(why.find("degree") != std::string::npos);

    SchemePtr tree = make_tree_scheme(3, 1, 4);
    CHECK(tree->name() == "tree(3,1/4)");
    CHECK(tree->one_sided());
    // per-class error eps/2: p+1 >= 16 -> p = 17, 307 elements, 9 bits;
    // 2 parent-id bits + 3 slots of 10
    CHECK(tree->label_bits(gen_path(5)) == 32);
    CHECK(tree->accepts(gen_complete_dary_tree(2, 2)));
    CHECK_FALSE(tree->accepts(gen_hypercube(2))); // cycle, not a forest
    CHECK_FALSE(tree->accepts(gen_star_centers(1, 4))); // degree 4 > 3

    SchemePtr d2 = make_bounded_degree_scheme(3, 1, 8);
    CHECK(d2->name() == "d2ret(3,1/8)");
    CHECK(d2->one_sided());
    // plane order 17 (2/eps = 16), 9-bit sub-labels, universe d^2+1 = 10:
    // blob = 29 bytes header + ceil(27/8) = 33 bytes, + 4 color bits
    CHECK(d2->label_bits(gen_path(5)) == 8 * 33 + 4);
    CHECK(d2->accepts(gen_complete_dary_tree(2, 2)));
    CHECK_FALSE(d2->accepts(gen_star_centers(1, 4)));

    SchemePtr pwd = make_password_scheme(6, 1, 16);
    CHECK(pwd->name() == "pwd(6,1/16)");
    CHECK(pwd->one_sided());
    // b = 4 password bits, out-degree cap ceil(6/2) = 3, universe 37 -> 6
    // color bits; blob = 29 + ceil(12/8) = 31 bytes
    CHECK(pwd->label_bits(gen_path(5)) == 8 * 31 + 6 + 4);
    CHECK(pwd->accepts(gen_hypercube(2)));
    CHECK_FALSE(pwd->accepts(gen_star_centers(1, 7)));
}

TEST_CASE("d2ret overhead accounting") {
    // d=4, eps=1/4: store is exactly 4 * 6 = 24 bits = 3 bytes, no padding
    CHECK(d2ret_overhead_bits(4, 1, 4) == 232);
    // d=3, eps=1/8: 27 store bits padded to 32 -> 5 bits of padding
    CHECK(d2ret_overhead_bits(3, 1, 8) == 237);
    // overhead + payload = label size
    SchemePtr d2 = make_bounded_degree_scheme(3, 1, 8);
    CHECK(d2ret_overhead_bits(3, 1, 8) + 3 * 9 + 4 == d2->label_bits(gen_path(2)));
}

TEST_CASE("edges always decode: cover and d2ret on bounded-degree graphs") {
    std::vector<Graph> graphs;
    graphs.push_back(gen_path(9));
    graphs.push_back(gen_matching(5));
    graphs.push_back(gen_star_centers(3, 3));
    graphs.push_back(gen_complete_dary_tree(2, 3));
    graphs.push_back(gen_hypercube(3));
    for (uint64_t s = 0; s < 4; ++s) graphs.push_back(gen_random_bounded(20, 3, s));
    for (SchemePtr s : {make_covering_scheme(3, 1, 2),
                        make_bounded_degree_scheme(3, 1, 2),
                        make_password_scheme(3, 1, 8)})
        for (const Graph& g : graphs) check_edges_decode(*s, g, 40);
}

TEST_CASE("edges always decode: tree scheme on forests") {
    std::vector<Graph> graphs;
    graphs.push_back(gen_path(12));
    graphs.push_back(gen_matching(6));
    graphs.push_back(gen_star_centers(4, 3));
    // root at full degree d, internal degrees still <= d
    graphs.push_back(Graph::from_edges(6, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {1, 5}}));
    graphs.push_back(Graph::from_edges(8, {{0, 1}, {0, 2}, {2, 3}, {5, 6}}));
    SchemePtr s = make_tree_scheme(3, 1, 4);
    for (const Graph& g : graphs) check_edges_decode(*s, g, 60);
}

TEST_CASE("cover: non-adjacent decode rate within the union bound") {
    // cover(2,1/2) on P6: vertices 0 and 3 are non-adjacent; expected rate
    // <= (d+1)(p+1)/N = 24/57 < eps = 1/2. Allow 4 sigma above eps.
    SchemePtr s = make_covering_scheme(2, 1, 2);
    double r = pair_rate(*s, gen_path(6), 0, 3, 4000);
    CHECK(r <= 0.5 + 4 * 0.008);
}

TEST_CASE("d2ret: non-adjacent decode rate below eps") {
    // d2ret(3,1/2): plane order 3, incident fraction (p+1)/N = 4/13 < 1/2.
    SchemePtr s = make_bounded_degree_scheme(3, 1, 2);
    Graph g = gen_star_centers(2, 3); // centers 0 and 4
    double r = pair_rate(*s, g, 1, 5, 4000); // leaves of different stars
    CHECK(r <= 0.5 + 4 * 0.008);
    // equal colors decode 0: a label tested against itself shares its color
    LabelMap m = s->encode(g, 7);
    CHECK_FALSE(s->decode(m.view(1), m.view(1)));
}

TEST_CASE("pwd: non-adjacent collision rate <= 2 * 2^-b") {
    // b = 3 password bits -> bound 1/4
    SchemePtr s = make_password_scheme(3, 1, 8);
    Graph g = gen_matching(2);
    double r = pair_rate(*s, g, 0, 2, 4000);
    CHECK(r <= 0.25 + 4 * 0.007);
}

TEST_CASE("d2ret acd support declares permanent instability") {
    SchemePtr s = make_bounded_degree_scheme(3, 1, 4);
    const AcdSupport* sup = s->acd_support();
    REQUIRE(sup != nullptr);
    Graph g = gen_star_centers(1, 3);
    auto out = sup->stability(*s, g, {}, 0, 0, 0.25, 0.25, 1);
    CHECK(out.kind == StabilityOutcome::Unstable);
    auto later = sup->stability(*s, g, {}, 0, 2, 0.25, 0.25, 1);
    CHECK(later.kind == StabilityOutcome::Unstable);
}

TEST_CASE("pwd acd support: stable after the first in-oriented leaf") {
    SchemePtr s = make_password_scheme(4, 1, 8);
    const AcdSupport* sup = s->acd_support();
    REQUIRE(sup != nullptr);
    Graph g = gen_star_centers(1, 4); // K_{1,4}, center 0
    auto order = sup->neighbor_order(g, 0);
    REQUIRE(order.size() == 4);
    std::set<int> leaves(order.begin(), order.end());
    CHECK(leaves == std::set<int>{1, 2, 3, 4});
    // out-degree cap = 2, so at least 2 leaves point at the center; those
    // in-oriented leaves come first in the query order
    LabelMap m = s->encode(g, 42);
    // before any query the center must be unstable; with the first leaf's
    // label observed, the next-leaf distribution is an explicit list of 2^b
    // equally likely labels containing the true next label
    auto before = sup->stability(*s, g, {}, 0, 0, 0.25, 0.25, 1);
    CHECK(before.kind == StabilityOutcome::Unstable);
    std::vector<Observation> obs{
        {order[0], m.view(order[0]).to_bytes()}};
    auto after = sup->stability(*s, g, obs, 0, 1, 0.25, 0.25, 1);
    REQUIRE(after.kind == StabilityOutcome::Stable);
    CHECK(after.next.mass.size() == 8); // 2^b distinct labels
    for (auto& [label, w] : after.next.mass) CHECK(w * 8 == after.next.total);
    auto truth = m.view(order[1]).to_bytes();
    bool contains = false;
    for (auto& [label, w] : after.next.mass) contains = contains || label == truth;
    CHECK(contains);
    // beyond the last neighbor the probe reports infeasible
    auto done = sup->stability(*s, g, obs, 0, 4, 0.25, 0.25, 1);
    CHECK(done.kind == StabilityOutcome::Infeasible);
}

TEST_CASE("encodings are deterministic in the seed") {
    Graph g = gen_random_bounded(16, 3, 5);
    for (SchemePtr s : {make_covering_scheme(3, 1, 2), make_tree_scheme(3, 1, 2),
                        make_bounded_degree_scheme(3, 1, 2),
                        make_password_scheme(3, 1, 8)}) {
        if (!s->accepts(g)) continue;
        CHECK(s->encode(g, 9).buf == s->encode(g, 9).buf);
        CHECK(s->encode(g, 9).buf != s->encode(g, 10).buf);
    }
}
