#include "skotch/catalog.hpp"

#include "skotch/acd.hpp"
#include "skotch/bounded.hpp"
#include "skotch/colorschemes.hpp"
#include "skotch/equality.hpp"
#include "skotch/matching.hpp"
#include "skotch/rng.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace skotch {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

uint64_t parse_u64(const std::string& text, const std::string& what) {
    uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        fail("bad integer for " + what + ": '" + text + "'");
    return value;
}

const std::string& require(const SpecParams& p, const std::string& key) {
    auto it = p.kv.find(key);
    if (it == p.kv.end()) fail(p.name + ": missing parameter '" + key + "'");
    return it->second;
}

std::string get_or(const SpecParams& p, const std::string& key,
                   const std::string& fallback) {
    auto it = p.kv.find(key);
    return it == p.kv.end() ? fallback : it->second;
}

void reject_unknown(const SpecParams& p, std::initializer_list<const char*> known) {
    for (const auto& [key, value] : p.kv) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) fail(p.name + ": unknown parameter '" + key + "'");
    }
}

// Random forest with max degree <= dmax, deterministic in the stream.
Graph random_forest(int n, int dmax, Stream& rng) {
    std::vector<std::pair<int, int>> edges;
    std::vector<int> deg(size_t(n), 0);
    for (int v = 1; v < n; ++v) {
        if (rng.below(5) == 0) continue; // fresh root
        std::vector<int> open;
        for (int u = 0; u < v; ++u)
            if (deg[u] < dmax) open.push_back(u);
        if (open.empty()) continue;
        int u = open[rng.below(open.size())];
        edges.emplace_back(u, v);
        ++deg[u];
        ++deg[v];
    }
    return Graph::from_edges(n, edges);
}

// Disjoint union of paths on n vertices.
Graph random_path_forest(int n, Stream& rng) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v < n; ++v)
        if (rng.below(4) != 0) edges.emplace_back(v - 1, v); // else break the chain
    return Graph::from_edges(n, edges);
}

} // namespace

SpecParams parse_spec(const std::string& spec) {
    SpecParams out;
    size_t colon = spec.find(':');
    out.name = spec.substr(0, colon);
    if (out.name.empty()) fail("empty spec string");
    if (colon == std::string::npos) return out;
    std::string rest = spec.substr(colon + 1);
    size_t pos = 0;
    while (pos <= rest.size()) {
        size_t comma = rest.find(',', pos);
        std::string item =
            rest.substr(pos, comma == std::string::npos ? comma : comma - pos);
        size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 >= item.size())
            fail("bad parameter '" + item + "' in spec '" + spec + "'");
        out.kv[item.substr(0, eq)] = item.substr(eq + 1);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

Rational64 parse_rational(const std::string& text) {
    Rational64 r;
    size_t slash = text.find('/');
    if (slash != std::string::npos) {
        r.num = parse_u64(text.substr(0, slash), "numerator");
        r.den = parse_u64(text.substr(slash + 1), "denominator");
    } else {
        size_t dot = text.find('.');
        if (dot == std::string::npos) {
            r.num = parse_u64(text, "rational");
            r.den = 1;
        } else {
            std::string whole = text.substr(0, dot), frac = text.substr(dot + 1);
            if (frac.empty() || frac.size() > 18) fail("bad rational '" + text + "'");
            uint64_t scale = 1;
            for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
            r.num = parse_u64(whole.empty() ? "0" : whole, "rational") * scale +
                    parse_u64(frac, "rational");
            r.den = scale;
        }
    }
    if (r.den == 0) fail("zero denominator in '" + text + "'");
    uint64_t g = std::gcd(r.num, r.den);
    if (g > 1) {
        r.num /= g;
        r.den /= g;
    }
    return r;
}

namespace {

// Canonical scheme names as printed by Scheme::name(), e.g. "pp-matching(1/4)",
// "cover(3,1/4)", "and(toy2,2)". Arguments split on top-level commas only, so
// nested amplifier names round-trip.
SchemePtr scheme_from_canonical(const std::string& text) {
    size_t open = text.find('(');
    if (open == std::string::npos || text.back() != ')')
        fail("bad scheme name '" + text + "'");
    std::string name = text.substr(0, open);
    std::string body = text.substr(open + 1, text.size() - open - 2);
    std::vector<std::string> args;
    int depth = 0;
    size_t start = 0;
    for (size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            args.push_back(body.substr(start, i - start));
            start = i + 1;
        }
    }
    args.push_back(body.substr(start));
    if (depth != 0) fail("unbalanced parentheses in '" + text + "'");
    auto want = [&](size_t k) {
        if (args.size() != k)
            fail("scheme '" + name + "' expects " + std::to_string(k) + " arguments");
    };
    auto int_arg = [&](size_t i) { return int(parse_u64(args[i], name)); };
    auto rat_arg = [&](size_t i) {
        Rational64 r = parse_rational(args[i]);
        if (r.num == 0) fail(name + ": eps must be positive");
        return r;
    };
    if (name == "pp-matching") {
        want(1);
        Rational64 e = rat_arg(0);
        return make_pp_matching(e.num, e.den);
    }
    if (name == "seq3d") {
        want(1);
        return make_sequential_scheme(int_arg(0));
    }
    if (name == "cover" || name == "tree" || name == "d2ret" || name == "pwd") {
        want(2);
        int d = int_arg(0);
        Rational64 e = rat_arg(1);
        if (name == "cover") return make_covering_scheme(d, e.num, e.den);
        if (name == "tree") return make_tree_scheme(d, e.num, e.den);
        if (name == "d2ret") return make_bounded_degree_scheme(d, e.num, e.den);
        return make_password_scheme(d, e.num, e.den);
    }
    if (name == "smmpc-forest") {
        want(2);
        return make_forest_equality_scheme(int_arg(0), int_arg(1));
    }
    if (name == "and" || name == "majority") {
        want(2);
        SchemePtr inner = scheme_from_spec(args[0]);
        int k = int_arg(1);
        return name == "and" ? amplify_and(inner, k) : amplify_majority(inner, k);
    }
    fail("unknown scheme '" + name + "'");
}

} // namespace

SchemePtr scheme_from_spec(const std::string& spec) {
    if (spec.find('(') != std::string::npos) return scheme_from_canonical(spec);
    SpecParams p = parse_spec(spec);
    auto eps = [&](const char* fallback) {
        Rational64 r = parse_rational(get_or(p, "eps", fallback));
        if (r.num == 0) fail(p.name + ": eps must be positive");
        return r;
    };
    auto int_of = [&](const std::string& key, const std::string& fallback) {
        std::string v = fallback.empty() ? require(p, key) : get_or(p, key, fallback);
        return int(parse_u64(v, p.name + "." + key));
    };

    if (p.name == "pp-matching") {
        reject_unknown(p, {"eps"});
        Rational64 e = eps("1/4");
        return make_pp_matching(e.num, e.den);
    }
    if (p.name == "color3") {
        reject_unknown(p, {});
        return make_color3();
    }
    if (p.name == "path6") {
        reject_unknown(p, {});
        return make_path_scheme();
    }
    if (p.name == "seq3d") {
        reject_unknown(p, {"d"});
        return make_sequential_scheme(int_of("d", ""));
    }
    if (p.name == "cover" || p.name == "tree" || p.name == "d2ret" ||
        p.name == "pwd") {
        reject_unknown(p, {"d", "eps"});
        int d = int_of("d", "");
        Rational64 e = eps("1/4");
        if (p.name == "cover") return make_covering_scheme(d, e.num, e.den);
        if (p.name == "tree") return make_tree_scheme(d, e.num, e.den);
        if (p.name == "d2ret") return make_bounded_degree_scheme(d, e.num, e.den);
        return make_password_scheme(d, e.num, e.den);
    }
    if (p.name == "smmpc-forest") {
        reject_unknown(p, {"n", "t"});
        return make_forest_equality_scheme(int_of("n", ""), int_of("t", "3"));
    }
    if (p.name == "toy2") {
        reject_unknown(p, {});
        return make_toy2();
    }
    if (p.name == "coin2") {
        reject_unknown(p, {});
        return make_coin2();
    }
    if (p.name == "and" || p.name == "majority") {
        reject_unknown(p, {"inner", "k"});
        SchemePtr inner = scheme_from_spec(require(p, "inner"));
        int k = int_of("k", "");
        return p.name == "and" ? amplify_and(inner, k) : amplify_majority(inner, k);
    }
    fail("unknown scheme '" + p.name + "'");
}

Graph graph_from_spec(const std::string& spec) {
    SpecParams p = parse_spec(spec);
    auto int_of = [&](const std::string& key) {
        return int(parse_u64(require(p, key), p.name + "." + key));
    };
    if (p.name == "matching") {
        reject_unknown(p, {"m"});
        return gen_matching(int_of("m"));
    }
    if (p.name == "path") {
        reject_unknown(p, {"n"});
        return gen_path(int_of("n"));
    }
    if (p.name == "dary-tree") {
        reject_unknown(p, {"d", "depth"});
        return gen_complete_dary_tree(int_of("d"), int_of("depth"));
    }
    if (p.name == "hypercube") {
        reject_unknown(p, {"d"});
        return gen_hypercube(int_of("d"));
    }
    if (p.name == "star_centers") {
        reject_unknown(p, {"n", "d"});
        return gen_star_centers(int_of("n"), int_of("d"));
    }
    if (p.name == "random") {
        reject_unknown(p, {"n", "d", "seed"});
        return gen_random_bounded(int_of("n"), int_of("d"),
                                  parse_u64(get_or(p, "seed", "0"), "random.seed"));
    }
    fail("unknown graph family '" + p.name + "'");
}

AdversaryPtr adversary_from_spec(const std::string& spec) {
    SpecParams p = parse_spec(spec);
    auto rat = [&](const std::string& key, const char* fallback) {
        Rational64 r = parse_rational(get_or(p, key, fallback));
        if (r.num == 0 || r.num >= r.den)
            fail(p.name + ": " + key + " must be in (0,1)");
        return double(r.num) / double(r.den);
    };
    if (p.name == "random-pair") {
        reject_unknown(p, {});
        return make_random_pair_adversary();
    }
    if (p.name == "pug") {
        reject_unknown(p, {"alpha"});
        return make_pug_statistics_adversary(rat("alpha", "1/3"));
    }
    if (p.name == "pigeonhole") {
        reject_unknown(p, {});
        return make_pigeonhole_adversary();
    }
    if (p.name == "pigeonhole-disabled") {
        reject_unknown(p, {});
        return make_pigeonhole_disabled_adversary();
    }
    if (p.name == "blackbox") {
        reject_unknown(p, {"eps"});
        return make_blackbox_adversary(rat("eps", "1/2"));
    }
    if (p.name == "acd") {
        reject_unknown(p, {"eps", "delta", "mode", "t", "max_centers", "two_sided"});
        AcdParams a;
        a.eps = rat("eps", "1/4");
        a.delta = rat("delta", "1/4");
        std::string mode = get_or(p, "mode", "l1");
        if (mode == "l1")
            a.mode = AcdMode::l1;
        else if (mode == "multiset")
            a.mode = AcdMode::multiset;
        else
            fail("acd: mode must be l1 or multiset");
        a.multiset_t = int(parse_u64(get_or(p, "t", "0"), "acd.t"));
        a.max_centers = int(parse_u64(get_or(p, "max_centers", "16"), "acd.max_centers"));
        a.two_sided = parse_u64(get_or(p, "two_sided", "0"), "acd.two_sided") != 0;
        return make_acd_adversary(a);
    }
    fail("unknown adversary '" + p.name + "'");
}

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = [] {
        std::vector<CatalogEntry> list;
        auto add = [&](const std::string& spec, std::string domain,
                       std::function<Graph(uint64_t)> sample) {
            list.push_back({scheme_from_spec(spec), std::move(domain), std::move(sample)});
        };
        auto bounded = [](int d) {
            return [d](uint64_t seed) {
                Stream s{seed};
                int n = 2 + int(s.below(59));
                return gen_random_bounded(n, d, s.child(1).key());
            };
        };
        auto forest = [](int d) {
            return [d](uint64_t seed) {
                Stream s{seed};
                int n = 2 + int(s.below(59));
                return random_forest(n, d, s);
            };
        };
        auto paths = [](uint64_t seed) {
            Stream s{seed};
            int n = 2 + int(s.below(59));
            return random_path_forest(n, s);
        };
        auto matchings = [](uint64_t seed) {
            Stream s{seed};
            return gen_matching(1 + int(s.below(30)));
        };

        add("pp-matching:eps=1/4", "matchings", matchings);
        add("color3", "path forests", paths);
        add("path6", "path forests", paths);
        add("seq3d:d=3", "max degree 3", bounded(3));
        add("cover:d=3,eps=1/4", "max degree 3", bounded(3));
        add("tree:d=3,eps=1/4", "forests, max degree 3", forest(3));
        add("d2ret:d=3,eps=1/8", "max degree 3", bounded(3));
        add("pwd:d=4,eps=1/8", "max degree 4", bounded(4));
        add("smmpc-forest:n=64,t=2", "forests on <= 64 vertices", forest(5));
        add("toy2", "all graphs", bounded(4));
        add("and:inner=toy2,k=2", "all graphs", bounded(4));
        add("coin2", "all graphs", bounded(4));
        add("majority:inner=coin2,k=3", "all graphs", bounded(4));
        return list;
    }();
    return entries;
}

} // namespace skotch
