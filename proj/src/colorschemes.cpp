#include "skotch/colorschemes.hpp"
#include "skotch/bits.hpp"
#include "skotch/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace skotch {

namespace {

int bits_for(uint64_t n) {
    int b = 0;
    while ((uint64_t(1) << b) < n) ++b;
    return b;
}

/**
 * Common shape of path6 and seq3d: vertices colored in a fixed order, each
 * uniform over the palette minus the colors of already-colored neighbors.
 * The schemes differ only in palette size, order, and domain.
 */
class GreedyColorScheme : public Scheme {
public:
    virtual int palette() const = 0;
    virtual std::vector<int> coloring_order(const Graph& g) const = 0;

    void allowed(const Graph& g, int v, const std::vector<int>& colors,
                 std::vector<int>& out) const {
        uint32_t used = 0;
        for (int w : g.adj[v])
            if (colors[w] >= 0) used |= 1u << colors[w];
        out.clear();
        for (int c = 0; c < palette(); ++c)
            if (!(used >> c & 1)) out.push_back(c);
    }

    size_t label_bits(const Graph&) const override {
        return size_t(bits_for(uint64_t(palette())));
    }

    LabelMap encode(const Graph& g, uint64_t seed) const override {
        Stream root{seed};
        LabelMap out;
        out.init(name(), label_bits(g), g.n);
        std::vector<int> colors(g.n, -1), legal;
        int bits = int(label_bits(g));
        for (int v : coloring_order(g)) {
            allowed(g, v, colors, legal);
            colors[v] = legal[root.child(uint64_t(v)).below(legal.size())];
            for (int i = 0; i < bits; ++i)
                if (colors[v] >> (bits - 1 - i) & 1)
                    out.slot(v)[i / 8] |= uint8_t(1u << (7 - i % 8));
        }
        return out;
    }

    bool decode(LabelView a, LabelView b) const override {
        BitReader ra(a.data, a.nbytes()), rb(b.data, b.nbytes());
        return ra.get(int(a.nbits)) != rb.get(int(b.nbits));
    }
};

class Path6 : public GreedyColorScheme {
public:
    std::string name() const override { return "path6"; }
    int palette() const override { return 6; }
    bool accepts(const Graph& g, std::string* why) const override {
        if (is_path_forest(g)) return true;
        if (why) *why = "path6 requires a disjoint union of paths";
        return false;
    }
    std::vector<int> coloring_order(const Graph& g) const override {
        // walk each path from its smallest-id endpoint
        std::vector<int> order;
        std::vector<char> done(g.n, 0);
        for (int s = 0; s < g.n; ++s) {
            if (done[s] || g.degree(s) > 1) continue;
            int prev = -1, v = s;
            while (v >= 0) {
                order.push_back(v);
                done[v] = 1;
                int next = -1;
                for (int w : g.adj[v])
                    if (w != prev) next = w;
                prev = v;
                v = next;
            }
        }
        return order;
    }
};

class Seq3d : public GreedyColorScheme {
public:
    explicit Seq3d(int d) : d_(d) {
        if (d < 1) throw std::invalid_argument("seq3d: d must be >= 1");
    }
    std::string name() const override { return "seq3d(" + std::to_string(d_) + ")"; }
    int palette() const override { return 3 * d_; }
    bool accepts(const Graph& g, std::string* why) const override {
        if (g.max_degree <= d_) return true;
        if (why) *why = "seq3d(" + std::to_string(d_) + ") requires max degree <= " +
                        std::to_string(d_);
        return false;
    }
    std::vector<int> coloring_order(const Graph& g) const override {
        return bfs_order(g, 0);
    }

private:
    int d_;
};

const GreedyColorScheme& as_color(const Scheme& s) {
    auto* c = dynamic_cast<const GreedyColorScheme*>(&s);
    if (!c) throw std::invalid_argument("not a color-based scheme: " + s.name());
    return *c;
}

} // namespace

SchemePtr make_path_scheme() { return std::make_shared<Path6>(); }
SchemePtr make_sequential_scheme(int d) { return std::make_shared<Seq3d>(d); }

int label_color(const Scheme& s, LabelView v) {
    as_color(s);
    BitReader r(v.data, v.nbytes());
    return int(r.get(int(v.nbits)));
}

ColorEnumeration enumerate_colorings(const Scheme& s, const Graph& g) {
    const auto& cs = as_color(s);
    std::string why;
    if (!cs.accepts(g, &why)) throw std::invalid_argument(why);
    int palette = cs.palette();
    if (palette > 16 || g.n > 32)
        throw std::invalid_argument("enumeration packing limit exceeded");
    if (double(g.n) * std::log(double(palette)) > std::log(1e8))
        throw std::invalid_argument("enumeration budget exceeded");

    unsigned __int128 L = 1;
    for (int k = 2; k <= palette; ++k) L = std::lcm(uint64_t(L), uint64_t(k));

    ColorEnumeration out;
    out.n = g.n;
    out.palette = palette;
    out.total = 1;
    for (int i = 0; i < g.n; ++i) out.total *= L;

    auto order = cs.coloring_order(g);
    std::vector<int> colors(g.n, -1);
    std::function<void(int, unsigned __int128)> rec =
        [&](int depth, unsigned __int128 weight) {
            if (depth == g.n) {
                uint32_t packed = 0;
                for (int u = 0; u < g.n; ++u) packed |= uint32_t(colors[u]) << (4 * u);
                out.atoms.push_back({packed, weight});
                return;
            }
            int v = order[depth];
            std::vector<int> legal;
            cs.allowed(g, v, colors, legal);
            if (legal.empty()) return; // cannot happen on accepted domains
            unsigned __int128 w = weight * (L / (unsigned __int128)legal.size());
            for (int c : legal) {
                colors[v] = c;
                rec(depth + 1, w);
            }
            colors[v] = -1;
        };
    rec(0, 1);
    return out;
}

std::vector<std::pair<std::vector<int>, Rational>> exact_conditional_oracle(
    const Scheme& s, const Graph& g, const std::vector<int>& hidden,
    const std::vector<int>& condition) {
    if (int(condition.size()) != g.n)
        throw std::invalid_argument("condition size mismatch");
    auto en = enumerate_colorings(s, g);
    using Int = boost::multiprecision::cpp_int;
    std::map<std::vector<int>, Int> mass;
    Int total = 0;
    std::vector<int> key(hidden.size());
    for (const auto& a : en.atoms) {
        bool ok = true;
        for (int v = 0; v < g.n && ok; ++v)
            if (condition[v] >= 0 && ColorEnumeration::color_of(a.packed, v) != condition[v])
                ok = false;
        if (!ok) continue;
        for (size_t i = 0; i < hidden.size(); ++i)
            key[i] = ColorEnumeration::color_of(a.packed, hidden[i]);
        Int w = Int(uint64_t(a.weight >> 64)) << 64 | uint64_t(a.weight);
        mass[key] += w;
        total += w;
    }
    if (total == 0) throw std::invalid_argument("condition has zero probability");
    std::vector<std::pair<std::vector<int>, Rational>> out;
    out.reserve(mass.size());
    for (auto& [k, w] : mass) out.push_back({k, Rational(w, total)});
    return out;
}

} // namespace skotch
