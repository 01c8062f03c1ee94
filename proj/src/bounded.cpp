#include "skotch/bounded.hpp"
#include "skotch/acd.hpp"
#include "skotch/matching.hpp"
#include "skotch/bits.hpp"
#include "skotch/plane.hpp"
#include "skotch/retrieval.hpp"
#include "skotch/rng.hpp"

#include <algorithm>
#include <cassert>
#include <cstring>
#include <stdexcept>

namespace skotch {

namespace {

int bits_for(uint64_t n) {
    int b = 0;
    while ((uint64_t(1) << b) < n) ++b;
    return b;
}

std::string eps_str(uint64_t num, uint64_t den) {
    return std::to_string(num) + "/" + std::to_string(den);
}

void check_eps(uint64_t num, uint64_t den) {
    if (num == 0 || den == 0 || num >= den)
        throw std::invalid_argument("eps must be a rational in (0, 1)");
}

// validates before any member initializer derives a plane from d/eps
int checked_d(int d, const char* who, uint64_t num, uint64_t den) {
    if (d < 1) throw std::invalid_argument(std::string(who) + ": d must be >= 1");
    check_eps(num, den);
    return d;
}

// Uniform incident pair of the plane: a uniform, b uniform on a's line, roles
// swapped by a fair coin.
std::pair<uint64_t, uint64_t> sample_pair(const Plane& pl, Stream& s) {
    uint64_t a = s.below(pl.size());
    uint64_t b = pl.incident_list(int(a))[s.below(pl.order() + 1)];
    if (s.coin()) std::swap(a, b);
    return {a, b};
}

/** Slot-style schemes: per-class (presence bit + plane element). */
struct SlotCodec {
    const Plane& pl;
    int b; // element bits

    void write(BitWriter& w, const std::vector<int64_t>& slots) const {
        for (int64_t v : slots) {
            w.push_bit(v >= 0);
            w.put(v >= 0 ? uint64_t(v) : 0, b);
        }
    }
    // returns per-slot element or -1
    std::vector<int64_t> read(BitReader& r, int count) const {
        std::vector<int64_t> slots(count);
        for (int i = 0; i < count; ++i) {
            bool present = r.get_bit();
            uint64_t v = r.get(b);
            slots[i] = present && v < uint64_t(pl.size()) ? int64_t(v) : -1;
        }
        return slots;
    }
};

void store_label(LabelMap& m, int v, BitWriter& w) {
    auto bytes = w.take();
    assert(bytes.size() <= m.stride);
    std::memcpy(m.slot(v), bytes.data(), bytes.size());
}

class Cover : public Scheme {
public:
    Cover(int d, uint64_t num, uint64_t den)
        : d_(checked_d(d, "cover", num, den)), num_(num), den_(den),
          plane_(prime_for_degree(2 * uint64_t(d) * den, num)),
          b_(bits_for(uint64_t(plane_.size()))) {}

    std::string name() const override {
        return "cover(" + std::to_string(d_) + "," + eps_str(num_, den_) + ")";
    }
    bool accepts(const Graph& g, std::string* why) const override {
        if (g.max_degree <= d_) return true;
        if (why) *why = name() + " requires max degree <= " + std::to_string(d_);
        return false;
    }
    size_t label_bits(const Graph&) const override {
        return size_t(d_ + 1) * (1 + b_);
    }

    LabelMap encode(const Graph& g, uint64_t seed) const override {
        Stream root{seed};
        auto cover = edge_color_cover(g);
        assert(int(cover.count()) <= d_ + 1);
        std::vector<std::vector<int64_t>> slots(g.n,
                                                std::vector<int64_t>(d_ + 1, -1));
        for (int i = 0; i < int(cover.count()); ++i)
            for (auto [x, y] : cover.matchings[i]) {
                Stream s = root.child(0x11, uint64_t(i)).child(uint64_t(x));
                auto [a, b] = sample_pair(plane_, s);
                slots[x][i] = int64_t(a);
                slots[y][i] = int64_t(b);
            }
        LabelMap out;
        out.init(name(), label_bits(g), g.n);
        SlotCodec codec{plane_, b_};
        BitWriter w;
        for (int v = 0; v < g.n; ++v) {
            codec.write(w, slots[v]);
            store_label(out, v, w);
        }
        return out;
    }

    bool decode(LabelView a, LabelView b) const override {
        BitReader ra(a.data, a.nbytes()), rb(b.data, b.nbytes());
        SlotCodec codec{plane_, b_};
        auto sa = codec.read(ra, d_ + 1), sb = codec.read(rb, d_ + 1);
        for (int i = 0; i <= d_; ++i)
            if (sa[i] >= 0 && sb[i] >= 0 && plane_.incident(int(sa[i]), int(sb[i])))
                return true;
        return false;
    }

private:
    int d_;
    uint64_t num_, den_;
    Plane plane_;
    int b_;
};

class TreeScheme : public Scheme {
public:
    TreeScheme(int d, uint64_t num, uint64_t den)
        : d_(checked_d(d, "tree", num, den)), num_(num), den_(den),
          plane_(prime_for_degree(4 * den, num)), // per-class error eps/2
          b_(bits_for(uint64_t(plane_.size()))), pid_bits_(bits_for(uint64_t(d))) {}

    std::string name() const override {
        return "tree(" + std::to_string(d_) + "," + eps_str(num_, den_) + ")";
    }
    bool accepts(const Graph& g, std::string* why) const override {
        if (is_forest(g) && g.max_degree <= d_) return true;
        if (why) *why = name() + " requires a forest with max degree <= " +
                        std::to_string(d_);
        return false;
    }
    size_t label_bits(const Graph&) const override {
        return size_t(pid_bits_) + size_t(d_) * (1 + b_);
    }

    LabelMap encode(const Graph& g, uint64_t seed) const override {
        Stream root{seed};
        auto cover = edge_color_cover(g); // forest: <= d classes
        assert(int(cover.count()) <= d_);
        std::vector<std::vector<int64_t>> slots(g.n, std::vector<int64_t>(d_, -1));
        std::vector<std::vector<std::pair<int, int>>> by_class(d_);
        for (int i = 0; i < int(cover.count()); ++i)
            for (auto [x, y] : cover.matchings[i]) {
                Stream s = root.child(0x21, uint64_t(i)).child(uint64_t(x));
                auto [a, b] = sample_pair(plane_, s);
                slots[x][i] = int64_t(a);
                slots[y][i] = int64_t(b);
                by_class[i].push_back({x, y});
            }
        // parent class per vertex
        auto parent = bfs_parents(g, 0);
        std::vector<int> pid(g.n, -1);
        for (int i = 0; i < int(cover.count()); ++i)
            for (auto [x, y] : by_class[i]) {
                if (parent[x] == y) pid[x] = i;
                if (parent[y] == x) pid[y] = i;
            }
        for (int v = 0; v < g.n; ++v) {
            if (pid[v] >= 0) continue; // non-root
            pid[v] = 0; // degree-d root fallback
            for (int i = 0; i < d_; ++i)
                if (slots[v][i] < 0) { pid[v] = i; break; }
        }
        LabelMap out;
        out.init(name(), label_bits(g), g.n);
        SlotCodec codec{plane_, b_};
        BitWriter w;
        for (int v = 0; v < g.n; ++v) {
            w.put(uint64_t(pid[v]), pid_bits_);
            codec.write(w, slots[v]);
            store_label(out, v, w);
        }
        return out;
    }

    bool decode(LabelView a, LabelView b) const override {
        BitReader ra(a.data, a.nbytes()), rb(b.data, b.nbytes());
        int pa = int(ra.get(pid_bits_)), pb = int(rb.get(pid_bits_));
        SlotCodec codec{plane_, b_};
        auto sa = codec.read(ra, d_), sb = codec.read(rb, d_);
        for (int j : {pa, pb})
            if (j < d_ && sa[j] >= 0 && sb[j] >= 0 &&
                plane_.incident(int(sa[j]), int(sb[j])))
                return true;
        return false;
    }

private:
    int d_;
    uint64_t num_, den_;
    Plane plane_;
    int b_;
    int pid_bits_;
};

// ---- retrieval-backed schemes ----

uint64_t store_seed(int color) { return mix64(0xd25eed00ull ^ uint64_t(color)); }

// Query an XRTV1 blob that may carry zero padding after the true structure.
// Returns false if the blob is malformed.
bool blob_query(const uint8_t* blob, size_t max_bytes, int r, uint64_t key,
                uint64_t& out) {
    if (max_bytes < 29 || std::memcmp(blob, "XRTV1", 5) != 0) return false;
    uint32_t n = get_u32_be(blob + 5);
    size_t len = 29 + (size_t(n) * r + 7) / 8;
    if (len > max_bytes) return false;
    try {
        out = Retrieval::parse(blob, len).query(key);
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

void put_blob(BitWriter& w, const std::vector<uint8_t>& blob, size_t blob_bytes) {
    w.put_bytes(blob.data(), blob.size());
    for (size_t i = blob.size(); i < blob_bytes; ++i) w.put(0, 8);
}

class D2Ret : public Scheme {
public:
    D2Ret(int d, uint64_t num, uint64_t den)
        : d_(checked_d(d, "d2ret", num, den)), num_(num), den_(den),
          plane_(choose_order(num, den)),
          r_(bits_for(uint64_t(plane_.size()))),
          cbits_(bits_for(uint64_t(d) * d + 1)),
          blob_bytes_(29 + (size_t(d) * r_ + 7) / 8) {}

    std::string name() const override {
        return "d2ret(" + std::to_string(d_) + "," + eps_str(num_, den_) + ")";
    }
    bool accepts(const Graph& g, std::string* why) const override {
        if (g.max_degree <= d_) return true;
        if (why) *why = name() + " requires max degree <= " + std::to_string(d_);
        return false;
    }
    size_t label_bits(const Graph&) const override {
        return 8 * blob_bytes_ + cbits_;
    }

    LabelMap encode(const Graph& g, uint64_t seed) const override {
        Stream root{seed};
        uint64_t universe = uint64_t(d_) * d_ + 1;
        auto vc = distance2_coloring(g);
        assert(vc.palette_size <= int(universe));
        std::vector<int> color(vc.colors);
        for (int v = 0; v < g.n; ++v)
            if (g.degree(v) == 0) // degree-0: uniform color
                color[v] = int(root.child(0x32, uint64_t(v)).below(universe));
        // per-edge sub-label pairs, keyed by color pair
        LabelMap out;
        out.init(name(), label_bits(g), g.n);
        BitWriter w;
        std::vector<std::pair<uint64_t, uint64_t>> pairs;
        for (int x = 0; x < g.n; ++x) {
            pairs.clear();
            for (int y : g.adj[x]) {
                assert(color[y] != color[x]);
                int c1 = std::min(color[x], color[y]), c2 = std::max(color[x], color[y]);
                Stream s = root.child(0x31, uint64_t(c1) * universe + c2)
                               .child(uint64_t(std::min(x, y)));
                auto [a, b] = sample_pair(plane_, s);
                uint64_t own = (x < y) ? a : b;
                pairs.push_back({uint64_t(color[y]), own});
            }
            auto rs = Retrieval::build(pairs, universe, r_, store_seed(color[x]));
            put_blob(w, rs.serialize(), blob_bytes_);
            w.put(uint64_t(color[x]), cbits_);
            store_label(out, x, w);
        }
        return out;
    }

    bool decode(LabelView a, LabelView b) const override {
        int ca = read_color(a), cb = read_color(b);
        if (ca == cb) return false;
        uint64_t qa, qb;
        if (!blob_query(a.data, blob_bytes_, r_, uint64_t(cb), qa)) return false;
        if (!blob_query(b.data, blob_bytes_, r_, uint64_t(ca), qb)) return false;
        if (qa >= uint64_t(plane_.size()) || qb >= uint64_t(plane_.size()))
            return false;
        return plane_.incident(int(qa), int(qb));
    }

    const AcdSupport* acd_support() const override { return &support_; }

    size_t overhead_bits() const {
        return 232 + (8 * blob_bytes_ - 232 - size_t(d_) * r_);
    }

private:
    int read_color(LabelView v) const {
        BitReader r(v.data, v.nbytes());
        r.skip(8 * blob_bytes_);
        return int(r.get(cbits_));
    }

    // The resilience mechanism of the construction: conditioned on any proper
    // prefix of queried neighbors, the center's remaining matched elements
    // split the next-neighbor distribution into clusters at statistical
    // distance >= 1 - 1/(p+1), each of posterior mass <= 1/(p+1) + o(1), so no
    // qualifying label set L exists before every neighbor is queried.
    struct Support : AcdSupport {
        StabilityOutcome stability(const Scheme&, const Graph&,
                                   const std::vector<Observation>&, int, int,
                                   double, double, uint64_t) const override {
            return {StabilityOutcome::Unstable, {}};
        }
    } support_;

    int d_;
    uint64_t num_, den_;
    Plane plane_;
    int r_;
    int cbits_;
    size_t blob_bytes_;
};

class Pwd : public Scheme {
public:
    Pwd(int d, uint64_t num, uint64_t den)
        : d_(checked_d(d, "pwd", num, den)), num_(num), den_(den),
          b_(bits_for((den + num - 1) / num)),
          cbits_(bits_for(uint64_t(d) * d + 1)),
          cap_((d + 1) / 2),
          blob_bytes_(29 + (size_t(cap_) * b_ + 7) / 8),
          support_(this) {
        assert(b_ >= 1);
    }

    std::string name() const override {
        return "pwd(" + std::to_string(d_) + "," + eps_str(num_, den_) + ")";
    }
    bool accepts(const Graph& g, std::string* why) const override {
        if (g.max_degree <= d_) return true;
        if (why) *why = name() + " requires max degree <= " + std::to_string(d_);
        return false;
    }
    size_t label_bits(const Graph&) const override {
        return 8 * blob_bytes_ + cbits_ + b_;
    }

    LabelMap encode(const Graph& g, uint64_t seed) const override {
        Stream root{seed};
        auto vc = distance2_coloring(g);
        auto out_edges = out_lists(g);
        std::vector<uint64_t> pw(g.n);
        for (int v = 0; v < g.n; ++v)
            pw[v] = root.child(0x41, uint64_t(v)).below(uint64_t(1) << b_);
        LabelMap out;
        out.init(name(), label_bits(g), g.n);
        std::vector<std::pair<uint64_t, uint64_t>> pairs;
        for (int v = 0; v < g.n; ++v) {
            pairs.clear();
            for (int wv : out_edges[v]) pairs.push_back({uint64_t(vc.colors[wv]), pw[wv]});
            auto bytes = assemble(vc.colors[v], pw[v], pairs);
            std::memcpy(out.slot(v), bytes.data(), bytes.size());
        }
        return out;
    }

    bool decode(LabelView a, LabelView b) const override {
        int ca = read_color(a), cb = read_color(b);
        uint64_t pa = read_pwd(a), pb = read_pwd(b);
        uint64_t q;
        if (blob_query(a.data, blob_bytes_, b_, uint64_t(cb), q) && q == pb) return true;
        if (blob_query(b.data, blob_bytes_, b_, uint64_t(ca), q) && q == pa) return true;
        return false;
    }

    const AcdSupport* acd_support() const override { return &support_; }

private:
    std::vector<std::vector<int>> out_lists(const Graph& g) const {
        std::vector<std::vector<int>> out(g.n);
        for (auto [from, to] : orient_halved(g)) out[from].push_back(to);
        for (auto& o : out) std::sort(o.begin(), o.end());
        return out;
    }

    std::vector<uint8_t> assemble(
        int color, uint64_t pwd,
        const std::vector<std::pair<uint64_t, uint64_t>>& pairs) const {
        uint64_t universe = uint64_t(d_) * d_ + 1;
        auto rs = Retrieval::build(pairs, universe, b_, store_seed(color));
        BitWriter w;
        put_blob(w, rs.serialize(), blob_bytes_);
        w.put(uint64_t(color), cbits_);
        w.put(pwd, b_);
        return w.take();
    }

    int read_color(LabelView v) const {
        BitReader r(v.data, v.nbytes());
        r.skip(8 * blob_bytes_);
        return int(r.get(cbits_));
    }
    uint64_t read_pwd(LabelView v) const {
        BitReader r(v.data, v.nbytes());
        r.skip(8 * blob_bytes_ + cbits_);
        return r.get(b_);
    }

    /**
     * Analytic stability for leaf neighborhoods (star components): an
     * in-oriented leaf's store reveals the center's password, so the center
     * is unstable until one such leaf is queried and stable afterwards, with
     * D_x enumerable in closed form (2^b equally likely leaf labels).
     * This is exactly what generic enumeration would conclude; it exists
     * because the raw label space is too large to enumerate.
     */
    struct Support : AcdSupport {
        explicit Support(const Pwd* o) : owner(o) {}
        const Pwd* owner;

        std::vector<int> neighbor_order(const Graph& g, int center) const override {
            auto out_edges = owner->out_lists(g);
            std::vector<int> in_first, rest;
            for (int y : g.adj[center]) {
                auto& oy = out_edges[y];
                bool in = std::binary_search(oy.begin(), oy.end(), center);
                (in ? in_first : rest).push_back(y);
            }
            in_first.insert(in_first.end(), rest.begin(), rest.end());
            return in_first;
        }

        StabilityOutcome stability(const Scheme&, const Graph& g,
                                   const std::vector<Observation>& obs,
                                   int center, int queried, double, double,
                                   uint64_t) const override {
            const Pwd& P = *owner;
            auto order = neighbor_order(g, center);
            if (queried >= int(order.size())) return {StabilityOutcome::Infeasible, {}};
            int next = order[queried];
            if (g.degree(next) != 1) return {StabilityOutcome::Infeasible, {}};
            auto vc = distance2_coloring(g);
            auto out_edges = P.out_lists(g);
            bool first_in = !order.empty() && g.degree(order[0]) == 1 &&
                            !out_edges[order[0]].empty();
            bool next_in = !out_edges[next].empty(); // leaf: out-edge goes to center
            uint64_t w_center = 0;
            if (first_in) {
                if (queried == 0) return {StabilityOutcome::Unstable, {}};
                // recover the center's password from the first queried leaf
                const Observation* first = nullptr;
                for (auto& o : obs)
                    if (o.vertex == order[0]) first = &o;
                if (!first) return {StabilityOutcome::Infeasible, {}};
                if (!blob_query(first->label.data(), P.blob_bytes_, P.b_,
                                uint64_t(vc.colors[center]), w_center))
                    return {StabilityOutcome::Infeasible, {}};
            } else if (next_in) {
                return {StabilityOutcome::Infeasible, {}}; // cannot happen: in-first order
            }
            StabilityOutcome res;
            res.kind = StabilityOutcome::Stable;
            std::vector<std::pair<uint64_t, uint64_t>> pairs;
            if (next_in) pairs.push_back({uint64_t(vc.colors[center]), w_center});
            for (uint64_t pwd = 0; pwd < (uint64_t(1) << P.b_); ++pwd) {
                res.next.add(P.assemble(vc.colors[next], pwd, pairs), 1);
            }
            res.next.normalize();
            return res;
        }
    };

    int d_;
    uint64_t num_, den_;
    int b_;
    int cbits_;
    int cap_;
    size_t blob_bytes_;
    Support support_;
};

} // namespace

SchemePtr make_covering_scheme(int d, uint64_t num, uint64_t den) {
    return std::make_shared<Cover>(d, num, den);
}
SchemePtr make_tree_scheme(int d, uint64_t num, uint64_t den) {
    return std::make_shared<TreeScheme>(d, num, den);
}
SchemePtr make_bounded_degree_scheme(int d, uint64_t num, uint64_t den) {
    return std::make_shared<D2Ret>(d, num, den);
}
SchemePtr make_password_scheme(int d, uint64_t num, uint64_t den) {
    return std::make_shared<Pwd>(d, num, den);
}

size_t d2ret_overhead_bits(int d, uint64_t num, uint64_t den) {
    D2Ret s(d, num, den);
    return s.overhead_bits();
}

} // namespace skotch
