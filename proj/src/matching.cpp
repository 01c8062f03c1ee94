#include "skotch/matching.hpp"
#include "skotch/bits.hpp"
#include "skotch/rng.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace skotch {

int choose_order(uint64_t eps_num, uint64_t eps_den) {
    if (eps_num == 0 || eps_den == 0 || eps_num >= eps_den)
        throw std::invalid_argument("eps must be a rational in (0, 1)");
    return prime_for_degree(2 * eps_den, eps_num);
}

namespace {

int bits_for(uint64_t n) {
    int b = 0;
    while ((uint64_t(1) << b) < n) ++b;
    return b;
}

void pack_value(uint8_t* slot, uint64_t value, int bits) {
    for (int i = 0; i < bits; ++i)
        if (value >> (bits - 1 - i) & 1) slot[i / 8] |= uint8_t(1u << (7 - i % 8));
}

uint64_t unpack_value(LabelView v) {
    BitReader r(v.data, v.nbytes());
    return r.get(int(v.nbits));
}

class PPMatching : public Scheme {
public:
    PPMatching(uint64_t num, uint64_t den)
        : num_(num), den_(den), p_(choose_order(num, den)),
          n_elems_(uint64_t(p_) * p_ + p_ + 1), bits_(bits_for(n_elems_)) {}

    std::string name() const override {
        return "pp-matching(" + std::to_string(num_) + "/" + std::to_string(den_) + ")";
    }
    bool accepts(const Graph& g, std::string* why) const override {
        if (g.max_degree <= 1) return true;
        if (why) *why = "pp-matching requires a matching (max degree 1)";
        return false;
    }
    size_t label_bits(const Graph&) const override { return size_t(bits_); }

    LabelMap encode(const Graph& g, uint64_t seed) const override {
        const Plane& pl = plane();
        Stream root{seed};
        LabelMap out;
        out.init(name(), size_t(bits_), g.n);
        for (int u = 0; u < g.n; ++u) {
            if (g.degree(u) == 0) {
                pack_value(out.slot(u), root.child(uint64_t(u)).below(n_elems_), bits_);
                continue;
            }
            int v = g.adj[u][0];
            if (v < u) continue; // edge handled from its smaller endpoint
            Stream s = root.child(uint64_t(u));
            uint64_t a = s.below(n_elems_);
            uint64_t b = pl.incident_list(int(a))[s.below(uint64_t(p_) + 1)];
            if (s.coin()) std::swap(a, b);
            pack_value(out.slot(u), a, bits_);
            pack_value(out.slot(v), b, bits_);
        }
        return out;
    }

    bool decode(LabelView a, LabelView b) const override {
        uint64_t va = unpack_value(a), vb = unpack_value(b);
        if (va >= n_elems_ || vb >= n_elems_) return false;
        return plane().incident(int(va), int(vb));
    }

    std::optional<uint64_t> label_space(const Graph&) const override {
        return n_elems_;
    }
    const EnumHook* enum_hook() const override { return &hook_; }
    // built on first use: label sizing must stay cheap even when the plane
    // would be enormous
    const Plane& plane() const {
        std::call_once(once_, [this] { plane_ = std::make_unique<Plane>(p_); });
        return *plane_;
    }

private:
    struct Hook : EnumHook {
        explicit Hook(const PPMatching* o) : owner(o) {}
        const PPMatching* owner;
        uint64_t atom_count(const Graph&, const std::vector<int>& comp) const override {
            const Plane& pl = owner->plane();
            if (comp.size() == 1) return uint64_t(pl.size());
            return 2ull * pl.size() * (pl.order() + 1);
        }
        void for_each_atom(
            const Graph&, const std::vector<int>& comp, uint64_t,
            const std::function<void(const std::vector<std::vector<uint8_t>>&)>& fn)
            const override {
            const Plane& pl = owner->plane();
            int bytes = (owner->bits_ + 7) / 8;
            auto packed = [&](uint64_t value) {
                std::vector<uint8_t> l(bytes, 0);
                pack_value(l.data(), value, owner->bits_);
                return l;
            };
            std::vector<std::vector<uint8_t>> labels(comp.size());
            if (comp.size() == 1) {
                for (int a = 0; a < pl.size(); ++a) {
                    labels[0] = packed(a);
                    fn(labels);
                }
                return;
            }
            for (int a = 0; a < pl.size(); ++a)
                for (int b : pl.incident_list(a))
                    for (int coin = 0; coin < 2; ++coin) {
                        labels[coin] = packed(a);
                        labels[1 - coin] = packed(b);
                        fn(labels);
                    }
        }
    } hook_{this};

    uint64_t num_, den_;
    int p_;
    uint64_t n_elems_;
    int bits_;
    mutable std::once_flag once_;
    mutable std::unique_ptr<Plane> plane_;

    friend const Plane* skotch::pp_matching_plane(const Scheme&);
};

class Color3 : public Scheme {
public:
    std::string name() const override { return "color3"; }
    bool accepts(const Graph& g, std::string* why) const override {
        if (is_path_forest(g)) return true;
        if (why) *why = "color3 requires a disjoint union of paths";
        return false;
    }
    size_t label_bits(const Graph&) const override { return 2; }

    LabelMap encode(const Graph& g, uint64_t seed) const override {
        Stream root{seed};
        LabelMap out;
        out.init(name(), 2, g.n);
        std::vector<char> done(g.n, 0);
        for (int s = 0; s < g.n; ++s) {
            if (done[s] || g.degree(s) > 1) continue; // start at path endpoints
            Stream rng = root.child(uint64_t(s));
            int prev = -1, v = s, color = int(rng.below(3));
            while (true) {
                out.slot(v)[0] = uint8_t(color << 6);
                done[v] = 1;
                int next = -1;
                for (int w : g.adj[v])
                    if (w != prev) next = w;
                if (next < 0) break;
                prev = v;
                v = next;
                int pick = int(rng.below(2)); // index into palette minus previous color
                color = pick >= color ? pick + 1 : pick;
            }
        }
        return out;
    }

    bool decode(LabelView a, LabelView b) const override {
        return a.data[0] >> 6 != b.data[0] >> 6;
    }

    std::optional<uint64_t> label_space(const Graph&) const override { return 3; }
    const EnumHook* enum_hook() const override { return &hook_; }

private:
    struct Hook : EnumHook {
        static std::vector<int> path_order(const Graph& g, const std::vector<int>& comp) {
            int root = -1;
            for (int v : comp)
                if (g.degree(v) <= 1) { root = v; break; }
            std::vector<int> order;
            int prev = -1, v = root;
            while (v >= 0) {
                order.push_back(v);
                int next = -1;
                for (int w : g.adj[v])
                    if (w != prev) next = w;
                prev = order.back();
                v = next;
            }
            return order;
        }
        uint64_t atom_count(const Graph&, const std::vector<int>& comp) const override {
            return 3ull << (comp.size() - 1);
        }
        void for_each_atom(
            const Graph& g, const std::vector<int>& comp, uint64_t,
            const std::function<void(const std::vector<std::vector<uint8_t>>&)>& fn)
            const override {
            auto order = path_order(g, comp);
            std::vector<int> pos(order.size()); // order index -> slot in comp
            for (size_t i = 0; i < order.size(); ++i)
                pos[i] = int(std::lower_bound(comp.begin(), comp.end(), order[i]) -
                             comp.begin());
            uint64_t atoms = 3ull << (order.size() - 1);
            std::vector<std::vector<uint8_t>> labels(comp.size());
            for (uint64_t atom = 0; atom < atoms; ++atom) {
                uint64_t x = atom;
                int color = int(x % 3);
                x /= 3;
                labels[pos[0]] = {uint8_t(color << 6)};
                for (size_t i = 1; i < order.size(); ++i) {
                    int pick = int(x & 1);
                    x >>= 1;
                    color = pick >= color ? pick + 1 : pick;
                    labels[pos[i]] = {uint8_t(color << 6)};
                }
                fn(labels);
            }
        }
    } hook_;
};

} // namespace

SchemePtr make_pp_matching(uint64_t eps_num, uint64_t eps_den) {
    return std::make_shared<PPMatching>(eps_num, eps_den);
}

SchemePtr make_color3() { return std::make_shared<Color3>(); }

const Plane* pp_matching_plane(const Scheme& s) {
    auto* p = dynamic_cast<const PPMatching*>(&s);
    return p ? &p->plane() : nullptr;
}

} // namespace skotch
