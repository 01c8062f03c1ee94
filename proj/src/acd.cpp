#include "skotch/acd.hpp"
#include "skotch/rng.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace skotch {

// ---- LabelDist ----

void LabelDist::add(const std::vector<uint8_t>& label, uint64_t w) {
    mass.push_back({label, w});
    total += w;
}

void LabelDist::normalize() {
    std::sort(mass.begin(), mass.end());
    size_t out = 0;
    for (size_t i = 0; i < mass.size(); ++i) {
        if (out && mass[out - 1].first == mass[i].first)
            mass[out - 1].second += mass[i].second;
        else
            mass[out++] = mass[i];
    }
    mass.resize(out);
}

const std::vector<uint8_t>& LabelDist::sample(uint64_t pick) const {
    for (const auto& [label, w] : mass) {
        if (pick < w) return label;
        pick -= w;
    }
    throw std::invalid_argument("LabelDist::sample: pick out of range");
}

double stat_distance(const LabelDist& a, const LabelDist& b) {
    // 1/2 sum |p - q| over the union of supports (both lists sorted)
    double d = 0;
    size_t i = 0, j = 0;
    const double ta = double(a.total), tb = double(b.total);
    while (i < a.mass.size() || j < b.mass.size()) {
        if (j == b.mass.size() ||
            (i < a.mass.size() && a.mass[i].first < b.mass[j].first)) {
            d += a.mass[i++].second / ta;
        } else if (i == a.mass.size() || b.mass[j].first < a.mass[i].first) {
            d += b.mass[j++].second / tb;
        } else {
            d += std::abs(a.mass[i].second / ta - b.mass[j].second / tb);
            ++i;
            ++j;
        }
    }
    return d / 2;
}

// ---- posterior engine ----

Posterior posterior_engine(const Scheme& s, const Graph& g,
                           const std::vector<Observation>& obs, int target,
                           const PosteriorOptions& opt) {
    Posterior out;
    if (target < 0 || target >= g.n)
        throw std::invalid_argument("posterior: bad target");
    if (opt.exact) {
        const EnumHook* hook = s.enum_hook();
        if (!hook) { out.abstain = true; return out; }
        auto comp = g.component_of(target);
        if (hook->atom_count(g, comp) > 100000000ull) { out.abstain = true; return out; }
        // component-local observations (labels factorize over components)
        std::vector<std::pair<size_t, const std::vector<uint8_t>*>> local;
        size_t target_pos = 0;
        for (size_t i = 0; i < comp.size(); ++i) {
            if (comp[i] == target) target_pos = i;
            for (const auto& o : obs)
                if (o.vertex == comp[i]) local.push_back({i, &o.label});
        }
        hook->for_each_atom(g, comp, opt.seed,
                            [&](const std::vector<std::vector<uint8_t>>& labels) {
                                for (auto& [i, l] : local)
                                    if (labels[i] != *l) return;
                                out.dist.add(labels[target_pos], 1);
                            });
        out.dist.normalize();
        out.consistent = out.dist.total;
        if (out.dist.total == 0) out.abstain = true;
        return out;
    }
    // Monte-Carlo rejection over whole encodings
    Stream seeds{opt.seed};
    for (uint64_t i = 0; i < opt.mc_samples; ++i) {
        LabelMap m = s.encode(g, seeds.next());
        bool ok = true;
        for (const auto& o : obs) {
            LabelView v = m.view(o.vertex);
            if (v.to_bytes() != o.label) { ok = false; break; }
        }
        if (!ok) continue;
        out.dist.add(m.view(target).to_bytes(), 1);
        ++out.consistent;
    }
    out.dist.normalize();
    if (out.consistent < opt.mc_min_consistent) out.abstain = true;
    return out;
}

// ---- supports ----

std::vector<int> AcdSupport::neighbor_order(const Graph& g, int center) const {
    return g.adj[center]; // sorted ascending by construction
}

namespace {

class GenericSupport : public AcdSupport {
public:
    StabilityOutcome stability(const Scheme& s, const Graph& g,
                               const std::vector<Observation>& obs, int center,
                               int queried, double eps, double delta,
                               uint64_t seed) const override {
        auto order = neighbor_order(g, center);
        if (queried >= int(order.size())) return {StabilityOutcome::Infeasible, {}};
        int next = order[queried];
        bool exact = s.enum_hook() != nullptr;
        PosteriorOptions po;
        po.exact = exact;
        po.seed = seed;
        Posterior gi = posterior_engine(s, g, obs, center, po);
        if (gi.abstain) return {StabilityOutcome::Infeasible, {}};
        // conditional next-neighbor distribution per candidate center label
        struct Entry {
            uint64_t w;
            LabelDist d;
        };
        std::vector<Entry> entries;
        entries.reserve(gi.dist.mass.size());
        std::vector<Observation> obs2 = obs;
        obs2.push_back({center, {}});
        Stream sub{mix64(seed ^ 0xacdacdull)};
        for (const auto& [label, w] : gi.dist.mass) {
            obs2.back().label = label;
            PosteriorOptions po2 = po;
            po2.seed = sub.next();
            Posterior du = posterior_engine(s, g, obs2, next, po2);
            if (du.abstain) return {StabilityOutcome::Infeasible, {}};
            entries.push_back({w, std::move(du.dist)});
        }
        // greedy L: heaviest labels first, grow while pairwise eps-close
        std::sort(entries.begin(), entries.end(),
                  [](const Entry& a, const Entry& b) { return a.w > b.w; });
        std::vector<const Entry*> L;
        uint64_t l_mass = 0;
        for (const auto& e : entries) {
            bool close = true;
            for (const Entry* m : L)
                if (stat_distance(e.d, m->d) > eps) { close = false; break; }
            if (close) { L.push_back(&e); l_mass += e.w; }
        }
        if (double(l_mass) < (1.0 - delta) * double(gi.dist.total))
            return {StabilityOutcome::Unstable, {}};
        return {StabilityOutcome::Stable, L.front()->d};
    }
};

const GenericSupport generic_support_instance;

} // namespace

const AcdSupport& generic_acd_support() { return generic_support_instance; }

std::vector<int> pick_centers(const Graph& g, int deg_min, int max_centers) {
    std::vector<int> centers;
    std::vector<int> dist2(g.n, 0); // 1 = within distance 2 of a picked center
    for (int v = 0; v < g.n && int(centers.size()) < max_centers; ++v) {
        if (g.degree(v) < deg_min || dist2[v]) continue;
        centers.push_back(v);
        dist2[v] = 1;
        for (int u : g.adj[v]) {
            dist2[u] = 1;
            for (int w : g.adj[u]) dist2[w] = 1;
        }
    }
    return centers;
}

double multiset_value(const Scheme& s,
                      const std::vector<std::vector<uint8_t>>& T,
                      const std::vector<uint8_t>& v) {
    if (T.empty()) throw std::invalid_argument("multiset_value: empty multiset");
    double acc = 0;
    for (const auto& u : T)
        acc += s.decode({u.data(), u.size() * 8}, {v.data(), v.size() * 8}) ? 1 : 0;
    return acc / double(T.size());
}

// ---- the ACD adversary ----

namespace {

struct CenterState {
    int id = -1;
    std::vector<int> order;
    int queried = 0;
    enum { Active, StableState, Retired } status = Active;
    LabelDist d; // recorded D_x
    int gamma_next = -1;
};

class AcdAdversary;

class AcdEngagement : public Engagement {
public:
    AcdEngagement(const AcdAdversary& owner, const Scheme& s, const Graph& g,
                  uint64_t seed);

    std::optional<int> next_query() override;
    void on_label(int vertex, LabelView label) override;
    std::optional<std::pair<int, int>> candidates() override;

private:
    const AcdAdversary& owner_;
    const Scheme& s_;
    const Graph& g_;
    const AcdSupport& support_;
    Stream rng_;
    std::vector<CenterState> centers_;
    std::vector<Observation> obs_;
    std::unordered_map<int, size_t> vertex_center_; // queried vertex -> center index
    size_t budget_;
    size_t queries_done_ = 0;
    size_t rr_ = 0; // round-robin cursor over centers
};

class AcdAdversary : public Adversary {
public:
    explicit AcdAdversary(const AcdParams& p) : p_(p) {
        if (!(p.eps > 0 && p.eps < 1 && p.delta > 0 && p.delta < 1))
            throw std::invalid_argument("acd: eps, delta must be in (0,1)");
    }

    std::string name() const override {
        std::ostringstream os;
        os << "acd(" << (p_.mode == AcdMode::l1 ? "l1" : "multiset") << ",eps="
           << p_.eps << ",delta=" << p_.delta << ")";
        return os.str();
    }

    bool applicable(const Scheme& s, const Graph& g, std::string* why) const override {
        auto centers = pick_centers(g, g.max_degree, p_.max_centers);
        if (centers.size() < 2) {
            if (why) *why = "acd needs >= 2 centers at pairwise distance >= 3";
            return false;
        }
        if (!s.acd_support() && !s.enum_hook()) {
            // Monte-Carlo fallback exists but warn via reason on demand
        }
        return true;
    }

    std::unique_ptr<Engagement> engage(const Scheme& s, const Graph& g,
                                       uint64_t seed) const override {
        return std::make_unique<AcdEngagement>(*this, s, g, seed);
    }

    const AcdParams& params() const { return p_; }

    // Cross-game memoization of stability outcomes. Keyed by the exact inputs
    // of the probe; the graph is identified by address + shape (stable for
    // the lifetime of an estimate_forgery run).
    StabilityOutcome cached_stability(const AcdSupport& sup, const Scheme& s,
                                      const Graph& g,
                                      const std::vector<Observation>& obs,
                                      int center, int queried, uint64_t seed) const {
        std::string key;
        {
            std::ostringstream os;
            os << s.name() << '|' << (const void*)&g << '|' << g.n << '|'
               << g.edge_count() << '|' << center << '|' << queried << '|';
            // component-local observations only, in vertex order
            auto comp = g.component_of(center);
            for (const auto& o : obs)
                if (std::binary_search(comp.begin(), comp.end(), o.vertex)) {
                    os << o.vertex << ':';
                    os.write((const char*)o.label.data(), o.label.size());
                    os << ';';
                }
            key = os.str();
        }
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        StabilityOutcome res = sup.stability(s, g, obs, center, queried, p_.eps,
                                             p_.delta, seed);
        std::lock_guard<std::mutex> lock(mu_);
        if (cache_.size() < 100000) cache_.emplace(std::move(key), res);
        return res;
    }

private:
    AcdParams p_;
    mutable std::mutex mu_;
    mutable std::unordered_map<std::string, StabilityOutcome> cache_;
};

AcdEngagement::AcdEngagement(const AcdAdversary& owner, const Scheme& s,
                             const Graph& g, uint64_t seed)
    : owner_(owner), s_(s), g_(g),
      support_(s.acd_support() ? *s.acd_support() : generic_acd_support()),
      rng_(seed) {
    budget_ = g.n >= 2 ? size_t(g.n) - 2 : 0;
    for (int c : pick_centers(g, g.max_degree, owner.params().max_centers)) {
        CenterState cs;
        cs.id = c;
        cs.order = support_.neighbor_order(g, c);
        centers_.push_back(std::move(cs));
    }
}

std::optional<int> AcdEngagement::next_query() {
    // Round-robin by center id over still-unstable centers.
    for (size_t step = 0; step < centers_.size(); ++step) {
        size_t i = (rr_ + step) % centers_.size();
        CenterState& c = centers_[i];
        if (c.status != CenterState::Active) continue;
        if (c.queried >= int(c.order.size())) {
            c.status = CenterState::Retired;
            continue;
        }
        auto res = owner_.cached_stability(support_, s_, g_, obs_, c.id,
                                           c.queried, rng_.next());
        if (res.kind == StabilityOutcome::Stable) {
            c.status = CenterState::StableState;
            c.d = std::move(res.next);
            c.gamma_next = c.order[c.queried];
            continue;
        }
        if (res.kind == StabilityOutcome::Infeasible) {
            c.status = CenterState::Retired;
            continue;
        }
        if (queries_done_ >= budget_) return std::nullopt;
        ++queries_done_;
        vertex_center_[c.order[c.queried]] = i;
        rr_ = (i + 1) % centers_.size();
        return c.order[c.queried];
    }
    return std::nullopt;
}

void AcdEngagement::on_label(int vertex, LabelView label) {
    obs_.push_back({vertex, label.to_bytes()});
    auto it = vertex_center_.find(vertex);
    if (it != vertex_center_.end()) ++centers_[it->second].queried;
}

std::optional<std::pair<int, int>> AcdEngagement::candidates() {
    std::vector<CenterState*> stable;
    for (auto& c : centers_)
        if (c.status == CenterState::StableState) stable.push_back(&c);
    const AcdParams& p = owner_.params();
    if (p.mode == AcdMode::l1) {
        for (size_t i = 0; i < stable.size(); ++i)
            for (size_t j = i + 1; j < stable.size(); ++j)
                if (stat_distance(stable[i]->d, stable[j]->d) <= p.eps)
                    return std::make_pair(stable[i]->id, stable[j]->gamma_next);
        return std::nullopt;
    }
    // multiset mode: characterizing multisets per center, matched through Q
    if (stable.empty()) return std::nullopt;
    size_t s_bits = stable.front()->d.mass.front().first.size() * 8;
    int t = p.multiset_t;
    if (t <= 0) {
        double ln_term = std::log(std::pow(2.0, double(std::min<size_t>(s_bits, 40)) + 2) /
                                  p.delta);
        t = int(std::ceil(2.0 * (4.0 / (p.eps * p.eps)) * ln_term));
    }
    std::vector<std::vector<std::vector<uint8_t>>> T(stable.size());
    for (size_t i = 0; i < stable.size(); ++i)
        for (int k = 0; k < t; ++k)
            T[i].push_back(stable[i]->d.sample(rng_.below(stable[i]->d.total)));
    for (size_t i = 0; i < stable.size(); ++i)
        for (size_t j = i + 1; j < stable.size(); ++j) {
            double worst = 0;
            for (const auto& set : {std::cref(T[i]), std::cref(T[j])})
                for (const auto& v : set.get())
                    worst = std::max(worst,
                                     std::abs(multiset_value(s_, T[i], v) -
                                              multiset_value(s_, T[j], v)));
            if (worst <= p.eps)
                return std::make_pair(stable[i]->id, stable[j]->gamma_next);
        }
    return std::nullopt;
}

} // namespace

AdversaryPtr make_acd_adversary(const AcdParams& p) {
    return std::make_shared<AcdAdversary>(p);
}

} // namespace skotch
