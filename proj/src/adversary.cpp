#include "skotch/adversary.hpp"
#include "skotch/matching.hpp"
#include "skotch/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace skotch {

namespace {

uint64_t label_count_bound(const Scheme& s, const Graph& g) {
    if (auto exact = s.label_space(g)) return *exact;
    size_t bits = s.label_bits(g);
    if (bits >= 63) return UINT64_MAX;
    return uint64_t(1) << bits;
}

// Matched edges as (smaller, larger) pairs; requires max degree <= 1.
std::vector<std::pair<int, int>> matching_edges(const Graph& g) {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < g.n; ++u)
        if (g.degree(u) == 1 && g.adj[u][0] > u) out.emplace_back(u, g.adj[u][0]);
    return out;
}

} // namespace

GameTranscript run_game(const Scheme& s, const Graph& g, const Adversary& adv,
                        uint64_t seed) {
    std::string why;
    if (!s.accepts(g, &why))
        throw std::invalid_argument("run_game: scheme rejects graph: " + why);
    if (!adv.applicable(s, g, &why))
        throw std::invalid_argument("run_game: " + adv.name() + " inapplicable: " + why);

    Stream root{seed};
    LabelMap labels = s.encode(g, root.child(1).key());
    auto eng = adv.engage(s, g, root.child(2).key());
    GameTranscript t;

    if (adv.model() == Model::black_box) {
        std::unordered_set<long long> asked;
        const uint64_t cap = uint64_t(g.n) * uint64_t(g.n) * 4 + 16;
        while (auto pq = eng->next_pair_query()) {
            auto [a, b] = *pq;
            if (t.pair_queries.size() >= cap || a < 0 || b < 0 || a >= g.n ||
                b >= g.n || a == b) {
                t.violation = true;
                break;
            }
            asked.insert((long long)std::min(a, b) * g.n + std::max(a, b));
            t.pair_queries.push_back(*pq);
            eng->on_pair(*pq, s.decode(labels.view(a), labels.view(b)));
        }
        if (!t.violation) {
            t.candidates = eng->candidates();
            if (!t.candidates) {
                t.forfeit = true;
            } else {
                auto [x, y] = *t.candidates;
                bool ok = x >= 0 && y >= 0 && x < g.n && y < g.n && x != y &&
                          !asked.count((long long)std::min(x, y) * g.n + std::max(x, y));
                if (!ok) {
                    t.violation = true;
                } else {
                    t.verdict = s.decode(labels.view(x), labels.view(y));
                    t.win = t.verdict && !g.has_edge(x, y);
                }
            }
        }
        return t;
    }

    std::vector<char> queried(g.n, 0);
    const size_t budget = g.n >= 2 ? size_t(g.n) - 2 : 0;
    while (auto q = eng->next_query()) {
        if (t.queries.size() >= budget || *q < 0 || *q >= g.n || queried[*q]) {
            t.violation = true;
            break;
        }
        queried[*q] = 1;
        t.queries.push_back(*q);
        eng->on_label(*q, labels.view(*q));
    }
    if (t.violation) return t;

    t.candidates = eng->candidates();
    if (!t.candidates) {
        t.forfeit = true;
        return t;
    }
    auto [x, y] = *t.candidates;
    bool ok = x >= 0 && y >= 0 && x < g.n && y < g.n && x != y;
    if (ok) {
        if (adv.model() == Model::single_vertex)
            ok = queried[x] + queried[y] == 1; // one revealed, one fresh
        else
            ok = !queried[x] && !queried[y];
    }
    if (!ok) {
        t.violation = true;
        return t;
    }
    t.verdict = s.decode(labels.view(x), labels.view(y));
    t.win = t.verdict && !g.has_edge(x, y);
    return t;
}

Wilson wilson95(uint64_t wins, uint64_t trials) {
    if (trials == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    double n = double(trials), p = double(wins) / n;
    double denom = 1.0 + z * z / n;
    double center = (p + z * z / (2 * n)) / denom;
    double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

ForgeryEstimate estimate_forgery(const Scheme& s, const Graph& g,
                                 const Adversary& adv, uint64_t trials,
                                 uint64_t seed, bool parallel) {
    if (trials < 1) throw std::invalid_argument("estimate_forgery: trials must be >= 1");
    Stream root{seed};
    unsigned long long wins = 0, queries = 0;
    if (parallel) {
#pragma omp parallel for reduction(+ : wins, queries) schedule(dynamic, 16)
        for (long long i = 0; i < (long long)trials; ++i) {
            GameTranscript t = run_game(s, g, adv, root.child(uint64_t(i)).key());
            wins += t.win ? 1 : 0;
            queries += t.queries.size() + t.pair_queries.size();
        }
    } else {
        for (long long i = 0; i < (long long)trials; ++i) {
            GameTranscript t = run_game(s, g, adv, root.child(uint64_t(i)).key());
            wins += t.win ? 1 : 0;
            queries += t.queries.size() + t.pair_queries.size();
        }
    }
    ForgeryEstimate e;
    e.trials = trials;
    e.wins = wins;
    e.rate = double(wins) / double(trials);
    e.interval = wilson95(wins, trials);
    e.mean_queries = double(queries) / double(trials);
    return e;
}

// ---- offline PUG statistics ----

PugStats compute_pug_stats(const Scheme& s, double alpha, uint64_t seed) {
    PugStats st;
    Graph edge = gen_matching(1);
    size_t bits = s.label_bits(edge);
    std::map<std::vector<uint8_t>, uint64_t> freq;
    Stream root = Stream(seed).child(0x9157);

    const Plane* pl = pp_matching_plane(s);
    if (pl) {
        // Endpoint marginals are exactly uniform over the plane's elements;
        // sample encodings only to materialize the label byte strings.
        st.exact = true;
        uint64_t i = 0;
        while ((int)freq.size() < pl->size() && i < 1000000) {
            LabelMap m = s.encode(edge, root.child(i++).key());
            freq[m.view(0).to_bytes()] = 1;
            freq[m.view(1).to_bytes()] = 1;
        }
        if ((int)freq.size() != pl->size())
            throw std::runtime_error("compute_pug_stats: plane labels not exhausted");
    } else {
        const uint64_t samples = 1000000;
        for (uint64_t i = 0; i < samples; ++i) {
            LabelMap m = s.encode(edge, root.child(i).key());
            ++freq[m.view(0).to_bytes()];
        }
    }

    uint64_t total = 0;
    for (auto& [bytes, count] : freq) {
        st.labels.push_back(bytes);
        total += count;
    }
    st.q.resize(st.labels.size());
    {
        size_t i = 0;
        for (auto& [bytes, count] : freq) st.q[i++] = double(count) / double(total);
    }

    const size_t m = st.labels.size();
    std::vector<char> frequent(m, 0);
    for (size_t u = 0; u < m; ++u)
        if (st.q[u] >= alpha / double(m) - 1e-12) {
            frequent[u] = 1;
            st.u_alpha.push_back(int(u));
        }

    auto view_of = [&](size_t u) { return LabelView{st.labels[u].data(), bits}; };
    st.pug_adj.resize(m);
    for (size_t u = 0; u < m; ++u)
        for (size_t w = 0; w < m; ++w)
            if (frequent[w] && s.decode(view_of(u), view_of(w)))
                st.pug_adj[u].push_back(int(w)); // may include u itself (self-loop)

    for (size_t u = 0; u < m; ++u)
        st.delta_alpha += st.q[u] * double(st.pug_adj[u].size());
    return st;
}

// ---- strategies ----

namespace {

// Uniform random distinct non-adjacent pair, no queries. Forfeits on cliques.
class RandomPairEngagement : public Engagement {
public:
    RandomPairEngagement(const Graph& g, uint64_t seed) : g_(g), rng_(seed) {}

    std::optional<std::pair<int, int>> candidates() override {
        if (g_.n < 2) return std::nullopt;
        for (int attempt = 0; attempt < 4096; ++attempt) {
            int x = int(rng_.below(uint64_t(g_.n)));
            int y = int(rng_.below(uint64_t(g_.n)));
            if (x != y && !g_.has_edge(x, y)) return std::make_pair(x, y);
        }
        // Rejection only stalls when nearly every pair is an edge; fall back
        // to a scan so dense-but-not-complete graphs still get a candidate.
        for (int x = 0; x < g_.n; ++x)
            for (int y = x + 1; y < g_.n; ++y)
                if (!g_.has_edge(x, y)) return std::make_pair(x, y);
        return std::nullopt;
    }

private:
    const Graph& g_;
    Stream rng_;
};

class RandomPairAdversary : public Adversary {
public:
    std::string name() const override { return "random-pair"; }
    bool applicable(const Scheme&, const Graph&, std::string*) const override {
        return true;
    }
    std::unique_ptr<Engagement> engage(const Scheme&, const Graph& g,
                                       uint64_t seed) const override {
        return std::make_unique<RandomPairEngagement>(g, seed);
    }
};

// Strategy 1/2 selection on matchings via the label-frequency statistics.
class PugEngagement : public Engagement {
public:
    PugEngagement(const PugStats& st, const Graph& g, uint64_t seed)
        : st_(st), g_(g), rng_(seed), edges_(matching_edges(g)) {
        order_.resize(edges_.size());
        for (size_t i = 0; i < order_.size(); ++i) order_[i] = int(i);
        for (size_t i = order_.size(); i > 1; --i)
            std::swap(order_[i - 1], order_[rng_.below(i)]);
        budget_ = g.n >= 2 ? size_t(g.n) - 2 : 0;
        double m = double(st_.labels.size());
        strategy1_ = st_.delta_alpha <= std::sqrt(m) + 1e-12;
    }

    std::optional<int> next_query() override {
        if (!strategy1_ || done_ || asked_ >= budget_) return std::nullopt;
        while (cursor_ < order_.size()) {
            auto [a, b] = edges_[order_[cursor_]];
            ++cursor_;
            if (rng_.coin()) std::swap(a, b);
            pending_kept_ = a; // stays unqueried; b's label is revealed
            ++asked_;
            return b;
        }
        return std::nullopt;
    }

    void on_label(int, LabelView lv) override {
        auto bytes = lv.to_bytes();
        if (phase_ == Phase::find_u) {
            int u = index_of(bytes);
            if (u < 0 || !is_frequent(u)) return; // rare label: try another edge
            if (double(st_.pug_adj[u].size()) > 2.0 * st_.delta_alpha) return;
            int v = -1;
            double best = -1;
            for (int w : st_.pug_adj[u])
                if (st_.q[w] > best) {
                    best = st_.q[w];
                    v = w;
                }
            if (v < 0) return; // no U_alpha neighbor at all: keep searching
            x_ = pending_kept_;
            v_ = v;
            phase_ = Phase::hunt_v;
        } else if (phase_ == Phase::hunt_v) {
            if (bytes == st_.labels[size_t(v_)]) {
                found_partner_ = pending_kept_;
                done_ = true;
            }
        }
    }

    std::optional<std::pair<int, int>> candidates() override {
        if (!strategy1_) {
            RandomPairEngagement fallback(g_, rng_.child(0x57).key());
            return fallback.candidates();
        }
        if (phase_ == Phase::hunt_v && done_)
            return std::make_pair(x_, found_partner_);
        return std::nullopt; // hunt exhausted the matching or the budget
    }

private:
    enum class Phase { find_u, hunt_v };

    int index_of(const std::vector<uint8_t>& bytes) const {
        for (size_t i = 0; i < st_.labels.size(); ++i)
            if (st_.labels[i] == bytes) return int(i);
        return -1;
    }
    bool is_frequent(int u) const {
        return std::binary_search(st_.u_alpha.begin(), st_.u_alpha.end(), u);
    }

    const PugStats& st_;
    const Graph& g_;
    Stream rng_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<int> order_;
    size_t cursor_ = 0, asked_ = 0, budget_ = 0;
    bool strategy1_ = true, done_ = false;
    Phase phase_ = Phase::find_u;
    int pending_kept_ = -1;
    int x_ = -1, v_ = -1, found_partner_ = -1;
};

class PugAdversary : public Adversary {
public:
    explicit PugAdversary(double alpha) : alpha_(alpha) {}

    std::string name() const override { return "pug-statistics"; }
    bool applicable(const Scheme& s, const Graph& g, std::string* why) const override {
        if (g.max_degree > 1) {
            if (why) *why = "pug-statistics targets matchings";
            return false;
        }
        if (matching_edges(g).size() < 2) {
            if (why) *why = "need at least two matched edges";
            return false;
        }
        (void)s;
        return true;
    }
    std::unique_ptr<Engagement> engage(const Scheme& s, const Graph& g,
                                       uint64_t seed) const override {
        return std::make_unique<PugEngagement>(stats_for(s), g, seed);
    }

private:
    // Offline knowledge: computed once per scheme with a fixed seed so every
    // game (and every thread) sees identical statistics.
    const PugStats& stats_for(const Scheme& s) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(s.name());
        if (it == cache_.end())
            it = cache_.emplace(s.name(), compute_pug_stats(s, alpha_, 0x9065)).first;
        return it->second;
    }

    double alpha_;
    mutable std::mutex mu_;
    mutable std::map<std::string, PugStats> cache_;
};

// Queries one endpoint per matched edge until two labels collide.
class PigeonholeEngagement : public Engagement {
public:
    PigeonholeEngagement(const Graph& g, bool single_vertex)
        : edges_(matching_edges(g)), single_vertex_(single_vertex) {}

    std::optional<int> next_query() override {
        if (done_ || cursor_ >= edges_.size()) return std::nullopt;
        return edges_[cursor_].first;
    }

    void on_label(int, LabelView lv) override {
        auto bytes = lv.to_bytes();
        for (size_t j = 0; j < seen_.size(); ++j)
            if (seen_[j] == bytes) {
                hit_i_ = cursor_;
                hit_j_ = j;
                done_ = true;
                break;
            }
        seen_.push_back(std::move(bytes));
        ++cursor_;
    }

    std::optional<std::pair<int, int>> candidates() override {
        if (hit_i_ == SIZE_MAX) return std::nullopt; // no collision: forfeit
        if (single_vertex_)
            // revealed x_i against the fresh partner of the colliding edge
            return std::make_pair(edges_[hit_i_].first, edges_[hit_j_].second);
        return std::make_pair(edges_[hit_i_].second, edges_[hit_j_].second);
    }

private:
    std::vector<std::pair<int, int>> edges_;
    bool single_vertex_;
    std::vector<std::vector<uint8_t>> seen_;
    size_t cursor_ = 0;
    size_t hit_i_ = SIZE_MAX, hit_j_ = SIZE_MAX;
    bool done_ = false;
};

class PigeonholeAdversary : public Adversary {
public:
    explicit PigeonholeAdversary(bool single_vertex) : single_vertex_(single_vertex) {}

    std::string name() const override {
        return single_vertex_ ? "pigeonhole" : "pigeonhole-disabled";
    }
    Model model() const override {
        return single_vertex_ ? Model::single_vertex : Model::standard;
    }
    bool applicable(const Scheme& s, const Graph& g, std::string* why) const override {
        if (g.max_degree > 1) {
            if (why) *why = "pigeonhole targets matchings";
            return false;
        }
        uint64_t edges = matching_edges(g).size();
        if (edges <= label_count_bound(s, g)) {
            if (why) *why = "matching must exceed the scheme's label count";
            return false;
        }
        return true;
    }
    std::unique_ptr<Engagement> engage(const Scheme&, const Graph& g,
                                       uint64_t) const override {
        return std::make_unique<PigeonholeEngagement>(g, single_vertex_);
    }

private:
    bool single_vertex_;
};

// Equivalence-class partition attack in the black-box model.
class BlackboxEngagement : public Engagement {
public:
    BlackboxEngagement(const Graph& g, uint64_t seed) : g_(g) {
        edges_ = matching_edges(g);
        Stream rng{seed};
        k_ = size_t(rng.below(edges_.size()));
        // Phase 1: all within-matching pairs avoiding edge k's endpoints.
        for (size_t i = 0; i < edges_.size(); ++i) {
            if (i == k_) continue;
            for (size_t j = i + 1; j < edges_.size(); ++j) {
                if (j == k_) continue;
                auto [xi, yi] = edges_[i];
                auto [xj, yj] = edges_[j];
                plan_.emplace_back(xi, xj);
                plan_.emplace_back(yi, yj);
                plan_.emplace_back(xi, yj);
                plan_.emplace_back(xj, yi);
            }
        }
        // Phase 2: x_k against everything except its own partner y_k.
        for (size_t i = 0; i < edges_.size(); ++i) {
            if (i == k_) continue;
            plan_.emplace_back(edges_[k_].first, edges_[i].first);
            plan_.emplace_back(edges_[k_].first, edges_[i].second);
        }
    }

    std::optional<std::pair<int, int>> next_pair_query() override {
        if (cursor_ >= plan_.size()) return std::nullopt;
        return plan_[cursor_];
    }

    void on_pair(std::pair<int, int> pq, bool bit) override {
        bits_[key(pq.first, pq.second)] = bit;
        ++cursor_;
    }

    std::optional<std::pair<int, int>> candidates() override {
        // Vertices of the matching minus edge k, in a fixed order.
        std::vector<int> pool;
        for (size_t i = 0; i < edges_.size(); ++i) {
            if (i == k_) continue;
            pool.push_back(edges_[i].first);
            pool.push_back(edges_[i].second);
        }
        int xk = edges_[k_].first, yk = edges_[k_].second;
        for (int w : pool) {
            bool same = true;
            for (int z : pool) {
                if (z == w) continue;
                // (w, partner(w)) was never queried; an edge always decodes 1.
                bool bw = g_.has_edge(w, z) ? true : bit(w, z);
                if (bit(xk, z) != bw) {
                    same = false;
                    break;
                }
            }
            if (same) return std::make_pair(yk, w);
        }
        return std::nullopt; // chosen edge's label pair looks unique: forfeit
    }

private:
    long long key(int a, int b) const {
        return (long long)std::min(a, b) * g_.n + std::max(a, b);
    }
    bool bit(int a, int b) const {
        auto it = bits_.find(key(a, b));
        return it != bits_.end() && it->second;
    }

    const Graph& g_;
    std::vector<std::pair<int, int>> edges_;
    size_t k_ = 0;
    std::vector<std::pair<int, int>> plan_;
    size_t cursor_ = 0;
    std::unordered_map<long long, char> bits_;
};

class BlackboxAdversary : public Adversary {
public:
    explicit BlackboxAdversary(double eps) : eps_(eps) {
        if (!(eps > 0 && eps < 1))
            throw std::invalid_argument("blackbox adversary: eps must be in (0,1)");
    }

    std::string name() const override { return "blackbox"; }
    Model model() const override { return Model::black_box; }
    bool applicable(const Scheme& s, const Graph& g, std::string* why) const override {
        if (g.max_degree > 1) {
            if (why) *why = "blackbox adversary targets matchings";
            return false;
        }
        double m = double(label_count_bound(s, g));
        double need = 4.0 * m * m / eps_;
        if (double(matching_edges(g).size()) * 2.0 < need) {
            if (why)
                *why = "matching must span at least 4*m^2/eps = " +
                       std::to_string(need) + " vertices";
            return false;
        }
        return true;
    }
    std::unique_ptr<Engagement> engage(const Scheme&, const Graph& g,
                                       uint64_t seed) const override {
        return std::make_unique<BlackboxEngagement>(g, seed);
    }

private:
    double eps_;
};

} // namespace

AdversaryPtr make_random_pair_adversary() {
    return std::make_shared<RandomPairAdversary>();
}

AdversaryPtr make_pug_statistics_adversary(double alpha) {
    if (!(alpha > 0 && alpha < 1))
        throw std::invalid_argument("pug-statistics: alpha must be in (0,1)");
    return std::make_shared<PugAdversary>(alpha);
}

AdversaryPtr make_pigeonhole_adversary() {
    return std::make_shared<PigeonholeAdversary>(true);
}

AdversaryPtr make_pigeonhole_disabled_adversary() {
    return std::make_shared<PigeonholeAdversary>(false);
}

AdversaryPtr make_blackbox_adversary(double eps) {
    return std::make_shared<BlackboxAdversary>(eps);
}

} // namespace skotch
