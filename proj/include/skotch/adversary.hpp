#ifndef SKOTCH_ADVERSARY_HPP
#define SKOTCH_ADVERSARY_HPP

#include "skotch/scheme.hpp"

#include <memory>
#include <optional>
#include <string>

namespace skotch {

// Forgery-game model variants: standard (label queries, candidates
// unqueried), single_vertex (one candidate queried, one fresh), black_box
// (decoder-bit pair queries, candidates any unqueried pair).
enum class Model { standard, single_vertex, black_box };

/**
 * Per-game adversary instance. The harness alternates next_query()/on_label()
 * (or the pair variants in black-box mode) until next_query() returns nullopt,
 * then asks for candidates(). nullopt candidates = forfeit (counted a loss).
 * The engagement sees only what the model allows: returned labels or decoder
 * bits, never the live random stream.
 */
class Engagement {
public:
    virtual ~Engagement() = default;
    virtual std::optional<int> next_query() { return std::nullopt; }
    virtual void on_label(int /*vertex*/, LabelView) {}
    virtual std::optional<std::pair<int, int>> next_pair_query() { return std::nullopt; }
    virtual void on_pair(std::pair<int, int>, bool /*decoded*/) {}
    virtual std::optional<std::pair<int, int>> candidates() = 0;
};

class Adversary {
public:
    virtual ~Adversary() = default;
    virtual std::string name() const = 0;
    virtual Model model() const { return Model::standard; }
    // Offline preconditions on the (scheme, graph) instance.
    virtual bool applicable(const Scheme& s, const Graph& g,
                            std::string* why = nullptr) const = 0;
    virtual std::unique_ptr<Engagement> engage(const Scheme& s, const Graph& g,
                                               uint64_t seed) const = 0;
};

using AdversaryPtr = std::shared_ptr<const Adversary>;

struct GameTranscript {
    std::vector<int> queries;                         // vertex ids (standard models)
    std::vector<std::pair<int, int>> pair_queries;    // black-box model
    std::optional<std::pair<int, int>> candidates;
    bool violation = false; // protocol breach (over-query, bad candidates)
    bool forfeit = false;
    bool verdict = false;   // decoder output on the candidates
    bool win = false;       // non-adjacent AND verdict
};

// Runs one game; throws std::invalid_argument if the scheme rejects g or the
// adversary declares itself inapplicable.
GameTranscript run_game(const Scheme& s, const Graph& g, const Adversary& adv,
                        uint64_t seed);

struct Wilson {
    double lo = 0, hi = 1;
};
Wilson wilson95(uint64_t wins, uint64_t trials);

struct ForgeryEstimate {
    uint64_t trials = 0, wins = 0;
    double rate = 0;
    Wilson interval;
    double mean_queries = 0;
};

// Per-trial seeds derived from the master seed; associative merge makes the
// parallel and serial runners bit-identical.
ForgeryEstimate estimate_forgery(const Scheme& s, const Graph& g,
                                 const Adversary& adv, uint64_t trials,
                                 uint64_t seed, bool parallel = true);

// Strategies.
AdversaryPtr make_random_pair_adversary();
AdversaryPtr make_pug_statistics_adversary(double alpha = 1.0 / 3.0);
AdversaryPtr make_pigeonhole_adversary();          // single-vertex model
AdversaryPtr make_pigeonhole_disabled_adversary(); // standard-model fallback
AdversaryPtr make_blackbox_adversary(double eps);  // black-box model

// Offline statistics behind the pug-statistics strategy, exposed for tests.
// The "PUG" is the probably-used-graph on labels: u ~ w iff decode(u,w) = 1,
// restricted to the frequent set U_alpha = {u : q_u >= alpha/m}. deg counts
// self-incident labels (decode(u,u) = 1 contributes to deg(u)), and
// delta_alpha = sum_u q_u * deg_{U_alpha}(u) over every label u.
struct PugStats {
    std::vector<std::vector<uint8_t>> labels; // distinct label byte strings
    std::vector<double> q;                    // per label index, sums to ~1
    std::vector<std::vector<int>> pug_adj;    // neighbor indices within U_alpha
    std::vector<int> u_alpha;                 // frequent-label index set
    double delta_alpha = 0;
    bool exact = false; // plane enumeration vs encoder simulation
};
PugStats compute_pug_stats(const Scheme& s, double alpha, uint64_t seed);

} // namespace skotch

#endif
