#ifndef SKOTCH_ACD_HPP
#define SKOTCH_ACD_HPP

#include "skotch/adversary.hpp"

#include <cstdint>
#include <vector>

namespace skotch {

struct Observation {
    int vertex;
    std::vector<uint8_t> label;
};

/** Finitely supported distribution over labels, with integer weights. */
struct LabelDist {
    std::vector<std::pair<std::vector<uint8_t>, uint64_t>> mass; // sorted by label
    uint64_t total = 0;

    void add(const std::vector<uint8_t>& label, uint64_t w);
    void normalize(); // sort + merge duplicates
    const std::vector<uint8_t>& sample(uint64_t pick) const; // pick < total
};
// Statistical (total variation) distance.
double stat_distance(const LabelDist& a, const LabelDist& b);

struct PosteriorOptions {
    bool exact = true;
    uint64_t mc_samples = 100000;
    uint64_t mc_min_consistent = 100; // fewer -> abstain
    uint64_t seed = 0;                // MC resampling stream
};

struct Posterior {
    bool abstain = false;
    uint64_t consistent = 0; // MC mode: consistent sample count
    LabelDist dist;
};

/**
 * Conditional distribution of `target`'s label given observed labels, per the
 * scheme's encoder on g. Exact mode enumerates the component's atoms through
 * the scheme's EnumHook (observations outside the component condition nothing,
 * since catalog encoders factorize over components); Monte-Carlo mode
 * rejection-samples whole encodings. Inconsistent observations => abstain.
 */
Posterior posterior_engine(const Scheme& s, const Graph& g,
                           const std::vector<Observation>& obs, int target,
                           const PosteriorOptions& opt);

/**
 * Stability probe used by the ACD adversary: given the observations, decide
 * whether center x is stable (Definition of stable center: a label set L with
 * posterior mass >= 1-delta whose members induce pairwise eps-close
 * next-neighbor distributions), and if so return the recorded D_x = the
 * next-unqueried-neighbor distribution of L's heaviest member.
 */
struct StabilityOutcome {
    enum Kind { Unstable, Stable, Infeasible } kind = Infeasible;
    LabelDist next; // D_x, for Stable
};

struct AcdSupport {
    virtual ~AcdSupport() = default;
    // Order in which the adversary queries the center's neighbors.
    virtual std::vector<int> neighbor_order(const Graph& g, int center) const;
    virtual StabilityOutcome stability(const Scheme& s, const Graph& g,
                                       const std::vector<Observation>& obs,
                                       int center, int queried, double eps,
                                       double delta, uint64_t seed) const = 0;
};

// Generic supports driven by posterior_engine (exact via EnumHook when the
// atom budget allows, otherwise Monte-Carlo with abstention).
const AcdSupport& generic_acd_support();

enum class AcdMode { l1, multiset };

struct AcdParams {
    double eps = 0.25;
    double delta = 0.25;
    AcdMode mode = AcdMode::l1;
    int multiset_t = 0;    // 0 = the formula 2*(4/eps^2)*ln(2^(s+2)/delta)
    int max_centers = 16;
    bool two_sided = false; // skip the one-sided shortcut
};

AdversaryPtr make_acd_adversary(const AcdParams& p);

// Q(T, v): mean decoder acceptance of v against the multiset T.
double multiset_value(const Scheme& s,
                      const std::vector<std::vector<uint8_t>>& T,
                      const std::vector<uint8_t>& v);

// Centers: greedy ascending-id vertices of degree >= deg_min at pairwise
// distance >= 3, capped at max_centers.
std::vector<int> pick_centers(const Graph& g, int deg_min, int max_centers);

} // namespace skotch

#endif
