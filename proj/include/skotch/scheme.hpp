#ifndef SKOTCH_SCHEME_HPP
#define SKOTCH_SCHEME_HPP

#include "skotch/graph.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace skotch {

struct AcdSupport; // see acd.hpp

/** Borrowed view of one vertex label (MSB-first bit string). */
struct LabelView {
    const uint8_t* data = nullptr;
    size_t nbits = 0;
    size_t nbytes() const { return (nbits + 7) / 8; }
    std::vector<uint8_t> to_bytes() const { return {data, data + nbytes()}; }
    bool operator==(const LabelView& o) const;
};

/**
 * Labels for every vertex of one graph, stored in a single flat buffer with a
 * fixed per-vertex stride (labels are equal-length by construction).
 */
struct LabelMap {
    std::string scheme;
    size_t label_bits = 0;
    int n = 0;
    size_t stride = 0; // bytes per vertex
    std::vector<uint8_t> buf;

    void init(std::string scheme_name, size_t bits, int vertices);
    LabelView view(int v) const { return {buf.data() + stride * size_t(v), label_bits}; }
    uint8_t* slot(int v) { return buf.data() + stride * size_t(v); }
};

// Text serialization: "skotch-labels v1 <scheme> <label_bits> <n>" header,
// then one lowercase-hex label per line. Throws std::invalid_argument.
void write_label_map(std::ostream& out, const LabelMap& m);
LabelMap read_label_map(std::istream& in);

/**
 * Equal-weight enumeration of encoder outcomes, per component. Offered by
 * schemes whose randomness factorizes over components with uniform atoms;
 * exact posterior machinery builds on it.
 */
struct EnumHook {
    virtual ~EnumHook() = default;
    // number of equally likely outcomes for the component listed in `comp`
    virtual uint64_t atom_count(const Graph& g, const std::vector<int>& comp) const = 0;
    // fn receives labels aligned with `comp` (one byte vector per vertex)
    virtual void for_each_atom(
        const Graph& g, const std::vector<int>& comp, uint64_t seed,
        const std::function<void(const std::vector<std::vector<uint8_t>>&)>& fn) const = 0;
};

/**
 * An adjacency sketch: randomized encoder assigning every vertex a label of a
 * fixed length, plus a deterministic symmetric decoder on label pairs.
 * One-sided schemes never decode 0 on an edge.
 */
class Scheme {
public:
    virtual ~Scheme() = default;

    virtual std::string name() const = 0;
    virtual bool one_sided() const { return true; }

    // Domain check; on rejection optionally explains why.
    virtual bool accepts(const Graph& g, std::string* why = nullptr) const = 0;

    virtual size_t label_bits(const Graph& g) const = 0;
    virtual LabelMap encode(const Graph& g, uint64_t seed) const = 0;
    virtual bool decode(LabelView a, LabelView b) const = 0;

    // Optional capabilities.
    // Exact number of distinct labels the encoder can emit on g (when the
    // scheme knows it); pigeonhole-style strategies need this, the generic
    // 2^label_bits bound is often loose.
    virtual std::optional<uint64_t> label_space(const Graph&) const { return std::nullopt; }
    virtual const EnumHook* enum_hook() const { return nullptr; }
    virtual const AcdSupport* acd_support() const { return nullptr; }
};

using SchemePtr = std::shared_ptr<const Scheme>;

// k-fold AND amplification: labels concatenated, decode = all copies decode 1.
// Preserves one-sidedness.
SchemePtr amplify_and(SchemePtr inner, int k);
// k-fold majority vote (k odd), for two-sided error reduction.
SchemePtr amplify_majority(SchemePtr inner, int k);

// Toy equality scheme: one uniform 2-bit value shared by a whole component,
// decode by equality. Trivially one-sided (edges stay within a component).
SchemePtr make_toy2();
// Fair-coin 2-coloring with equality decode (two-sided); majority-vote fodder.
SchemePtr make_coin2();

} // namespace skotch

#endif
