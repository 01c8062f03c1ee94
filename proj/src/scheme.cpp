#include "skotch/scheme.hpp"
#include "skotch/bits.hpp"
#include "skotch/rng.hpp"

#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace skotch {

bool LabelView::operator==(const LabelView& o) const {
    return nbits == o.nbits && std::memcmp(data, o.data, nbytes()) == 0;
}

void LabelMap::init(std::string scheme_name, size_t bits, int vertices) {
    scheme = std::move(scheme_name);
    label_bits = bits;
    n = vertices;
    stride = (bits + 7) / 8;
    buf.assign(stride * size_t(vertices), 0);
}

void write_label_map(std::ostream& out, const LabelMap& m) {
    out << "skotch-labels v1 " << m.scheme << ' ' << m.label_bits << ' ' << m.n << '\n';
    for (int v = 0; v < m.n; ++v)
        out << to_hex(m.buf.data() + m.stride * size_t(v), m.stride) << '\n';
}

LabelMap read_label_map(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty label file");
    std::istringstream hs(line);
    std::string magic, ver, scheme;
    size_t bits;
    int n;
    if (!(hs >> magic >> ver >> scheme >> bits >> n) || magic != "skotch-labels" ||
        ver != "v1" || n < 0)
        throw std::invalid_argument("bad label file header");
    LabelMap m;
    m.init(scheme, bits, n);
    for (int v = 0; v < n; ++v) {
        if (!std::getline(in, line)) throw std::invalid_argument("truncated label file");
        std::vector<uint8_t> bytes;
        if (!from_hex(line, bytes) || bytes.size() != m.stride)
            throw std::invalid_argument("bad label line " + std::to_string(v));
        std::memcpy(m.slot(v), bytes.data(), m.stride);
        // padding bits past label_bits must be zero
        if (m.label_bits % 8) {
            uint8_t mask = uint8_t(0xffu >> (m.label_bits % 8));
            if (bytes.back() & mask)
                throw std::invalid_argument("nonzero padding in label line " + std::to_string(v));
        }
    }
    if (std::getline(in, line) && !line.empty())
        throw std::invalid_argument("trailing data in label file");
    return m;
}

// ---- amplification ----

namespace {

class AndScheme : public Scheme {
public:
    AndScheme(SchemePtr inner, int k) : inner_(std::move(inner)), k_(k) {
        if (k <= 0) throw std::invalid_argument("amplify: k must be positive");
    }

    std::string name() const override {
        return "and(" + inner_->name() + "," + std::to_string(k_) + ")";
    }
    bool one_sided() const override { return inner_->one_sided(); }
    bool accepts(const Graph& g, std::string* why) const override {
        return inner_->accepts(g, why);
    }
    size_t label_bits(const Graph& g) const override {
        return size_t(k_) * inner_->label_bits(g);
    }

    LabelMap encode(const Graph& g, uint64_t seed) const override {
        Stream root{seed};
        LabelMap out;
        size_t inner_bits = inner_->label_bits(g);
        out.init(name(), size_t(k_) * inner_bits, g.n);
        for (int i = 0; i < k_; ++i) {
            LabelMap part = inner_->encode(g, root.child(uint64_t(i)).key());
            for (int v = 0; v < g.n; ++v) {
                // copy part label into bit offset i * inner_bits of out label
                LabelView lv = part.view(v);
                BitReader r(lv.data, lv.nbytes());
                for (size_t b = 0; b < inner_bits; ++b) {
                    if (!r.get_bit()) continue;
                    size_t pos = size_t(i) * inner_bits + b;
                    out.slot(v)[pos / 8] |= uint8_t(1u << (7 - pos % 8));
                }
            }
        }
        return out;
    }

    bool decode(LabelView a, LabelView b) const override {
        size_t inner_bits = a.nbits / size_t(k_);
        std::vector<uint8_t> abuf((inner_bits + 7) / 8), bbuf(abuf.size());
        for (int i = 0; i < k_; ++i) {
            extract(a, size_t(i) * inner_bits, inner_bits, abuf);
            extract(b, size_t(i) * inner_bits, inner_bits, bbuf);
            if (!vote(abuf, bbuf, inner_bits)) return false;
        }
        return true;
    }

protected:
    bool vote_result(LabelView a, LabelView b, int& ones) const {
        size_t inner_bits = a.nbits / size_t(k_);
        std::vector<uint8_t> abuf((inner_bits + 7) / 8), bbuf(abuf.size());
        ones = 0;
        for (int i = 0; i < k_; ++i) {
            extract(a, size_t(i) * inner_bits, inner_bits, abuf);
            extract(b, size_t(i) * inner_bits, inner_bits, bbuf);
            if (vote(abuf, bbuf, inner_bits)) ++ones;
        }
        return ones * 2 > k_;
    }

    bool vote(const std::vector<uint8_t>& a, const std::vector<uint8_t>& b,
              size_t bits) const {
        return inner_->decode({a.data(), bits}, {b.data(), bits});
    }

    static void extract(LabelView src, size_t offset, size_t bits,
                        std::vector<uint8_t>& dst) {
        std::fill(dst.begin(), dst.end(), 0);
        BitReader r(src.data, src.nbytes());
        r.skip(offset);
        for (size_t b = 0; b < bits; ++b)
            if (r.get_bit()) dst[b / 8] |= uint8_t(1u << (7 - b % 8));
    }

    SchemePtr inner_;
    int k_;
};

class MajorityScheme : public AndScheme {
public:
    MajorityScheme(SchemePtr inner, int k) : AndScheme(std::move(inner), k) {
        if (k % 2 == 0) throw std::invalid_argument("majority: k must be odd");
    }
    std::string name() const override {
        return "majority(" + inner_->name() + "," + std::to_string(k_) + ")";
    }
    bool one_sided() const override { return false; }
    bool decode(LabelView a, LabelView b) const override {
        int ones;
        return vote_result(a, b, ones);
    }
};

// ---- toy schemes ----

class Toy2 : public Scheme {
public:
    std::string name() const override { return "toy2"; }
    bool accepts(const Graph&, std::string*) const override { return true; }
    size_t label_bits(const Graph&) const override { return 2; }

    LabelMap encode(const Graph& g, uint64_t seed) const override {
        Stream root{seed};
        auto comp = g.components();
        LabelMap out;
        out.init(name(), 2, g.n);
        std::vector<int> value; // per component, filled lazily in id order
        for (int v = 0; v < g.n; ++v) {
            while (int(value.size()) <= comp[v])
                value.push_back(int(root.child(value.size()).below(4)));
            out.slot(v)[0] = uint8_t(value[comp[v]] << 6);
        }
        return out;
    }

    bool decode(LabelView a, LabelView b) const override {
        return a.data[0] >> 6 == b.data[0] >> 6;
    }

    std::optional<uint64_t> label_space(const Graph&) const override { return 4; }
    const EnumHook* enum_hook() const override { return &hook_; }

private:
    struct Hook : EnumHook {
        uint64_t atom_count(const Graph&, const std::vector<int>&) const override {
            return 4;
        }
        void for_each_atom(
            const Graph&, const std::vector<int>& comp, uint64_t,
            const std::function<void(const std::vector<std::vector<uint8_t>>&)>& fn)
            const override {
            std::vector<std::vector<uint8_t>> labels(comp.size());
            for (int val = 0; val < 4; ++val) {
                for (auto& l : labels) l = {uint8_t(val << 6)};
                fn(labels);
            }
        }
    } hook_;
};

class Coin2 : public Scheme {
public:
    std::string name() const override { return "coin2"; }
    bool one_sided() const override { return false; }
    bool accepts(const Graph&, std::string*) const override { return true; }
    size_t label_bits(const Graph&) const override { return 1; }

    LabelMap encode(const Graph& g, uint64_t seed) const override {
        Stream root{seed};
        LabelMap out;
        out.init(name(), 1, g.n);
        for (int v = 0; v < g.n; ++v)
            out.slot(v)[0] = uint8_t(root.child(uint64_t(v)).coin() << 7);
        return out;
    }

    bool decode(LabelView a, LabelView b) const override {
        return (a.data[0] >> 7) != (b.data[0] >> 7); // "differ" decodes 1
    }
};

} // namespace

SchemePtr amplify_and(SchemePtr inner, int k) {
    return std::make_shared<AndScheme>(std::move(inner), k);
}
SchemePtr amplify_majority(SchemePtr inner, int k) {
    return std::make_shared<MajorityScheme>(std::move(inner), k);
}
SchemePtr make_toy2() { return std::make_shared<Toy2>(); }
SchemePtr make_coin2() { return std::make_shared<Coin2>(); }

} // namespace skotch
