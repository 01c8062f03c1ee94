#include "skotch/equality.hpp"
#include "skotch/bits.hpp"
#include "skotch/rng.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace skotch {

namespace {

// GF(2^8) log/antilog tables, generator 2, reduction polynomial 0x11d.
struct Gf256 {
    std::array<uint8_t, 256> log{};
    std::array<uint8_t, 510> exp{};
    Gf256() {
        int x = 1;
        for (int i = 0; i < 255; ++i) {
            exp[i] = exp[i + 255] = uint8_t(x);
            log[x] = uint8_t(i);
            x <<= 1;
            if (x & 0x100) x ^= 0x11d;
        }
    }
};
const Gf256& gf() {
    static const Gf256 t;
    return t;
}

// Horner evaluation of the coefficient polynomial at field element `point`.
uint8_t poly_eval(const std::vector<uint8_t>& coeffs, uint8_t point) {
    uint8_t acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = uint8_t(gf256_mul(acc, point) ^ *it);
    return acc;
}

int grid_side(int m_bits) {
    int q = 1;
    while (q * q < m_bits) ++q;
    return q;
}

} // namespace

uint8_t gf256_mul(uint8_t a, uint8_t b) {
    if (!a || !b) return 0;
    return gf().exp[gf().log[a] + gf().log[b]];
}

GridCodeword grid_encode(uint64_t name, int m_bits) {
    if (m_bits < 1 || m_bits > 512)
        throw std::invalid_argument("grid_encode: name width out of range");
    int q = grid_side(m_bits);
    if (q * q > 256) throw std::invalid_argument("grid_encode: grid exceeds field");
    if (m_bits < 64 && name >> m_bits)
        throw std::invalid_argument("grid_encode: name wider than m_bits");
    GridCodeword cw;
    cw.q = q;
    cw.D = (m_bits + 7) / 8;
    std::vector<uint8_t> coeffs(cw.D);
    for (int i = 0; i < cw.D; ++i) coeffs[i] = uint8_t(name >> (8 * i));
    cw.cells.resize(size_t(q) * q);
    for (int e = 0; e < q * q; ++e) cw.cells[e] = poly_eval(coeffs, uint8_t(e));
    return cw;
}

namespace {

class SmmpcForest : public Scheme {
public:
    SmmpcForest(int n, int t) : n_(n), t_(t) {
        if (n < 1 || t < 1) throw std::invalid_argument("smmpc-forest: bad parameters");
        m_ = 1;
        while ((uint64_t(1) << m_) < uint64_t(n) + 1) ++m_; // ids 0..n-1 plus root name n
        q_ = grid_side(m_);
        if (q_ * q_ > 256) throw std::invalid_argument("smmpc-forest: n too large");
    }

    std::string name() const override {
        return "smmpc-forest(" + std::to_string(n_) + "," + std::to_string(t_) + ")";
    }
    bool accepts(const Graph& g, std::string* why) const override {
        if (is_forest(g) && g.n <= n_) return true;
        if (why) *why = name() + " requires a forest on <= " + std::to_string(n_) +
                        " vertices";
        return false;
    }
    size_t label_bits(const Graph&) const override {
        return 1 + 2 * size_t(t_) * (16 + 8 * size_t(q_));
    }

    LabelMap encode(const Graph& g, uint64_t seed) const override {
        Stream root{seed};
        auto parent = bfs_parents(g, 0);
        LabelMap out;
        out.init(name(), label_bits(g), g.n);
        BitWriter w;
        for (int v = 0; v < g.n; ++v) {
            Stream s = root.child(uint64_t(v));
            bool is_root = parent[v] < 0;
            uint64_t parent_name = is_root ? uint64_t(n_) : uint64_t(parent[v]);
            auto own = grid_encode(uint64_t(v), m_);
            auto par = grid_encode(parent_name, m_);
            w.push_bit(is_root);
            for (int i = 0; i < t_; ++i) { // self part: columns of own grid
                int col = int(s.below(uint64_t(q_)));
                w.put(uint64_t(col), 16);
                for (int row = 0; row < q_; ++row) w.put(own.at(row, col), 8);
            }
            for (int i = 0; i < t_; ++i) { // parent part: rows of parent grid
                int row = int(s.below(uint64_t(q_)));
                w.put(uint64_t(row), 16);
                for (int col = 0; col < q_; ++col) w.put(par.at(row, col), 8);
            }
            auto bytes = w.take();
            std::memcpy(out.slot(v), bytes.data(), bytes.size());
        }
        return out;
    }

    bool decode(LabelView a, LabelView b) const override {
        Parsed pa = parse(a), pb = parse(b);
        return direction(pa, pb) || direction(pb, pa);
    }

private:
    struct Line {
        int index;
        std::vector<uint8_t> vals; // q symbols
    };
    struct Parsed {
        bool is_root;
        std::vector<Line> self_cols, parent_rows;
    };

    Parsed parse(LabelView v) const {
        BitReader r(v.data, v.nbytes());
        Parsed p;
        p.is_root = r.get_bit();
        auto lines = [&](std::vector<Line>& out) {
            out.resize(t_);
            for (auto& line : out) {
                line.index = int(r.get(16));
                line.vals.resize(q_);
                for (int i = 0; i < q_; ++i) line.vals[i] = uint8_t(r.get(8));
            }
        };
        lines(p.self_cols);
        lines(p.parent_rows);
        return p;
    }

    // does u's parent grid look like v's own grid on all t^2 intersections?
    bool direction(const Parsed& u, const Parsed& v) const {
        for (const Line& row : u.parent_rows)
            for (const Line& col : v.self_cols)
                if (row.vals[col.index] != col.vals[row.index]) return false;
        return true;
    }

    int n_, t_, m_ = 0, q_ = 0;
};

} // namespace

SchemePtr make_forest_equality_scheme(int n, int t) {
    return std::make_shared<SmmpcForest>(n, t);
}

EqParams eq_params(int n, int t) {
    SmmpcForest s(n, t);
    EqParams p;
    Graph g; // label size is graph-independent
    p.label_bits = s.label_bits(g);
    p.m = 1;
    while ((uint64_t(1) << p.m) < uint64_t(n) + 1) ++p.m;
    p.q = grid_side(p.m);
    p.D = (p.m + 7) / 8;
    return p;
}

} // namespace skotch
