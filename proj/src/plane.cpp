#include "skotch/plane.hpp"

#include <algorithm>
#include <stdexcept>

namespace skotch {

bool is_prime(uint64_t x) {
    if (x < 2) return false;
    for (uint64_t d = 2; d * d <= x; ++d)
        if (x % d == 0) return false;
    return true;
}

int prime_for_degree(uint64_t num, uint64_t den) {
    // smallest prime p with (p + 1) * den >= num
    uint64_t p = 2;
    while (!(is_prime(p) && (p + 1) * den >= num)) ++p;
    return int(p);
}

Plane::Plane(int p) : p_(p) {
    if (p < 2 || !is_prime(uint64_t(p)))
        throw std::invalid_argument("plane order must be prime");
    n_ = p * p + p + 1;
    inv_.resize(p);
    if (p > 1) inv_[1] = 1;
    for (int i = 2; i < p; ++i) inv_[i] = (p - p / i * int64_t(inv_[p % i]) % p) % p;
    inc_.resize(n_);
    for (int i = 0; i < n_; ++i) {
        auto [a, b, c] = element(i);
        // Basis of the orthogonal complement of (a, b, c).
        std::array<int, 3> e1, e2;
        if (a != 0) { e1 = {(p - b) % p, a, 0}; e2 = {(p - c) % p, 0, a}; }
        else if (b != 0) { e1 = {1, 0, 0}; e2 = {0, (p - c) % p, b}; }
        else { e1 = {1, 0, 0}; e2 = {0, 1, 0}; }
        auto& list = inc_[i];
        list.reserve(p + 1);
        list.push_back(index(e1));
        for (int t = 0; t < p; ++t)
            list.push_back(index({(e2[0] + t * e1[0]) % p,
                                  (e2[1] + t * e1[1]) % p,
                                  (e2[2] + t * e1[2]) % p}));
        std::sort(list.begin(), list.end());
    }
}

std::array<int, 3> Plane::element(int i) const {
    if (i < 0 || i >= n_) throw std::invalid_argument("element index out of range");
    if (i < p_ * p_) return {1, i / p_, i % p_};
    if (i < p_ * p_ + p_) return {0, 1, i - p_ * p_};
    return {0, 0, 1};
}

int Plane::index(std::array<int, 3> t) const {
    for (int& x : t) x = (x % p_ + p_) % p_;
    auto [a, b, c] = t;
    // scale so the first nonzero coordinate becomes 1
    if (a != 0) return (b * inv_[a] % p_) * p_ + c * inv_[a] % p_;
    if (b != 0) return p_ * p_ + c * inv_[b] % p_;
    if (c != 0) return p_ * p_ + p_;
    throw std::invalid_argument("zero triple has no index");
}

bool Plane::incident(int i, int j) const {
    auto u = element(i), v = element(j);
    return (u[0] * v[0] + u[1] * v[1] + u[2] * v[2]) % p_ == 0;
}

const std::vector<int>& Plane::incident_list(int i) const {
    if (i < 0 || i >= n_) throw std::invalid_argument("element index out of range");
    return inc_[i];
}

} // namespace skotch
