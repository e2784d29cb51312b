#pragma once

// Exact arithmetic of rational quaternion algebras (a,b/Q): Legendre and
// Hilbert symbols, ramified places, discriminant, elements with their
// involution/trace/norm, and the matrix embedding over Q(sqrt a).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "quatdom/intmath.hpp"
#include "quatdom/rational.hpp"

namespace quatdom {

// A place of Q: a finite prime or the real place.
struct Place {
    bool infinite = false;
    int64_t q = 0;

    static Place infinity() { return Place{true, 0}; }
    static Place prime(int64_t p) {
        if (!is_prime(p)) throw std::invalid_argument("Place: " + std::to_string(p) + " is not prime");
        return Place{false, p};
    }
    friend bool operator==(const Place&, const Place&) = default;
    friend bool operator<(const Place& a, const Place& b) {
        if (a.infinite != b.infinite) return b.infinite;  // finite primes first
        return a.q < b.q;
    }
    std::string to_string() const { return infinite ? "oo" : std::to_string(q); }
};

// Legendre symbol (a/p), p an odd prime. 0 iff p | a.
inline int legendre_symbol(int64_t a, int64_t p) {
    if (p == 2 || !is_prime(p))
        throw std::invalid_argument("legendre_symbol: modulus " + std::to_string(p) + " is not an odd prime");
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    int64_t e = powmod(a, (p - 1) / 2, p);
    return e == 1 ? 1 : -1;
}

namespace detail {

// (a,b)_p for odd p, via the valuation-stripped unit table:
//   (a,b)_p = (-1)^{alpha*beta*(p-1)/2} (u/p)^beta (w/p)^alpha
// with a = p^alpha u, b = p^beta w. This is the repeated reduction of the
// unit/prime cases by bimultiplicativity.
inline int hilbert_odd(int64_t a, int64_t b, int64_t p) {
    int alpha = valuation(a, p), beta = valuation(b, p);
    int64_t u = a, w = b;
    for (int i = 0; i < alpha; ++i) u /= p;
    for (int i = 0; i < beta; ++i) w /= p;
    int s = 1;
    if ((alpha & 1) && (beta & 1) && ((p - 1) / 2) % 2 == 1) s = -s;
    if (beta & 1) s *= legendre_symbol(u, p);
    if (alpha & 1) s *= legendre_symbol(w, p);
    return s;
}

inline int hilbert_infinity(int64_t a, int64_t b) { return (a < 0 && b < 0) ? -1 : 1; }

}  // namespace detail

// Hilbert symbol (a,b)_v. The value at v = 2 comes from the product formula
// over the real place and the odd primes dividing ab.
inline int hilbert_symbol(int64_t a, int64_t b, const Place& v) {
    if (a == 0 || b == 0) throw std::invalid_argument("hilbert_symbol: arguments must be nonzero");
    if (v.infinite) return detail::hilbert_infinity(a, b);
    if (v.q != 2) return detail::hilbert_odd(a, b, v.q);
    int s = detail::hilbert_infinity(a, b);
    std::set<int64_t> odd_ps;
    for (int64_t p : prime_divisors(a))
        if (p != 2) odd_ps.insert(p);
    for (int64_t p : prime_divisors(b))
        if (p != 2) odd_ps.insert(p);
    for (int64_t p : odd_ps) s *= detail::hilbert_odd(a, b, p);
    return s;
}

inline int hilbert_symbol(int64_t a, int64_t b, int64_t p) {
    return hilbert_symbol(a, b, Place::prime(p));
}

// ---------------------------------------------------------------------------

// Quaternion algebra (a,b/Q): basis 1, i, j, ij with i^2 = a, j^2 = b,
// ij = -ji. Ramification data is computed on construction.
class QuatAlgebra {
public:
    QuatAlgebra(int64_t a, int64_t b) : a_(a), b_(b) {
        if (a == 0 || b == 0) throw std::invalid_argument("QuatAlgebra: parameters must be nonzero");
        std::set<Place> ram;
        if (hilbert_symbol(a, b, Place::infinity()) == -1) ram.insert(Place::infinity());
        std::set<int64_t> ps{2};
        for (int64_t p : prime_divisors(a)) ps.insert(p);
        for (int64_t p : prime_divisors(b)) ps.insert(p);
        for (int64_t p : ps)
            if (hilbert_symbol(a, b, Place::prime(p)) == -1) ram.insert(Place::prime(p));
        if (ram.size() % 2 != 0)
            throw std::logic_error("QuatAlgebra: ramified set has odd cardinality (reciprocity violated)");
        ramified_.assign(ram.begin(), ram.end());
        disc_ = 1;
        for (const Place& v : ramified_)
            if (!v.infinite) disc_ *= v.q;
    }

    int64_t a() const { return a_; }
    int64_t b() const { return b_; }
    const std::vector<Place>& ramified_places() const { return ramified_; }
    int64_t discriminant() const { return disc_; }
    bool is_definite() const {
        return !ramified_.empty() && ramified_.back().infinite;
    }
    bool ramified_at(const Place& v) const {
        return std::find(ramified_.begin(), ramified_.end(), v) != ramified_.end();
    }
    bool split_at(int64_t p) const { return !ramified_at(Place::prime(p)); }

    friend bool operator==(const QuatAlgebra& x, const QuatAlgebra& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }

private:
    int64_t a_, b_;
    std::vector<Place> ramified_;  // sorted, infinite place last
    int64_t disc_;
};

// Element x0 + x1 i + x2 j + x3 ij with exact rational coordinates.
class QuatElement {
public:
    QuatElement() : a_(1), b_(1) {}
    QuatElement(const QuatAlgebra& alg, Rational x0, Rational x1, Rational x2, Rational x3)
        : a_(alg.a()), b_(alg.b()), x_{std::move(x0), std::move(x1), std::move(x2), std::move(x3)} {}

    static QuatElement one(const QuatAlgebra& alg) { return QuatElement(alg, 1, 0, 0, 0); }
    static QuatElement i(const QuatAlgebra& alg) { return QuatElement(alg, 0, 1, 0, 0); }
    static QuatElement j(const QuatAlgebra& alg) { return QuatElement(alg, 0, 0, 1, 0); }
    static QuatElement ij(const QuatAlgebra& alg) { return QuatElement(alg, 0, 0, 0, 1); }

    int64_t alg_a() const { return a_; }
    int64_t alg_b() const { return b_; }
    const Rational& operator[](int k) const { return x_[k]; }

    QuatElement conj() const {
        QuatElement r = *this;
        for (int k = 1; k < 4; ++k) r.x_[k] = -r.x_[k];
        return r;
    }
    Rational trace() const { return x_[0] + x_[0]; }
    Rational norm() const {
        Rational a(a_), b(b_);
        return x_[0] * x_[0] - a * x_[1] * x_[1] - b * x_[2] * x_[2] + a * b * x_[3] * x_[3];
    }

    friend QuatElement operator+(const QuatElement& x, const QuatElement& y) {
        x.check_same(y);
        QuatElement r = x;
        for (int k = 0; k < 4; ++k) r.x_[k] += y.x_[k];
        return r;
    }
    friend QuatElement operator-(const QuatElement& x, const QuatElement& y) {
        x.check_same(y);
        QuatElement r = x;
        for (int k = 0; k < 4; ++k) r.x_[k] -= y.x_[k];
        return r;
    }
    friend QuatElement operator*(const Rational& s, const QuatElement& x) {
        QuatElement r = x;
        for (int k = 0; k < 4; ++k) r.x_[k] = s * r.x_[k];
        return r;
    }
    friend QuatElement operator*(const QuatElement& x, const QuatElement& y) {
        x.check_same(y);
        Rational a(x.a_), b(x.b_);
        QuatElement r = x;
        r.x_[0] = x.x_[0] * y.x_[0] + a * x.x_[1] * y.x_[1] + b * x.x_[2] * y.x_[2] - a * b * x.x_[3] * y.x_[3];
        r.x_[1] = x.x_[0] * y.x_[1] + x.x_[1] * y.x_[0] - b * (x.x_[2] * y.x_[3] - x.x_[3] * y.x_[2]);
        r.x_[2] = x.x_[0] * y.x_[2] + x.x_[2] * y.x_[0] + a * (x.x_[1] * y.x_[3] - x.x_[3] * y.x_[1]);
        r.x_[3] = x.x_[0] * y.x_[3] + x.x_[3] * y.x_[0] + x.x_[1] * y.x_[2] - x.x_[2] * y.x_[1];
        return r;
    }
    friend bool operator==(const QuatElement& x, const QuatElement& y) {
        return x.a_ == y.a_ && x.b_ == y.b_ && x.x_ == y.x_;
    }

private:
    int64_t a_, b_;
    std::array<Rational, 4> x_{};

    void check_same(const QuatElement& o) const {
        if (a_ != o.a_ || b_ != o.b_)
            throw std::invalid_argument("QuatElement: operands from different algebras");
    }
};

// ---------------------------------------------------------------------------

// u + v sqrt(d) with rational u, v; d a fixed nonsquare parameter.
struct QuadExt {
    Rational u, v;
    int64_t d = 0;

    QuadExt() = default;
    QuadExt(Rational u_, Rational v_, int64_t d_) : u(std::move(u_)), v(std::move(v_)), d(d_) {}

    friend QuadExt operator+(const QuadExt& x, const QuadExt& y) {
        return {x.u + y.u, x.v + y.v, x.d};
    }
    friend QuadExt operator-(const QuadExt& x, const QuadExt& y) {
        return {x.u - y.u, x.v - y.v, x.d};
    }
    friend QuadExt operator*(const QuadExt& x, const QuadExt& y) {
        return {x.u * y.u + Rational(x.d) * x.v * y.v, x.u * y.v + x.v * y.u, x.d};
    }
    friend bool operator==(const QuadExt& x, const QuadExt& y) {
        return x.u == y.u && x.v == y.v && x.d == y.d;
    }
    double to_double() const { return u.to_double() + v.to_double() * std::sqrt((double)d); }
};

using QuadMat2 = std::array<QuadExt, 4>;  // row-major [[m0, m1], [m2, m3]]

inline QuadMat2 quadmat_mul(const QuadMat2& x, const QuadMat2& y) {
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
            x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

inline QuadExt quadmat_det(const QuadMat2& m) { return m[0] * m[3] - m[1] * m[2]; }

// The embedding of (a,b/Q) into M(2, Q(sqrt a)) for a > 0:
//   x0 + x1 i + x2 j + x3 ij  ->  [[x0 + x1 s, x2 + x3 s], [b (x2 - x3 s), x0 - x1 s]]
// with s = sqrt(a). Ring homomorphism, det = reduced norm.
inline QuadMat2 embed_sl2(const QuatElement& h) {
    int64_t a = h.alg_a(), b = h.alg_b();
    if (a <= 0) throw std::invalid_argument("embed_sl2: requires a > 0");
    Rational br(b);
    return {QuadExt(h[0], h[1], a), QuadExt(h[2], h[3], a),
            QuadExt(br * h[2], -br * h[3], a), QuadExt(h[0], -h[1], a)};
}

}  // namespace quatdom
