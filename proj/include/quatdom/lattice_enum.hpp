#pragma once

// Exact enumeration of Gamma_{p,a}: integer solutions of
//   x0^2 - a x1^2 - p x2^2 + a p x3^2 = 1,
// streamed in shells of constant m = a x1^2 + p x2^2 (ascending m is the
// Hutchinson order: circles of descending radius 1/sqrt(m)). One canonical
// representative is kept per pair {g, -g}.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "quatdom/arith_core.hpp"
#include "quatdom/bigint.hpp"

namespace quatdom {

inline bool is_valid_pair(int64_t p, int64_t a) {
    return p > 2 && is_prime(p) && a > 1 && a < p && legendre_symbol(a, p) == -1;
}

inline void require_valid_pair(int64_t p, int64_t a) {
    if (p <= 2 || !is_prime(p))
        throw std::invalid_argument("(p,a): p = " + std::to_string(p) + " is not an odd prime");
    if (a <= 1 || a >= p)
        throw std::invalid_argument("(p,a): a must satisfy 1 < a < p");
    if (legendre_symbol(a, p) != -1)
        throw std::invalid_argument("(p,a): a = " + std::to_string(a) + " is a quadratic residue mod " +
                                    std::to_string(p));
}

// Quaternion with BigInt coordinates in the (i^2 = a, j^2 = p) basis.
// Used for exact word arithmetic (powers, products of generators).
struct ZQuat {
    int64_t p = 0, a = 0;
    BigInt x0, x1, x2, x3;

    ZQuat() = default;
    ZQuat(int64_t p_, int64_t a_, BigInt w, BigInt x, BigInt y, BigInt z)
        : p(p_), a(a_), x0(std::move(w)), x1(std::move(x)), x2(std::move(y)), x3(std::move(z)) {}

    static ZQuat one(int64_t p, int64_t a) { return ZQuat(p, a, 1, 0, 0, 0); }

    ZQuat conj() const { return ZQuat(p, a, x0, -x1, -x2, -x3); }
    BigInt norm() const {
        BigInt A(a), P(p);
        return x0 * x0 - A * x1 * x1 - P * x2 * x2 + A * P * x3 * x3;
    }
    bool is_one() const { return x0.is_one() && x1.is_zero() && x2.is_zero() && x3.is_zero(); }
    bool is_pm_one() const {
        return x1.is_zero() && x2.is_zero() && x3.is_zero() && x0.abs().is_one();
    }

    friend ZQuat operator*(const ZQuat& x, const ZQuat& y) {
        if (x.p != y.p || x.a != y.a) throw std::invalid_argument("ZQuat: mixed parameters");
        BigInt A(x.a), P(x.p);
        return ZQuat(x.p, x.a,
                     x.x0 * y.x0 + A * x.x1 * y.x1 + P * x.x2 * y.x2 - A * P * x.x3 * y.x3,
                     x.x0 * y.x1 + x.x1 * y.x0 - P * (x.x2 * y.x3 - x.x3 * y.x2),
                     x.x0 * y.x2 + x.x2 * y.x0 + A * (x.x1 * y.x3 - x.x3 * y.x1),
                     x.x0 * y.x3 + x.x3 * y.x0 + x.x1 * y.x2 - x.x2 * y.x1);
    }
    friend bool operator==(const ZQuat&, const ZQuat&) = default;

    // canonical representative of {g, -g}: first nonzero coordinate positive
    ZQuat pm_canonical() const {
        for (const BigInt* c : {&x0, &x1, &x2, &x3}) {
            if (c->is_zero()) continue;
            if (c->is_negative()) return ZQuat(p, a, -x0, -x1, -x2, -x3);
            break;
        }
        return *this;
    }
    std::string key() const {
        return x0.to_string() + "," + x1.to_string() + "," + x2.to_string() + "," + x3.to_string();
    }
};

// A solution of the norm equation, with machine-word coordinates (shell
// bounds keep them small). Canonical sign: first nonzero of (x0,x1,x2,x3)
// is positive, so exactly one of {g, -g} is ever produced.
class GroupElement {
public:
    GroupElement(int64_t p, int64_t a, int64_t x0, int64_t x1, int64_t x2, int64_t x3)
        : p_(p), a_(a), x_{x0, x1, x2, x3} {
        __int128 n = (__int128)x0 * x0 - (__int128)a * x1 * x1 - (__int128)p * x2 * x2 +
                     (__int128)a * p * x3 * x3;
        if (n != 1)
            throw std::invalid_argument("GroupElement: norm != 1 for (" + std::to_string(x0) + "," +
                                        std::to_string(x1) + "," + std::to_string(x2) + "," +
                                        std::to_string(x3) + ")");
    }

    int64_t p() const { return p_; }
    int64_t a() const { return a_; }
    int64_t x0() const { return x_[0]; }
    int64_t x1() const { return x_[1]; }
    int64_t x2() const { return x_[2]; }
    int64_t x3() const { return x_[3]; }

    // m = a x1^2 + p x2^2 = |C|^2 of the SU(1,1) matrix
    int64_t c_norm_sq() const { return a_ * x_[1] * x_[1] + p_ * x_[2] * x_[2]; }
    // |A|^2 = x0^2 + a p x3^2 = 1 + m
    int64_t a_norm_sq() const { return x_[0] * x_[0] + a_ * p_ * x_[3] * x_[3]; }
    int64_t trace() const { return 2 * x_[0]; }
    // sum of squared entries of the SL(2,R) matrix, = 2 + 4m
    int64_t sl2_norm() const { return 2 + 4 * c_norm_sq(); }

    bool is_identity() const { return x_[1] == 0 && x_[2] == 0 && x_[3] == 0 && std::abs(x_[0]) == 1; }
    bool is_torsion() const { return x_[0] == 0; }

    GroupElement inverse() const {
        return GroupElement(p_, a_, x_[0], -x_[1], -x_[2], -x_[3]).pm_canonical();
    }
    GroupElement pm_canonical() const {
        for (int64_t c : x_) {
            if (c == 0) continue;
            if (c < 0) return GroupElement(p_, a_, -x_[0], -x_[1], -x_[2], -x_[3]);
            break;
        }
        return *this;
    }

    ZQuat to_zquat() const { return ZQuat(p_, a_, x_[0], x_[1], x_[2], x_[3]); }

    // SU(1,1) image [[A, conj(C)], [C, conj(A)]]:
    //   A = x0 + i x3 sqrt(ap),   C = x1 sqrt(a) + i x2 sqrt(p)
    std::complex<double> su11_A() const {
        return {(double)x_[0], x_[3] * std::sqrt((double)a_ * p_)};
    }
    std::complex<double> su11_C() const {
        return {x_[1] * std::sqrt((double)a_), x_[2] * std::sqrt((double)p_)};
    }

    friend bool operator==(const GroupElement& g, const GroupElement& h) {
        return g.p_ == h.p_ && g.a_ == h.a_ && g.x_ == h.x_;
    }
    // shell order: ascending m, then lexicographic coordinates
    friend bool operator<(const GroupElement& g, const GroupElement& h) {
        int64_t mg = g.c_norm_sq(), mh = h.c_norm_sq();
        if (mg != mh) return mg < mh;
        return g.x_ < h.x_;
    }

    std::string to_string() const {
        return "(" + std::to_string(x_[0]) + "," + std::to_string(x_[1]) + "," +
               std::to_string(x_[2]) + "," + std::to_string(x_[3]) + ")";
    }

private:
    int64_t p_, a_;
    std::array<int64_t, 4> x_;
};

struct EnumerationShell {
    int64_t m = 0;
    std::vector<GroupElement> members;  // canonical reps, lexicographic
};

// All shells with m_lo <= m <= m_hi, ascending; shells are present for every
// representable m, possibly with no members. The identity (m = 0) is skipped.
inline std::vector<EnumerationShell> enumerate_shells(int64_t p, int64_t a, int64_t m_lo, int64_t m_hi) {
    require_valid_pair(p, a);
    if (m_hi < 0) throw std::invalid_argument("enumerate_shells: negative bound");
    m_lo = std::max<int64_t>(m_lo, 1);

    std::vector<std::pair<int64_t, std::pair<int64_t, int64_t>>> reps;  // (m, (x1>=0, x2>=0))
    for (int64_t x1 = 0; a * x1 * x1 <= m_hi; ++x1) {
        for (int64_t x2 = 0; a * x1 * x1 + p * x2 * x2 <= m_hi; ++x2) {
            int64_t m = a * x1 * x1 + p * x2 * x2;
            if (m >= m_lo) reps.push_back({m, {x1, x2}});
        }
    }
    std::sort(reps.begin(), reps.end());

    std::vector<EnumerationShell> shells;
    for (size_t i = 0; i < reps.size();) {
        int64_t m = reps[i].first;
        EnumerationShell shell{m, {}};
        for (; i < reps.size() && reps[i].first == m; ++i) {
            auto [x1, x2] = reps[i].second;
            int64_t ap = a * p;
            for (int64_t x3 = 0; ap * x3 * x3 <= m + 1; ++x3) {
                int64_t x0;
                if (!is_square64(m + 1 - ap * x3 * x3, &x0)) continue;
                for (int s1 : {1, -1}) {
                    if (x1 == 0 && s1 < 0) continue;
                    for (int s2 : {1, -1}) {
                        if (x2 == 0 && s2 < 0) continue;
                        for (int s0 : {1, -1}) {
                            if (x0 == 0 && s0 < 0) continue;
                            for (int s3 : {1, -1}) {
                                if (x3 == 0 && s3 < 0) continue;
                                GroupElement g(p, a, s0 * x0, s1 * x1, s2 * x2, s3 * x3);
                                if (g.is_identity()) continue;
                                GroupElement c = g.pm_canonical();
                                if (!(c == g)) continue;  // the mirror copy emits it
                                shell.members.push_back(c);
                            }
                        }
                    }
                }
            }
        }
        std::sort(shell.members.begin(), shell.members.end());
        shells.push_back(std::move(shell));
    }
    return shells;
}

inline std::vector<EnumerationShell> enumerate_shells(int64_t p, int64_t a, int64_t m_max) {
    return enumerate_shells(p, a, 0, m_max);
}

inline bool is_torsion(const GroupElement& g) { return g.is_torsion(); }

inline std::vector<GroupElement> torsion_scan(int64_t p, int64_t a, int64_t m_max) {
    std::vector<GroupElement> out;
    for (const auto& shell : enumerate_shells(p, a, m_max))
        for (const auto& g : shell.members)
            if (g.is_torsion()) out.push_back(g);
    return out;
}

// Gamma^0 congruence filter: x2 = 0 (mod a).
inline bool gamma0_filter(const GroupElement& g) {
    int64_t r = g.x2() % g.a();
    return r == 0;
}

// The residues x0 mod a seen among Gamma^0 elements (canonical reps) up to
// shell m_max. The norm equation forces x0^2 = 1 (mod a) on this subgroup;
// the sharper claim x0 = 1 (mod a) is recorded here, not assumed.
inline std::vector<int64_t> gamma0_x0_residues(int64_t p, int64_t a, int64_t m_max) {
    std::set<int64_t> res;
    for (const auto& shell : enumerate_shells(p, a, m_max))
        for (const auto& g : shell.members)
            if (gamma0_filter(g)) res.insert(((g.x0() % a) + a) % a);
    return {res.begin(), res.end()};
}

// Matrix order of a torsion element under the exact SU(1,1) image
// (equivalently quaternion powering); 0 if no order <= cap is found.
inline int torsion_matrix_order(const GroupElement& g, int cap = 12) {
    ZQuat w = g.to_zquat(), acc = w;
    for (int k = 1; k <= cap; ++k) {
        if (acc.is_one()) return k;
        acc = acc * w;
    }
    return 0;
}

}  // namespace quatdom
