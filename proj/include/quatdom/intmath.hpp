#pragma once

// Small machine-word number theory helpers (int64 range, exact).

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace quatdom {

inline int64_t mulmod(int64_t a, int64_t b, int64_t m) {
    return (int64_t)((__int128)a * b % m);
}

inline int64_t powmod(int64_t base, int64_t exp, int64_t mod) {
    if (mod <= 0) throw std::domain_error("powmod: nonpositive modulus");
    int64_t r = 1 % mod;
    base %= mod;
    if (base < 0) base += mod;
    while (exp > 0) {
        if (exp & 1) r = mulmod(r, base, mod);
        base = mulmod(base, base, mod);
        exp >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin for the full int64 range.
inline bool is_prime(int64_t n) {
    if (n < 2) return false;
    for (int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    int64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (int64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        int64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

inline int64_t isqrt64(int64_t n) {
    if (n < 0) throw std::domain_error("isqrt64: negative");
    if (n == 0) return 0;
    int64_t x = (int64_t)std::sqrt((double)n);
    while (x > 0 && x * x > n) --x;
    while ((x + 1) * (x + 1) <= n) ++x;
    return x;
}

inline bool is_square64(int64_t n, int64_t* root = nullptr) {
    if (n < 0) return false;
    int64_t s = isqrt64(n);
    if (root) *root = s;
    return s * s == n;
}

struct PrimePower {
    int64_t p;
    int exp;
};

// Trial division; inputs here are desk-scale (discriminants, 2|ab|, ...).
inline std::vector<PrimePower> factorize(int64_t n) {
    if (n < 0) n = -n;
    if (n == 0) throw std::domain_error("factorize: zero");
    std::vector<PrimePower> fs;
    for (int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        fs.push_back({p, e});
    }
    if (n > 1) fs.push_back({n, 1});
    return fs;
}

inline std::vector<int64_t> prime_divisors(int64_t n) {
    std::vector<int64_t> ps;
    for (const auto& f : factorize(n)) ps.push_back(f.p);
    return ps;
}

inline int64_t euler_phi(int64_t n) {
    int64_t r = n;
    for (const auto& f : factorize(n)) r = r / f.p * (f.p - 1);
    return r;
}

inline int valuation(int64_t n, int64_t p) {
    if (n == 0) throw std::domain_error("valuation: zero");
    int v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

}  // namespace quatdom
