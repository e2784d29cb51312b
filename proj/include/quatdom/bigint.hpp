#pragma once

// Arbitrary-precision signed integers, base 2^32 magnitude limbs.
// Sizes stay small here (group elements, discriminants, word products),
// so everything is schoolbook.

#include <cstdint>
#include <cstdlib>
#include <cmath>
#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace quatdom {

class BigInt {
public:
    BigInt() = default;
    BigInt(int64_t v) { assign(v); }
    explicit BigInt(std::string_view s) { assign_dec(s); }

    bool is_zero() const { return limbs_.empty(); }
    bool is_negative() const { return neg_; }
    bool is_one() const { return !neg_ && limbs_.size() == 1 && limbs_[0] == 1; }
    bool is_odd() const { return !limbs_.empty() && (limbs_[0] & 1u); }
    int sign() const { return limbs_.empty() ? 0 : (neg_ ? -1 : 1); }

    friend BigInt operator-(BigInt v) {
        if (!v.is_zero()) v.neg_ = !v.neg_;
        return v;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        if (a.neg_ == b.neg_) {
            BigInt r;
            r.limbs_ = add_mag(a.limbs_, b.limbs_);
            r.neg_ = a.neg_;
            r.trim();
            return r;
        }
        int c = cmp_mag(a.limbs_, b.limbs_);
        if (c == 0) return BigInt();
        BigInt r;
        if (c > 0) { r.limbs_ = sub_mag(a.limbs_, b.limbs_); r.neg_ = a.neg_; }
        else       { r.limbs_ = sub_mag(b.limbs_, a.limbs_); r.neg_ = b.neg_; }
        r.trim();
        return r;
    }
    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        if (a.is_zero() || b.is_zero()) return BigInt();
        BigInt r;
        r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
        for (size_t i = 0; i < a.limbs_.size(); ++i) {
            uint64_t carry = 0;
            for (size_t j = 0; j < b.limbs_.size(); ++j) {
                uint64_t cur = (uint64_t)a.limbs_[i] * b.limbs_[j] + r.limbs_[i + j] + carry;
                r.limbs_[i + j] = (uint32_t)cur;
                carry = cur >> 32;
            }
            r.limbs_[i + b.limbs_.size()] += (uint32_t)carry;
        }
        r.neg_ = a.neg_ != b.neg_;
        r.trim();
        return r;
    }

    // Truncated division (C semantics): quotient toward zero, remainder has
    // the sign of the dividend.
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
        if (b.is_zero()) throw std::domain_error("BigInt: division by zero");
        if (cmp_mag(a.limbs_, b.limbs_) < 0) { q = BigInt(); r = a; return; }
        divmod_mag(a.limbs_, b.limbs_, q.limbs_, r.limbs_);
        q.neg_ = a.neg_ != b.neg_;
        r.neg_ = a.neg_;
        q.trim();
        r.trim();
    }
    friend BigInt operator/(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return q;
    }
    friend BigInt operator%(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return r;
    }

    BigInt& operator+=(const BigInt& o) { *this = *this + o; return *this; }
    BigInt& operator-=(const BigInt& o) { *this = *this - o; return *this; }
    BigInt& operator*=(const BigInt& o) { *this = *this * o; return *this; }
    BigInt& operator/=(const BigInt& o) { *this = *this / o; return *this; }
    BigInt& operator%=(const BigInt& o) { *this = *this % o; return *this; }

    friend bool operator==(const BigInt& a, const BigInt& b) {
        return a.neg_ == b.neg_ && a.limbs_ == b.limbs_;
    }
    friend std::strong_ordering operator<=>(const BigInt& a, const BigInt& b) {
        if (a.neg_ != b.neg_) return a.neg_ ? std::strong_ordering::less : std::strong_ordering::greater;
        int c = cmp_mag(a.limbs_, b.limbs_);
        if (a.neg_) c = -c;
        return c < 0   ? std::strong_ordering::less
               : c > 0 ? std::strong_ordering::greater
                       : std::strong_ordering::equal;
    }

    BigInt abs() const {
        BigInt r = *this;
        r.neg_ = false;
        return r;
    }

    // Largest x with x^2 <= |this|; |this| must be >= 0.
    BigInt isqrt() const {
        if (neg_) throw std::domain_error("BigInt: isqrt of negative");
        if (is_zero()) return BigInt();
        if (limbs_.size() <= 2) {
            uint64_t v = to_u64();
            uint64_t x = (uint64_t)std::sqrt((double)v);
            while (x > 0 && x * x > v) --x;
            while ((x + 1) * (x + 1) <= v && (x + 1) != 0) ++x;
            return BigInt((int64_t)x);
        }
        // Newton iteration from a power-of-two overestimate.
        int bits = (int)(limbs_.size() * 32);
        BigInt x(1);
        for (int i = 0; i < bits / 2 + 1; ++i) x = x + x;
        while (true) {
            BigInt nx = (x + *this / x) / BigInt(2);
            if (nx >= x) break;
            x = nx;
        }
        while (x * x > *this) x = x - BigInt(1);
        return x;
    }
    bool is_perfect_square() const {
        if (neg_) return false;
        BigInt s = isqrt();
        return s * s == *this;
    }

    static BigInt gcd(BigInt a, BigInt b) {
        a.neg_ = false;
        b.neg_ = false;
        while (!b.is_zero()) {
            BigInt r = a % b;
            a = b;
            b = r;
        }
        return a;
    }

    bool fits_int64() const {
        if (limbs_.size() > 2) return false;
        uint64_t v = to_u64();
        if (neg_) return v <= (uint64_t)1 << 63;
        return v < (uint64_t)1 << 63;
    }
    int64_t to_int64() const {
        if (!fits_int64()) throw std::overflow_error("BigInt: does not fit int64");
        uint64_t v = to_u64();
        return neg_ ? -(int64_t)v : (int64_t)v;
    }
    double to_double() const {
        double m = 0;
        for (size_t i = limbs_.size(); i-- > 0;) m = m * 4294967296.0 + limbs_[i];
        return neg_ ? -m : m;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::vector<uint32_t> mag = limbs_;
        std::string digits;
        while (!mag.empty()) {
            uint64_t rem = 0;
            for (size_t i = mag.size(); i-- > 0;) {
                uint64_t cur = (rem << 32) | mag[i];
                mag[i] = (uint32_t)(cur / 1000000000u);
                rem = cur % 1000000000u;
            }
            while (!mag.empty() && mag.back() == 0) mag.pop_back();
            for (int k = 0; k < 9; ++k) {
                digits.push_back(char('0' + rem % 10));
                rem /= 10;
            }
        }
        while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
        if (neg_) digits.push_back('-');
        return std::string(digits.rbegin(), digits.rend());
    }

private:
    // sign-magnitude; limbs_ little-endian, no trailing zero limbs, empty == 0
    std::vector<uint32_t> limbs_;
    bool neg_ = false;

    void trim() {
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
        if (limbs_.empty()) neg_ = false;
    }
    void assign(int64_t v) {
        limbs_.clear();
        neg_ = v < 0;
        uint64_t m = neg_ ? ~(uint64_t)v + 1 : (uint64_t)v;
        while (m) {
            limbs_.push_back((uint32_t)m);
            m >>= 32;
        }
    }
    void assign_dec(std::string_view s) {
        size_t i = 0;
        bool neg = false;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
        if (i == s.size()) throw std::invalid_argument("BigInt: empty numeral");
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("BigInt: bad digit");
            *this = *this * BigInt(10) + BigInt(s[i] - '0');
        }
        if (neg && !is_zero()) neg_ = true;
    }
    uint64_t to_u64() const {
        uint64_t v = 0;
        if (limbs_.size() > 1) v = (uint64_t)limbs_[1] << 32;
        if (!limbs_.empty()) v |= limbs_[0];
        return v;
    }

    static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        for (size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
    }
    static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
        const auto& big = a.size() >= b.size() ? a : b;
        const auto& small = a.size() >= b.size() ? b : a;
        std::vector<uint32_t> r = big;
        uint64_t carry = 0;
        for (size_t i = 0; i < r.size(); ++i) {
            uint64_t cur = (uint64_t)r[i] + (i < small.size() ? small[i] : 0) + carry;
            r[i] = (uint32_t)cur;
            carry = cur >> 32;
            if (!carry && i >= small.size()) break;
        }
        if (carry) r.push_back((uint32_t)carry);
        return r;
    }
    // requires |a| >= |b|
    static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
        std::vector<uint32_t> r = a;
        int64_t borrow = 0;
        for (size_t i = 0; i < r.size(); ++i) {
            int64_t cur = (int64_t)r[i] - (i < b.size() ? b[i] : 0) - borrow;
            borrow = cur < 0;
            if (cur < 0) cur += (int64_t)1 << 32;
            r[i] = (uint32_t)cur;
            if (!borrow && i >= b.size()) break;
        }
        return r;
    }
    // Knuth algorithm D on magnitudes; |a| >= |b| > 0.
    static void divmod_mag(std::vector<uint32_t> a, std::vector<uint32_t> b,
                           std::vector<uint32_t>& q, std::vector<uint32_t>& r) {
        if (b.size() == 1) {
            uint64_t d = b[0], rem = 0;
            q.assign(a.size(), 0);
            for (size_t i = a.size(); i-- > 0;) {
                uint64_t cur = (rem << 32) | a[i];
                q[i] = (uint32_t)(cur / d);
                rem = cur % d;
            }
            r.clear();
            if (rem) r.push_back((uint32_t)rem);
            return;
        }
        int shift = 0;
        while (((b.back() << shift) & 0x80000000u) == 0) ++shift;
        auto shl = [&](std::vector<uint32_t>& v) {
            if (!shift) return;
            uint32_t carry = 0;
            for (auto& w : v) {
                uint32_t nc = w >> (32 - shift);
                w = (w << shift) | carry;
                carry = nc;
            }
            if (carry) v.push_back(carry);
        };
        shl(a);
        shl(b);
        size_t n = b.size(), m = a.size() - n;
        a.push_back(0);
        q.assign(m + 1, 0);
        for (size_t j = m + 1; j-- > 0;) {
            uint64_t top = ((uint64_t)a[j + n] << 32) | a[j + n - 1];
            uint64_t qh = top / b[n - 1];
            uint64_t rh = top % b[n - 1];
            while (qh >= ((uint64_t)1 << 32) ||
                   qh * b[n - 2] > ((rh << 32) | a[j + n - 2])) {
                --qh;
                rh += b[n - 1];
                if (rh >= ((uint64_t)1 << 32)) break;
            }
            // multiply-subtract, with add-back if we overshot by one
            int64_t borrow = 0;
            uint64_t carry = 0;
            for (size_t i = 0; i < n; ++i) {
                uint64_t prod = qh * b[i] + carry;
                carry = prod >> 32;
                int64_t cur = (int64_t)a[i + j] - (int64_t)(uint32_t)prod - borrow;
                borrow = cur < 0;
                if (cur < 0) cur += (int64_t)1 << 32;
                a[i + j] = (uint32_t)cur;
            }
            int64_t cur = (int64_t)a[j + n] - (int64_t)carry - borrow;
            if (cur < 0) {
                cur += (int64_t)1 << 32;
                --qh;
                uint64_t c2 = 0;
                for (size_t i = 0; i < n; ++i) {
                    uint64_t s = (uint64_t)a[i + j] + b[i] + c2;
                    a[i + j] = (uint32_t)s;
                    c2 = s >> 32;
                }
                cur += (int64_t)c2;
                cur &= 0xffffffff;
            }
            a[j + n] = (uint32_t)cur;
            q[j] = (uint32_t)qh;
        }
        a.resize(n);
        if (shift) {
            uint32_t carry = 0;
            for (size_t i = a.size(); i-- > 0;) {
                uint32_t nc = a[i] << (32 - shift);
                a[i] = (a[i] >> shift) | carry;
                carry = nc;
            }
        }
        r = std::move(a);
    }
};

inline BigInt abs(const BigInt& v) { return v.abs(); }

inline std::string to_string(const BigInt& v) { return v.to_string(); }

}  // namespace quatdom
