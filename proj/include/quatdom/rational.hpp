#pragma once

// Exact rationals over BigInt, always normalized (den > 0, gcd(num, den) = 1).

#include <stdexcept>
#include <string>

#include "quatdom/bigint.hpp"

namespace quatdom {

class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(int64_t v) : num_(v), den_(1) {}
    Rational(BigInt v) : num_(std::move(v)), den_(1) {}
    Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }
    Rational(int64_t num, int64_t den) : num_(num), den_(den) { normalize(); }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_integer() const { return den_.is_one(); }
    int sign() const { return num_.sign(); }

    friend Rational operator-(const Rational& v) { return Rational(-v.num_, v.den_, raw_tag{}); }
    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw std::domain_error("Rational: division by zero");
        return Rational(a.num_ * b.den_, a.den_ * b.num_);
    }
    Rational& operator+=(const Rational& o) { *this = *this + o; return *this; }
    Rational& operator-=(const Rational& o) { *this = *this - o; return *this; }
    Rational& operator*=(const Rational& o) { *this = *this * o; return *this; }
    Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        return a.num_ * b.den_ <=> b.num_ * a.den_;
    }

    Rational abs() const { return Rational(num_.abs(), den_, raw_tag{}); }

    double to_double() const { return num_.to_double() / den_.to_double(); }
    BigInt to_bigint() const {
        if (!is_integer()) throw std::domain_error("Rational: not an integer: " + to_string());
        return num_;
    }

    std::string to_string() const {
        if (den_.is_one()) return num_.to_string();
        return num_.to_string() + "/" + den_.to_string();
    }

private:
    struct raw_tag {};
    Rational(BigInt num, BigInt den, raw_tag) : num_(std::move(num)), den_(std::move(den)) {}

    BigInt num_, den_;

    void normalize() {
        if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
        if (den_.is_negative()) { num_ = -num_; den_ = -den_; }
        BigInt g = BigInt::gcd(num_, den_);
        if (!g.is_one() && !g.is_zero()) { num_ = num_ / g; den_ = den_ / g; }
        if (num_.is_zero()) den_ = BigInt(1);
    }
};

inline std::string to_string(const Rational& v) { return v.to_string(); }

}  // namespace quatdom
