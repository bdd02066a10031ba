#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <utility>

#include "mafia/errors.hpp"

// Exact rational arithmetic for the drift identities and the DP oracle.
//
// Backed by GMP. ExactRational is kept canonical at all times: denominator
// strictly positive, numerator/denominator coprime. The drift identities
// involve cancellations of degree-9 polynomial terms, so nothing here may
// round.

namespace mafia {

using BigInt = mpz_class;

class ExactRational {
public:
    ExactRational() : v_(0) {}
    ExactRational(long n) : v_(static_cast<signed long>(n)) {} // NOLINT(google-explicit-constructor)
    ExactRational(const BigInt& n) : v_(n) {}                  // NOLINT(google-explicit-constructor)

    ExactRational(const BigInt& num, const BigInt& den) {
        if (den == 0) throw DomainError("rational with zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    ExactRational(long num, long den) : ExactRational(BigInt(num), BigInt(den)) {}

    BigInt numerator() const { return v_.get_num(); }
    BigInt denominator() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    int sign() const { return sgn(v_); }

    double to_double() const { return v_.get_d(); }

    // "num/den", or just "num" when the denominator is 1.
    std::string str() const { return v_.get_str(); }

    friend ExactRational operator+(const ExactRational& a, const ExactRational& b) { return ExactRational(a.v_ + b.v_); }
    friend ExactRational operator-(const ExactRational& a, const ExactRational& b) { return ExactRational(a.v_ - b.v_); }
    friend ExactRational operator*(const ExactRational& a, const ExactRational& b) { return ExactRational(a.v_ * b.v_); }
    friend ExactRational operator/(const ExactRational& a, const ExactRational& b) {
        if (sgn(b.v_) == 0) throw DomainError("division by zero rational");
        return ExactRational(mpq_class(a.v_ / b.v_));
    }
    ExactRational operator-() const { return ExactRational(mpq_class(-v_)); }

    ExactRational& operator+=(const ExactRational& o) { v_ += o.v_; return *this; }
    ExactRational& operator-=(const ExactRational& o) { v_ -= o.v_; return *this; }
    ExactRational& operator*=(const ExactRational& o) { v_ *= o.v_; return *this; }
    ExactRational& operator/=(const ExactRational& o) { *this = *this / o; return *this; }

    friend bool operator==(const ExactRational& a, const ExactRational& b) { return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0; }
    friend bool operator!=(const ExactRational& a, const ExactRational& b) { return !(a == b); }
    friend bool operator<(const ExactRational& a, const ExactRational& b) { return cmp(a.v_, b.v_) < 0; }
    friend bool operator<=(const ExactRational& a, const ExactRational& b) { return cmp(a.v_, b.v_) <= 0; }
    friend bool operator>(const ExactRational& a, const ExactRational& b) { return cmp(a.v_, b.v_) > 0; }
    friend bool operator>=(const ExactRational& a, const ExactRational& b) { return cmp(a.v_, b.v_) >= 0; }

private:
    explicit ExactRational(mpq_class q) : v_(std::move(q)) {}
    mpq_class v_;
};

inline std::string to_string(const BigInt& n) { return n.get_str(); }

} // namespace mafia
