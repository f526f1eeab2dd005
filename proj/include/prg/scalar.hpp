#pragma once

#include <gmpxx.h>

#include <cstdlib>
#include <ostream>
#include <string>

#include "prg/errors.hpp"

namespace prg {

// Exact rational number.  Thin wrapper around GMP's mpq_class that keeps the
// value canonical (lowest terms, positive denominator) after every operation,
// so equality is plain value equality and serialization is deterministic.
class Scalar {
  public:
    Scalar() : v_(0) {}
    Scalar(long n) : v_(n) {} // NOLINT: implicit by design, 3 * x reads naturally
    Scalar(long num, long den) : v_(num, den) {
        if (den == 0) throw precondition_error("Scalar: zero denominator");
        v_.canonicalize();
    }
    explicit Scalar(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    // Accepts "p", "-p", "p/q" with optional sign; base 10 only.
    static Scalar from_string(const std::string& s) {
        if (s.empty()) throw parse_error("Scalar: empty string");
        mpq_class q;
        if (q.set_str(s, 10) != 0)
            throw parse_error("Scalar: cannot parse '" + s + "' as a rational");
        if (q.get_den() == 0) throw parse_error("Scalar: zero denominator in '" + s + "'");
        q.canonicalize();
        return Scalar(q);
    }

    // Canonical form: "p" for integers, "p/q" otherwise, '-' in front.
    std::string str() const { return v_.get_str(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    Scalar operator-() const { return Scalar(mpq_class(-v_)); }
    Scalar& operator+=(const Scalar& o) { v_ += o.v_; return *this; }
    Scalar& operator-=(const Scalar& o) { v_ -= o.v_; return *this; }
    Scalar& operator*=(const Scalar& o) { v_ *= o.v_; return *this; }
    Scalar& operator/=(const Scalar& o) {
        if (o.is_zero()) throw precondition_error("Scalar: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return a.v_ != b.v_; }
    friend bool operator<(const Scalar& a, const Scalar& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Scalar& a, const Scalar& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Scalar& a, const Scalar& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Scalar& a, const Scalar& b) { return a.v_ >= b.v_; }

    Scalar inverse() const {
        if (is_zero()) throw precondition_error("Scalar: inverse of zero");
        return Scalar(mpq_class(1) / v_);
    }

    // Integer power; negative exponents invert (and so reject zero).
    Scalar pow(long e) const {
        Scalar base = e < 0 ? inverse() : *this;
        unsigned long n = static_cast<unsigned long>(e < 0 ? -e : e);
        Scalar acc(1);
        while (n > 0) {
            if (n & 1) acc *= base;
            base *= base;
            n >>= 1;
        }
        return acc;
    }

    const mpq_class& raw() const { return v_; }

    friend std::ostream& operator<<(std::ostream& os, const Scalar& s) {
        return os << s.v_;
    }

  private:
    mpq_class v_;
};

} // namespace prg
