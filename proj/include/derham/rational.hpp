#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

#include "derham/error.hpp"

namespace derham {

// Exact rational number. mpq_class keeps values in lowest terms with a
// positive denominator as long as arithmetic goes through the mpq layer.
using Rational = mpq_class;

Rational rational_pow(const Rational& base, long exp);

// Integer square root test: returns sqrt(n) when n is a perfect square.
std::optional<mpz_class> exact_sqrt(const mpz_class& n);

// Rational square root, when it exists.
std::optional<Rational> rational_sqrt(const Rational& x);

std::string rational_to_string(const Rational& x);

// A complex number with rational real and imaginary parts. Supplies the
// imaginary unit needed for Q = i while keeping all arithmetic exact.
class GaussianRational {
  public:
    GaussianRational() : re_(0), im_(0) {}
    GaussianRational(long v) : re_(v), im_(0) {} // NOLINT(google-explicit-constructor)
    explicit GaussianRational(Rational re, Rational im = 0)
        : re_(std::move(re)), im_(std::move(im)) {
        // mpq_class(n, d) does not canonicalize on its own.
        re_.canonicalize();
        im_.canonicalize();
    }

    static GaussianRational i() { return GaussianRational(Rational(0), Rational(1)); }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_real() const { return im_ == 0; }

    GaussianRational operator-() const { return GaussianRational(-re_, -im_); }

    GaussianRational operator+(const GaussianRational& o) const {
        return GaussianRational(re_ + o.re_, im_ + o.im_);
    }
    GaussianRational operator-(const GaussianRational& o) const {
        return GaussianRational(re_ - o.re_, im_ - o.im_);
    }
    GaussianRational operator*(const GaussianRational& o) const {
        return GaussianRational(re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_);
    }

    GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
    GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
    GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }

    GaussianRational inverse() const {
        if (is_zero()) throw error("division by zero GaussianRational");
        Rational n = re_ * re_ + im_ * im_;
        return GaussianRational(re_ / n, -im_ / n);
    }
    GaussianRational operator/(const GaussianRational& o) const { return *this * o.inverse(); }

    GaussianRational conj() const { return GaussianRational(re_, -im_); }

    GaussianRational pow(long e) const;

    bool operator==(const GaussianRational& o) const { return re_ == o.re_ && im_ == o.im_; }
    bool operator!=(const GaussianRational& o) const { return !(*this == o); }

    // Total order used only for canonical term ordering in renderers.
    bool operator<(const GaussianRational& o) const {
        if (re_ != o.re_) return re_ < o.re_;
        return im_ < o.im_;
    }

    // Square root in Q(i), when one exists.
    std::optional<GaussianRational> sqrt() const;

    std::string to_string() const;

  private:
    Rational re_, im_;
};

} // namespace derham
