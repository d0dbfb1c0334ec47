#include "derham/rational.hpp"

namespace derham {

Rational rational_pow(const Rational& base, long exp) {
    if (exp == 0) return Rational(1);
    if (base == 0) {
        if (exp < 0) throw error("zero raised to a negative power");
        return Rational(0);
    }
    bool neg = exp < 0;
    unsigned long k = neg ? static_cast<unsigned long>(-exp) : static_cast<unsigned long>(exp);
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), k);
    mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), k);
    out.canonicalize();
    if (neg) out = 1 / out;
    return out;
}

std::optional<mpz_class> exact_sqrt(const mpz_class& n) {
    if (n < 0) return std::nullopt;
    mpz_class root, rem;
    mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t());
    if (rem != 0) return std::nullopt;
    return root;
}

std::optional<Rational> rational_sqrt(const Rational& x) {
    if (x < 0) return std::nullopt;
    auto num = exact_sqrt(x.get_num());
    if (!num) return std::nullopt;
    auto den = exact_sqrt(x.get_den());
    if (!den) return std::nullopt;
    Rational out(*num, *den);
    out.canonicalize();
    return out;
}

std::string rational_to_string(const Rational& x) {
    return x.get_str();
}

GaussianRational GaussianRational::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    GaussianRational acc(1);
    GaussianRational base = *this;
    unsigned long k = static_cast<unsigned long>(e);
    while (k > 0) {
        if (k & 1) acc *= base;
        base *= base;
        k >>= 1;
    }
    return acc;
}

std::optional<GaussianRational> GaussianRational::sqrt() const {
    if (im_ == 0) {
        if (re_ >= 0) {
            auto s = rational_sqrt(re_);
            if (s) return GaussianRational(*s, Rational(0));
            return std::nullopt;
        }
        auto s = rational_sqrt(-re_);
        if (s) return GaussianRational(Rational(0), *s);
        return std::nullopt;
    }
    // (u + v i)^2 = re + im i  =>  u^2 - v^2 = re, 2uv = im.
    auto norm_root = rational_sqrt(re_ * re_ + im_ * im_);
    if (!norm_root) return std::nullopt;
    auto u = rational_sqrt((re_ + *norm_root) / 2);
    if (!u || *u == 0) return std::nullopt;
    Rational v = im_ / (2 * *u);
    GaussianRational cand(*u, v);
    if (cand * cand == *this) return cand;
    return std::nullopt;
}

std::string GaussianRational::to_string() const {
    if (im_ == 0) return rational_to_string(re_);
    std::string imag;
    if (im_ == 1) {
        imag = "I";
    } else if (im_ == -1) {
        imag = "-I";
    } else {
        imag = rational_to_string(im_) + "*I";
    }
    if (re_ == 0) return imag;
    std::string s = rational_to_string(re_);
    if (im_ > 0) {
        s += "+" + (im_ == 1 ? std::string("I") : rational_to_string(im_) + "*I");
    } else {
        s += "-" + (im_ == -1 ? std::string("I") : rational_to_string(-im_) + "*I");
    }
    return s;
}

} // namespace derham
