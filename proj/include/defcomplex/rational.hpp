#pragma once

#include <gmpxx.h>

#include <cctype>
#include <stdexcept>
#include <string>
#include <utility>

namespace defc {

// Arbitrary-precision rational scalar, GMP-backed. Values are kept
// canonical at all times: fully reduced, denominator > 0. Division by
// zero throws instead of tripping GMP's SIGFPE.
class Rat {
  public:
    Rat() = default;
    Rat(long n) : v_(n) {}
    Rat(long num, long den) {
        if (den == 0) throw std::domain_error("Rat: zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }

    // Accepts "n" and "n/d" in base 10, nothing else.
    static Rat parse(const std::string& s) {
        if (s.empty()) throw std::invalid_argument("Rat: empty literal");
        for (char ch : s)
            if (!std::isdigit(static_cast<unsigned char>(ch)) && ch != '-' && ch != '/')
                throw std::invalid_argument("Rat: bad literal '" + s + "'");
        Rat r;
        if (mpq_set_str(r.v_.get_mpq_t(), s.c_str(), 10) != 0)
            throw std::invalid_argument("Rat: bad literal '" + s + "'");
        if (sgn(r.v_.get_den()) == 0) throw std::domain_error("Rat: zero denominator in '" + s + "'");
        r.v_.canonicalize();
        return r;
    }

    // "p/q" reduced with q > 0, "/1" omitted. GMP's get_str does exactly this.
    std::string str() const { return v_.get_str(); }

    bool is_zero() const { return sgn(v_) == 0; }

    Rat operator-() const {
        Rat r;
        r.v_ = -v_;
        return r;
    }
    Rat& operator+=(const Rat& o) {
        v_ += o.v_;
        return *this;
    }
    Rat& operator-=(const Rat& o) {
        v_ -= o.v_;
        return *this;
    }
    Rat& operator*=(const Rat& o) {
        v_ *= o.v_;
        return *this;
    }
    Rat& operator/=(const Rat& o) {
        if (o.is_zero()) throw std::domain_error("Rat: division by zero");
        v_ /= o.v_;
        return *this;
    }
    Rat inv() const {
        if (is_zero()) throw std::domain_error("Rat: inverse of zero");
        Rat r;
        r.v_ = 1 / v_;
        return r;
    }

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
    friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }

  private:
    mpq_class v_;
};

}  // namespace defc
