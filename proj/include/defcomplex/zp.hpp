#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace defc {

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod_u64(r, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return r;
}

}  // namespace detail

// Deterministic Miller-Rabin for 64-bit inputs; the listed bases cover
// the full range.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = detail::powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = detail::mulmod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

// Prime-field element with runtime modulus. A default-constructed value
// is a modulus-free zero that adopts the modulus of the other operand;
// accumulator loops can start from K{} without field plumbing.
class Zp {
  public:
    Zp() = default;
    Zp(std::uint64_t value, std::uint64_t p) : mod_(p) {
        if (p == 0) throw std::invalid_argument("Zp: zero modulus");
        val_ = value % p;
    }

    static Zp from_int(long long v, std::uint64_t p) {
        if (p == 0) throw std::invalid_argument("Zp: zero modulus");
        long long r = v % static_cast<long long>(p);
        if (r < 0) r += static_cast<long long>(p);
        return Zp(static_cast<std::uint64_t>(r), p);
    }

    std::uint64_t residue() const { return val_; }
    std::uint64_t modulus() const { return mod_; }
    bool is_zero() const { return val_ == 0; }

    std::string str() const { return std::to_string(val_); }

    Zp operator-() const {
        if (val_ == 0) return *this;
        return Zp(mod_ - val_, mod_);
    }
    Zp& operator+=(const Zp& o) {
        std::uint64_t m = merged(o);
        if (m == 0) return *this;
        std::uint64_t s = val_ + o.val_;
        if (s >= m) s -= m;
        val_ = s;
        mod_ = m;
        return *this;
    }
    Zp& operator-=(const Zp& o) { return *this += -o; }
    Zp& operator*=(const Zp& o) {
        std::uint64_t m = merged(o);
        if (m == 0) return *this;
        val_ = detail::mulmod_u64(val_, o.val_, m);
        mod_ = m;
        return *this;
    }
    Zp inv() const {
        if (val_ == 0) throw std::domain_error("Zp: inverse of zero");
        // Fermat; moduli are validated prime on entry.
        return Zp(detail::powmod_u64(val_, mod_ - 2, mod_), mod_);
    }
    Zp& operator/=(const Zp& o) {
        std::uint64_t m = merged(o);
        if (o.val_ == 0 || (o.mod_ == 0 && m == 0)) throw std::domain_error("Zp: division by zero");
        return *this *= o.inv();
    }

    friend Zp operator+(Zp a, const Zp& b) { return a += b; }
    friend Zp operator-(Zp a, const Zp& b) { return a -= b; }
    friend Zp operator*(Zp a, const Zp& b) { return a *= b; }
    friend Zp operator/(Zp a, const Zp& b) { return a /= b; }
    friend bool operator==(const Zp& a, const Zp& b) {
        if (a.mod_ != 0 && b.mod_ != 0 && a.mod_ != b.mod_)
            throw std::invalid_argument("Zp: comparing values over different moduli");
        return a.val_ == b.val_;
    }
    friend bool operator!=(const Zp& a, const Zp& b) { return !(a == b); }

  private:
    // Resulting modulus for a binary op; 0 only when both sides are
    // modulus-free (then both are zero and the result stays zero).
    std::uint64_t merged(const Zp& o) const {
        if (mod_ == 0) return o.mod_;
        if (o.mod_ == 0) return mod_;
        if (mod_ != o.mod_) throw std::invalid_argument("Zp: mixing moduli");
        return mod_;
    }

    std::uint64_t val_ = 0;
    std::uint64_t mod_ = 0;
};

}  // namespace defc
