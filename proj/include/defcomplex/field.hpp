#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "rational.hpp"
#include "zp.hpp"

namespace defc {

// Per-scalar field descriptor. Everything that needs to mint constants
// or parse literals carries one of these by value; for Q it is stateless,
// for F_p it holds the modulus.
template <class K>
struct FieldCtx;

template <>
struct FieldCtx<Rat> {
    Rat zero() const { return Rat(); }
    Rat one() const { return Rat(1); }
    Rat from_int(long long v) const { return Rat(static_cast<long>(v)); }
    Rat parse(const std::string& s) const { return Rat::parse(s); }
    std::string describe() const { return "Q"; }
    // Characteristic-zero field: only 0 is a multiple of char.
    bool char_divides(std::uint64_t n) const { return n == 0; }
    friend bool operator==(const FieldCtx&, const FieldCtx&) { return true; }
    friend bool operator!=(const FieldCtx& a, const FieldCtx& b) { return !(a == b); }
};

template <>
struct FieldCtx<Zp> {
    std::uint64_t p = 0;

    FieldCtx() = default;
    explicit FieldCtx(std::uint64_t prime) : p(prime) {
        if (!is_prime_u64(p)) throw std::invalid_argument("FieldCtx: modulus " + std::to_string(p) + " is not prime");
    }

    Zp zero() const { return Zp(0, p); }
    Zp one() const { return Zp(1, p); }
    Zp from_int(long long v) const { return Zp::from_int(v, p); }
    Zp parse(const std::string& s) const {
        if (s.empty()) throw std::invalid_argument("Zp: empty literal");
        std::size_t pos = 0;
        long long v = 0;
        try {
            v = std::stoll(s, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("Zp: bad literal '" + s + "'");
        }
        if (pos != s.size()) throw std::invalid_argument("Zp: bad literal '" + s + "'");
        return Zp::from_int(v, p);
    }
    std::string describe() const { return "F" + std::to_string(p); }
    bool char_divides(std::uint64_t n) const { return n % p == 0; }
    friend bool operator==(const FieldCtx& a, const FieldCtx& b) { return a.p == b.p; }
    friend bool operator!=(const FieldCtx& a, const FieldCtx& b) { return !(a == b); }
};

}  // namespace defc
