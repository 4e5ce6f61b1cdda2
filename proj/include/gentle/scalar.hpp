#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace gentle {

// Element of the prime field F_p. The modulus is per-thread state so that
// matrices stay plain arrays of 32-bit words.
class Fp {
public:
    Fp() = default;
    Fp(long long x) {
        const long long p = modulus();
        x %= p;
        if (x < 0) x += p;
        v_ = static_cast<std::uint32_t>(x);
    }

    static std::uint32_t modulus() { return p_; }
    static void set_modulus(std::uint32_t p);
    static bool is_prime(std::uint32_t p);

    std::uint32_t value() const { return v_; }

    Fp operator+(Fp o) const {
        std::uint64_t s = std::uint64_t(v_) + o.v_;
        if (s >= p_) s -= p_;
        return raw(static_cast<std::uint32_t>(s));
    }
    Fp operator-(Fp o) const { return raw(v_ >= o.v_ ? v_ - o.v_ : v_ + p_ - o.v_); }
    Fp operator-() const { return raw(v_ == 0 ? 0 : p_ - v_); }
    Fp operator*(Fp o) const {
        return raw(static_cast<std::uint32_t>(std::uint64_t(v_) * o.v_ % p_));
    }
    Fp operator/(Fp o) const { return *this * o.inv(); }
    Fp& operator+=(Fp o) { return *this = *this + o; }
    Fp& operator-=(Fp o) { return *this = *this - o; }
    Fp& operator*=(Fp o) { return *this = *this * o; }
    Fp& operator/=(Fp o) { return *this = *this / o; }
    bool operator==(Fp o) const { return v_ == o.v_; }
    bool operator!=(Fp o) const { return v_ != o.v_; }
    bool operator<(Fp o) const { return v_ < o.v_; }

    Fp inv() const;

private:
    static Fp raw(std::uint32_t v) {
        Fp f;
        f.v_ = v;
        return f;
    }
    std::uint32_t v_ = 0;
    static thread_local std::uint32_t p_;
};

// Sets the F_p modulus for the current thread and restores the previous one.
class FpContext {
public:
    explicit FpContext(std::uint32_t p) : saved_(Fp::modulus()) { Fp::set_modulus(p); }
    ~FpContext() { Fp::set_modulus(saved_); }
    FpContext(const FpContext&) = delete;
    FpContext& operator=(const FpContext&) = delete;

private:
    std::uint32_t saved_;
};

using Rational = mpq_class;

inline bool is_zero(const Fp& a) { return a.value() == 0; }
inline bool is_zero(const Rational& a) { return sgn(a) == 0; }

inline Fp inverse(const Fp& a) { return a.inv(); }
inline Rational inverse(const Rational& a) {
    if (is_zero(a)) throw std::domain_error("inverse of zero");
    return Rational(1) / a;
}

inline std::string to_string(const Fp& a) { return std::to_string(a.value()); }
inline std::string to_string(const Rational& a) { return a.get_str(); }

template <class S> S parse_scalar(const std::string& text);
template <> Fp parse_scalar<Fp>(const std::string& text);
template <> Rational parse_scalar<Rational>(const std::string& text);

template <class S> std::string field_name();
template <> std::string field_name<Fp>();
template <> std::string field_name<Rational>();

// Number of elements of the field, 0 for an infinite field.
template <class S> std::uint64_t field_order();
template <> inline std::uint64_t field_order<Fp>() { return Fp::modulus(); }
template <> inline std::uint64_t field_order<Rational>() { return 0; }

// Deterministic enumeration of field elements: 0,1,...,p-1 for F_p and
// 0,1,-1,2,-2,... for Q.
template <class S> S field_element(std::uint64_t k);
template <> inline Fp field_element<Fp>(std::uint64_t k) { return Fp(static_cast<long long>(k % Fp::modulus())); }
template <> inline Rational field_element<Rational>(std::uint64_t k) {
    long m = static_cast<long>((k + 1) / 2);
    return Rational(k % 2 == 1 ? m : -m);
}

}  // namespace gentle
