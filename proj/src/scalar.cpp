#include "gentle/scalar.hpp"

#include <cctype>

namespace gentle {

thread_local std::uint32_t Fp::p_ = 2;

bool Fp::is_prime(std::uint32_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

void Fp::set_modulus(std::uint32_t p) {
    if (!is_prime(p)) throw std::invalid_argument("field modulus " + std::to_string(p) + " is not prime");
    if (p > 2147483647u) throw std::invalid_argument("field modulus too large");
    p_ = p;
}

Fp Fp::inv() const {
    if (v_ == 0) throw std::domain_error("inverse of zero in F_p");
    long long a = v_, b = p_, x0 = 1, x1 = 0;
    while (b != 0) {
        long long q = a / b;
        long long t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
    }
    return Fp(x0);
}

template <> Fp parse_scalar<Fp>(const std::string& text) {
    auto slash = text.find('/');
    if (slash != std::string::npos)
        return parse_scalar<Fp>(text.substr(0, slash)) / parse_scalar<Fp>(text.substr(slash + 1));
    std::size_t used = 0;
    long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument("bad scalar '" + text + "'");
    return Fp(v);
}

template <> Rational parse_scalar<Rational>(const std::string& text) {
    for (char ch : text)
        if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+' || ch == '/'))
            throw std::invalid_argument("bad scalar '" + text + "'");
    std::string t = text;
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    Rational q;
    if (q.set_str(t, 10) != 0) throw std::invalid_argument("bad scalar '" + text + "'");
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}

template <> std::string field_name<Fp>() { return "F_" + std::to_string(Fp::modulus()); }
template <> std::string field_name<Rational>() { return "Q"; }

}  // namespace gentle
