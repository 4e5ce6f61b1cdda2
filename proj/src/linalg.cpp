#include "gentle/linalg.hpp"

namespace gentle {

std::optional<std::vector<std::pair<Poly<Fp>, int>>> factor_fp(const Poly<Fp>& f, std::uint64_t budget) {
    if (f.zero()) throw std::invalid_argument("cannot factor the zero polynomial");
    Poly<Fp> rest = f.monic();
    std::vector<std::pair<Poly<Fp>, int>> out;
    const std::uint64_t p = Fp::modulus();
    std::uint64_t spent = 0;
    for (int d = 1; 2 * d <= rest.degree(); ++d) {
        std::uint64_t count = 1;
        for (int i = 0; i < d; ++i) {
            count *= p;
            if (count > budget) return std::nullopt;
        }
        for (std::uint64_t code = 0; code < count && 2 * d <= rest.degree(); ++code) {
            if (++spent > budget) return std::nullopt;
            std::vector<Fp> c(d + 1, Fp(0));
            std::uint64_t k = code;
            for (int i = 0; i < d; ++i, k /= p) c[i] = Fp(static_cast<long long>(k % p));
            c[d] = Fp(1);
            Poly<Fp> q(c);
            int e = 0;
            for (;;) {
                auto [quot, rem] = divmod(rest, q);
                if (!rem.zero()) break;
                rest = quot;
                ++e;
            }
            if (e) out.emplace_back(q, e);
        }
    }
    if (rest.degree() >= 1) {
        bool merged = false;
        for (auto& [q, e] : out)
            if (q == rest) ++e, merged = true;
        if (!merged) out.emplace_back(rest, 1);
    }
    return out;
}

std::optional<std::vector<std::pair<Poly<Fp>, int>>> elementary_divisors(const Matrix<Fp>& a) {
    std::vector<std::pair<Poly<Fp>, int>> out;
    for (const auto& f : invariant_factors(a)) {
        auto fac = factor_fp(f);
        if (!fac) return std::nullopt;
        out.insert(out.end(), fac->begin(), fac->end());
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.first.degree() != y.first.degree()) return x.first.degree() < y.first.degree();
        if (x.first.c != y.first.c) {
            for (std::size_t i = 0; i < x.first.c.size(); ++i)
                if (x.first.c[i] != y.first.c[i]) return x.first.c[i] < y.first.c[i];
        }
        return x.second < y.second;
    });
    return out;
}

}  // namespace gentle
