#pragma once

// Bernoulli numbers, Eisenstein series, the Dedekind eta product and the
// graded ring of quasi-modular forms generated by E2, E4, E6.

#include <g2sew/series.hpp>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace g2sew {

/// B_0 .. B_kmax from z/(e^z - 1), by exact inversion of (e^z - 1)/z.
inline std::vector<Rational> bernoulli_numbers(int kmax) {
    if (kmax < 0) throw std::invalid_argument("bernoulli: negative index");
    std::vector<Rational> denom(static_cast<std::size_t>(kmax) + 1);
    for (int n = 0; n <= kmax; ++n) denom[static_cast<std::size_t>(n)] = ratio(1, factorial(static_cast<unsigned long>(n) + 1));
    const QSeries gen = inv(QSeries::from_coeffs(Var::z, denom, kmax));
    std::vector<Rational> out(static_cast<std::size_t>(kmax) + 1);
    for (int k = 0; k <= kmax; ++k) out[static_cast<std::size_t>(k)] = gen.coeff(k) * Rational(factorial(static_cast<unsigned long>(k)));
    return out;
}

inline Rational bernoulli(int k) { return bernoulli_numbers(k).back(); }

/// sigma_p(n) = sum of d^p over divisors d of n.
inline Integer divisor_power_sum(long n, unsigned long p) {
    Integer total = 0;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        Integer term;
        mpz_ui_pow_ui(term.get_mpz_t(), static_cast<unsigned long>(d), p);
        total += term;
        const long e = n / d;
        if (e != d) {
            mpz_ui_pow_ui(term.get_mpz_t(), static_cast<unsigned long>(e), p);
            total += term;
        }
    }
    return total;
}

/// E_k(q) = -B_k/k! + 2/(k-1)! sum_n n^(k-1) q^n/(1-q^n), truncated at q^trunc.
/// Identically zero for odd k.
inline QSeries eisenstein(int k, int trunc, Var v = Var::q) {
    if (k < 2) throw std::domain_error("eisenstein: weight must be >= 2");
    if (trunc < 0) throw std::invalid_argument("eisenstein: negative truncation");
    QSeries out(v, trunc);
    if (k % 2 != 0) return out;
    out.set(0, Rational(-bernoulli(k) / Rational(factorial(static_cast<unsigned long>(k)))));
    const Rational scale = ratio(2, factorial(static_cast<unsigned long>(k) - 1));
    for (int n = 1; n <= trunc; ++n) out.set(n, scale * Rational(divisor_power_sum(n, static_cast<unsigned long>(k) - 1)));
    return out;
}

/// eta(q) = q^(1/24) prod_{n>=1} (1 - q^n); the prefactor lives in the offset.
inline QSeries eta_normalized(int trunc, Var v = Var::q) {
    if (trunc < 0) throw std::invalid_argument("eta: negative truncation");
    QSeries out = QSeries::constant(v, Rational(1), trunc);
    for (int n = 1; n <= trunc; ++n) {
        QSeries factor = QSeries::constant(v, Rational(1), trunc);
        factor.set(n, Rational(-1));
        out = (out * factor).truncated(trunc);
    }
    return out.with_offset(Rational(1, 24));
}

// ---------------------------------------------------------------------------

namespace detail {

/// Solves the (possibly overdetermined) system rows * x = rhs exactly.
/// Returns nullopt when inconsistent; throws when the solution is not unique.
inline std::optional<std::vector<Rational>> solve_exact(std::vector<std::vector<Rational>> rows,
                                                        std::vector<Rational> rhs, std::size_t unknowns) {
    const std::size_t m = rows.size();
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < unknowns && r < m; ++c) {
        std::size_t p = r;
        while (p < m && sgn(rows[p][c]) == 0) ++p;
        if (p == m) continue;
        std::swap(rows[p], rows[r]);
        std::swap(rhs[p], rhs[r]);
        const Rational piv = rows[r][c];
        for (std::size_t j = c; j < unknowns; ++j) rows[r][j] /= piv;
        rhs[r] /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || sgn(rows[i][c]) == 0) continue;
            const Rational f = rows[i][c];
            for (std::size_t j = c; j < unknowns; ++j) rows[i][j] -= f * rows[r][j];
            rhs[i] -= f * rhs[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < m; ++i)
        if (sgn(rhs[i]) != 0) return std::nullopt;
    if (r < unknowns) throw series_error("linear system underdetermined at this truncation order");
    std::vector<Rational> x(unknowns);
    for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = rhs[i];
    return x;
}

}  // namespace detail

/// A polynomial in E2, E4, E6: keys are exponent triples (a, b, c).
class QuasiModularPoly {
public:
    using Monomial = std::array<int, 3>;

    QuasiModularPoly() = default;

    void set(const Monomial& m, const Rational& c) {
        if (sgn(c) == 0)
            coeffs_.erase(m);
        else
            coeffs_[m] = c;
    }
    Rational coeff(const Monomial& m) const {
        auto it = coeffs_.find(m);
        return it == coeffs_.end() ? Rational(0) : it->second;
    }
    const std::map<Monomial, Rational>& terms() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    static int weight_of(const Monomial& m) { return 2 * m[0] + 4 * m[1] + 6 * m[2]; }

    /// Every monomial of the given weight, ordered with the largest E2 power first.
    static std::vector<Monomial> basis(int weight) {
        std::vector<Monomial> out;
        if (weight < 0 || weight % 2 != 0) return out;
        for (int a = weight / 2; a >= 0; --a)
            for (int b = (weight - 2 * a) / 4; b >= 0; --b) {
                const int rest = weight - 2 * a - 4 * b;
                if (rest % 6 == 0) out.push_back({a, b, rest / 6});
            }
        return out;
    }

    /// True when every monomial has weight w (the zero polynomial is homogeneous of any weight).
    bool is_homogeneous(int w) const {
        for (const auto& [m, c] : coeffs_)
            if (weight_of(m) != w) return false;
        return true;
    }

    QSeries to_series(int trunc, Var v = Var::q) const {
        QSeries out(v, trunc);
        if (coeffs_.empty()) return out;
        const QSeries e2 = eisenstein(2, trunc, v), e4 = eisenstein(4, trunc, v), e6 = eisenstein(6, trunc, v);
        for (const auto& [m, c] : coeffs_) {
            QSeries term = QSeries::constant(v, c, trunc);
            term = term * pow(e2, static_cast<unsigned>(m[0])) * pow(e4, static_cast<unsigned>(m[1])) *
                   pow(e6, static_cast<unsigned>(m[2]));
            out = out + term.truncated(trunc);
        }
        return out;
    }

    std::string to_string() const {
        if (coeffs_.empty()) return "0";
        std::string out;
        // Descending E2 power reads naturally (E2^2 before E4).
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            const auto& [m, c] = *it;
            std::string mono;
            const char* names[3] = {"E2", "E4", "E6"};
            for (int i = 0; i < 3; ++i) {
                if (m[static_cast<std::size_t>(i)] == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += names[i];
                if (m[static_cast<std::size_t>(i)] > 1) mono += "^" + std::to_string(m[static_cast<std::size_t>(i)]);
            }
            Rational mag = abs(c);
            std::string term;
            if (mono.empty())
                term = g2sew::to_string(mag);
            else if (mag == 1)
                term = mono;
            else
                term = g2sew::to_string(mag) + "*" + mono;
            if (out.empty())
                out = (sgn(c) < 0 ? "-" : "") + term;
            else
                out += (sgn(c) < 0 ? " - " : " + ") + term;
        }
        return out;
    }

    friend bool operator==(const QuasiModularPoly& a, const QuasiModularPoly& b) { return a.coeffs_ == b.coeffs_; }

private:
    std::map<Monomial, Rational> coeffs_;
};

class not_quasimodular_error : public series_error {
public:
    not_quasimodular_error() : series_error("not quasi-modular of stated weight within truncation") {}
};

/// Expresses s in the monomial basis of the given weights by an exact linear
/// solve against the q-expansions.
inline QuasiModularPoly to_quasimodular(const QSeries& s, const std::vector<int>& weights) {
    if (s.offset() != 0) throw not_quasimodular_error();
    std::vector<QuasiModularPoly::Monomial> monos;
    for (int w : weights) {
        if (w < 0 || w % 2 != 0) throw std::invalid_argument("quasi-modular weight must be even and >= 0");
        for (const auto& m : QuasiModularPoly::basis(w)) monos.push_back(m);
    }
    QuasiModularPoly out;
    if (monos.empty()) {
        if (!s.is_zero()) throw not_quasimodular_error();
        return out;
    }
    const int trunc = s.trunc();
    if (trunc == kExact) throw series_error("to_quasimodular needs a truncated series");
    if (trunc + 1 < static_cast<int>(monos.size())) throw series_error("insufficient q-order for quasi-modular solve");
    const QSeries e2 = eisenstein(2, trunc, s.var()), e4 = eisenstein(4, trunc, s.var()),
                  e6 = eisenstein(6, trunc, s.var());
    std::vector<QSeries> columns;
    for (const auto& m : monos)
        columns.push_back((pow(e2, static_cast<unsigned>(m[0])) * pow(e4, static_cast<unsigned>(m[1])) *
                           pow(e6, static_cast<unsigned>(m[2])))
                              .truncated(trunc));
    std::vector<std::vector<Rational>> rows(static_cast<std::size_t>(trunc) + 1,
                                            std::vector<Rational>(monos.size()));
    std::vector<Rational> rhs(static_cast<std::size_t>(trunc) + 1);
    for (int n = 0; n <= trunc; ++n) {
        for (std::size_t j = 0; j < monos.size(); ++j) rows[static_cast<std::size_t>(n)][j] = columns[j].coeff(n);
        rhs[static_cast<std::size_t>(n)] = s.coeff(n);
    }
    const auto sol = detail::solve_exact(std::move(rows), std::move(rhs), monos.size());
    if (!sol) throw not_quasimodular_error();
    for (std::size_t j = 0; j < monos.size(); ++j) out.set(monos[j], (*sol)[j]);
    return out;
}

inline QuasiModularPoly to_quasimodular(const QSeries& s, int weight) {
    return to_quasimodular(s, std::vector<int>{weight});
}

/// Mixed-weight decomposition using every weight 0, 2, ..., max_weight.
inline QuasiModularPoly to_quasimodular_upto(const QSeries& s, int max_weight) {
    std::vector<int> ws;
    for (int w = 0; w <= max_weight; w += 2) ws.push_back(w);
    return to_quasimodular(s, ws);
}

}  // namespace g2sew
