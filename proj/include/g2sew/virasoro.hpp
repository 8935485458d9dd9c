#pragma once

// The Virasoro vacuum module with symbolic central charge C.
//
// States are finite combinations of PBW monomials L_{-k1} ... L_{-km} |0>
// with k1 >= ... >= km >= 2 (leftmost mode first).  Coefficients are
// polynomials in C.  The same representation serves for square-bracket
// descendants L[-k1] ... L[-km] |0>, whose algebra is identical.

#include <g2sew/series.hpp>

#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace g2sew {

/// Weakly decreasing parts, each >= 2.  The empty partition is the vacuum.
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (parts_[i] < 2) throw std::invalid_argument("partition parts must be >= 2");
            if (i > 0 && parts_[i] > parts_[i - 1]) throw std::invalid_argument("partition parts must be weakly decreasing");
        }
    }

    const std::vector<int>& parts() const { return parts_; }
    int length() const { return static_cast<int>(parts_.size()); }
    int weight() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }
    bool empty() const { return parts_.empty(); }

    /// Drops the leftmost mode.
    Partition tail() const { return Partition(std::vector<int>(parts_.begin() + 1, parts_.end()), Unchecked{}); }

    std::string to_string() const {
        if (parts_.empty()) return "vacuum";
        std::string out;
        for (int k : parts_) out += "L[-" + std::to_string(k) + "]";
        return out;
    }

    friend bool operator==(const Partition&, const Partition&) = default;
    friend auto operator<=>(const Partition& a, const Partition& b) {
        if (a.weight() != b.weight()) return a.weight() <=> b.weight();
        return a.parts_ <=> b.parts_;
    }

    /// Every partition of n into parts >= 2, lexicographically descending.
    static std::vector<Partition> all_of_weight(int n) {
        std::vector<Partition> out;
        std::vector<int> cur;
        std::function<void(int, int)> rec = [&](int remaining, int max_part) {
            if (remaining == 0) {
                out.push_back(Partition(cur, Unchecked{}));
                return;
            }
            for (int k = std::min(remaining, max_part); k >= 2; --k) {
                cur.push_back(k);
                rec(remaining - k, k);
                cur.pop_back();
            }
        };
        if (n >= 0) rec(n, n);
        return out;
    }

private:
    struct Unchecked {};
    Partition(std::vector<int> parts, Unchecked) : parts_(std::move(parts)) {}
    std::vector<int> parts_;
};

/// Finite linear combination of PBW monomials with C-polynomial coefficients.
class VirState {
public:
    VirState() = default;

    static VirState vacuum() { return monomial(Partition{}, CPolynomial(Rational(1))); }
    static VirState monomial(const Partition& p, const CPolynomial& c) {
        VirState v;
        v.add(p, c);
        return v;
    }

    const std::map<Partition, CPolynomial>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    CPolynomial coeff(const Partition& p) const {
        auto it = terms_.find(p);
        return it == terms_.end() ? CPolynomial{} : it->second;
    }

    void add(const Partition& p, const CPolynomial& c) {
        if (c.is_exact_zero()) return;
        auto [it, inserted] = terms_.emplace(p, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_exact_zero()) terms_.erase(it);
        }
    }

    /// The common weight of all monomials, or -1 if mixed; 0 for the zero state.
    int homogeneous_weight() const {
        int w = -2;
        for (const auto& [p, c] : terms_) {
            if (w == -2)
                w = p.weight();
            else if (w != p.weight())
                return -1;
        }
        return w == -2 ? 0 : w;
    }

    VirState& operator+=(const VirState& o) {
        for (const auto& [p, c] : o.terms_) add(p, c);
        return *this;
    }
    friend VirState operator+(VirState a, const VirState& b) { return a += b; }
    friend VirState operator-(VirState a, const VirState& b) {
        for (const auto& [p, c] : b.terms_) a.add(p, -c);
        return a;
    }
    friend VirState operator*(const CPolynomial& c, const VirState& v) {
        VirState out;
        for (const auto& [p, d] : v.terms_) out.add(p, c * d);
        return out;
    }
    friend VirState operator*(const Rational& r, const VirState& v) { return CPolynomial(r) * v; }

    /// Components of weight <= max_weight.
    VirState truncated(int max_weight) const {
        VirState out;
        for (const auto& [p, c] : terms_)
            if (p.weight() <= max_weight) out.terms_.emplace(p, c);
        return out;
    }
    VirState weight_component(int w) const {
        VirState out;
        for (const auto& [p, c] : terms_)
            if (p.weight() == w) out.terms_.emplace(p, c);
        return out;
    }

    friend bool operator==(const VirState&, const VirState&) = default;

private:
    std::map<Partition, CPolynomial> terms_;
};

/// Normal orders L_n acting on PBW states via
///   [L_m, L_{-k}] = (m + k) L_{m-k} + C (m^3 - m)/12 delta_{m,k},
/// with L_r |0> = 0 for r >= -1.  Results are memoized per (n, monomial);
/// an instance is meant for a single computation session.
class NormalOrderer {
public:
    VirState apply(int n, const VirState& v) {
        VirState out;
        for (const auto& [p, c] : v.terms()) out += c * apply_monomial(n, p);
        return out;
    }

    const VirState& apply_monomial(int n, const Partition& p) {
        const auto key = std::make_pair(n, p);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        VirState result = compute(n, p);
        return memo_.emplace(key, std::move(result)).first->second;
    }

private:
    std::map<std::pair<int, Partition>, VirState> memo_;

    VirState compute(int n, const Partition& p) {
        if (p.empty()) {
            if (n <= -2) return VirState::monomial(Partition({-n}), CPolynomial(Rational(1)));
            return {};
        }
        const int k1 = p.parts().front();
        if (n <= -2 && -n >= k1) {
            std::vector<int> parts{-n};
            parts.insert(parts.end(), p.parts().begin(), p.parts().end());
            return VirState::monomial(Partition(std::move(parts)), CPolynomial(Rational(1)));
        }
        const Partition rest = p.tail();
        VirState out;
        // [L_n, L_{-k1}] rest
        if (n + k1 != 0) out += Rational(n + k1) * apply_monomial(n - k1, rest);
        if (n == k1) {
            const CPolynomial central = CPolynomial::monomial(1, make_rational(static_cast<long>(n) * n * n - n, 12));
            out += central * VirState::monomial(rest, CPolynomial(Rational(1)));
        }
        // L_{-k1} (L_n rest)
        const VirState inner = apply_monomial(n, rest);
        for (const auto& [q, c] : inner.terms()) out += c * apply_monomial(-k1, q);
        return out;
    }
};

/// L_n v in PBW form.
inline VirState apply_mode(int n, const VirState& v) {
    NormalOrderer orderer;
    return orderer.apply(n, v);
}

/// alpha_1 .. alpha_max_i with exp(sum_i alpha_i z^(i+1) d/dz) z = e^z - 1.
inline std::vector<Rational> alpha_coefficients(int max_i) {
    if (max_i < 1) throw std::invalid_argument("alpha_coefficients: max_i must be >= 1");
    const int deg = max_i + 1;
    std::vector<Rational> alpha;
    // Applies D = sum_i alpha_i z^(i+1) d/dz to a polynomial truncated at z^deg.
    auto apply_d = [&](const std::vector<Rational>& f) {
        std::vector<Rational> out(static_cast<std::size_t>(deg) + 1);
        for (int m = 1; m <= deg; ++m) {
            if (sgn(f[static_cast<std::size_t>(m)]) == 0) continue;
            for (int i = 1; i <= static_cast<int>(alpha.size()) && m + i <= deg; ++i)
                out[static_cast<std::size_t>(m + i)] += alpha[static_cast<std::size_t>(i - 1)] * f[static_cast<std::size_t>(m)] * m;
        }
        return out;
    };
    for (int i = 1; i <= max_i; ++i) {
        alpha.push_back(Rational(0));
        std::vector<Rational> term(static_cast<std::size_t>(deg) + 1), total(static_cast<std::size_t>(deg) + 1);
        term[1] = 1;
        total[1] = 1;
        for (int n = 1; n <= deg; ++n) {
            term = apply_d(term);
            for (auto& t : term) t /= n;
            for (int m = 0; m <= deg; ++m) total[static_cast<std::size_t>(m)] += term[static_cast<std::size_t>(m)];
        }
        const Rational target = ratio(1, factorial(static_cast<unsigned long>(i) + 1));
        alpha.back() = target - total[static_cast<std::size_t>(i) + 1];
    }
    return alpha;
}

/// w_k(z) = z (1 + s k beta z^k)^(-1/k); s = -1 gives w_k, s = +1 its inverse.
inline QSeries conformal_w(int k, const Rational& beta, int trunc, int sign) {
    QSeries inner = QSeries::constant(Var::z, Rational(1), trunc);
    if (k <= trunc) inner.set(k, Rational(sign * k) * beta);
    return QSeries::monomial(Var::z, 1, Rational(1), trunc) * pow(inner, Rational(-1, k)).truncated(trunc);
}

/// beta_1 .. beta_max_k obtained by peeling the maps w_k off phi(z) = e^z - 1.
/// Entry k-1 holds beta_k.  Odd beta_k, k >= 3, vanish; a nonzero one is an
/// internal consistency failure.
inline std::vector<Rational> beta_coefficients(int max_k) {
    if (max_k < 1) throw std::invalid_argument("beta_coefficients: max_k must be >= 1");
    const int trunc = max_k + 1;
    QSeries phi(Var::z, trunc);
    for (int n = 1; n <= trunc; ++n) phi.set(n, ratio(1, factorial(static_cast<unsigned long>(n))));
    std::vector<Rational> beta;
    QSeries g = phi;
    for (int k = 1; k <= max_k; ++k) {
        const Rational b = g.coeff(k + 1);
        if (k >= 3 && k % 2 == 1 && sgn(b) != 0)
            throw series_error("odd beta_" + std::to_string(k) + " is nonzero");
        beta.push_back(b);
        g = compose(conformal_w(k, b, trunc, +1), g);
    }
    return beta;
}

/// The intermediate g_1 = w_1^{-1}(e^z - 1), which equals 2 tanh(z/2).
inline QSeries peeled_exponential_map(int trunc) {
    QSeries phi(Var::z, trunc);
    for (int n = 1; n <= trunc; ++n) phi.set(n, ratio(1, factorial(static_cast<unsigned long>(n))));
    return compose(conformal_w(1, Rational(1, 2), trunc, +1), phi);
}

/// exp(c L_{-k}) v truncated at total weight max_weight.
inline VirState exp_mode(NormalOrderer& orderer, int k, const Rational& c, const VirState& v, int max_weight) {
    VirState out = v.truncated(max_weight);
    VirState term = out;
    for (int n = 1; !term.is_zero(); ++n) {
        term = (c / Rational(n)) * orderer.apply(-k, term).truncated(max_weight);
        out += term;
    }
    return out;
}

/// lambda^(0) .. lambda^(max_weight) from the ordered product
/// ... exp(beta_6 L_{-6}) exp(beta_4 L_{-4}) exp(beta_2 L_{-2}) |0>.
inline std::vector<VirState> lambda_vector(int max_weight) {
    if (max_weight < 0) throw std::invalid_argument("lambda_vector: negative weight");
    std::vector<VirState> out(static_cast<std::size_t>(max_weight) + 1);
    if (max_weight == 0) {
        out[0] = VirState::vacuum();
        return out;
    }
    const auto beta = beta_coefficients(max_weight);
    NormalOrderer orderer;
    VirState lambda = VirState::vacuum();
    for (int k = 2; k <= max_weight; k += 2) lambda = exp_mode(orderer, k, beta[static_cast<std::size_t>(k) - 1], lambda, max_weight);
    for (int w = 0; w <= max_weight; ++w) out[static_cast<std::size_t>(w)] = lambda.weight_component(w);
    return out;
}

/// Independent construction: exp(sum_{i>=1} alpha_i L_{-i}) |0> by the
/// weight-truncated exponential series, normal ordered term by term.
inline std::vector<VirState> lambda_vector_direct(int max_weight) {
    if (max_weight < 0) throw std::invalid_argument("lambda_vector_direct: negative weight");
    std::vector<VirState> out(static_cast<std::size_t>(max_weight) + 1);
    const auto alpha = max_weight >= 1 ? alpha_coefficients(max_weight) : std::vector<Rational>{};
    NormalOrderer orderer;
    auto generator = [&](const VirState& v) {
        VirState acc;
        for (int i = 1; i <= max_weight; ++i) {
            const Rational& a = alpha[static_cast<std::size_t>(i) - 1];
            if (sgn(a) == 0) continue;
            acc += a * orderer.apply(-i, v).truncated(max_weight);
        }
        return acc;
    };
    VirState total = VirState::vacuum(), term = VirState::vacuum();
    for (int n = 1; n <= max_weight && !term.is_zero(); ++n) {
        term = Rational(1, n) * generator(term);
        total += term;
    }
    for (int w = 0; w <= max_weight; ++w) out[static_cast<std::size_t>(w)] = total.weight_component(w);
    return out;
}

}  // namespace g2sew
