#pragma once

// Sewing two tori: moment matrices A_a, the pinched matrix A_2(0), the
// trace-log expansion of det(I - A_1 A_2), resolvent entries and the
// genus-two period matrix.
//
// The sqrt(kl) in A_a(k,l) is removed by conjugating with diag(sqrt(k)).
// Stored entries are
//
//     A~(k,l) = eps^((k+l)/2) (-1)^(l+1) (k+l-1)! / (l (k-1)! (l-1)!) E_{k+l}(q),
//
// which are rational; determinants, traces and (1,1) entries are unchanged.
// Entries with k+l odd vanish, so every surviving power of eps is integral.

#include <g2sew/modular.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <algorithm>
#include <stdexcept>
#include <vector>

namespace g2sew {

template <class R>
using EpsSeries = Series<R>;

/// Series in q1 whose coefficients are series in q2.
using BiSeries = Series<QSeries>;

/// N x N matrix of eps-series, indices 1..N in the formulas, 0-based in storage.
template <class R>
class AMatrix {
public:
    AMatrix() = default;
    AMatrix(int n, int eps_trunc) : n_(n), eps_trunc_(eps_trunc), e_(static_cast<std::size_t>(n) * n, zero(eps_trunc)) {
        if (n < 1) throw std::invalid_argument("matrix size must be >= 1");
    }

    int size() const { return n_; }
    int eps_trunc() const { return eps_trunc_; }
    static constexpr bool conjugated = true;

    /// 1-based access matching A(k,l).
    const EpsSeries<R>& operator()(int k, int l) const { return e_[index(k, l)]; }
    EpsSeries<R>& operator()(int k, int l) { return e_[index(k, l)]; }

    static AMatrix identity(int n, int eps_trunc) {
        AMatrix m(n, eps_trunc);
        for (int k = 1; k <= n; ++k) m(k, k) = EpsSeries<R>::constant(Var::eps, ring_one(R{}), eps_trunc);
        return m;
    }

    friend AMatrix operator*(const AMatrix& a, const AMatrix& b) {
        check(a, b);
        const int t = std::min(a.eps_trunc_, b.eps_trunc_);
        AMatrix out(a.n_, t);
        for (int k = 1; k <= a.n_; ++k)
            for (int l = 1; l <= a.n_; ++l) {
                EpsSeries<R> acc = zero(t);
                for (int m = 1; m <= a.n_; ++m) {
                    const auto& x = a(k, m);
                    const auto& y = b(m, l);
                    if (x.is_zero() || y.is_zero()) continue;
                    acc = acc + (x * y).truncated(t);
                }
                out(k, l) = acc;
            }
        return out;
    }

    friend AMatrix operator+(const AMatrix& a, const AMatrix& b) {
        check(a, b);
        AMatrix out(a.n_, std::min(a.eps_trunc_, b.eps_trunc_));
        for (std::size_t i = 0; i < a.e_.size(); ++i) out.e_[i] = (a.e_[i] + b.e_[i]).truncated(out.eps_trunc_);
        return out;
    }

    EpsSeries<R> trace() const {
        EpsSeries<R> acc = zero(eps_trunc_);
        for (int k = 1; k <= n_; ++k) acc = acc + (*this)(k, k);
        return acc;
    }

    /// Applies f to every entry's coefficients, producing a matrix over another ring.
    template <class S, class F>
    AMatrix<S> map(F f) const {
        AMatrix<S> out(n_, eps_trunc_);
        for (int k = 1; k <= n_; ++k)
            for (int l = 1; l <= n_; ++l) {
                const auto& src = (*this)(k, l);
                EpsSeries<S> dst(Var::eps, src.trunc());
                for (int p = 0; p < src.size(); ++p) dst.set(p, f(src.coeffs()[static_cast<std::size_t>(p)]));
                out(k, l) = dst;
            }
        return out;
    }

private:
    int n_{0};
    int eps_trunc_{0};
    std::vector<EpsSeries<R>> e_;

    static EpsSeries<R> zero(int t) { return EpsSeries<R>(Var::eps, t); }

    std::size_t index(int k, int l) const {
        if (k < 1 || l < 1 || k > n_ || l > n_) throw std::out_of_range("AMatrix index");
        return static_cast<std::size_t>(k - 1) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(l - 1);
    }

    static void check(const AMatrix& a, const AMatrix& b) {
        if (a.n_ != b.n_) throw std::invalid_argument("AMatrix size mismatch");
    }
};

/// Rational part of the conjugated A(k,l): (-1)^(l+1) (k+l-1)! / (l (k-1)! (l-1)!).
inline Rational a_matrix_factor(int k, int l) {
    const auto fk = factorial(static_cast<unsigned long>(k) - 1), fl = factorial(static_cast<unsigned long>(l) - 1);
    Rational r = ratio(factorial(static_cast<unsigned long>(k + l - 1)), Integer(l) * fk * fl);
    return l % 2 == 0 ? Rational(-r) : r;
}

/// Conjugated A_a for torus a (1 or 2); coefficients are series in q1 or q2.
inline AMatrix<QSeries> a_matrix(int torus, int n, int eps_trunc, int q_trunc) {
    if (torus != 1 && torus != 2) throw std::invalid_argument("torus must be 1 or 2");
    const Var v = torus == 1 ? Var::q1 : Var::q2;
    AMatrix<QSeries> a(n, eps_trunc);
    for (int k = 1; k <= n; ++k)
        for (int l = 1; l <= n; ++l) {
            if ((k + l) % 2 != 0) continue;
            const int p = (k + l) / 2;
            if (p > eps_trunc) continue;
            const QSeries c = eisenstein(k + l, q_trunc, v).scaled(a_matrix_factor(k, l));
            a(k, l) = EpsSeries<QSeries>::monomial(Var::eps, p, c, eps_trunc);
        }
    return a;
}

/// Conjugated A_2(0)(k,l) = (-1)^l eps^((k+l)/2) B_{k+l} / (l (k+l) (k-1)! (l-1)!).
inline AMatrix<Rational> a2_degenerate(int n, int eps_trunc) {
    AMatrix<Rational> a(n, eps_trunc);
    const auto bern = bernoulli_numbers(2 * n);
    for (int k = 1; k <= n; ++k)
        for (int l = 1; l <= n; ++l) {
            if ((k + l) % 2 != 0) continue;
            const int p = (k + l) / 2;
            if (p > eps_trunc) continue;
            Rational c = bern[static_cast<std::size_t>(k + l)] /
                         Rational(Integer(l) * Integer(k + l) * factorial(static_cast<unsigned long>(k) - 1) *
                                  factorial(static_cast<unsigned long>(l) - 1));
            if (l % 2 != 0) c = -c;
            a(k, l) = EpsSeries<Rational>::monomial(Var::eps, p, c, eps_trunc);
        }
    return a;
}

/// Rational matrix entries become exact constant q-series in `v`.
inline AMatrix<QSeries> lift_constants(const AMatrix<Rational>& a, Var v) {
    return a.map<QSeries>([v](const Rational& r) { return QSeries::constant(v, r); });
}

/// q1-series entries become q1-series of exact q2-constants.
inline AMatrix<BiSeries> lift_q1(const AMatrix<QSeries>& a) {
    return a.map<BiSeries>([](const QSeries& s) {
        BiSeries out(s.var(), s.trunc(), s.offset());
        for (int n = 0; n < s.size(); ++n) out.set(n, QSeries::constant(Var::q2, s.coeffs()[static_cast<std::size_t>(n)]));
        return out;
    });
}

/// q2-series entries become exact q1-constants with q2-series coefficient.
inline AMatrix<BiSeries> lift_q2(const AMatrix<QSeries>& a) {
    return a.map<BiSeries>([](const QSeries& s) { return BiSeries::constant(Var::q1, s); });
}

class truncation_error : public std::invalid_argument {
public:
    truncation_error() : std::invalid_argument("matrix size too small for requested eps order") {}
};

namespace detail {

inline void check_sizes(int n, int eps_trunc) {
    if (n < std::max(eps_trunc, 1)) throw truncation_error();
}

}  // namespace detail

/// log det(I - A B) = -sum_{n>=1} Tr((A B)^n)/n, truncated at eps^eps_trunc.
/// A B = O(eps^2), so the sum stops at n = eps_trunc/2.
template <class R>
EpsSeries<R> log_det_I_minus(const AMatrix<R>& a, const AMatrix<R>& b, int eps_trunc) {
    if (a.size() != b.size()) throw std::invalid_argument("AMatrix size mismatch");
    detail::check_sizes(a.size(), eps_trunc);
    const AMatrix<R> m = a * b;
    EpsSeries<R> out(Var::eps, eps_trunc);
    AMatrix<R> power = m;
    for (int n = 1; 2 * n <= eps_trunc; ++n) {
        if (n > 1) power = power * m;
        out = out - power.trace().truncated(eps_trunc).scaled(Rational(1, n));
    }
    return out.truncated(eps_trunc);
}

/// (I - A B)^{-1} = I + sum_n (A B)^n to eps^eps_trunc.
template <class R>
AMatrix<R> resolvent(const AMatrix<R>& a, const AMatrix<R>& b, int eps_trunc) {
    if (a.size() != b.size()) throw std::invalid_argument("AMatrix size mismatch");
    detail::check_sizes(a.size(), eps_trunc);
    const AMatrix<R> m = a * b;
    AMatrix<R> out = AMatrix<R>::identity(a.size(), eps_trunc);
    AMatrix<R> power = m;
    for (int n = 1; 2 * n <= eps_trunc; ++n) {
        if (n > 1) power = power * m;
        out = out + power;
    }
    return out;
}

/// (I - A B)^{-1}(1,1).
template <class R>
EpsSeries<R> resolvent_11(const AMatrix<R>& a, const AMatrix<R>& b, int eps_trunc) {
    return resolvent(a, b, eps_trunc)(1, 1).truncated(eps_trunc);
}

/// (L (I - A B)^{-1})(1,1).
template <class R>
EpsSeries<R> left_resolvent_11(const AMatrix<R>& left, const AMatrix<R>& a, const AMatrix<R>& b, int eps_trunc) {
    const AMatrix<R> res = resolvent(a, b, eps_trunc);
    EpsSeries<R> acc(Var::eps, eps_trunc);
    for (int m = 1; m <= left.size(); ++m) {
        if (left(1, m).is_zero()) continue;
        acc = acc + (left(1, m) * res(m, 1)).truncated(eps_trunc);
    }
    return acc;
}

template <class R>
EpsSeries<R> times_eps(const EpsSeries<R>& s, int eps_trunc) {
    return (EpsSeries<R>::monomial(Var::eps, 1, ring_one(R{})) * s).truncated(eps_trunc);
}

/// 2 pi i-normalized period data: d11 = 2 pi i (Omega_11 - tau_1),
/// d22 = 2 pi i (Omega_22 - tau_2), d12 = 2 pi i Omega_12.
template <class R>
struct PeriodData {
    EpsSeries<R> d11, d22, d12;
};

/// Period matrix from a pair of sewing matrices over a common ring.
template <class R>
PeriodData<R> period_data(const AMatrix<R>& a1, const AMatrix<R>& a2, int eps_trunc) {
    detail::check_sizes(a1.size(), eps_trunc);
    PeriodData<R> out;
    out.d11 = times_eps(left_resolvent_11(a2, a1, a2, eps_trunc), eps_trunc);
    out.d22 = times_eps(left_resolvent_11(a1, a2, a1, eps_trunc), eps_trunc);
    out.d12 = -times_eps(resolvent_11(a1, a2, eps_trunc), eps_trunc);
    return out;
}

/// Full genus-two period data as eps-series of joint (q1, q2) series.
inline PeriodData<BiSeries> period_matrix(int q1_trunc, int q2_trunc, int eps_trunc, int n) {
    detail::check_sizes(n, eps_trunc);
    const auto a1 = lift_q1(a_matrix(1, n, eps_trunc, q1_trunc));
    const auto a2 = lift_q2(a_matrix(2, n, eps_trunc, q2_trunc));
    return period_data(a1, a2, eps_trunc);
}

/// delta(q1, eps) = 2 pi i (tau - tau_1) = eps (A_2(0) (I - A_1 A_2(0))^{-1})(1,1).
inline EpsSeries<QSeries> degenerate_tau(int q1_trunc, int eps_trunc, int n) {
    detail::check_sizes(n, eps_trunc);
    const auto a1 = a_matrix(1, n, eps_trunc, q1_trunc);
    const auto a20 = lift_constants(a2_degenerate(n, eps_trunc), Var::q1);
    return times_eps(left_resolvent_11(a20, a1, a20, eps_trunc), eps_trunc);
}

/// log det(I - A_1 A_2(0)) as an eps-series of q1-series.
inline EpsSeries<QSeries> log_det_degenerate(int q1_trunc, int eps_trunc, int n) {
    detail::check_sizes(n, eps_trunc);
    const auto a1 = a_matrix(1, n, eps_trunc, q1_trunc);
    const auto a20 = lift_constants(a2_degenerate(n, eps_trunc), Var::q1);
    return log_det_I_minus(a1, a20, eps_trunc);
}

// ---------------------------------------------------------------------------
// Advisory numeric check of the sewing domain |eps| < D(q1) D(q2) / 4.

/// Minimal nonzero |2 pi i (m + n tau)| over |m|, |n| <= bound.
inline double minimal_lattice_distance(std::complex<double> q, int bound = 40) {
    if (std::abs(q) >= 1.0 || std::abs(q) == 0.0) throw std::domain_error("need 0 < |q| < 1");
    const double two_pi = 2.0 * std::acos(-1.0);
    const std::complex<double> tau = std::log(q) / std::complex<double>(0.0, two_pi);
    double best = std::numeric_limits<double>::infinity();
    for (int m = -bound; m <= bound; ++m)
        for (int n = -bound; n <= bound; ++n) {
            if (m == 0 && n == 0) continue;
            best = std::min(best, two_pi * std::abs(static_cast<double>(m) + static_cast<double>(n) * tau));
        }
    return best;
}

inline bool domain_check(std::complex<double> q1, std::complex<double> q2, std::complex<double> eps) {
    if (eps == std::complex<double>(0.0, 0.0)) return true;
    return std::abs(eps) < 0.25 * minimal_lattice_distance(q1) * minimal_lattice_distance(q2);
}

}  // namespace g2sew
