#pragma once

// Truncated univariate formal power series over an exact coefficient ring.
//
// A Series<R> represents  x^offset * (c_0 + c_1 x + ... + c_t x^t) + O(x^(t+1))
// where t = trunc().  An "exact" series (trunc() == kExact) is a polynomial
// known to all orders.  Every operation records the tightest truncation it
// can justify from its inputs.
//
// The coefficient ring R needs R{} == 0, +, -, *, multiplication by Rational
// and the free functions is_zero / is_exact_zero / ring_one.  Rational,
// Series<R> and CPoly<R> all qualify, so series nest (eps-series of
// q-series, q1-series of q2-series, ...).

#include <g2sew/rational.hpp>

#include <algorithm>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace g2sew {

enum class Var { q, q1, q2, z, eps };

inline const char* var_name(Var v) {
    switch (v) {
        case Var::q: return "q";
        case Var::q1: return "q1";
        case Var::q2: return "q2";
        case Var::z: return "z";
        case Var::eps: return "eps";
    }
    return "?";
}

inline Var parse_var(const std::string& s) {
    if (s == "q") return Var::q;
    if (s == "q1") return Var::q1;
    if (s == "q2") return Var::q2;
    if (s == "z") return Var::z;
    if (s == "eps") return Var::eps;
    throw std::invalid_argument("unknown series variable: " + s);
}

inline constexpr int kExact = std::numeric_limits<int>::max();

/// Saturating add for truncation orders (kExact absorbs).
inline int trunc_add(int a, int b) {
    if (a == kExact || b == kExact) return kExact;
    long s = static_cast<long>(a) + b;
    return s >= kExact ? kExact - 1 : static_cast<int>(s);
}

class series_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by inv/log/pow on a constant term that is not a unit.
class non_unit_error : public series_error {
public:
    non_unit_error() : series_error("non-unit constant term") {}
};

template <class R>
class Series;
template <class R>
class CPoly;
template <class R>
bool is_zero(const Series<R>& s);
template <class R>
bool is_exact_zero(const Series<R>& s);
template <class R>
bool is_one(const Series<R>& s);
template <class R>
Series<R> ring_one(const Series<R>& like);
template <class R>
Series<R> ring_inv(const Series<R>& s);
template <class R>
bool is_zero(const CPoly<R>& p);
template <class R>
bool is_exact_zero(const CPoly<R>& p);
template <class R>
bool is_one(const CPoly<R>& p);
template <class R>
CPoly<R> ring_one(const CPoly<R>& like);

template <class R>
class Series {
public:
    using coeff_type = R;

    Series() = default;

    /// Zero series in `v`, known modulo v^(trunc+1).
    Series(Var v, int trunc, Rational offset = 0) : var_(v), offset_(std::move(offset)), trunc_(trunc) {
        if (trunc < 0) throw std::invalid_argument("negative truncation order");
    }

    static Series constant(Var v, R c, int trunc = kExact) {
        Series s(v, trunc);
        s.set(0, std::move(c));
        return s;
    }

    static Series monomial(Var v, int exponent, R c, int trunc = kExact) {
        Series s(v, trunc);
        if (exponent <= trunc) s.set(exponent, std::move(c));
        return s;
    }

    static Series from_coeffs(Var v, std::vector<R> cs, int trunc, Rational offset = 0) {
        Series s(v, trunc, std::move(offset));
        for (std::size_t n = 0; n < cs.size() && static_cast<int>(n) <= trunc; ++n) s.set(static_cast<int>(n), cs[n]);
        return s;
    }

    Var var() const { return var_; }
    const Rational& offset() const { return offset_; }
    int trunc() const { return trunc_; }
    bool is_exact() const { return trunc_ == kExact; }

    /// Number of stored coefficient slots (highest stored exponent + 1).
    int size() const { return static_cast<int>(c_.size()); }

    /// Coefficient of var^(offset + n); zero when not stored.  Asking beyond
    /// the truncation order is an error.
    R coeff(int n) const {
        if (n < 0) return R{};
        if (n > trunc_) throw series_error("coefficient requested beyond truncation order");
        if (n >= size()) return R{};
        return c_[static_cast<std::size_t>(n)];
    }

    const std::vector<R>& coeffs() const { return c_; }

    void set(int n, R c) {
        if (n < 0 || n > trunc_) throw series_error("exponent outside [0, trunc]");
        if (n >= size()) {
            if (g2sew::is_exact_zero(c)) return;
            c_.resize(static_cast<std::size_t>(n) + 1);
        }
        c_[static_cast<std::size_t>(n)] = std::move(c);
        trim();
    }

    /// True when every known coefficient vanishes.
    bool is_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](const R& c) { return g2sew::is_zero(c); });
    }

    /// The zero polynomial known to all orders.
    bool is_exact_zero() const { return is_exact() && c_.empty(); }

    /// Exact and of degree <= 0 in var(): carries no information about var().
    bool is_var_free() const { return is_exact() && c_.size() <= 1 && (c_.empty() || offset_ == 0); }

    /// Lowest exponent with a nonzero coefficient; trunc()+1 if none is known.
    int valuation() const {
        for (int n = 0; n < size(); ++n)
            if (!g2sew::is_zero(c_[static_cast<std::size_t>(n)])) return n;
        return trunc_add(trunc_, 1);
    }

    Series truncated(int t) const {
        Series out = *this;
        out.trunc_ = std::min(trunc_, t);
        if (out.trunc_ != kExact && out.size() > out.trunc_ + 1) out.c_.resize(static_cast<std::size_t>(out.trunc_) + 1);
        out.trim();
        return out;
    }

    Series with_offset(Rational off) const {
        Series out = *this;
        out.offset_ = std::move(off);
        out.trim();
        return out;
    }

    Series with_var(Var v) const {
        Series out = *this;
        out.var_ = v;
        return out;
    }

    Series operator-() const {
        Series out = *this;
        for (auto& c : out.c_) c = -c;
        return out;
    }

    Series& operator+=(const Series& o) { return *this = add(*this, o, false); }
    Series& operator-=(const Series& o) { return *this = add(*this, o, true); }
    Series& operator*=(const Series& o) { return *this = mul(*this, o); }

    friend Series operator+(const Series& a, const Series& b) { return add(a, b, false); }
    friend Series operator-(const Series& a, const Series& b) { return add(a, b, true); }
    friend Series operator*(const Series& a, const Series& b) { return mul(a, b); }

    friend Series operator*(const Series& a, const Rational& r) { return a.scaled(r); }
    friend Series operator*(const Rational& r, const Series& a) { return a.scaled(r); }

    Series scaled(const Rational& r) const {
        Series out = *this;
        for (auto& c : out.c_) c = R(c * r);
        out.trim();
        return out;
    }

    /// Coefficient-wise multiplication by a ring element.
    Series times_coeff(const R& r) const {
        Series out = *this;
        for (auto& c : out.c_) c = R(c * r);
        out.trim();
        return out;
    }

    /// Exact structural equality: variable, offset, truncation, coefficients.
    friend bool operator==(const Series& a, const Series& b) {
        if (a.is_exact_zero() && b.is_exact_zero()) return true;
        if (a.trunc_ != b.trunc_ || a.offset_ != b.offset_) return false;
        if (a.var_ != b.var_ && !(a.is_var_free() && b.is_var_free())) return false;
        if (a.c_.size() != b.c_.size()) return false;
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            if (!(a.c_[i] == b.c_[i])) return false;
        return true;
    }
    friend bool operator!=(const Series& a, const Series& b) { return !(a == b); }

private:
    Var var_{Var::q};
    Rational offset_{0};
    int trunc_{kExact};
    std::vector<R> c_;

    void trim() {
        while (!c_.empty() && is_exact_zero_coeff(c_.back())) c_.pop_back();
        if (is_exact_zero()) offset_ = 0;
    }

    static bool is_exact_zero_coeff(const R& c) { return g2sew::is_exact_zero(c); }

    static Var join_var(const Series& a, const Series& b) {
        if (a.var_ == b.var_) return a.var_;
        if (a.is_var_free()) return b.var_;
        if (b.is_var_free()) return a.var_;
        throw series_error(std::string("series variable mismatch: ") + var_name(a.var_) + " vs " + var_name(b.var_));
    }

    static Series add(const Series& a, const Series& b, bool subtract) {
        if (b.is_exact_zero()) return a;
        if (a.is_exact_zero()) return subtract ? -b : b;
        if (a.offset_ != b.offset_)
            throw series_error("adding series with different offsets " + to_string(a.offset_) + " and " +
                               to_string(b.offset_));
        Series out(join_var(a, b), std::min(a.trunc_, b.trunc_), a.offset_);
        const int n = std::min(std::max(a.size(), b.size()), trunc_add(out.trunc_, 1));
        out.c_.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            if (i < a.size()) out.c_[k] = a.c_[k];
            if (i < b.size()) {
                if (subtract)
                    out.c_[k] = R(out.c_[k] - b.c_[k]);
                else
                    out.c_[k] = R(out.c_[k] + b.c_[k]);
            }
        }
        out.trim();
        return out;
    }

    static Series mul(const Series& a, const Series& b) {
        if (a.is_exact_zero() || b.is_exact_zero()) return Series();
        const int t = std::min(trunc_add(a.trunc_, b.valuation()), trunc_add(b.trunc_, a.valuation()));
        Series out(join_var(a, b), t, Rational(a.offset_ + b.offset_));
        int n = a.size() + b.size() - 1;
        if (t != kExact) n = std::min(n, t + 1);
        if (n <= 0) return out;
        out.c_.assign(static_cast<std::size_t>(n), R{});
        for (int i = 0; i < a.size() && i < n; ++i) {
            const R& ai = a.c_[static_cast<std::size_t>(i)];
            if (is_exact_zero_coeff(ai)) continue;
            for (int j = 0; j < b.size() && i + j < n; ++j) {
                const R& bj = b.c_[static_cast<std::size_t>(j)];
                if (is_exact_zero_coeff(bj)) continue;
                auto& slot = out.c_[static_cast<std::size_t>(i + j)];
                slot = R(slot + R(ai * bj));
            }
        }
        out.trim();
        return out;
    }
};

template <class R>
bool is_zero(const Series<R>& s) {
    return s.is_zero();
}
template <class R>
bool is_exact_zero(const Series<R>& s) {
    return s.is_exact_zero();
}
template <class R>
bool is_one(const Series<R>& s) {
    return s.offset() == 0 && s.size() == 1 && is_one(s.coeffs()[0]);
}
template <class R>
Series<R> ring_one(const Series<R>& like) {
    return Series<R>::constant(like.var(), ring_one(R{}));
}
/// Truncated univariate series with rational coefficients.
using QSeries = Series<Rational>;

// ---------------------------------------------------------------------------
// Polynomials in the central charge C.

template <class R>
class CPoly {
public:
    CPoly() = default;
    explicit CPoly(R constant) { set(0, std::move(constant)); }

    static CPoly monomial(int degree, R c) {
        CPoly p;
        p.set(degree, std::move(c));
        return p;
    }
    /// The polynomial C.
    static CPoly c() { return monomial(1, ring_one(R{})); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    R coeff(int j) const { return (j >= 0 && j < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(j)] : R{}; }
    const std::vector<R>& coeffs() const { return c_; }

    void set(int j, R c) {
        if (j < 0) throw std::invalid_argument("negative C-degree");
        if (j >= static_cast<int>(c_.size())) {
            if (g2sew::is_exact_zero(c)) return;
            c_.resize(static_cast<std::size_t>(j) + 1);
        }
        c_[static_cast<std::size_t>(j)] = std::move(c);
        trim();
    }

    bool is_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](const R& c) { return g2sew::is_zero(c); });
    }
    bool is_exact_zero() const { return c_.empty(); }

    /// Specializes C to a rational value.
    R eval(const Rational& value) const {
        R out{};
        Rational power(1);
        for (const auto& c : c_) {
            out = R(out + R(c * power));
            power *= value;
        }
        return out;
    }

    CPoly operator-() const {
        CPoly out = *this;
        for (auto& c : out.c_) c = -c;
        return out;
    }
    friend CPoly operator+(const CPoly& a, const CPoly& b) { return combine(a, b, false); }
    friend CPoly operator-(const CPoly& a, const CPoly& b) { return combine(a, b, true); }
    friend CPoly operator*(const CPoly& a, const CPoly& b) {
        CPoly out;
        if (a.c_.empty() || b.c_.empty()) return out;
        out.c_.assign(a.c_.size() + b.c_.size() - 1, R{});
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (g2sew::is_exact_zero(a.c_[i])) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                if (g2sew::is_exact_zero(b.c_[j])) continue;
                out.c_[i + j] = R(out.c_[i + j] + R(a.c_[i] * b.c_[j]));
            }
        }
        out.trim();
        return out;
    }
    friend CPoly operator*(const CPoly& a, const Rational& r) {
        CPoly out = a;
        for (auto& c : out.c_) c = R(c * r);
        out.trim();
        return out;
    }
    friend CPoly operator*(const Rational& r, const CPoly& a) { return a * r; }
    CPoly& operator+=(const CPoly& o) { return *this = *this + o; }
    CPoly& operator-=(const CPoly& o) { return *this = *this - o; }
    CPoly& operator*=(const CPoly& o) { return *this = *this * o; }

    CPoly times_coeff(const R& r) const {
        CPoly out = *this;
        for (auto& c : out.c_) c = R(c * r);
        out.trim();
        return out;
    }

    friend bool operator==(const CPoly& a, const CPoly& b) {
        if (a.c_.size() != b.c_.size()) return false;
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            if (!(a.c_[i] == b.c_[i])) return false;
        return true;
    }
    friend bool operator!=(const CPoly& a, const CPoly& b) { return !(a == b); }

private:
    std::vector<R> c_;

    void trim() {
        while (!c_.empty() && g2sew::is_exact_zero(c_.back())) c_.pop_back();
    }

    static CPoly combine(const CPoly& a, const CPoly& b, bool subtract) {
        CPoly out;
        out.c_.assign(std::max(a.c_.size(), b.c_.size()), R{});
        for (std::size_t i = 0; i < out.c_.size(); ++i) {
            if (i < a.c_.size()) out.c_[i] = a.c_[i];
            if (i < b.c_.size()) out.c_[i] = subtract ? R(out.c_[i] - b.c_[i]) : R(out.c_[i] + b.c_[i]);
        }
        out.trim();
        return out;
    }
};

template <class R>
bool is_zero(const CPoly<R>& p) {
    return p.is_zero();
}
template <class R>
bool is_exact_zero(const CPoly<R>& p) {
    return p.is_exact_zero();
}
template <class R>
bool is_one(const CPoly<R>& p) {
    return p.degree() == 0 && is_one(p.coeffs()[0]);
}
template <class R>
CPoly<R> ring_one(const CPoly<R>&) {
    return CPoly<R>(ring_one(R{}));
}

/// Polynomial in C with rational coefficients.
using CPolynomial = CPoly<Rational>;

// ---------------------------------------------------------------------------
// Transcendental operations.  All use exact recurrences valid over any
// coefficient ring containing the rationals.

namespace detail {

template <class R>
int require_finite(const Series<R>& s, const char* what) {
    if (s.is_exact() && s.size() > 1)
        throw series_error(std::string(what) + ": exact non-polynomial result; truncate the argument first");
    return s.trunc();
}

}  // namespace detail

template <class R>
Series<R> inv(const Series<R>& f) {
    const R f0 = f.size() > 0 ? f.coeffs()[0] : R{};
    if (is_zero(f0)) throw non_unit_error();
    const R g0 = ring_inv(f0);
    if (f.is_exact() && f.size() == 1) return Series<R>::constant(f.var(), g0).with_offset(-f.offset());
    const int t = detail::require_finite(f, "inv");
    std::vector<R> g(static_cast<std::size_t>(t) + 1);
    g[0] = g0;
    for (int n = 1; n <= t; ++n) {
        R acc{};
        for (int k = 1; k <= n && k < f.size(); ++k) {
            const R& fk = f.coeffs()[static_cast<std::size_t>(k)];
            if (is_exact_zero(fk)) continue;
            acc = R(acc + R(fk * g[static_cast<std::size_t>(n - k)]));
        }
        g[static_cast<std::size_t>(n)] = R(-R(g0 * acc));
    }
    return Series<R>::from_coeffs(f.var(), std::move(g), t, -f.offset());
}

template <class R>
Series<R> ring_inv(const Series<R>& s) {
    return inv(s);
}

/// exp(s) for s with vanishing constant term and zero offset.
template <class R>
Series<R> exp(const Series<R>& s) {
    if (s.offset() != 0) throw series_error("exp requires zero offset");
    if (!is_zero(s.coeff(0))) throw series_error("exp requires zero constant term");
    const R one = ring_one(R{});
    if (s.is_exact() && s.size() <= 1) return Series<R>::constant(s.var(), one);
    const int t = detail::require_finite(s, "exp");
    std::vector<R> f(static_cast<std::size_t>(t) + 1);
    f[0] = one;
    for (int n = 1; n <= t; ++n) {
        R acc{};
        for (int k = 1; k <= n && k < s.size(); ++k) {
            const R& sk = s.coeffs()[static_cast<std::size_t>(k)];
            if (is_exact_zero(sk)) continue;
            acc = R(acc + R(R(sk * f[static_cast<std::size_t>(n - k)]) * Rational(k)));
        }
        f[static_cast<std::size_t>(n)] = R(acc * Rational(1, n));
    }
    return Series<R>::from_coeffs(s.var(), std::move(f), t);
}

/// log(f) for f with constant term exactly 1 and zero offset.
template <class R>
Series<R> log(const Series<R>& f) {
    if (f.offset() != 0 || !is_one(f.coeff(0))) throw non_unit_error();
    if (f.is_exact() && f.size() == 1) return Series<R>(f.var(), kExact);
    const int t = detail::require_finite(f, "log");
    std::vector<R> g(static_cast<std::size_t>(t) + 1);
    for (int n = 1; n <= t; ++n) {
        R acc{};
        for (int k = 1; k < n; ++k) {
            const R& fk = f.coeff(n - k);
            if (is_exact_zero(fk)) continue;
            acc = R(acc + R(R(g[static_cast<std::size_t>(k)] * fk) * Rational(k)));
        }
        g[static_cast<std::size_t>(n)] = R(f.coeff(n) - R(acc * Rational(1, n)));
    }
    return Series<R>::from_coeffs(f.var(), std::move(g), t);
}

/// f^r for rational r.  After extracting the offset the constant term must be 1.
template <class R>
Series<R> pow(const Series<R>& f, const Rational& r) {
    const Series<R> unit = f.with_offset(0);
    if (!is_one(unit.coeff(0))) throw non_unit_error();
    Series<R> out = exp(log(unit).scaled(r));
    return out.with_offset(Rational(f.offset() * r));
}

/// Integer power by repeated squaring; works for any constant term.
template <class R>
Series<R> pow(const Series<R>& f, unsigned n) {
    Series<R> out = Series<R>::constant(f.var(), ring_one(R{}));
    Series<R> base = f;
    while (n != 0) {
        if (n & 1U) out = out * base;
        n >>= 1U;
        if (n != 0) base = base * base;
    }
    return out;
}

/// The derivation x d/dx, including the offset: x^a sum c_n x^n -> x^a sum (n+a) c_n x^n.
template <class R>
Series<R> qd(const Series<R>& s) {
    Series<R> out(s.var(), s.trunc(), s.offset());
    for (int n = 0; n < s.size(); ++n) out.set(n, R(s.coeffs()[static_cast<std::size_t>(n)] * Rational(n + s.offset())));
    return out;
}

/// Iterated x d/dx.
template <class R>
Series<R> qd(const Series<R>& s, int times) {
    Series<R> out = s;
    for (int i = 0; i < times; ++i) out = qd(out);
    return out;
}

/// f(g(x)); g must have zero constant term and zero offset.  Result is
/// known to min(trunc f, trunc g).
template <class R>
Series<R> compose(const Series<R>& f, const Series<R>& g) {
    if (g.offset() != 0 || !is_zero(g.coeff(0))) throw series_error("composition requires g(0)=0");
    if (f.offset() != 0) throw series_error("composition requires f with zero offset");
    const int t = std::min(f.trunc(), g.trunc());
    Series<R> gt = g.truncated(t);
    Series<R> out(g.var(), t);
    for (int n = f.size() - 1; n >= 0; --n) {
        out = (out * gt).truncated(t);
        out = out + Series<R>::constant(g.var(), f.coeffs()[static_cast<std::size_t>(n)], t);
    }
    return out.truncated(t);
}

/// Compositional inverse of f = x + O(x^2).
template <class R>
Series<R> revert(const Series<R>& f) {
    if (f.offset() != 0 || !is_zero(f.coeff(0)) || f.trunc() < 1 || !is_one(f.coeff(1)))
        throw series_error("leading coefficient must be 1 at degree 1");
    const int t = detail::require_finite(f, "revert");
    Series<R> g = Series<R>::monomial(f.var(), 1, ring_one(R{}), t);
    for (int n = 2; n <= t; ++n) {
        const Series<R> h = compose(f, g.truncated(n)).truncated(n);
        g.set(n, R(g.coeff(n) - h.coeff(n)));
    }
    return g;
}

}  // namespace g2sew
