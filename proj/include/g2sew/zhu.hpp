#pragma once

// Genus-one 1-point functions of square-bracket Virasoro vacuum descendants,
// computed symbolically as differential operators
//
//     Z(v, q) = sum_{i,j} c_ij(q) C^j d^i  Z_base(q),      d = q d/dq,
//
// by Zhu's recursion
//
//     Z(L[-k]u) = delta_{k,2} d Z(u)
//               + sum_{r>=0} (-1)^r binom(k+r-1, r+1) E_{k+r}(q) Z(L[r]u).

#include <g2sew/modular.hpp>
#include <g2sew/virasoro.hpp>

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace g2sew {

enum class Basis { z_basis, theta_basis };

inline const char* basis_name(Basis b) { return b == Basis::z_basis ? "Z" : "Theta"; }

/// sum_{(i,j)} c_ij(q) C^j d^i applied to a base function.  In the Theta
/// basis an overall eta(q)^(-C) prefactor is implicit.
class DiffOp {
public:
    using Key = std::pair<int, int>;  // (derivative order i, C-degree j)

    DiffOp() = default;
    DiffOp(Basis b, int q_trunc) : basis_(b), q_trunc_(q_trunc) {}

    static DiffOp identity(Basis b, int q_trunc) {
        DiffOp op(b, q_trunc);
        op.add({0, 0}, QSeries::constant(Var::q, Rational(1), q_trunc));
        return op;
    }

    Basis basis() const { return basis_; }
    int q_trunc() const { return q_trunc_; }
    const std::map<Key, QSeries>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    QSeries coeff(int i, int j) const {
        auto it = terms_.find({i, j});
        return it == terms_.end() ? QSeries(Var::q, q_trunc_) : it->second;
    }

    int max_order() const {
        int m = -1;
        for (const auto& [k, c] : terms_) m = std::max(m, k.first);
        return m;
    }

    /// Highest C-degree among coefficients of d^i; -1 when there are none.
    int c_degree(int i) const {
        int d = -1;
        for (const auto& [k, c] : terms_)
            if (k.first == i) d = std::max(d, k.second);
        return d;
    }

    void add(Key k, const QSeries& c) {
        QSeries v = c.truncated(q_trunc_);
        if (v.is_zero()) return;
        auto [it, inserted] = terms_.emplace(k, v);
        if (!inserted) {
            it->second = it->second + v;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    DiffOp& operator+=(const DiffOp& o) {
        check_compatible(o);
        for (const auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
    friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a += b.scaled(Rational(-1)); }

    DiffOp scaled(const Rational& r) const {
        DiffOp out(basis_, q_trunc_);
        for (const auto& [k, c] : terms_) out.add(k, c.scaled(r));
        return out;
    }

    /// Left multiplication by a polynomial in C.
    DiffOp times(const CPolynomial& p) const {
        DiffOp out(basis_, q_trunc_);
        for (int d = 0; d <= p.degree(); ++d) {
            const Rational& a = p.coeffs()[static_cast<std::size_t>(d)];
            if (sgn(a) == 0) continue;
            for (const auto& [k, c] : terms_) out.add({k.first, k.second + d}, c.scaled(a));
        }
        return out;
    }

    /// Left multiplication by a q-series.
    DiffOp times(const QSeries& s) const {
        DiffOp out(basis_, q_trunc_);
        for (const auto& [k, c] : terms_) out.add(k, (c * s).truncated(q_trunc_));
        return out;
    }

    /// d o (this): d(c d^i) = (d c) d^i + c d^(i+1).
    DiffOp derivative() const {
        DiffOp out(basis_, q_trunc_);
        for (const auto& [k, c] : terms_) {
            out.add(k, qd(c));
            out.add({k.first + 1, k.second}, c);
        }
        return out;
    }

    friend bool operator==(const DiffOp& a, const DiffOp& b) {
        return a.basis_ == b.basis_ && a.q_trunc_ == b.q_trunc_ && a.terms_ == b.terms_;
    }

private:
    Basis basis_{Basis::z_basis};
    int q_trunc_{0};
    std::map<Key, QSeries> terms_;

    void check_compatible(const DiffOp& o) const {
        if (o.terms_.empty()) return;
        if (o.basis_ != basis_) throw std::invalid_argument("DiffOp basis mismatch");
        if (o.q_trunc_ != q_trunc_) throw std::invalid_argument("DiffOp truncation mismatch");
    }
};

/// Evaluates Zhu's recursion with a memo table keyed by partition.  One
/// instance per computation session.
class OnePointEngine {
public:
    explicit OnePointEngine(int q_trunc) : q_trunc_(q_trunc) {
        if (q_trunc < 0) throw std::invalid_argument("negative q truncation");
    }

    int q_trunc() const { return q_trunc_; }

    const QSeries& eisenstein_series(int k) {
        auto it = eisenstein_.find(k);
        if (it == eisenstein_.end()) it = eisenstein_.emplace(k, eisenstein(k, q_trunc_)).first;
        return it->second;
    }

    /// Z(L[-k1]...L[-km]|0>) as a Z-basis operator.
    const DiffOp& one_point(const Partition& p) {
        if (auto it = memo_.find(p); it != memo_.end()) return it->second;
        DiffOp result = compute(p);
        return memo_.emplace(p, std::move(result)).first->second;
    }

    DiffOp one_point(const VirState& v) {
        DiffOp out(Basis::z_basis, q_trunc_);
        for (const auto& [p, c] : v.terms()) out += one_point(p).times(c);
        return out;
    }

    NormalOrderer& orderer() { return orderer_; }

private:
    int q_trunc_;
    NormalOrderer orderer_;
    std::map<Partition, DiffOp> memo_;
    std::map<int, QSeries> eisenstein_;

    DiffOp compute(const Partition& p) {
        if (p.empty()) return DiffOp::identity(Basis::z_basis, q_trunc_);
        const int k = p.parts().front();
        const Partition u = p.tail();
        DiffOp out(Basis::z_basis, q_trunc_);
        if (k == 2) out += one_point(u).derivative();
        // L[r]u vanishes for r > wt(u).
        for (int r = 0; r <= u.weight(); ++r) {
            if ((k + r) % 2 != 0) continue;  // E_odd = 0
            const VirState lr = orderer_.apply_monomial(r, u);
            if (lr.is_zero()) continue;
            Rational factor(binomial(k + r - 1, r + 1));
            if (r % 2 != 0) factor = -factor;
            const DiffOp inner = one_point(lr);
            out += inner.times(eisenstein_series(k + r)).scaled(factor);
        }
        return out;
    }
};

/// Z(v) for a state v, Z basis.
inline DiffOp one_point(const VirState& v, int q_trunc) {
    OnePointEngine engine(q_trunc);
    return engine.one_point(v);
}

namespace detail {

/// Rewrites d^i of the old base through d -> d + sign (C/2) E2.
inline DiffOp change_basis(const DiffOp& op, Basis target, const Rational& sign) {
    const int t = op.q_trunc();
    const QSeries half_e2 = eisenstein(2, t).scaled(Rational(sign / 2));
    const DiffOp base_identity = DiffOp::identity(target, t);
    std::vector<DiffOp> powers{base_identity};
    const int top = std::max(op.max_order(), 0);
    for (int i = 1; i <= top; ++i) {
        const DiffOp& prev = powers.back();
        powers.push_back(prev.derivative() + prev.times(half_e2).times(CPolynomial::c()));
    }
    DiffOp out(target, t);
    for (const auto& [k, c] : op.terms()) {
        const auto& [i, j] = k;
        out += powers[static_cast<std::size_t>(i)].times(c).times(CPolynomial::monomial(j, Rational(1)));
    }
    return out;
}

}  // namespace detail

/// Substitutes Z = eta^(-C) Theta using d(eta^(-C) X) = eta^(-C)(d X + (C/2) E2 X).
inline DiffOp to_theta_basis(const DiffOp& op) {
    if (op.basis() != Basis::z_basis) throw std::invalid_argument("to_theta_basis expects a Z-basis operator");
    return detail::change_basis(op, Basis::theta_basis, Rational(1));
}

/// Inverse rewrite: d Theta = eta^C (d Z - (C/2) E2 Z).
inline DiffOp to_z_basis(const DiffOp& op) {
    if (op.basis() != Basis::theta_basis) throw std::invalid_argument("to_z_basis expects a Theta-basis operator");
    return detail::change_basis(op, Basis::z_basis, Rational(-1));
}

/// Normalized base partition function Theta = eta^C Z for a module.
struct BasePartition {
    QSeries theta;
    Rational central_charge;

    /// Rank-r Heisenberg lattice-type module N_alpha: Theta = q^(alpha^2/2), C = r.
    static BasePartition heisenberg_module(const Rational& alpha_sq, int rank, int q_trunc, Var v = Var::q) {
        return {QSeries::constant(v, Rational(1), q_trunc).with_offset(Rational(alpha_sq / 2)), Rational(rank)};
    }
};

/// sum G_ij C^j d^i Theta at C = base.central_charge (eta^(-C) not reattached).
/// A Z-basis operator is evaluated the same way against the given base series.
inline QSeries specialize(const DiffOp& op, const BasePartition& base) {
    if (base.theta.trunc() < op.q_trunc())
        throw series_error("base partition function truncated below operator truncation");
    const QSeries theta = base.theta.truncated(op.q_trunc());
    QSeries out(theta.var(), op.q_trunc(), theta.offset());
    std::map<int, QSeries> derivs;
    for (const auto& [k, c] : op.terms()) {
        const auto& [i, j] = k;
        auto it = derivs.find(i);
        if (it == derivs.end()) it = derivs.emplace(i, qd(theta, i)).first;
        const Rational cj = rpow(base.central_charge, static_cast<unsigned long>(j));
        out = out + (c.with_var(theta.var()) * it->second).scaled(cj).truncated(op.q_trunc());
    }
    return out;
}

/// One line of a structure check.
struct StructureEntry {
    int order;
    int c_degree;
    int expected_weight;
    bool degree_ok;
    bool weight_ok;
    std::string witness;
};

struct StructureReport {
    Partition state;
    Basis basis;
    bool pass{true};
    std::vector<StructureEntry> entries;
};

/// Checks the C-degree bound (floor((m-i)/2) in the Z basis, m-i in the
/// Theta basis) and that each coefficient of C^j d^i is quasi-modular of
/// weight n - 2i.  Failures are recorded, never thrown.
inline StructureReport structure_check(const Partition& v, const DiffOp& op) {
    StructureReport report{v, op.basis(), true, {}};
    const int m = v.length();
    const int n = v.weight();
    for (const auto& [k, c] : op.terms()) {
        const auto& [i, j] = k;
        StructureEntry e{i, j, n - 2 * i, true, true, {}};
        const int bound = op.basis() == Basis::z_basis ? (m - i) / 2 : m - i;
        e.degree_ok = i <= m && j <= bound;
        if (e.expected_weight < 0) {
            e.weight_ok = false;
            e.witness = "negative weight";
        } else {
            try {
                e.witness = to_quasimodular(c, e.expected_weight).to_string();
            } catch (const series_error& err) {
                e.weight_ok = false;
                e.witness = err.what();
            }
        }
        if (!e.degree_ok || !e.weight_ok) report.pass = false;
        report.entries.push_back(std::move(e));
    }
    return report;
}

}  // namespace g2sew
