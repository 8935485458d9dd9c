#pragma once

// Genus-two partition functions of Heisenberg modules in the eps-sewing
// scheme, their q2 -> 0 degeneration, and exact consistency checks against
// the Virasoro degeneration sum.

#include <g2sew/io.hpp>
#include <g2sew/sewing.hpp>
#include <g2sew/zhu.hpp>

#include <string>
#include <vector>

namespace g2sew {

/// Rank-r Heisenberg modules N_alpha (x) N_beta, described by their pairings.
struct ModulePair {
    int rank{1};
    Rational alpha_sq{0};
    Rational beta_sq{0};
    Rational alpha_dot_beta{0};

    void validate() const {
        if (rank < 1) throw std::invalid_argument("rank must be positive");
    }
    bool beta_zero() const { return sgn(beta_sq) == 0 && sgn(alpha_dot_beta) == 0; }
};

struct Check {
    std::string name;
    bool pass{false};
    std::string order;
    std::string expected;
    std::string computed;
};

struct DegenerationReport {
    std::string title;
    std::vector<std::string> notes;
    std::vector<Check> checks;

    bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }
};

// ---------------------------------------------------------------------------
// Exact comparison up to the common truncation order.

inline bool agree(const Rational& a, const Rational& b) { return a == b; }

template <class R>
bool agree(const CPoly<R>& a, const CPoly<R>& b);

template <class R>
bool agree(const Series<R>& a, const Series<R>& b) {
    const int t = std::min(a.trunc(), b.trunc());
    const Series<R> at = a.truncated(t), bt = b.truncated(t);
    if (at.is_zero() && bt.is_zero()) return true;
    if (at.offset() != bt.offset()) return false;
    const int top = std::max(at.size(), bt.size());
    for (int n = 0; n < top; ++n)
        if (!agree(at.coeff(n), bt.coeff(n))) return false;
    return true;
}

template <class R>
bool agree(const CPoly<R>& a, const CPoly<R>& b) {
    const int top = std::max(a.degree(), b.degree());
    for (int j = 0; j <= top; ++j)
        if (!agree(a.coeff(j), b.coeff(j))) return false;
    return true;
}

/// Smallest q-truncation among the nonzero coefficients (kExact if all exact).
inline int q_order(const EpsSeries<QSeries>& s) {
    int t = kExact;
    for (const auto& c : s.coeffs())
        if (!c.is_exact_zero()) t = std::min(t, c.trunc());
    return t;
}

inline int q_order(const EpsSeries<CPoly<QSeries>>& s) {
    int t = kExact;
    for (const auto& p : s.coeffs())
        for (const auto& c : p.coeffs())
            if (!c.is_exact_zero()) t = std::min(t, c.trunc());
    return t;
}

/// Coefficient-wise rendering with quasi-modular coefficients where possible.
inline std::string eps_text(const EpsSeries<QSeries>& s) {
    std::vector<std::pair<bool, std::string>> terms;
    for (int p = 0; p < s.size(); ++p) {
        const QSeries& c = s.coeffs()[static_cast<std::size_t>(p)];
        if (c.is_zero()) continue;
        std::string body = quasimodular_text(c, 2 * p);
        const std::string mono = detail::power_text("eps", p);
        if (mono.empty())
            terms.push_back({false, body});
        else
            terms.push_back({false, "(" + body + ")*" + mono});
    }
    if (!s.is_exact()) terms.push_back({false, "O(" + detail::power_text("eps", trunc_add(s.trunc(), 1)) + ")"});
    return terms.empty() ? "0" : detail::join_terms(terms);
}

inline std::string eps_text(const EpsSeries<CPoly<QSeries>>& s) {
    std::vector<std::pair<bool, std::string>> terms;
    for (int p = 0; p < s.size(); ++p) {
        const auto& poly = s.coeffs()[static_cast<std::size_t>(p)];
        std::vector<std::pair<bool, std::string>> inner;
        for (int j = 0; j <= poly.degree(); ++j) {
            const QSeries& c = poly.coeffs()[static_cast<std::size_t>(j)];
            if (c.is_zero()) continue;
            const std::string cm = detail::power_text("C", j);
            const std::string body = quasimodular_text(c, 2 * p);
            inner.push_back({false, cm.empty() ? "(" + body + ")" : "(" + body + ")*" + cm});
        }
        if (inner.empty()) continue;
        const std::string mono = detail::power_text("eps", p);
        const std::string body = "[" + detail::join_terms(inner) + "]";
        terms.push_back({false, mono.empty() ? body : body + "*" + mono});
    }
    if (!s.is_exact()) terms.push_back({false, "O(" + detail::power_text("eps", trunc_add(s.trunc(), 1)) + ")"});
    return terms.empty() ? "0" : detail::join_terms(terms);
}

inline std::string order_text(int eps_trunc, int q_trunc) {
    return "eps^" + std::to_string(eps_trunc) + ", q^" + std::to_string(q_trunc);
}

template <class S>
Check make_check(std::string name, const S& expected, const S& computed, int eps_req, int q_req) {
    Check c;
    c.name = std::move(name);
    const int et = std::min(expected.trunc(), computed.trunc());
    const int qt = std::min(q_order(expected), q_order(computed));
    c.pass = agree(expected, computed) && et >= eps_req && qt >= q_req;
    c.order = order_text(std::min(et, eps_req), std::min(qt, q_req));
    c.expected = eps_text(expected);
    c.computed = eps_text(computed);
    return c;
}

// ---------------------------------------------------------------------------
// Closed forms.

namespace detail {

/// a(q1) b(q2) as a q1-series of q2-series.
inline BiSeries outer_product(const QSeries& a, const QSeries& b) {
    BiSeries out(Var::q1, a.trunc(), a.offset());
    for (int n = 0; n < a.size(); ++n) {
        const Rational& c = a.coeffs()[static_cast<std::size_t>(n)];
        if (sgn(c) != 0) out.set(n, b.scaled(c));
    }
    return out;
}

inline QSeries eta_power(int r, int trunc, Var v) { return pow(eta_normalized(trunc, v), Rational(r)); }

}  // namespace detail

/// Z_{alpha,beta}^(2) for the rank-r pair, as an eps-series of (q1, q2)-series:
/// eta(q1)^-r eta(q2)^-r q1^(a/2) q2^(b/2) det(I - A1 A2)^(-r/2)
///   * exp((alpha^2 d11 + beta^2 d22 + 2 alpha.beta d12) / 2).
inline EpsSeries<BiSeries> z2_module_pair(const ModulePair& p, int q1_trunc, int q2_trunc, int eps_trunc, int n) {
    p.validate();
    if (q1_trunc < 0 || q2_trunc < 0 || eps_trunc < 0) throw std::invalid_argument("negative truncation");
    detail::check_sizes(n, eps_trunc);
    const auto a1 = lift_q1(a_matrix(1, n, eps_trunc, q1_trunc));
    const auto a2 = lift_q2(a_matrix(2, n, eps_trunc, q2_trunc));
    EpsSeries<BiSeries> exponent = log_det_I_minus(a1, a2, eps_trunc).scaled(Rational(-p.rank, 2));
    if (sgn(p.alpha_sq) != 0 || !p.beta_zero()) {
        const auto pd = period_data(a1, a2, eps_trunc);
        exponent = exponent + (pd.d11.scaled(p.alpha_sq) + pd.d22.scaled(p.beta_sq) +
                               pd.d12.scaled(Rational(2 * p.alpha_dot_beta)))
                                  .scaled(Rational(1, 2));
    }
    const QSeries f1 = detail::eta_power(-p.rank, q1_trunc, Var::q1);
    const QSeries f2 = detail::eta_power(-p.rank, q2_trunc, Var::q2);
    const BiSeries prefactor = detail::outer_product(f1.with_offset(Rational(f1.offset() + p.alpha_sq / 2)),
                                                     f2.with_offset(Rational(f2.offset() + p.beta_sq / 2)));
    return exp(exponent).times_coeff(prefactor);
}

/// Rank-one Heisenberg VOA: (eta(q1) eta(q2))^-1 det(I - A1 A2)^(-1/2).
inline EpsSeries<BiSeries> z2_heisenberg(int q1_trunc, int q2_trunc, int eps_trunc, int n) {
    return z2_module_pair(ModulePair{}, q1_trunc, q2_trunc, eps_trunc, n);
}

/// lim_{q2 -> 0} q2^shift s, taken coefficient-wise as a formal constant term.
/// Throws if a surviving coefficient has a negative total q2-power.
inline EpsSeries<QSeries> limit_q2(const EpsSeries<BiSeries>& s, const Rational& shift) {
    EpsSeries<QSeries> out(Var::eps, s.trunc());
    for (int p = 0; p < s.size(); ++p) {
        const BiSeries& b = s.coeffs()[static_cast<std::size_t>(p)];
        if (b.is_exact_zero()) continue;
        QSeries lim(Var::q1, b.trunc(), b.offset());
        for (int m = 0; m < b.size(); ++m) {
            const QSeries& c = b.coeffs()[static_cast<std::size_t>(m)];
            if (c.is_exact_zero()) continue;
            const Rational base = c.offset() + shift;
            Rational value(0);
            for (int k = 0; k < c.size(); ++k) {
                const Rational& ck = c.coeffs()[static_cast<std::size_t>(k)];
                if (sgn(ck) == 0) continue;
                const Rational e = base + k;
                if (sgn(e) < 0) throw series_error("q2 -> 0 limit diverges");
                if (sgn(e) == 0) value = ck;
            }
            if (sgn(base) < 0 && c.trunc() < -base) throw series_error("q2 truncation too low for the limit");
            lim.set(m, value);
        }
        out.set(p, lim);
    }
    return out;
}

/// The same limit by substitution A2 -> A2(0), eta(q2)^-r q2^(r/24) -> 1:
/// eta(q1)^-r q1^(a/2) det(I - A1 A2(0))^(-r/2) exp(a delta / 2).  Needs beta = 0.
inline EpsSeries<QSeries> z2_module_pair_degenerate(const ModulePair& p, int q_trunc, int eps_trunc, int n) {
    p.validate();
    if (!p.beta_zero()) throw std::invalid_argument("degenerate limit requires beta = 0");
    const auto logdet = log_det_degenerate(q_trunc, eps_trunc, n);
    const auto delta = degenerate_tau(q_trunc, eps_trunc, n);
    const EpsSeries<QSeries> exponent = logdet.scaled(Rational(-p.rank, 2)) + delta.scaled(Rational(p.alpha_sq / 2));
    const QSeries f = detail::eta_power(-p.rank, q_trunc, Var::q1);
    return exp(exponent).times_coeff(f.with_offset(Rational(f.offset() + p.alpha_sq / 2)));
}

/// f(q) at q = q1 e^delta: sum_l delta^l / l! qd^l f.
inline EpsSeries<QSeries> taylor_shift(const QSeries& f, const EpsSeries<QSeries>& delta) {
    const int t = delta.trunc();
    const int v = delta.valuation();
    if (v < 1) throw series_error("Taylor shift needs delta = O(eps)");
    EpsSeries<QSeries> out(Var::eps, t, 0);
    EpsSeries<QSeries> power = EpsSeries<QSeries>::constant(Var::eps, QSeries::constant(Var::q1, Rational(1)), t);
    QSeries deriv = f;
    for (int l = 0; l * v <= t; ++l) {
        if (l > 0) {
            power = (power * delta).truncated(t).scaled(Rational(1, l));
            deriv = qd(deriv);
        }
        out = out + power.times_coeff(deriv);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Degeneration sum and H_l.

/// sum_n eps^n Z(lambda^[n]) as Theta-basis operators; terms[n] is the eps^n part.
struct DegenerationSum {
    int max_weight{0};
    int q_trunc{0};
    std::vector<DiffOp> terms;
};

inline DegenerationSum degeneration_sum(int max_weight, int q_trunc) {
    if (max_weight < 0) throw std::invalid_argument("max_weight must be >= 0");
    DegenerationSum ds{max_weight, q_trunc, {}};
    const auto lambda = lambda_vector(max_weight);
    OnePointEngine engine(q_trunc);
    for (int n = 0; n <= max_weight; ++n) ds.terms.push_back(to_theta_basis(engine.one_point(lambda[static_cast<std::size_t>(n)])));
    return ds;
}

/// Coefficient of d^l Theta: an eps-series of C-polynomials in q1-series.
inline EpsSeries<CPoly<QSeries>> extract_H(int l, const DegenerationSum& ds) {
    if (l < 0) throw std::invalid_argument("l must be >= 0");
    EpsSeries<CPoly<QSeries>> out(Var::eps, ds.max_weight);
    for (int n = 0; n <= ds.max_weight; ++n) {
        CPoly<QSeries> poly;
        for (const auto& [key, c] : ds.terms[static_cast<std::size_t>(n)].terms())
            if (key.first == l) poly.set(key.second, c.with_var(Var::q1));
        out.set(n, poly);
    }
    return out;
}

/// exp(-(C/2) log det(I - A1 A2(0))) delta^l / l!, symbolic in C.
inline EpsSeries<CPoly<QSeries>> expected_H(int l, const EpsSeries<QSeries>& logdet, const EpsSeries<QSeries>& delta) {
    const int t = std::min(logdet.trunc(), delta.trunc());
    EpsSeries<CPoly<QSeries>> exponent(Var::eps, t), d(Var::eps, t);
    for (int p = 0; p < logdet.size(); ++p)
        exponent.set(p, CPoly<QSeries>::monomial(1, logdet.coeffs()[static_cast<std::size_t>(p)].scaled(Rational(-1, 2))));
    for (int p = 0; p < delta.size(); ++p) d.set(p, CPoly<QSeries>(delta.coeffs()[static_cast<std::size_t>(p)]));
    return (exp(exponent) * pow(d, static_cast<unsigned>(l))).truncated(t).scaled(ratio(1, factorial(static_cast<unsigned long>(l))));
}

/// sum_l H_l(C = r) d^l Theta for Theta = q1^(a/2): the degeneration sum specialized.
inline EpsSeries<QSeries> specialize_sum(const DegenerationSum& ds, const BasePartition& base, int eps_trunc) {
    EpsSeries<QSeries> out(Var::eps, std::min(eps_trunc, ds.max_weight));
    for (int n = 0; n <= out.trunc(); ++n) {
        const DiffOp& op = ds.terms[static_cast<std::size_t>(n)];
        if (op.is_zero()) continue;
        out.set(n, specialize(op, base));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Verification suites.

inline std::string q2_prefactor_note() {
    return "q2 -> 0 limits use the prefactor q2^(r/24); a displayed q2^(r/2) would leave the limit divergent";
}

inline DegenerationReport verify_detHi(int eps_trunc, int q_trunc, int l_max, int n) {
    if (2 * l_max > eps_trunc) throw std::invalid_argument("l_max must be <= eps_trunc/2");
    DegenerationReport report;
    report.title = "H_l = det(I - A1 A2(0))^(-C/2) delta^l / l!";
    report.notes.push_back("symbolic central charge C; matrix size " + std::to_string(n));
    const DegenerationSum ds = degeneration_sum(eps_trunc, q_trunc);
    const auto logdet = log_det_degenerate(q_trunc, eps_trunc, n);
    const auto delta = degenerate_tau(q_trunc, eps_trunc, n);
    for (int l = 0; l <= l_max; ++l)
        report.checks.push_back(make_check("H_" + std::to_string(l), expected_H(l, logdet, delta), extract_H(l, ds),
                                           eps_trunc, q_trunc));
    // H_l = O(eps^(2l)).
    bool low_ok = true;
    for (int l = 1; l <= l_max; ++l) {
        const auto h = extract_H(l, ds);
        for (int p = 0; p < std::min(2 * l, h.size()); ++p)
            if (!h.coeffs()[static_cast<std::size_t>(p)].is_zero()) low_ok = false;
    }
    report.checks.push_back({"H_l = O(eps^(2l))", low_ok, order_text(eps_trunc, q_trunc), "true", low_ok ? "true" : "false"});
    return report;
}

namespace detail {

inline EpsSeries<QSeries> quasimodular_eps(const std::vector<std::pair<int, QuasiModularPoly>>& coeffs, int eps_trunc,
                                           int q_trunc) {
    EpsSeries<QSeries> out(Var::eps, eps_trunc);
    for (const auto& [p, poly] : coeffs)
        if (p <= eps_trunc) out.set(p, poly.to_series(q_trunc, Var::q1));
    // Known coefficients that vanish must still be recorded as known zeros.
    for (int p = 0; p <= eps_trunc; ++p)
        if (out.coeff(p).is_exact_zero()) out.set(p, QSeries(Var::q1, q_trunc));
    return out;
}

inline QuasiModularPoly qm(std::initializer_list<std::pair<QuasiModularPoly::Monomial, Rational>> terms) {
    QuasiModularPoly p;
    for (const auto& [m, c] : terms) p.set(m, c);
    return p;
}

}  // namespace detail

inline DegenerationReport verify_heisenberg_degeneration(int eps_trunc, int q_trunc, int n) {
    DegenerationReport report;
    report.title = "Heisenberg degeneration: lim q2^(1/24) Z_M^(2) / Z_M^(1)(q)";
    report.notes.push_back(q2_prefactor_note());
    report.notes.push_back("Z_M^(1)(q) = 1/eta(q) at q = q1 exp(delta), expanded by Taylor shift; matrix size " +
                           std::to_string(n));
    const int known = std::min(eps_trunc, 5);
    const Rational one(1);
    const auto E2sq = QuasiModularPoly::Monomial{2, 0, 0};
    const auto E2 = QuasiModularPoly::Monomial{1, 0, 0};
    const auto E4 = QuasiModularPoly::Monomial{0, 1, 0};
    using detail::qm;

    const EpsSeries<QSeries> lim = limit_q2(z2_heisenberg(q_trunc, 0, eps_trunc, n), Rational(1, 24));
    const EpsSeries<QSeries> subst = z2_module_pair_degenerate(ModulePair{}, q_trunc, eps_trunc, n);
    report.checks.push_back(make_check("limit by q2-expansion = limit by substitution", subst, lim, eps_trunc, q_trunc));

    const auto delta = degenerate_tau(q_trunc, eps_trunc, n);
    const QSeries eta1 = eta_normalized(q_trunc, Var::q1);
    const QSeries inv_eta1 = inv(eta1);
    const EpsSeries<QSeries> z1 = taylor_shift(inv_eta1, delta);
    const EpsSeries<QSeries> eta_q = taylor_shift(eta1, delta);

    const EpsSeries<QSeries> eta_ratio = eta_q.times_coeff(inv_eta1).truncated(known);
    report.checks.push_back(make_check(
        "eta(q)/eta(q1)",
        detail::quasimodular_eps({{0, qm({{{0, 0, 0}, one}})},
                                  {2, qm({{E2, Rational(1, 24)}})},
                                  {4, qm({{E2sq, Rational(-1, 1152)}, {E4, Rational(-5, 576)}})}},
                                 known, q_trunc),
        eta_ratio, known, q_trunc));

    const EpsSeries<QSeries> inv_eta_ratio = z1.times_coeff(eta1).truncated(known);
    report.checks.push_back(make_check(
        "eta(q1)/eta(q)",
        detail::quasimodular_eps({{0, qm({{{0, 0, 0}, one}})},
                                  {2, qm({{E2, Rational(-1, 24)}})},
                                  {4, qm({{E2sq, Rational(1, 384)}, {E4, Rational(5, 576)}})}},
                                 known, q_trunc),
        inv_eta_ratio, known, q_trunc));

    const EpsSeries<QSeries> det = exp(log_det_degenerate(q_trunc, eps_trunc, n).scaled(Rational(-1, 2)));
    report.checks.push_back(make_check(
        "det(I - A1 A2(0))^(-1/2)",
        detail::quasimodular_eps({{0, qm({{{0, 0, 0}, one}})},
                                  {2, qm({{E2, Rational(-1, 24)}})},
                                  {4, qm({{E2sq, Rational(1, 384)}, {E4, Rational(1, 96)}})}},
                                 known, q_trunc),
        det.truncated(known), known, q_trunc));

    const EpsSeries<QSeries> ratio_series = (lim * inv(z1)).truncated(eps_trunc);
    report.checks.push_back(make_check(
        "lim / Z_M^(1)(q)",
        detail::quasimodular_eps({{0, qm({{{0, 0, 0}, one}})}, {4, qm({{E4, Rational(1, 576)}})}}, known, q_trunc),
        ratio_series.truncated(known), known, q_trunc));
    if (eps_trunc > known) report.notes.push_back("full ratio: " + eps_text(ratio_series));
    return report;
}

inline DegenerationReport verify_theta_degeneration(const ModulePair& p, int eps_trunc, int q_trunc, int max_weight, int n) {
    p.validate();
    if (!p.beta_zero()) throw std::invalid_argument("theta degeneration requires beta = 0");
    if (max_weight < eps_trunc) throw std::invalid_argument("max_weight must be >= eps_trunc");
    DegenerationReport report;
    report.title = "Theta degeneration: alpha^2 = " + to_string(p.alpha_sq) + ", rank " + std::to_string(p.rank);
    report.notes.push_back(q2_prefactor_note());
    report.notes.push_back("matrix size " + std::to_string(n) + ", max weight " + std::to_string(max_weight));
    const Rational shift(p.rank, 24);

    // (a) limits of the closed forms.
    const EpsSeries<QSeries> lim = limit_q2(z2_module_pair(p, q_trunc, 0, eps_trunc, n), shift);
    const EpsSeries<QSeries> lim_vac = limit_q2(z2_module_pair(ModulePair{p.rank, 0, 0, 0}, q_trunc, 0, eps_trunc, n), shift);
    const EpsSeries<QSeries> theta2 = (lim * inv(lim_vac)).truncated(eps_trunc);

    // (b) Theta^(1)(q) = q^(a/2) at the degenerate modulus.
    const QSeries theta_base = QSeries::constant(Var::q1, Rational(1), q_trunc).with_offset(Rational(p.alpha_sq / 2));
    const auto delta = degenerate_tau(q_trunc, eps_trunc, n);
    const EpsSeries<QSeries> theta1 = taylor_shift(theta_base, delta);
    report.checks.push_back(make_check("lim Theta^(2) = Theta^(1)(q)", theta1, theta2, eps_trunc, q_trunc));

    const QSeries eta_r = detail::eta_power(-p.rank, q_trunc, Var::q1);
    const EpsSeries<QSeries> closed =
        (exp(log_det_degenerate(q_trunc, eps_trunc, n).scaled(Rational(-p.rank, 2))) * theta1).times_coeff(eta_r);
    report.checks.push_back(make_check("lim = eta^(-r) det^(-r/2) Theta^(1)(q)", closed, lim, eps_trunc, q_trunc));

    // (c) the Virasoro degeneration sum at C = r.
    const DegenerationSum ds = degeneration_sum(max_weight, q_trunc);
    const BasePartition base{theta_base, Rational(p.rank)};
    const EpsSeries<QSeries> via_sum = specialize_sum(ds, base, eps_trunc).times_coeff(eta_r);
    report.checks.push_back(make_check("eta^(-r) sum_l H_l d^l Theta = lim", lim, via_sum, eps_trunc, q_trunc));

    bool even = true;
    for (int k = 1; k < lim.size(); k += 2)
        if (!lim.coeffs()[static_cast<std::size_t>(k)].is_zero()) even = false;
    report.checks.push_back({"odd eps powers vanish", even, order_text(eps_trunc, q_trunc), "true", even ? "true" : "false"});
    return report;
}

// ---------------------------------------------------------------------------
// Report rendering.

inline json to_json(const DegenerationReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"order", c.order}, {"expected", c.expected}, {"computed", c.computed}});
    return json{{"title", r.title}, {"notes", r.notes}, {"pass", r.pass()}, {"checks", std::move(checks)}};
}

inline std::string to_table(const DegenerationReport& r, bool verbose = false) {
    std::ostringstream os;
    os << "== " << r.title << " ==\n";
    for (const auto& n : r.notes) os << "  note: " << n << "\n";
    std::size_t width = 4;
    for (const auto& c : r.checks) width = std::max(width, c.name.size());
    for (const auto& c : r.checks) {
        os << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << std::string(width - c.name.size() + 2, ' ')
           << c.order << "\n";
        if (verbose || !c.pass) {
            os << "      expected: " << c.expected << "\n";
            os << "      computed: " << c.computed << "\n";
        }
    }
    os << "  result: " << (r.pass() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

}  // namespace g2sew
