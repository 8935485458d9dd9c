#include <g2sew/genus2.hpp>

#include <gtest/gtest.h>

using namespace g2sew;

namespace {

Rational r(long n, long d = 1) { return make_rational(n, d); }

QSeries inv_eta(int t, Var v) { return inv(eta_normalized(t, v)); }

}  // namespace

TEST(Z2Heisenberg, LeadingTermAndParity) {
    const int qt = 3, eps = 4;
    const auto z = z2_heisenberg(qt, qt, eps, eps);
    const BiSeries z0 = z.coeff(0);
    const QSeries a = inv_eta(qt, Var::q1), b = inv_eta(qt, Var::q2);
    EXPECT_EQ(z0.offset(), r(-1, 24));
    for (int i = 0; i <= qt; ++i) EXPECT_EQ(z0.coeff(i), b.scaled(a.coeff(i))) << i;
    EXPECT_TRUE(z.coeff(1).is_zero());
    EXPECT_TRUE(z.coeff(3).is_zero());
}

TEST(Z2Heisenberg, DegenerationToSecondOrder) {
    const int qt = 5;
    const auto lim = limit_q2(z2_heisenberg(qt, 0, 2, 2), r(1, 24));
    const QSeries ie = inv_eta(qt, Var::q1);
    EXPECT_EQ(lim.coeff(0), ie);
    EXPECT_EQ(lim.coeff(2), (ie * eisenstein(2, qt, Var::q1)).scaled(r(-1, 24)).truncated(qt));
}

TEST(Z2ModulePair, ReducesToHeisenberg) {
    EXPECT_EQ(z2_module_pair(ModulePair{1, 0, 0, 0}, 2, 2, 4, 4), z2_heisenberg(2, 2, 4, 4));
}

TEST(Z2ModulePair, LeadingTermForBetaZero) {
    const ModulePair p{2, r(1, 4), 0, 0};
    const int qt = 3;
    const auto z = z2_module_pair(p, qt, qt, 4, 4);
    const BiSeries z0 = z.coeff(0);
    const QSeries a = pow(eta_normalized(qt, Var::q1), Rational(-2));
    const QSeries b = pow(eta_normalized(qt, Var::q2), Rational(-2));
    EXPECT_EQ(z0.offset(), a.offset() + r(1, 8));
    for (int i = 0; i <= qt; ++i) EXPECT_EQ(z0.coeff(i), b.scaled(a.coeff(i)));
}

TEST(Z2ModulePair, SymmetricUnderSwappingTori) {
    const int qt = 2, eps = 4;
    const auto z = z2_module_pair(ModulePair{1, r(1), r(1, 2), r(1, 3)}, qt, qt, eps, eps);
    const auto w = z2_module_pair(ModulePair{1, r(1, 2), r(1), r(1, 3)}, qt, qt, eps, eps);
    for (int p = 0; p <= eps; ++p) {
        const BiSeries a = z.coeff(p), b = w.coeff(p);
        if (a.is_zero()) {
            EXPECT_TRUE(b.is_zero());
            continue;
        }
        EXPECT_EQ(a.offset(), a.coeff(0).offset() + r(1, 4));
        for (int i = 0; i <= qt; ++i)
            for (int j = 0; j <= qt; ++j) EXPECT_EQ(a.coeff(i).coeff(j), b.coeff(j).coeff(i)) << p << i << j;
    }
}

TEST(LimitQ2, RejectsDivergentPrefactor) {
    EXPECT_THROW(limit_q2(z2_heisenberg(2, 0, 2, 2), Rational(0)), series_error);
    // An over-strong prefactor sends everything to zero.
    EXPECT_TRUE(limit_q2(z2_heisenberg(2, 2, 2, 2), Rational(1)).is_zero());
}

TEST(LimitQ2, SubstitutionRouteAgrees) {
    for (const ModulePair& p : {ModulePair{1, 0, 0, 0}, ModulePair{1, r(1), 0, 0}, ModulePair{3, r(2, 3), 0, 0}}) {
        const auto a = limit_q2(z2_module_pair(p, 4, 0, 6, 6), Rational(p.rank, 24));
        const auto b = z2_module_pair_degenerate(p, 4, 6, 6);
        EXPECT_TRUE(agree(a, b));
    }
    EXPECT_THROW(z2_module_pair_degenerate(ModulePair{1, 0, r(1), 0}, 4, 6, 6), std::invalid_argument);
}

TEST(DegenerationSum, LowOrders) {
    const auto ds = degeneration_sum(4, 6);
    EXPECT_EQ(ds.terms[0], DiffOp::identity(Basis::theta_basis, 6));
    DiffOp e2(Basis::theta_basis, 6);
    e2.add({1, 0}, QSeries::constant(Var::q, r(-1, 12), 6));
    e2.add({0, 1}, eisenstein(2, 6).scaled(r(-1, 24)));
    EXPECT_EQ(ds.terms[2], e2);
    EXPECT_TRUE(ds.terms[1].is_zero() && ds.terms[3].is_zero());
}

TEST(ExtractH, Examples) {
    const auto ds = degeneration_sum(4, 6);
    const auto h0 = extract_H(0, ds), h1 = extract_H(1, ds);
    EXPECT_EQ(h0.coeff(0).coeff(0), QSeries::constant(Var::q1, Rational(1), 6));
    EXPECT_EQ(h1.coeff(2).coeff(0), QSeries::constant(Var::q1, r(-1, 12), 6));
    EXPECT_EQ(h1.coeff(2).degree(), 0);
    EXPECT_EQ(h0.coeff(2).coeff(1), eisenstein(2, 6, Var::q1).scaled(r(-1, 24)));
    for (int l = 1; l <= 2; ++l) {
        const auto h = extract_H(l, ds);
        for (int p = 0; p < 2 * l; ++p) EXPECT_TRUE(h.coeff(p).is_zero()) << l << " " << p;
    }
}

TEST(SpecializeSum, HeisenbergToSecondOrder) {
    const auto ds = degeneration_sum(2, 6);
    const auto s = specialize_sum(ds, BasePartition{QSeries::constant(Var::q1, Rational(1), 6), Rational(1)}, 2);
    EXPECT_EQ(s.coeff(0), QSeries::constant(Var::q1, Rational(1), 6));
    EXPECT_EQ(s.coeff(2), eisenstein(2, 6, Var::q1).scaled(r(-1, 24)));
}

TEST(TaylorShift, ExponentialOfMonomial) {
    // q^a at q = q1 e^delta is q1^a exp(a delta).
    const auto delta = degenerate_tau(4, 6, 6);
    const Rational a = r(3, 2);
    const QSeries base = QSeries::constant(Var::q1, Rational(1), 4).with_offset(a);
    const auto lhs = taylor_shift(base, delta);
    const auto rhs = exp(delta.scaled(a)).times_coeff(base);
    EXPECT_TRUE(agree(lhs, rhs));
}

TEST(Verify, DetHiSmall) {
    const auto rep = verify_detHi(6, 4, 3, 6);
    EXPECT_TRUE(rep.pass()) << to_table(rep, true);
    EXPECT_EQ(rep.checks.size(), 5u);
    EXPECT_THROW(verify_detHi(4, 4, 3, 4), std::invalid_argument);
}

TEST(Verify, HeisenbergSmall) {
    const auto rep = verify_heisenberg_degeneration(6, 5, 6);
    EXPECT_TRUE(rep.pass()) << to_table(rep, true);
    EXPECT_FALSE(rep.notes.empty());
}

TEST(Verify, ThetaSmall) {
    for (const ModulePair& p : {ModulePair{1, r(1), 0, 0}, ModulePair{2, r(1, 4), 0, 0}}) {
        const auto rep = verify_theta_degeneration(p, 6, 4, 6, 6);
        EXPECT_TRUE(rep.pass()) << to_table(rep, true);
    }
    EXPECT_THROW(verify_theta_degeneration(ModulePair{1, r(1), 0, 0}, 6, 4, 4, 6), std::invalid_argument);
}

TEST(Verify, MismatchIsReported) {
    const auto d = degenerate_tau(4, 4, 4);
    const auto c = make_check("tamper", d, d.scaled(r(2)), 4, 4);
    EXPECT_FALSE(c.pass);
    const auto ok = make_check("same", d, d, 4, 4);
    EXPECT_TRUE(ok.pass);
    // Insufficient precision is a failure, not a pass.
    EXPECT_FALSE(make_check("short", d, d, 6, 4).pass);
    DegenerationReport rep{"t", {}, {c, ok}};
    EXPECT_FALSE(rep.pass());
    EXPECT_NE(to_table(rep).find("[FAIL] tamper"), std::string::npos);
    EXPECT_EQ(to_json(rep)["checks"][0]["pass"], false);
}
