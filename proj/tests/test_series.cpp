#include <g2sew/series.hpp>
#include <g2sew/virasoro.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace g2sew;

namespace {

QSeries poly(Var v, std::vector<Rational> cs, int trunc) { return QSeries::from_coeffs(v, std::move(cs), trunc); }

Rational r(long n, long d = 1) { return make_rational(n, d); }

QSeries random_series(std::mt19937& gen, Var v, int trunc, bool unit_constant = false) {
    std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
    QSeries s(v, trunc);
    for (int n = 0; n <= trunc; ++n) s.set(n, make_rational(num(gen), den(gen)));
    if (unit_constant) s.set(0, Rational(1));
    return s;
}

}  // namespace

TEST(Rational, CanonicalForm) {
    EXPECT_EQ(to_string(make_rational(2, 4)), "1/2");
    EXPECT_EQ(to_string(make_rational(3, -6)), "-1/2");
    EXPECT_EQ(ratio(Integer(10), Integer(5)), Rational(2));
    EXPECT_EQ(parse_rational("-6/8"), r(-3, 4));
    EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
    EXPECT_THROW(parse_rational("x"), std::invalid_argument);
}

TEST(Series, QdExamples) {
    EXPECT_EQ(qd(poly(Var::q, {1, 0, 3}, 2)), poly(Var::q, {0, 0, 6}, 2));
    const QSeries s = poly(Var::q, {1, 1}, 1).with_offset(r(1, 2));
    EXPECT_EQ(qd(s), poly(Var::q, {r(1, 2), r(3, 2)}, 1).with_offset(r(1, 2)));
}

TEST(Series, ExpLogRoundTrip) {
    const QSeries f = poly(Var::q, {1, 1, 1}, 2);
    EXPECT_EQ(exp(log(f)), f);
}

TEST(Series, BinomialSquareRoot) {
    EXPECT_EQ(pow(poly(Var::q, {1, 2}, 2), r(1, 2)), poly(Var::q, {1, 1, r(-1, 2)}, 2));
}

TEST(Series, GeometricInverse) {
    EXPECT_EQ(inv(poly(Var::q, {1, -1}, 3)), poly(Var::q, {1, 1, 1, 1}, 3));
}

TEST(Series, RationalPowerMatchesGeneralizedBinomial) {
    // (1 + q)^a = sum_n a(a-1)...(a-n+1)/n! q^n
    for (const Rational& a : {r(1, 3), r(-5, 2), r(7, 4)}) {
        const int t = 8;
        const QSeries got = pow(poly(Var::q, {1, 1}, t), a);
        Rational c(1);
        for (int n = 0; n <= t; ++n) {
            EXPECT_EQ(got.coeff(n), c) << "n=" << n;
            c = c * (a - n) / (n + 1);
        }
    }
}

TEST(Series, NonUnitErrors) {
    EXPECT_THROW(inv(poly(Var::q, {0, 1}, 3)), non_unit_error);
    EXPECT_THROW(log(poly(Var::q, {2, 1}, 3)), non_unit_error);
    EXPECT_THROW(pow(poly(Var::q, {3, 1}, 3), r(1, 2)), non_unit_error);
    EXPECT_THROW(exp(poly(Var::q, {1, 1}, 3)), series_error);
}

TEST(Series, TruncationBookkeeping) {
    QSeries a(Var::q, 3), b(Var::q, 4);
    a.set(1, 1);
    b.set(2, 1);
    // (q + O(q^4)) (q^2 + O(q^5)) = q^3 + O(q^6)
    EXPECT_EQ((a * b).trunc(), 5);
    EXPECT_EQ((a + b).trunc(), 3);
    EXPECT_THROW(a.coeff(4), series_error);
    EXPECT_THROW(a + b.with_offset(r(1, 24)), series_error);
    EXPECT_THROW(QSeries(Var::q, 2) + QSeries(Var::z, 2).with_offset(0) + poly(Var::z, {1, 1}, 2), series_error);
}

TEST(Series, OffsetsMultiply) {
    const QSeries a = poly(Var::q, {1, 1}, 3).with_offset(r(1, 24));
    const QSeries b = poly(Var::q, {1}, 3).with_offset(r(1, 2));
    EXPECT_EQ((a * b).offset(), r(13, 24));
    EXPECT_EQ(inv(a).offset(), r(-1, 24));
}

TEST(Series, ComposeExamples) {
    EXPECT_EQ(compose(poly(Var::z, {0, 1, 1}, 4), poly(Var::z, {0, 2}, 4)), poly(Var::z, {0, 2, 4}, 4));
    const int t = 7;
    QSeries expm1(Var::z, t), log1p(Var::z, t);
    for (int n = 1; n <= t; ++n) {
        expm1.set(n, ratio(1, factorial(static_cast<unsigned long>(n))));
        log1p.set(n, make_rational(n % 2 == 1 ? 1 : -1, n));
    }
    EXPECT_EQ(compose(expm1, log1p), QSeries::monomial(Var::z, 1, Rational(1), t));
    EXPECT_EQ(revert(expm1), log1p);
    EXPECT_THROW(compose(expm1, poly(Var::z, {1, 1}, t)), series_error);
    EXPECT_THROW(revert(poly(Var::z, {0, 2}, t)), series_error);
}

TEST(Series, TanhIdentity) {
    EXPECT_EQ(peeled_exponential_map(5), poly(Var::z, {0, 1, 0, r(-1, 12), 0, r(1, 120)}, 5));
    EXPECT_EQ(peeled_exponential_map(7).coeff(7), r(-17, 20160));
}

TEST(Series, ConformalMapInverse) {
    for (int k : {1, 2, 4}) {
        const Rational beta = r(3, 7);
        const QSeries w = conformal_w(k, beta, 9, -1);
        EXPECT_EQ(revert(w), conformal_w(k, beta, 9, +1)) << "k=" << k;
    }
}

TEST(SeriesProperty, RingAxioms) {
    std::mt19937 gen(20240601);
    for (int trial = 0; trial < 25; ++trial) {
        const int t = 6;
        const QSeries a = random_series(gen, Var::q, t), b = random_series(gen, Var::q, t), c = random_series(gen, Var::q, t);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ(a + (b - a), b);
    }
}

TEST(SeriesProperty, ComposeRevertIsIdentity) {
    std::mt19937 gen(7);
    for (int trial = 0; trial < 15; ++trial) {
        const int t = 7;
        QSeries f = random_series(gen, Var::z, t);
        f.set(0, Rational(0));
        f.set(1, Rational(1));
        const QSeries z = QSeries::monomial(Var::z, 1, Rational(1), t);
        EXPECT_EQ(compose(f, revert(f)), z);
        EXPECT_EQ(compose(revert(f), f), z);
    }
}

TEST(SeriesProperty, InverseAndPower) {
    std::mt19937 gen(11);
    for (int trial = 0; trial < 15; ++trial) {
        const QSeries f = random_series(gen, Var::q, 6, true);
        EXPECT_EQ(f * inv(f), QSeries::constant(Var::q, Rational(1), 6));
        EXPECT_EQ(pow(pow(f, r(1, 3)), 3U), f);
        EXPECT_EQ(pow(f, r(-2)), inv(f * f));
    }
}

TEST(CPoly, Arithmetic) {
    const CPolynomial c = CPolynomial::c();
    const CPolynomial p = c * c + CPolynomial(r(1, 2));
    EXPECT_EQ(p.degree(), 2);
    EXPECT_EQ(p.eval(r(2)), r(9, 2));
    EXPECT_TRUE((p - p).is_exact_zero());
}

TEST(NestedSeries, ExpOverSeriesCoefficients) {
    // exp(x eps) with x a q-series coefficient: eps^n coefficient x^n/n!.
    const int t = 5;
    const QSeries x = poly(Var::q, {1, 2}, 4);
    const Series<QSeries> s = Series<QSeries>::monomial(Var::eps, 1, x, t);
    const Series<QSeries> e = exp(s);
    EXPECT_EQ(e.coeff(0), QSeries::constant(Var::q, Rational(1)));
    for (int n = 1; n <= t; ++n)
        EXPECT_EQ(e.coeff(n), pow(x, static_cast<unsigned>(n)).truncated(4).scaled(ratio(1, factorial(static_cast<unsigned long>(n)))));
}
