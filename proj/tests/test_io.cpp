#include <g2sew/genus2.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace g2sew;

namespace {
Rational r(long n, long d = 1) { return make_rational(n, d); }
}  // namespace

TEST(Text, Series) {
    EXPECT_EQ(to_text(eisenstein(2, 3)), "-1/12 + 2*q + 6*q^2 + 8*q^3 + O(q^4)");
    EXPECT_EQ(to_text(eta_normalized(2)), "q^(1/24)*(1 - q - q^2 + O(q^3))");
    EXPECT_EQ(to_text(QSeries(Var::q, kExact)), "0");
    EXPECT_EQ(to_text(QSeries(Var::q1, 2)), "O(q1^3)");
    EXPECT_EQ(to_text(QSeries::constant(Var::z, r(-3, 4))), "-3/4");
}

TEST(Text, OperatorsAndStates) {
    OnePointEngine engine(8);
    EXPECT_EQ(to_text(engine.one_point(Partition({2, 2})), 4), "d^2 + 2*E2*d + 1/2*E4*C");
    const auto l = lambda_vector(4);
    EXPECT_EQ(to_text(l[2]), "-1/12 * L[-2]");
    EXPECT_EQ(to_text(l[0]), "1 * vacuum");
    EXPECT_EQ(to_text(l[4]), "1/288 * L[-2]L[-2] - 1/480 * L[-4]");
}

TEST(Text, EpsSeries) {
    EXPECT_EQ(eps_text(degenerate_tau(8, 5, 5)), "(-1/12)*eps^2 + (1/144*E2)*eps^4 + O(eps^6)");
}

TEST(Json, SeriesSchema) {
    const json j = to_json(eta_normalized(2));
    EXPECT_EQ(j["variable"], "q");
    EXPECT_EQ(j["offset"], "1/24");
    EXPECT_EQ(j["trunc"], 2);
    EXPECT_EQ(j["coeffs"]["1"], "-1");
    EXPECT_TRUE(to_json(QSeries::constant(Var::q, r(1)))["trunc"].is_null());
}

TEST(Json, RoundTripRandomSeries) {
    std::mt19937 gen(3);
    std::uniform_int_distribution<long> num(-50, 50), den(1, 40);
    for (int trial = 0; trial < 20; ++trial) {
        QSeries s(Var::q2, 7, make_rational(num(gen), den(gen)));
        for (int n = 0; n <= 7; n += 1 + trial % 3) s.set(n, make_rational(num(gen), den(gen)));
        const std::string text = to_json(s).dump();
        const QSeries back = from_json<QSeries>(json::parse(text));
        EXPECT_EQ(back, s);
        EXPECT_EQ(to_json(back).dump(), text);
    }
}

TEST(Json, RoundTripNested) {
    const auto z = z2_module_pair(ModulePair{2, r(1, 4), r(1, 2), r(1, 3)}, 2, 2, 4, 4);
    EXPECT_EQ(from_json<EpsSeries<BiSeries>>(to_json(z)), z);
    const auto d = degenerate_tau(4, 6, 6);
    EXPECT_EQ(from_json<EpsSeries<QSeries>>(to_json(d)), d);
    const auto ds = degeneration_sum(4, 4);
    const auto h = extract_H(0, ds);
    EXPECT_EQ(from_json<EpsSeries<CPoly<QSeries>>>(to_json(h)), h);
}

TEST(Json, DiffOpRoundTrip) {
    OnePointEngine engine(6);
    for (const auto& p : Partition::all_of_weight(6)) {
        const DiffOp op = to_theta_basis(engine.one_point(p));
        EXPECT_EQ(diffop_from_json(json::parse(to_json(op).dump())), op);
    }
    EXPECT_THROW(diffop_from_json(json{{"basis", "X"}, {"q_trunc", 1}, {"terms", json::array()}}), std::invalid_argument);
}

TEST(Json, VirState) {
    const auto l = lambda_vector(4);
    const json j = to_json(l[4]);
    ASSERT_EQ(j.size(), 2u);
    EXPECT_EQ(j[0]["partition"], json::array({2, 2}));
    EXPECT_EQ(j[0]["coeff"], "1/288");
    EXPECT_EQ(j[1]["partition"], json::array({4}));
    EXPECT_EQ(j[1]["coeff"], "-1/480");
}
