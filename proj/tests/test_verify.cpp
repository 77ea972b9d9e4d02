#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ssve/gaussian.hpp"
#include "ssve/verify.hpp"

using namespace ssve;

namespace {

GaussianEnsembleSpec pair_spec(double rho, uint64_t seed) {
    Eigen::MatrixXd R(2, 2);
    R << 1.0, rho, rho, 1.0;
    return GaussianEnsembleSpec::from_correlation(R, seed);
}

bool inside(const Interval& I, double x) { return I.lo <= x && x <= I.hi; }

}  // namespace

TEST(WilsonInterval, Basics) {
    auto a = wilson_interval(0, 100);
    EXPECT_EQ(a.lo, 0.0);
    EXPECT_GT(a.hi, 0.0);
    auto b = wilson_interval(100, 100);
    EXPECT_NEAR(b.hi, 1.0, 1e-15);
    auto c = wilson_interval(30, 100);
    EXPECT_TRUE(inside(c, 0.3));
    EXPECT_LT(c.hi - c.lo, 0.3);
    // Two-sided 95%: 50/100 gives roughly [0.404, 0.596].
    auto d = wilson_interval(50, 100, 0.95);
    EXPECT_NEAR(d.lo, 0.4038, 1e-3);
    EXPECT_NEAR(d.hi, 0.5962, 1e-3);
    EXPECT_THROW(wilson_interval(5, 0), std::invalid_argument);
}

TEST(CutProbability, PerfectCorrelationNeverCuts) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 3);
    D.row(0).setOnes();
    auto spec = GaussianEnsembleSpec::from_directions(D, 1);
    auto est = estimate_cut_probability(spec, {0.3, 0.3, 0.3}, 10000, 2);
    EXPECT_EQ(est.p_hat, 0.0);
    EXPECT_EQ(est.cuts, 0u);
}

TEST(CutProbability, IndependentPairClosedForm) {
    double delta = 0.25, t = phi_inv(delta);
    auto est = estimate_cut_probability(pair_spec(0.0, 3), {t, t}, 100000, 4);
    EXPECT_TRUE(inside(est.ci, 2 * delta * (1 - delta))) << est.p_hat;
}

TEST(CutProbability, IndependentGapEnsemble) {
    const int d = 8;
    const double delta = 1.0 / d;
    auto spec = GaussianEnsembleSpec::from_directions(Eigen::MatrixXd::Identity(d, d), 5);
    auto est = estimate_cut_probability(spec, std::vector<double>(d, phi_inv(delta)), 100000, 6);
    double expect = 1 - std::pow(1 - delta, d) - std::pow(delta, d);
    EXPECT_TRUE(inside(est.ci, expect)) << est.p_hat << " vs " << expect;
}

TEST(CutProbability, MonotoneInCorrelation) {
    double t = phi_inv(0.2), prev = 1.0;
    for (double rho : {0.0, 0.5, 0.9, 0.99, 0.999}) {
        auto est = estimate_cut_probability(pair_spec(rho, 7), {t, t}, 50000, 8);
        EXPECT_LT(est.p_hat, prev) << rho;
        prev = est.p_hat;
    }
}

TEST(CutProbability, Deterministic) {
    auto a = estimate_cut_probability(pair_spec(0.4, 1), {0.0, 0.1}, 10000, 9);
    auto b = estimate_cut_probability(pair_spec(0.4, 1), {0.0, 0.1}, 10000, 9);
    EXPECT_EQ(a.cuts, b.cuts);
}

TEST(Constants, Values) {
    EXPECT_NEAR(c1_constant(0.25), 32 * 24 * std::log(4.0), 1e-9);
    EXPECT_NEAR(a_constant(16, 0.25, AVariant::a64) / a_constant(16, 0.25, AVariant::a16), 4.0, 1e-12);
}

TEST(NiceEdge, PremisesHold) {
    for (int d : {4, 16})
        for (double delta : {0.25, 0.0625})
            for (bool mirrored : {false, true}) {
                double nu = delta / (a_constant(d, delta, AVariant::a64) * 4.0);
                auto e = build_nice_edge(d, delta, nu, AVariant::a64, mirrored);
                EXPECT_NO_THROW(check_nice_premises(e, AVariant::a64));
                EXPECT_NEAR(e.nu, nu, 1e-3 * nu);
                for (int i = 0; i < d; ++i) EXPECT_NEAR(e.thresholds[i], phi_inv(e.mu[i]), 1e-12);
            }
}

TEST(NiceEdge, LargeSpreadRejected) {
    EXPECT_THROW(build_nice_edge(4, 0.25, 0.2, AVariant::a64), std::logic_error);
}

TEST(SweepPoint, WithinCalibrationAndSided) {
    double delta = 0.125;
    double nu = delta / (a_constant(16, delta, AVariant::a64) * 4.0);
    auto e = build_nice_edge(16, delta, nu, AVariant::a64);
    auto row = sweep_point(e, "a64", 4.0, 20000, 3, kCalibrationK);
    EXPECT_EQ(row.sidedness_violations, 0u);
    EXPECT_EQ(row.samples_checked, 20000u);
    EXPECT_LE(row.max_decomposition_error, 1e-10);
    EXPECT_TRUE(row.pass);
}

TEST(SweepPoint, MirroredMatchesWithinInterval) {
    double delta = 0.0625;
    double nu = (1 - 1e-6) * delta / a_constant(4, delta, AVariant::a64);
    auto a = sweep_point(build_nice_edge(4, delta, nu, AVariant::a64, false), "a64", 1.0, 100000, 5, 30);
    auto b = sweep_point(build_nice_edge(4, delta, nu, AVariant::a64, true), "a64", 1.0, 100000, 6, 30);
    EXPECT_LE(a.estimate.ci.lo, b.estimate.ci.hi);
    EXPECT_LE(b.estimate.ci.lo, a.estimate.ci.hi);
    EXPECT_EQ(b.sidedness_violations, 0u);
}

TEST(SweepPoint, IdenticalVectorsNeverCut) {
    auto e = build_nice_edge(4, 0.25, 0.0, AVariant::a64);
    auto row = sweep_point(e, "a64", 0.0, 10000, 1, 30);
    EXPECT_EQ(row.estimate.cuts, 0u);
}

TEST(SweepCsv, Header) {
    SweepConfig c;
    c.ds = {4};
    c.deltas = {0.25};
    c.multipliers = {4.0};
    c.N = 10000;
    auto rows = rounding_lemma_sweep(c);
    ASSERT_EQ(rows.size(), 1u);
    auto csv = sweep_csv(rows);
    EXPECT_EQ(csv.substr(0, csv.find('\n')).find("ratio") != std::string::npos, true);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
}

TEST(Concentration, FractionWindow) {
    std::vector<double> f(100, 0.25);
    for (int k = 0; k < 25; ++k) f[k] = 0.2;
    auto s = concentration_check(f, 0.25);
    EXPECT_EQ(s.in_window, 75u);
    EXPECT_FALSE(s.pass);
    for (int k = 0; k < 5; ++k) f[k] = 0.25 * 1.1;
    s = concentration_check(f, 0.25);
    EXPECT_EQ(s.in_window, 80u);
    EXPECT_TRUE(s.pass);
    EXPECT_THROW(concentration_check(std::vector<double>(99, 0.25), 0.25), std::invalid_argument);
}

TEST(CdfFacts, AllPass) {
    auto rows = cdf_fact_check(20000, 1);
    EXPECT_EQ(rows.size(), 8u);
    for (const auto& r : rows) EXPECT_TRUE(r.pass) << r.fact << " " << r.worst_point;
    auto csv = facts_csv(rows);
    EXPECT_NE(csv.find("fact_tail_sandwich"), std::string::npos);
}
