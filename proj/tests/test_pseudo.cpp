#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "ssve/gaussian.hpp"
#include "ssve/pseudo.hpp"
#include "ssve/relaxation.hpp"
#include "ssve/reductions.hpp"

using namespace ssve;

namespace {

std::vector<double> random_distribution(int n, uint64_t seed) {
    Rng rng(seed, stream::generator, 7);
    std::vector<double> p(size_t{1} << n);
    double s = 0;
    for (auto& x : p) s += (x = rng.uniform() + 1e-3);
    for (auto& x : p) x /= s;
    return p;
}

// Mixture of two product distributions, a mildly correlated instance.
std::vector<double> two_product_mixture(int n, double a, double b) {
    std::vector<double> p(size_t{1} << n, 0.0);
    for (size_t m = 0; m < p.size(); ++m) {
        double pa = 0.5, pb = 0.5;
        for (int i = 0; i < n; ++i) {
            bool one = (m >> i) & 1;
            pa *= one ? a : 1 - a;
            pb *= one ? b : 1 - b;
        }
        p[m] = pa + pb;
    }
    return p;
}

std::vector<double> conditional(int n, const std::vector<double>& p, int i, int a) {
    std::vector<double> q(p.size(), 0.0);
    double z = 0;
    for (size_t m = 0; m < p.size(); ++m)
        if (static_cast<int>((m >> i) & 1) == a) z += (q[m] = p[m]);
    for (auto& x : q) x /= z;
    (void)n;
    return q;
}

double root_distance(const PseudoDistribution& a, const PseudoDistribution& b) {
    return (a.root() - b.root()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(PseudoDistribution, ExplicitMoments) {
    auto p = random_distribution(4, 1);
    auto pd = PseudoDistribution::from_distribution(4, p);
    double m1 = 0, m12 = 0;
    for (size_t m = 0; m < p.size(); ++m) {
        if (m & 2) m1 += p[m];
        if ((m & 2) && (m & 4)) m12 += p[m];
    }
    EXPECT_NEAR(pd.mu(1), m1, 1e-15);
    EXPECT_NEAR(pd.both(1, 2), m12, 1e-15);
    auto loc = pd.pair_local(1, 2);
    EXPECT_NEAR(loc[0] + loc[1] + loc[2] + loc[3], 1.0, 1e-14);
    EXPECT_EQ(pd.degree(), 2);
}

TEST(PseudoDistribution, SignedMomentsDiagonal) {
    auto pd = PseudoDistribution::from_distribution(5, random_distribution(5, 2));
    Eigen::MatrixXd Y = pd.signed_moments();
    for (int i = 0; i <= 5; ++i) EXPECT_NEAR(Y(i, i), 1.0, 1e-14);
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(Y(0, i + 1), 1.0 - 2.0 * pd.mu(i), 1e-14);
}

TEST(Condition, MatchesExplicitConditional) {
    const int n = 5;
    auto p = random_distribution(n, 3);
    auto pd = PseudoDistribution::from_distribution(n, p, {1, 3});
    for (int a : {0, 1}) {
        auto c = condition(pd, 3, a);
        auto ref = PseudoDistribution::from_distribution(n, conditional(n, p, 3, a), {1});
        EXPECT_LE(root_distance(c, ref), 1e-13);
        EXPECT_EQ(c.mu(3), static_cast<double>(a));
        EXPECT_EQ(c.lift(), std::vector<int>({1}));
    }
}

TEST(Condition, SingleLiftMatchesExplicitConditional) {
    const int n = 4;
    auto p = random_distribution(n, 4);
    auto pd = PseudoDistribution::from_distribution(n, p, {}, true);
    EXPECT_EQ(pd.degree(), 4);
    auto c = condition(pd, 2, 1);
    auto ref = PseudoDistribution::from_distribution(n, conditional(n, p, 2, 1));
    EXPECT_LE(root_distance(c, ref), 1e-13);
    EXPECT_EQ(c.degree(), 2);
}

TEST(Condition, IntegralIsNoOp) {
    CutSet S = CutSet::from_members(6, {0, 2, 5});
    auto pd = PseudoDistribution::integral(S, {0, 1, 2});
    auto c = condition(pd, 2, 1);
    for (int i = 0; i < 6; ++i) EXPECT_EQ(c.mu(i), pd.mu(i));
    EXPECT_LE(root_distance(c, pd), 1e-15);
}

TEST(Condition, ProductKeepsOtherMarginals) {
    auto pd = PseudoDistribution::product(std::vector<double>(5, 0.5), {}, true);
    auto c = condition(pd, 0, 0);
    EXPECT_EQ(c.mu(0), 0.0);
    for (int i = 1; i < 5; ++i) EXPECT_NEAR(c.mu(i), 0.5, 1e-15);
}

TEST(Condition, DegenerateProbability) {
    CutSet S = CutSet::from_members(4, {1});
    auto pd = PseudoDistribution::integral(S, {0, 1});
    EXPECT_THROW(condition(pd, 0, 1), std::runtime_error);
}

TEST(Condition, NeedsLift) {
    auto pd = PseudoDistribution::product({0.3, 0.4, 0.5});
    EXPECT_THROW(condition(pd, 0, 1), std::invalid_argument);
}

TEST(Condition, SolvedPairLocalsStayValid) {
    Graph G(6, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 5}, {5, 3}});
    auto R = ssve_to_hsse(G);
    RelaxationOptions opt;
    opt.lift = {0, 3};
    auto sol = solve_relaxation(R.H, 0.5, opt, 1e-9, 50000);
    for (int v : opt.lift) {
        for (int a : {0, 1}) {
            if (sol.pd.prob(v, a) < 1e-3) continue;
            auto c = condition(sol.pd, v, a);
            for (int i = 0; i < c.n(); ++i)
                for (int j = i + 1; j < c.n(); ++j) {
                    auto loc = c.pair_local(i, j);
                    double s = 0;
                    for (double x : loc) {
                        EXPECT_GE(x, -1e-8);
                        s += x;
                    }
                    EXPECT_NEAR(s, 1.0, 1e-8);
                }
        }
    }
}

TEST(ConditioningRound, ZeroCapIdentity) {
    auto pd = PseudoDistribution::from_distribution(4, random_distribution(4, 5), {0, 1});
    auto [c, trace] = conditioning_round(pd, 0, 9);
    EXPECT_TRUE(trace.steps.empty());
    EXPECT_EQ(c.root(), pd.root());
}

TEST(ConditioningRound, IntegralUnchanged) {
    CutSet S = CutSet::from_members(6, {1, 4});
    auto pd = PseudoDistribution::integral(S, {0, 1, 4});
    for (uint64_t seed = 0; seed < 10; ++seed) {
        auto [c, trace] = conditioning_round(pd, 3, seed);
        EXPECT_LE(root_distance(c, pd), 1e-15);
        for (const auto& st : trace.steps) EXPECT_EQ(st.value, S.contains(st.variable) ? 1 : 0);
    }
}

TEST(ConditioningRound, Deterministic) {
    auto pd = PseudoDistribution::from_distribution(5, random_distribution(5, 6), {0, 2, 4});
    auto [a, ta] = conditioning_round(pd, 2, 17);
    auto [b, tb] = conditioning_round(pd, 2, 17);
    EXPECT_EQ(a.root(), b.root());
    ASSERT_EQ(ta.steps.size(), tb.steps.size());
    for (size_t k = 0; k < ta.steps.size(); ++k) EXPECT_EQ(ta.steps[k].variable, tb.steps[k].variable);
}

TEST(ConditioningRound, MutualInformationDropsOnAverage) {
    const int n = 6;
    auto pd = PseudoDistribution::from_distribution(n, two_product_mixture(n, 0.3, 0.6), {0, 1, 2, 3});
    double before = average_mutual_information(pd), after = 0;
    for (uint64_t seed = 0; seed < 50; ++seed) {
        auto [c, trace] = conditioning_round(pd, 3, seed);
        EXPECT_NEAR(trace.mutual_information_before, before, 1e-15);
        after += trace.mutual_information_after / 50.0;
    }
    EXPECT_GT(before, 0.0);
    EXPECT_LE(after, before);
}

TEST(MutualInformation, Range) {
    Rng rng(10);
    for (int k = 0; k < 2000; ++k) {
        std::array<double, 4> p;
        double s = 0;
        for (auto& x : p) s += (x = rng.uniform());
        for (auto& x : p) x /= s;
        double I = mutual_information(p);
        EXPECT_GE(I, 0.0);
        EXPECT_LE(I, 1.0 + 1e-12);
    }
    EXPECT_NEAR(mutual_information({0.25, 0.25, 0.25, 0.25}), 0.0, 1e-15);
    EXPECT_NEAR(mutual_information({0.5, 0.0, 0.0, 0.5}), 1.0, 1e-15);
}

TEST(MutualInformation, CovarianceBound) {
    // |Cov(x, y)| <= sqrt(I(x; y)) for Boolean pairs with I in bits.
    Rng rng(11);
    for (int k = 0; k < 2000; ++k) {
        std::array<double, 4> p;
        double s = 0;
        for (auto& x : p) s += (x = rng.uniform() * rng.uniform());
        for (auto& x : p) x /= s;
        double mx = p[2] + p[3], my = p[1] + p[3];
        double cov = p[3] - mx * my;
        EXPECT_LE(std::abs(cov), std::sqrt(mutual_information(p)) + 1e-12);
    }
}

TEST(ExtractVectors, IntegralSolution) {
    CutSet S = CutSet::from_members(5, {0, 3});
    auto vs = extract_vectors(PseudoDistribution::integral(S));
    for (int i = 0; i < 5; ++i) {
        double sign = S.contains(i) ? -1.0 : 1.0;
        EXPECT_LE((vs.v(i) - sign * vs.phi_bar()).norm(), 1e-12);
        EXPECT_LE(vs.z(i).norm(), 1e-12);
    }
}

TEST(ExtractVectors, ExplicitIdentities) {
    const int n = 6;
    auto pd = PseudoDistribution::from_distribution(n, random_distribution(n, 12));
    auto vs = extract_vectors(pd);
    EXPECT_NEAR(vs.phi_bar().norm(), 1.0, 1e-12);
    for (int i = 0; i < n; ++i) {
        EXPECT_NEAR(vs.v(i).norm(), 1.0, 1e-8);
        EXPECT_NEAR(vs.v(i).dot(vs.phi_bar()), 1.0 - 2.0 * pd.mu(i), 1e-8);
        EXPECT_NEAR(vs.mu[i], pd.mu(i), 1e-8);
        EXPECT_NEAR(vs.z(i).squaredNorm(), pd.mu(i) * (1.0 - pd.mu(i)), 1e-7);
        for (int j = i + 1; j < n; ++j) {
            EXPECT_NEAR(vs.z(i).dot(vs.z(j)), pd.cov(i, j), 1e-7);
            EXPECT_NEAR(0.25 * (vs.v(i) - vs.v(j)).squaredNorm(), pd.disagree(i, j), 1e-7);
        }
    }
    Eigen::MatrixXd Gram = vs.V.transpose() * vs.V;
    EXPECT_LE((Gram - pd.signed_moments()).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(ExtractVectors, GapAssignmentInnerProducts) {
    for (int d : {4, 8}) {
        auto g = gap_single_edge(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                if (i != j) EXPECT_NEAR(g.vectors.u(i).dot(g.vectors.u(j)), g.delta * g.delta, 1e-12);
    }
}

TEST(ExtractVectors, RejectsIndefinite) {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(3, 3);
    B(0, 0) = 1.0;
    B(0, 1) = B(1, 0) = B(1, 1) = 0.5;
    B(0, 2) = B(2, 0) = B(2, 2) = 0.5;
    B(1, 2) = B(2, 1) = 0.9;  // p11 above both marginals
    PseudoDistribution pd(2, {}, {B});
    EXPECT_THROW(extract_vectors(pd), std::runtime_error);
}
