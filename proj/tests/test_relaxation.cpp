#include <gtest/gtest.h>

#include <stdexcept>

#include "ssve/oracle.hpp"
#include "ssve/reductions.hpp"
#include "ssve/relaxation.hpp"

using namespace ssve;

namespace {

Hypergraph single_edge(int d) {
    std::vector<int> e(d);
    for (int i = 0; i < d; ++i) e[i] = i;
    return Hypergraph(std::vector<double>(d, 1.0), {e}, {1.0});
}

int pair_count(const Hypergraph& H) {
    int c = 0;
    for (int e = 0; e < H.m(); ++e) {
        int k = static_cast<int>(H.edge(e).size());
        c += k * (k - 1) / 2;
    }
    return c;
}

}  // namespace

TEST(BuildRelaxation, SingleEdgeShape) {
    for (int d : {4, 8}) {
        auto H = single_edge(d);
        auto P = build_relaxation(H, 1.0 / d);
        EXPECT_EQ(P.n, d);
        EXPECT_EQ(P.epigraph_vars, 1);
        EXPECT_EQ(P.moment_side(), d + 1);
        EXPECT_EQ(P.l1_constraint_count, pair_count(H));
        EXPECT_EQ(P.primary_blocks, 1);
    }
}

TEST(BuildRelaxation, PairCountOnReducedGraph) {
    Graph G(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {0, 2}});
    auto R = ssve_to_hsse(G);
    auto P = build_relaxation(R.H, 0.4);
    EXPECT_EQ(P.l1_constraint_count, pair_count(R.H));
    EXPECT_EQ(P.moment_side(), R.H.n() + 1);
}

TEST(BuildRelaxation, LiftBlocks) {
    auto H = single_edge(5);
    RelaxationOptions o;
    o.lift = {0, 2, 4};
    auto P = build_relaxation(H, 0.2, o);
    EXPECT_EQ(P.primary_blocks, 8);
    EXPECT_EQ(P.epigraph_vars, 8);
}

TEST(BuildRelaxation, RejectsBadInput) {
    auto H = single_edge(4);
    EXPECT_THROW(build_relaxation(H, 0.0), std::invalid_argument);
    EXPECT_THROW(build_relaxation(H, 0.6), std::invalid_argument);
    RelaxationOptions o;
    o.degree = 3;
    EXPECT_THROW(build_relaxation(H, 0.25, o), std::invalid_argument);
    o.degree = 2;
    o.lift = {1, 1};
    EXPECT_THROW(build_relaxation(H, 0.25, o), std::invalid_argument);
}

TEST(SolveRelaxation, SingleEdgeBelowGapValue) {
    for (int d : {4, 8, 16}) {
        auto s = solve_relaxation(single_edge(d), 1.0 / d);
        EXPECT_TRUE(s.report.converged);
        EXPECT_LE(s.objective, 1.0 / d + 1e-6);
        EXPECT_EQ(exact_hsse(single_edge(d), 1.0 / d).value, 1.0);
    }
}

TEST(SolveRelaxation, SingleEdgeProductCardinality) {
    // sum_j x_i x_j = x_i forces Pr[x_i = x_j = 1] = 0, so every pair disagrees with
    // probability mu_i + mu_j = 2/d.
    for (int d : {4, 8}) {
        RelaxationOptions o;
        o.degree = 4;
        auto s = solve_relaxation(single_edge(d), 1.0 / d, o, 1e-7, 20000);
        EXPECT_NEAR(s.objective, 2.0 / d, 1e-5);
    }
}

TEST(SolveRelaxation, LowerBoundsOracle) {
    std::vector<Graph> graphs = {Graph(4, {{0, 1}, {1, 2}, {2, 3}}), complete_graph(4), cycle_graph(6),
                                 Graph(6, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 5}, {5, 3}})};
    for (int k = 0; k < 4; ++k) graphs.push_back(random_graph(7, 0.4, 700 + k));
    for (const auto& G : graphs) {
        auto R = ssve_to_hsse(G);
        for (int k = 1; 2 * k <= G.n(); ++k) {
            double delta = static_cast<double>(k) / G.n();
            auto s = solve_relaxation(R.H, delta);
            EXPECT_LE(s.objective, exact_reduced_hsse(G, delta).value + 1e-5) << G.n() << " " << k;
        }
    }
}

TEST(SolveRelaxation, UncutPlantedComponentIsZero) {
    // Two disjoint triangles; a triangle is an uncut set of relative size 1/2.
    Graph G(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
    auto R = ssve_to_hsse(G);
    auto s = solve_relaxation(R.H, 0.5);
    EXPECT_LE(s.objective, 1e-5);
}

TEST(SolveRelaxation, L1HoldsWithoutExplicitRows) {
    Graph G(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {1, 3}});
    auto R = ssve_to_hsse(G);
    RelaxationOptions o;
    o.l1_constraints = false;
    auto s = solve_relaxation(R.H, 0.4, o, 1e-8, 50000);
    const auto& pd = s.pd;
    for (int i = 0; i < pd.n(); ++i)
        for (int j = i + 1; j < pd.n(); ++j) EXPECT_LE(std::abs(pd.mu(i) - pd.mu(j)), pd.disagree(i, j) + 1e-6);
}

TEST(SolveRelaxation, ResidualsWithinTolerance) {
    auto R = ssve_to_hsse(cycle_graph(5));
    auto s = solve_relaxation(R.H, 0.4, {}, 1e-6);
    EXPECT_TRUE(s.report.converged);
    EXPECT_LE(s.report.primal_residual, 1e-6);
    EXPECT_LE(s.report.gap, 1e-6);
    EXPECT_GE(s.report.min_eigenvalue, -1e-6);
    EXPECT_NEAR(s.objective, relaxation_objective(R.H, 0.4, s.pd), 1e-5);
}

TEST(SolveRelaxation, Deterministic) {
    auto R = ssve_to_hsse(random_graph(6, 0.5, 3));
    auto a = solve_relaxation(R.H, 1.0 / 3.0);
    auto b = solve_relaxation(R.H, 1.0 / 3.0);
    EXPECT_EQ(a.objective, b.objective);
    EXPECT_EQ(a.pd.root(), b.pd.root());
}

TEST(SolveRelaxation, IterationBudgetExhausted) {
    auto R = ssve_to_hsse(cycle_graph(6));
    EXPECT_THROW(solve_relaxation(R.H, 0.5, {}, 1e-9, 3), std::runtime_error);
}

TEST(SolveRelaxation, VectorIdentitiesOnSolvedInstance) {
    auto R = ssve_to_hsse(random_graph(6, 0.5, 8));
    auto s = solve_relaxation(R.H, 0.5);
    auto vs = extract_vectors(s.pd);
    const auto& pd = s.pd;
    for (int i = 0; i < pd.n(); ++i) {
        EXPECT_NEAR(vs.mu[i], pd.mu(i), 1e-7);
        EXPECT_NEAR(vs.z(i).squaredNorm(), pd.mu(i) * (1.0 - pd.mu(i)), 1e-7);
        for (int j = i + 1; j < pd.n(); ++j) {
            EXPECT_NEAR(vs.z(i).dot(vs.z(j)), pd.cov(i, j), 1e-7);
            EXPECT_NEAR(0.25 * (vs.v(i) - vs.v(j)).squaredNorm(), pd.disagree(i, j), 1e-7);
        }
    }
}
