#include <gtest/gtest.h>

#include <cmath>

#include "ssve/gaussian.hpp"
#include "ssve/oracle.hpp"
#include "ssve/reductions.hpp"

using namespace ssve;

namespace {

Graph star3() { return Graph(4, {{0, 1}, {0, 2}, {0, 3}}); }

Graph weighted_random(int n, double p, uint64_t seed) {
    Graph g = random_graph(n, p, seed);
    Rng rng(seed, stream::generator, 1);
    std::vector<double> w(n);
    for (auto& x : w) x = 0.25 + rng.uniform() * 2.0;
    return Graph(n, g.edges(), w);
}

// Symmetric boundary rescanned from the definition: vertices with a neighbor on the other side.
double sym_rescan(const Graph& G, const CutSet& S) {
    double num = 0, den = 0;
    for (int v = 0; v < G.n(); ++v) {
        if (S.contains(v)) den += G.weight(v);
        bool straddle = false;
        for (int u : G.neighbors(v)) straddle = straddle || (S.contains(u) != S.contains(v));
        if (straddle) num += G.weight(v);
    }
    return num / den;
}

}  // namespace

TEST(SsveToHsse, Star) {
    auto R = ssve_to_hsse(star3());
    EXPECT_EQ(R.H.n(), 7);
    EXPECT_EQ(R.H.edge(0).size(), 4u);
    for (int v = 1; v <= 3; ++v) EXPECT_EQ(R.H.edge(v).size(), 2u);
    for (int e = 4; e < 7; ++e) EXPECT_EQ(R.H.edge(e).size(), 3u);
    EXPECT_EQ(R.H.total_w(), 4.0);
    EXPECT_EQ(R.H.total_W(), 4.0);
    EXPECT_EQ(R.H.arity(), 4);
}

TEST(SsveToHsse, SingleEdge) {
    auto R = ssve_to_hsse(Graph(2, {{0, 1}}));
    EXPECT_EQ(R.H.n(), 3);
    EXPECT_EQ(R.H.total_w(), 2.0);
    EXPECT_EQ(R.H.total_W(), 2.0);
}

TEST(SsveToHsse, BookkeepingAndPi) {
    for (uint64_t s = 0; s < 30; ++s) {
        Graph G = random_graph(4 + s % 8, 0.4, s);
        auto R = ssve_to_hsse(G);
        EXPECT_EQ(R.H.total_w(), static_cast<double>(G.n()));
        EXPECT_EQ(R.H.total_W(), static_cast<double>(G.n()));
        ASSERT_TRUE(R.H.has_pi());
        std::vector<int> seen(R.H.n(), 0);
        for (int e = 0; e < R.H.m(); ++e) {
            int p = R.H.pi(e);
            EXPECT_EQ(seen[p]++, 0);
            const auto& m = R.H.edge(e);
            EXPECT_TRUE(std::binary_search(m.begin(), m.end(), p));
        }
        if (G.m() > 0) EXPECT_EQ(R.H.arity(), std::max(G.max_degree() + 1, 3));
    }
}

TEST(VertexToSymmetric, Triangle) {
    Graph Gs = vertex_to_symmetric(complete_graph(3));
    EXPECT_EQ(Gs.n(), 6);
    EXPECT_EQ(Gs.m(), 6);
    for (int v = 0; v < 3; ++v) EXPECT_EQ(Gs.degree(v), 2);
    for (int e = 3; e < 6; ++e) {
        EXPECT_EQ(Gs.degree(e), 2);
        EXPECT_EQ(Gs.weight(e), 0.0);
    }
    EXPECT_EQ(Gs.max_degree(), 2);
}

TEST(VertexToSymmetric, MaxDegreePreserved) {
    for (uint64_t s = 0; s < 20; ++s) {
        Graph G = random_graph(9, 0.4, 50 + s);
        if (G.max_degree() < 2) continue;
        EXPECT_EQ(vertex_to_symmetric(G).max_degree(), G.max_degree());
    }
}

TEST(VertexToSymmetric, CompletenessBound) {
    for (uint64_t s = 0; s < 30; ++s) {
        Graph G = random_graph(8, 0.35, 70 + s);
        Rng rng(s, stream::generator, 9);
        CutSet S(8);
        while (S.count() == 0 || S.count() == 8)
            for (int v = 0; v < 8; ++v) S.in[v] = rng.uniform() < 0.4;
        Graph Gs = vertex_to_symmetric(G);
        CutSet img = completeness_map(G, S);
        double lhs = symmetric_vertex_expansion(Gs, img);
        EXPECT_LE(lhs, 2 * vertex_expansion(G, S) + 1e-12);
        EXPECT_NEAR(lhs, vertex_expansion(G, S), 1e-12);
    }
}

TEST(VertexToSymmetric, EmptySetRejected) {
    EXPECT_THROW(completeness_map(complete_graph(3), CutSet(3)), std::invalid_argument);
}

TEST(SymmetricToHypergraph, ExactEqualityAllSubsets) {
    for (uint64_t s = 0; s < 5; ++s) {
        Graph G = weighted_random(10, 0.3, 200 + s);
        Hypergraph H = symmetric_to_hypergraph(G);
        for (uint32_t mask = 1; mask < (1u << 10); ++mask) {
            CutSet S = CutSet::from_mask(10, mask);
            EXPECT_NEAR(H.weight_of(S), [&] {
                double w = 0;
                for (int v : S.members()) w += G.weight(v);
                return w;
            }(), 1e-12);
            double cut = hyperedge_cut_weight(H, S);
            double wS = H.weight_of(S);
            EXPECT_NEAR(cut / wS, sym_rescan(G, S), 1e-12);
        }
    }
}

TEST(SymmetricToHypergraph, FullSetIsZero) {
    Graph G = weighted_random(6, 0.5, 3);
    Hypergraph H = symmetric_to_hypergraph(G);
    CutSet all = CutSet::from_mask(6, 63);
    EXPECT_EQ(hyperedge_cut_weight(H, all), 0.0);
    EXPECT_EQ(symmetric_vertex_expansion(G, all), 0.0);
}

TEST(SymmetricToHypergraph, PathSingleVertex) {
    Graph P(3, {{0, 1}, {1, 2}});
    Hypergraph H = symmetric_to_hypergraph(P);
    CutSet S = CutSet::from_members(3, {0});
    EXPECT_DOUBLE_EQ(hyperedge_cut_weight(H, S) / H.weight_of(S), 2.0);
    EXPECT_DOUBLE_EQ(symmetric_vertex_expansion(P, S), 2.0);
}

TEST(ReductionChain, ImageBoundsByEnumeration) {
    for (uint64_t s = 0; s < 8; ++s) {
        Graph G = random_graph(7, 0.4, 400 + s);
        auto R = ssve_to_hsse(G);
        for (uint32_t mask = 1; mask < (1u << 7) - 1; ++mask) {
            CutSet S = CutSet::from_mask(7, mask);
            if (2 * S.count() > 7) continue;
            CutSet img = completeness_map(G, S);
            double phiE = hyperedge_expansion(R.H, img);
            double sym = symmetric_vertex_expansion(R.symmetric, img);
            double phiV = vertex_expansion(G, S);
            EXPECT_LE(phiE, sym + 1e-12);
            EXPECT_LE(sym, phiV + 1e-12);
            EXPECT_LE(phiV, edge_expansion(G, S) + 1e-12);
            EXPECT_LE(edge_expansion(G, S), G.max_degree() * phiV + 1e-12);
        }
    }
}

TEST(Rollback, UncutSetExact) {
    Graph G(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}});
    auto R = ssve_to_hsse(G);
    CutSet S = CutSet::from_members(6, {0, 1, 2});
    auto rb = rollback_set(R, completeness_map(G, S), 0.0);
    EXPECT_EQ(rb.set, S);
    EXPECT_EQ(rb.size, 3);
    EXPECT_EQ(rb.phi_v, 0.0);
}

TEST(Rollback, CompletenessImageRecovered) {
    for (uint64_t s = 0; s < 30; ++s) {
        Graph G = random_graph(10, 0.25, 500 + s);
        Rng rng(s, stream::generator, 2);
        CutSet S(10);
        while (S.count() < 2 || S.count() > 5)
            for (int v = 0; v < 10; ++v) S.in[v] = rng.uniform() < 0.3;
        auto R = ssve_to_hsse(G);
        CutSet img = completeness_map(G, S);
        double eps = hyperedge_expansion(R.H, img);
        if (eps > 0.5) continue;
        auto rb = rollback_set(R, img, eps);
        EXPECT_EQ(rb.set, S);
        EXPECT_TRUE(rb.size_window_ok);
        EXPECT_TRUE(rb.expansion_ok);
    }
}

TEST(Rollback, PreconditionChecked) {
    Graph G(4, {{0, 1}, {1, 2}, {2, 3}});
    auto R = ssve_to_hsse(G);
    CutSet img = completeness_map(G, CutSet::from_members(4, {0}));
    EXPECT_THROW(rollback_set(R, img, 0.1), std::invalid_argument);
}

TEST(Rollback, PlantedInstanceBounds) {
    for (uint64_t s = 0; s < 5; ++s) {
        auto P = planted_instance(60, 15, 3, 2, 8, s);
        auto R = ssve_to_hsse(P.G);
        CutSet img = completeness_map(P.G, P.planted);
        double eps = hyperedge_expansion(R.H, img);
        auto rb = rollback_set(R, img, eps);
        EXPECT_EQ(rb.set, P.planted);
        EXPECT_LE(rb.phi_v, 2 * eps + 1e-12);
    }
}

TEST(GapSingleEdge, Construction) {
    for (int d : {2, 4, 8}) {
        auto g = gap_single_edge(d);
        double delta = 1.0 / d;
        EXPECT_EQ(g.H.m(), 1);
        EXPECT_EQ(static_cast<int>(g.H.edge(0).size()), d);
        double card = 0;
        for (int i = 0; i < d; ++i) {
            auto u = g.vectors.u(i);
            EXPECT_NEAR(u.dot(g.vectors.phi_bar()), delta, 1e-14);
            EXPECT_NEAR(u.squaredNorm(), delta, 1e-14);
            card += u.dot(g.vectors.phi_bar());
            for (int j = i + 1; j < d; ++j) EXPECT_NEAR(u.dot(g.vectors.u(j)), delta * delta, 1e-14);
        }
        EXPECT_NEAR(card, 1.0, 1e-14);
    }
}

TEST(RandomGapHypergraph, SizeAndDeterminism) {
    Hypergraph H = random_gap_hypergraph(4, 16, 2.0, 11);
    EXPECT_EQ(H.m(), 64);
    for (int e = 0; e < H.m(); ++e) EXPECT_EQ(H.edge(e).size(), 4u);
    Hypergraph H2 = random_gap_hypergraph(4, 16, 2.0, 11);
    EXPECT_EQ(hypergraph_to_json(H), hypergraph_to_json(H2));
    EXPECT_THROW(random_gap_hypergraph(5, 4, 2.0, 1), std::invalid_argument);
}

TEST(RandomGapHypergraph, SampledSubsetsCutMany) {
    Hypergraph H = random_gap_hypergraph(4, 32, 2.0, 5);
    Rng rng(5, stream::monte_carlo);
    const int k = 8;
    for (int t = 0; t < 200; ++t) {
        std::vector<int> perm(32);
        for (int i = 0; i < 32; ++i) perm[i] = i;
        rng.shuffle(perm.begin(), perm.end());
        CutSet S = CutSet::from_members(32, std::vector<int>(perm.begin(), perm.begin() + k));
        EXPECT_GE(hyperedge_cut_weight(H, S), H.m() / 8.0);
    }
}

TEST(ReplacementProduct, CycleWithEdge) {
    Graph G = replacement_product(cycle_graph(4), complete_graph(2));
    EXPECT_EQ(G.n(), 8);
    EXPECT_EQ(G.m(), 8);
    EXPECT_TRUE(G.is_regular());
    EXPECT_EQ(G.max_degree(), 2);
}

TEST(ReplacementProduct, RandomRegular) {
    Graph X = complete_graph(4);
    for (int k : {10, 12, 14}) {
        Graph G = circulant_graph(k, {1, 3});
        Graph R = replacement_product(G, X);
        EXPECT_TRUE(R.is_regular());
        EXPECT_EQ(R.max_degree(), 4);
        EXPECT_EQ(R.n(), 4 * k);
        EXPECT_EQ(R.m(), G.m() + k * X.m());
    }
}

TEST(ReplacementProduct, CompletenessRatio) {
    Graph G = circulant_graph(12, {1, 2});
    Graph X = regular_expander(4, 3);
    Graph R = replacement_product(G, X);
    for (uint32_t mask : {0x7u, 0x3u, 0x15u, 0x3fu}) {
        CutSet S = CutSet::from_mask(12, mask);
        CutSet L = cloud_lift(G, S);
        double base = static_cast<double>(edges_cut(G, S)) / (G.max_degree() * S.count());
        double lifted = static_cast<double>(edges_cut(R, L)) / (R.max_degree() * L.count());
        EXPECT_NEAR(lifted, base / (X.max_degree() + 1), 1e-15);
    }
}

TEST(ReplacementProduct, RejectsIrregular) {
    Graph P(3, {{0, 1}, {1, 2}});
    EXPECT_THROW(replacement_product(P, complete_graph(2)), std::invalid_argument);
}

TEST(Expanders, Regularity) {
    for (int k : {6, 8, 10, 16})
        for (int g = 2; g < k && g <= 5; ++g) {
            if (g % 2 && k % 2) continue;
            Graph X = regular_expander(k, g);
            EXPECT_TRUE(X.is_regular());
            EXPECT_EQ(X.max_degree(), g);
            EXPECT_TRUE(X.connected());
        }
}

TEST(PlantedInstance, Shape) {
    auto P = planted_instance(60, 15, 3, 2, 8, 1);
    EXPECT_EQ(P.G.n(), 60);
    EXPECT_LE(P.G.max_degree(), 8);
    EXPECT_LE(vertex_expansion(P.G, P.planted), 0.2);
    EXPECT_DOUBLE_EQ(P.delta, 0.25);
}
