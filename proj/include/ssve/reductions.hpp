#pragma once

#include <cstdint>
#include <vector>

#include "ssve/graph.hpp"
#include "ssve/relaxation.hpp"

namespace ssve {

// Bipartite vertex/edge incidence graph: vertex v of G keeps index v and weight w(v),
// edge k of G becomes vertex n + k with weight 0.
Graph vertex_to_symmetric(const Graph& G);

// One hyperedge {v} u N(v) per vertex v of Gs with w(e) = W(v) = weight(v); pi(e_v) = v.
Hypergraph symmetric_to_hypergraph(const Graph& Gs);

struct Reduction {
    Graph original;
    Graph symmetric;
    Hypergraph H;
    int n_original = 0;
};

Reduction ssve_to_hsse(const Graph& G);

// Image of S under the completeness map: S plus every edge-vertex incident to S.
CutSet completeness_map(const Graph& G, const CutSet& S);

struct RollbackResult {
    CutSet set;          // subset of V_G
    double eps_prime = 0;
    double delta_prime = 0;
    int size = 0;
    double phi_v = 0;
    bool size_window_ok = false;
    bool expansion_ok = false;
};

// Keeps the original vertices of S whose incident edge-vertices all lie in S, then checks
// (1 - eps') delta' n <= |S'| <= delta' n and phi^V(S') <= 2 eps'.
RollbackResult rollback_set(const Reduction& R, const CutSet& S, double eps_prime);

struct GapInstance {
    Hypergraph H;
    double delta = 0;
    VectorSolution vectors;
};

// Single hyperedge on d unit-weight vertices, delta = 1/d, with the vector assignment
// u_i = delta phi_bar + sqrt(delta - delta^2) e_i.
GapInstance gap_single_edge(int d);

// round(C n log2 d) uniformly random d-subsets of [n], unit weights.
Hypergraph random_gap_hypergraph(int d, int n, double C, uint64_t seed);

// Vertex (v, i) = v * d + i; port i of v is its i-th sorted neighbor.
Graph replacement_product(const Graph& G, const Graph& expander);
// Lift of S: every cloud of a vertex in S.
CutSet cloud_lift(const Graph& G, const CutSet& S);

Graph complete_graph(int k);
Graph cycle_graph(int k);
Graph circulant_graph(int k, const std::vector<int>& offsets);
// Expander on k vertices: complete graph for g = k - 1, otherwise a circulant of even degree g,
// or odd degree g with the antipodal chord when k is even.
Graph regular_expander(int k, int g);

struct PlantedInstance {
    Graph G;
    CutSet planted;
    double delta = 0;
};

// Sparse random graphs on the planted set [0, k) and on the rest, each with target degree
// inner_degree (capped at max_degree), plus `crossing` edges between the two sides.
PlantedInstance planted_instance(int n, int k, int inner_degree, int crossing, int max_degree, uint64_t seed);

// Erdos-Renyi G(n, p) from the generator stream.
Graph random_graph(int n, double p, uint64_t seed);

}  // namespace ssve
