#pragma once

#include "ssve/graph.hpp"

namespace ssve {

struct OracleResult {
    double value = 0;
    CutSet set;
};

// Target size for a fraction delta of n vertices.
int target_size(int n, double delta);

// Minimum vertex expansion over all sets of size round(delta n); ties go to the
// lexicographically smallest member list. n <= 24.
OracleResult exact_ssve(const Graph& G, double delta, Convention conv = Convention::size);

// Minimum hyperedge expansion over all S with |W(S) - delta W(V)| <= weight_tol, enumerated in
// Gray-code order (first minimum wins). weight_tol < 0 selects half the smallest positive W.
// |V(H)| <= 20.
OracleResult exact_hsse(const Hypergraph& H, double delta, double weight_tol = -1.0);

// Exact hyperedge-expansion optimum of the reduced instance of G at k = round(delta n):
// min over k-subsets A of (minimum vertex cover of the edges between A and its complement) / k.
// The returned set lives on V_G u E_G. n <= 24.
OracleResult exact_reduced_hsse(const Graph& G, double delta);

}  // namespace ssve
