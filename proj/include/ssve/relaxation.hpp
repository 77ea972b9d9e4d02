#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ssve/conic.hpp"
#include "ssve/graph.hpp"
#include "ssve/pseudo.hpp"

namespace ssve {

enum class PairScope { all, hyperedges };

struct RelaxationOptions {
    int degree = 2;                 // 2, or 4 for single-variable lifting of every variable
    std::vector<int> lift;          // variables whose joint assignments get their own blocks
    bool l1_constraints = true;
    // Per block and variable i: sum_j W_j X_ij = delta W(V) X_0i, the degree-2 shadow of
    // cardinality times x_i.
    bool product_cardinality = false;
    PairScope locality = PairScope::all;
};

struct RelaxationProblem {
    const Hypergraph* H = nullptr;
    double delta = 0;
    RelaxationOptions options;
    int n = 0;                      // Boolean variables (vertices of H)
    std::vector<int> objective_edges;   // hyperedges with w(e) > 0, one epigraph variable per block each
    int primary_blocks = 0;
    int total_blocks = 0;
    int epigraph_vars = 0;
    int l1_constraint_count = 0;    // pairs (i,j) inside hyperedges, per primary block
    int cardinality_rows = 0;
    ConicProblem conic;
    std::vector<int> block_offset;  // start of each block's upper triangle in x

    int moment_side() const { return n + 1; }
};

RelaxationProblem build_relaxation(const Hypergraph& H, double delta, const RelaxationOptions& options = {});

struct SolveReport {
    double objective = 0;
    double dual_objective = 0;
    double gap = 0;
    double primal_residual = 0;
    double dual_residual = 0;
    double min_eigenvalue = 0;
    int iterations = 0;
    bool converged = false;
};

struct SdpSolution {
    PseudoDistribution pd;
    double objective = 0;
    SolveReport report;
};

SdpSolution solve_sdp(const RelaxationProblem& problem, double tol = 1e-6, int max_iter = 10000);
// Convenience: build and solve.
SdpSolution solve_relaxation(const Hypergraph& H, double delta, const RelaxationOptions& options = {},
                             double tol = 1e-6, int max_iter = 10000);

// Relaxation objective evaluated at the root moments of pd (max over pairs per hyperedge).
double relaxation_objective(const Hypergraph& H, double delta, const PseudoDistribution& pd);

// Unit vectors phi_bar (column 0) and v_i (column i+1) with v_i = (1 - 2 mu_i) phi_bar - 2 z_i.
struct VectorSolution {
    Eigen::MatrixXd V;   // r x (n+1)
    Eigen::VectorXd mu;  // n
    Eigen::MatrixXd Z;   // r x n

    int n() const { return static_cast<int>(mu.size()); }
    int r() const { return static_cast<int>(V.rows()); }
    Eigen::VectorXd phi_bar() const { return V.col(0); }
    Eigen::VectorXd v(int i) const { return V.col(i + 1); }
    Eigen::VectorXd z(int i) const { return Z.col(i); }
    Eigen::VectorXd u(int i) const { return 0.5 * (V.col(0) - V.col(i + 1)); }

    static VectorSolution from_vectors(Eigen::MatrixXd V);
};

VectorSolution extract_vectors(const PseudoDistribution& pd, double psd_tol = 1e-6);
// (1/(delta W(V))) sum_e w(e) max_{i,j in e} |u_i - u_j|^2
double vector_objective(const Hypergraph& H, double delta, const VectorSolution& vs);

}  // namespace ssve
