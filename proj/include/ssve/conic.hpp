#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace ssve {

// Rows of A are ordered: zero cone, nonnegative cone, then one svec block per PSD cone.
// svec packs the upper triangle column by column, scaling off-diagonal entries by sqrt(2).
struct ConeDims {
    int zero = 0;
    int nonneg = 0;
    std::vector<int> psd;  // side lengths

    int rows() const;
};

//   minimize q'x  subject to  A x + s = b,  s in K
struct ConicProblem {
    Eigen::SparseMatrix<double> A;
    Eigen::VectorXd b;
    Eigen::VectorXd q;
    ConeDims cones;
};

struct AdmmSettings {
    double tol = 1e-6;
    int max_iter = 10000;
    double rho = 0.1;
    double zero_rho_scale = 100.0;  // step size multiplier on equality rows
    double sigma = 1e-6;
    double alpha = 1.6;
    int check_every = 25;
    int adapt_every = 100;  // step size is rebalanced at most this often (multiple of check_every)
    bool adaptive_rho = true;
    int verbose = 0;  // print residuals to stderr every this many iterations
};

struct AdmmResult {
    Eigen::VectorXd x, s, y;
    bool converged = false;
    int iterations = 0;
    double primal_residual = 0, dual_residual = 0;
    double primal_objective = 0, dual_objective = 0;
    double gap = 0;
    double min_psd_eigenvalue = 0;
};

inline int svec_size(int k) { return k * (k + 1) / 2; }
inline int svec_index(int i, int j) {  // requires i <= j
    return j * (j + 1) / 2 + i;
}

Eigen::MatrixXd svec_unpack(const double* s, int k);
void svec_pack(const Eigen::MatrixXd& X, double* s);
// Frobenius projection onto the PSD cone; returns the smallest eigenvalue before projection.
double project_psd(Eigen::MatrixXd& X);

AdmmResult solve_conic(const ConicProblem& prob, const AdmmSettings& settings);

}  // namespace ssve
