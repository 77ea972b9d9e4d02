#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "ssve/graph.hpp"

namespace ssve {

// Degree-2 moments over Boolean variables x_1..x_n, lifted along a set T of variables.
//
// Each block B_alpha (alpha in {0,1}^T, bit k of alpha is the value of T[k]) is an
// (n+1)x(n+1) unnormalized 0/1 moment matrix:
//   B[0][0] = Pr[x_T = alpha],  B[0][i] = Pr[x_T = alpha, x_i = 1],
//   B[i][j] = Pr[x_T = alpha, x_i = 1, x_j = 1].
// The root moments are the sum of all blocks. Optionally every variable i carries its own
// two-block split of the root (single-variable lifting), which is what degree 4 provides.
class PseudoDistribution {
public:
    PseudoDistribution() = default;
    PseudoDistribution(int n, std::vector<int> lift, std::vector<Eigen::MatrixXd> blocks,
                       std::map<int, std::array<Eigen::MatrixXd, 2>> singles = {});

    // Exact moments of an explicit distribution over {0,1}^n (n <= 20), probs indexed by bitmask.
    static PseudoDistribution from_distribution(int n, const std::vector<double>& probs,
                                                const std::vector<int>& lift = {}, bool single_lifts = false);
    static PseudoDistribution integral(const CutSet& S, const std::vector<int>& lift = {},
                                       bool single_lifts = false);
    static PseudoDistribution product(const std::vector<double>& mu, const std::vector<int>& lift = {},
                                      bool single_lifts = false);

    int n() const { return n_; }
    int degree() const;
    const std::vector<int>& lift() const { return lift_; }
    const std::vector<Eigen::MatrixXd>& blocks() const { return blocks_; }
    const std::map<int, std::array<Eigen::MatrixXd, 2>>& singles() const { return singles_; }
    const Eigen::MatrixXd& root() const { return root_; }

    // Variables that can be conditioned on.
    std::vector<int> conditionable() const;
    bool can_condition(int i) const;

    double mu(int i) const { return root_(0, i + 1); }
    double both(int i, int j) const { return i == j ? mu(i) : root_(i + 1, j + 1); }
    double disagree(int i, int j) const { return mu(i) + mu(j) - 2.0 * both(i, j); }
    double cov(int i, int j) const { return both(i, j) - mu(i) * mu(j); }
    // (p00, p01, p10, p11) with the first index for x_i.
    std::array<double, 4> pair_local(int i, int j) const;
    double prob(int i, int a) const { return a ? mu(i) : 1.0 - mu(i); }

    // ±1 moment matrix of the root: Y[0][0] = 1, Y[0][i] = E[X_i], Y[i][j] = E[X_i X_j].
    Eigen::MatrixXd signed_moments() const;

private:
    int n_ = 0;
    std::vector<int> lift_;
    std::vector<Eigen::MatrixXd> blocks_;
    std::map<int, std::array<Eigen::MatrixXd, 2>> singles_;
    Eigen::MatrixXd root_;
};

PseudoDistribution condition(const PseudoDistribution& pd, int i, int a);

struct ConditioningStep {
    int variable;
    int value;
    double probability;
};

struct ConditioningTrace {
    std::vector<ConditioningStep> steps;
    double mutual_information_before = 0.0;
    double mutual_information_after = 0.0;
};

// Conditions on min(t_cap, available) uniformly chosen liftable variables, sampling each value
// from the current marginal. Degree-4 single lifts allow at most one step.
std::pair<PseudoDistribution, ConditioningTrace> conditioning_round(const PseudoDistribution& pd, int t_cap,
                                                                    uint64_t seed);

// Mutual information (bits) of a 2x2 joint distribution; small negative entries are clipped.
double mutual_information(const std::array<double, 4>& p);
// Average of I(x_i; x_j) over ordered pairs i != j drawn with probability proportional to w_i w_j.
double average_mutual_information(const PseudoDistribution& pd, const std::vector<double>& weights = {});

}  // namespace ssve
