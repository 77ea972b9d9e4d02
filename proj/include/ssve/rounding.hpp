#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ssve/graph.hpp"
#include "ssve/pseudo.hpp"
#include "ssve/reductions.hpp"
#include "ssve/relaxation.hpp"

namespace ssve {

constexpr double kDeletionThreshold = 0.1;

// Delta_e = max over pairs i, j in e of Pr[x_i != x_j] under pd.
std::vector<double> edge_disagreement(const Hypergraph& H, const PseudoDistribution& pd);

struct DeletionResult {
    std::vector<int> survivors;
    std::vector<int> deleted;
    double deleted_weight = 0;
    double bound = 0;  // 10 * sum_e w(e) Delta_e
    bool bound_ok = false;
};

// Deletes every hyperedge with Delta_e >= 1/10.
DeletionResult delete_heavy_edges(const Hypergraph& H, const std::vector<double>& Delta);
DeletionResult delete_heavy_edges(const Hypergraph& H, const PseudoDistribution& pd);

struct LocalRepair {
    double violation = 0;       // most negative pair-local probability or marginal before repair
    double min_eigenvalue = 0;  // smallest eigenvalue of the root moments before repair
    double lambda = 0;          // weight given to the product distribution
};

// Root moments mixed with the product distribution of bias delta, with the smallest weight that
// makes every pair-local distribution nonnegative and the moment matrix PSD. Removes solver
// residue; cardinality sum_i W_i mu_i is preserved.
PseudoDistribution repair_local_validity(const PseudoDistribution& pd, double delta, LocalRepair* info = nullptr);

// v'_i = (v_i - theta zhat) / sqrt(1 + theta^2), with zhat a fresh extra coordinate.
struct ShiftedSolution {
    VectorSolution original;
    double theta = 0;
    Eigen::VectorXd zhat;   // unit, length r + 1
    Eigen::MatrixXd V;      // (r + 1) x (n + 1), column 0 is phi_bar
    Eigen::VectorXd mu;     // mu'_i
    Eigen::MatrixXd Z;      // z'_i
    Eigen::MatrixXd Zbar;   // z'_i / |z'_i|
    Eigen::VectorXd thresholds;  // Phi^{-1}(mu'_i)

    int n() const { return static_cast<int>(mu.size()); }
    int r() const { return static_cast<int>(V.rows()); }
    Eigen::VectorXd v(int i) const { return V.col(i + 1); }
};

ShiftedSolution preprocess_shift(const VectorSolution& vs, double theta);

// Worst observed slack of each preprocessing inequality (negative means violated).
struct ShiftClaims {
    double mu_shift = 0;         // theta^2 - max |mu_i - mu'_i|
    double mu_range = 0;         // min distance of mu'_i inside [theta^2/10, 1 - theta^2/10]
    double mu_formula = 0;       // max |mu'_i - (mu_i / s + (1 - 1/s)/2)|
    double distance_scaling = 0; // max | |v'_i - v'_j|^2 - |v_i - v_j|^2 / (1 + theta^2) |
    double z_inner = 0;          // min of |<z_i,z_j>| + theta^2/4 - |<z'_i,z'_j>|
    double mu_lipschitz = 0;     // min of 2|v'_i - v'_j|^2 - |mu'_i - mu'_j|
    double angle = 0;            // min of |v'_i - v'_j|^2 / (8 |z'_i||z'_j|) - (1 - <zbar'_i, zbar'_j>)
    double small_bias = 0;       // min over mu'_i <= 1/2 of 4|z'_i|^2 - mu'_i
    bool ok(double eq_tol = 1e-8, double ineq_tol = 1e-9) const;
};

ShiftClaims check_shift_claims(const ShiftedSolution& ss);

// S = {i : <g, zbar'_i> <= Phi^{-1}(mu'_i)} with g drawn from the rounding stream at (seed, trial).
CutSet shifted_hyperplane_round(const ShiftedSolution& ss, uint64_t seed, uint64_t trial = 0);

struct EdgeCutStats {
    std::vector<double> nu_raw;      // Delta_e from the conditioned pd
    std::vector<double> nu_shifted;  // max pairwise |v'_i - v'_j|^2
    std::vector<double> alpha;       // max over e of min(mu'_i, 1 - mu'_i)
    std::vector<bool> deleted;
};

EdgeCutStats edge_cut_stats(const Hypergraph& H, const PseudoDistribution& pd, const ShiftedSolution& ss);

struct PipelineConfig {
    int rounds = 4;        // 4 adds cardinality under single-variable conditioning
    int t_cap = 4;
    int lift_size = -1;    // fixed conditioning-set size; negative samples it uniformly from {0..t_cap}
    double theta = -1;     // negative selects delta^12
    int trials = 64;
    uint64_t seed = 0;
    double tol = 1e-4;
    int max_iter = 20000;
    Convention convention = Convention::size;
    PairScope locality = PairScope::all;
};

struct TrialRecord {
    uint64_t index = 0;
    int size = 0;
    double weight_fraction = 0;
    double expansion = 0;  // phi^E_H(S), NaN when a side has zero weight
    bool valid = false;         // weight fraction in [0.9, 1.1] delta
    bool valid_tight = false;   // weight fraction in [0.99, 1.01] delta
};

struct RunReport {
    std::string mode;  // "ssve" or "hsse"
    std::string instance_hash;
    PipelineConfig config;
    double delta = 0;
    double theta = 0;
    int target_size = 0;
    std::vector<int> lift;
    SolveReport sdp;
    ConditioningTrace conditioning;
    LocalRepair repair;
    DeletionResult deletion;
    ShiftClaims claims;
    std::vector<TrialRecord> trials;
    int chosen_trial = -1;
    CutSet chosen_set;     // on V(H)
    double chosen_expansion = 0;
    bool has_rollback = false;
    RollbackResult rollback;
    double phi_v = 0;      // phi^V_G of the rolled-back set under config.convention

    std::string to_json() const;
};

class NoConcentratedTrial : public std::runtime_error {
public:
    NoConcentratedTrial() : std::runtime_error("no concentrated trial") {}
};

// FNV-1a over the canonical text serialization.
std::string instance_hash(const Graph& G);
std::string instance_hash(const Hypergraph& H);

// Reduce, relax, condition, delete, shift, round, select, roll back.
RunReport full_pipeline(const Graph& G, double delta, const PipelineConfig& config = {});
// Same pipeline directly on a hypergraph, without rollback.
RunReport hypergraph_pipeline(const Hypergraph& H, double delta, const PipelineConfig& config = {});

}  // namespace ssve
