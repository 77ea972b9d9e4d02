#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssve/gaussian.hpp"
#include "ssve/rounding.hpp"

namespace ssve {

struct Interval {
    double lo = 0, hi = 0;
};

// Wilson score interval for a binomial proportion at the given two-sided level.
Interval wilson_interval(uint64_t successes, uint64_t trials, double level = 0.99);

struct CutEstimate {
    double p_hat = 0;
    Interval ci;
    uint64_t cuts = 0;
    uint64_t trials = 0;
};

// Frequency of {exists i, j : g_i <= t_i and g_j > t_j} over N draws of the ensemble.
CutEstimate estimate_cut_probability(const GaussianEnsembleSpec& spec, const std::vector<double>& thresholds,
                                     uint64_t N, uint64_t seed);

constexpr double kC0 = 24.0;
constexpr double kCalibrationK = 30.0;

enum class AVariant { a64, a16 };  // 64 C0 C1 log(1/delta) log d, or 16 C0 C1 log d log(1/delta)

double c1_constant(double delta);
double a_constant(int d, double delta, AVariant v);

// Nice hyperedge: biases mu_1 >= ... >= mu_d (or mirrored above 1/2), unit directions
// zbar_i = sqrt(1 - beta^2) e_0 + beta e_i, so every pair has correlation 1 - beta^2.
struct NiceEdge {
    int d = 0;
    double delta = 0;
    bool mirrored = false;
    std::vector<double> mu;
    double beta = 0;
    double nu = 0;     // max |v'_i - v'_j|^2 from the vectors
    double alpha = 0;  // max min(mu_i, 1 - mu_i)
    std::vector<double> thresholds;
    Eigen::MatrixXd V;  // (d + 2) x (d + 1), column 0 is phi_bar
};

// nu_target is the desired max |v'_i - v'_j|^2. Throws std::logic_error if a rounding-lemma
// premise or one of the derived inequalities (a)-(g) fails for the built instance.
NiceEdge build_nice_edge(int d, double delta, double nu_target, AVariant variant, bool mirrored = false);
void check_nice_premises(const NiceEdge& e, AVariant variant);

struct SweepRow {
    int d = 0;
    double delta = 0;
    double multiplier = 0;
    std::string variant;
    bool mirrored = false;
    double nu = 0, alpha = 0;
    CutEstimate estimate;
    double bound = 0;   // sqrt(alpha nu log d log(1/delta))
    double ratio = 0;   // p_hat / bound
    bool pass = false;  // ratio <= K
    uint64_t samples_checked = 0;
    uint64_t sidedness_violations = 0;
    double max_decomposition_error = 0;
};

struct SweepConfig {
    std::vector<int> ds{4, 16, 64};
    std::vector<double> deltas{0.25, 0.125, 0.0625, 0.03125, 0.015625};
    std::vector<double> multipliers{1.0, 4.0, 16.0};  // nu = mu'_1 / (A m)
    AVariant variant = AVariant::a64;
    bool mirrored = false;
    uint64_t N = 200000;
    uint64_t seed = 0;
    double K = kCalibrationK;
};

// Monte Carlo cut frequency on each grid point, asserting the decomposition and the
// threshold sidedness implications on every sample.
std::vector<SweepRow> rounding_lemma_sweep(const SweepConfig& config);
SweepRow sweep_point(const NiceEdge& e, const std::string& variant, double multiplier, uint64_t N, uint64_t seed,
                     double K);

std::string sweep_csv(const std::vector<SweepRow>& rows);

struct ConcentrationStats {
    uint64_t trials = 0;
    uint64_t in_window = 0;
    uint64_t in_tight_window = 0;
    double fraction = 0;
    double tight_fraction = 0;
    double threshold = 0;
    bool pass = false;
};

// Pools the rounding trials of every report; pass when the [0.9, 1.1] delta fraction reaches threshold.
ConcentrationStats concentration_check(const std::vector<RunReport>& reports, double threshold = 0.8);
// Same statistic for explicit weight fractions.
ConcentrationStats concentration_check(const std::vector<double>& weight_fractions, double delta,
                                       double threshold = 0.8);

struct FactResult {
    std::string fact;
    bool pass = false;
    uint64_t points = 0;
    double worst_slack = 0;       // min over the grid of (bound - value), or relative for Monte Carlo
    std::string worst_point;
};

// Gaussian CDF and maxima facts; the Monte Carlo ones use N samples and allow factor `slack`.
std::vector<FactResult> cdf_fact_check(uint64_t N = 100000, uint64_t seed = 0, double slack = 2.0);
std::string facts_csv(const std::vector<FactResult>& rows);

}  // namespace ssve
