#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace ssve {

// Standard normal CDF and its inverse.
double phi(double t);
double phi_inv(double p);
// Standard normal density.
double phi_density(double t);

// Seeded generator: std::mt19937_64 keyed by std::seed_seq over (seed, stream, index).
// Normals come from the Box-Muller transform, both outputs used in order.
class Rng {
public:
    explicit Rng(uint64_t seed, uint64_t stream = 0, uint64_t index = 0);
    uint64_t bits() { return eng_(); }
    double uniform();            // [0, 1)
    double uniform_open_left();  // (0, 1]
    double normal();
    uint64_t below(uint64_t n);  // uniform on [0, n)
    template <class It>
    void shuffle(It first, It last) {
        auto len = static_cast<uint64_t>(last - first);
        for (uint64_t i = len; i > 1; --i) std::swap(first[i - 1], first[below(i)]);
    }

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Named stream identifiers so every random consumer draws from its own sequence.
namespace stream {
constexpr uint64_t conditioning_set = 1;
constexpr uint64_t conditioning_values = 2;
constexpr uint64_t rounding = 3;
constexpr uint64_t generator = 4;
constexpr uint64_t monte_carlo = 5;
}  // namespace stream

struct GaussianEnsembleSpec {
    Eigen::MatrixXd directions;  // r x d, unit columns
    uint64_t seed = 0;

    static GaussianEnsembleSpec from_directions(Eigen::MatrixXd dirs, uint64_t seed);
    static GaussianEnsembleSpec from_correlation(const Eigen::MatrixXd& rho, uint64_t seed);
    int d() const { return static_cast<int>(directions.cols()); }
    int r() const { return static_cast<int>(directions.rows()); }
    Eigen::MatrixXd correlation() const;
};

// One draw of (g_1..g_d) for the given trial index.
std::vector<double> sample_ensemble(const GaussianEnsembleSpec& spec, uint64_t trial = 0);

// Fills g (length r) with i.i.d. standard normals from rng and returns directions^T g.
Eigen::VectorXd project_gaussian(const Eigen::MatrixXd& directions, Rng& rng, Eigen::VectorXd& g);

}  // namespace ssve
