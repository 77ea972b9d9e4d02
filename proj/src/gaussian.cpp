#include "ssve/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ssve {

double phi(double t) {
    if (std::isnan(t)) throw std::invalid_argument("phi of NaN");
    return 0.5 * std::erfc(-t / std::numbers::sqrt2);
}

double phi_density(double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); }

// Bisection on the lower tail; the upper tail uses symmetry with the exact complement 1 - p.
static double lower_tail_inverse(double p) {
    double lo = -40.0, hi = 0.0;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (phi(mid) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double phi_inv(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("CDF range");
    if (p == 0.5) return 0.0;
    if (p < 0.5) return lower_tail_inverse(p);
    return -lower_tail_inverse(1.0 - p);
}

Rng::Rng(uint64_t seed, uint64_t stream, uint64_t index) {
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                      static_cast<uint32_t>(stream), static_cast<uint32_t>(stream >> 32),
                      static_cast<uint32_t>(index), static_cast<uint32_t>(index >> 32)};
    eng_.seed(seq);
}

double Rng::uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

double Rng::uniform_open_left() { return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53; }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform_open_left();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

uint64_t Rng::below(uint64_t n) {
    if (n == 0) throw std::invalid_argument("empty range");
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
        x = eng_();
    } while (x >= limit);
    return x % n;
}

GaussianEnsembleSpec GaussianEnsembleSpec::from_directions(Eigen::MatrixXd dirs, uint64_t seed) {
    for (int j = 0; j < dirs.cols(); ++j) {
        double nrm = dirs.col(j).norm();
        if (std::abs(nrm - 1.0) > 1e-12) throw std::invalid_argument("direction is not a unit vector");
    }
    GaussianEnsembleSpec s;
    s.directions = std::move(dirs);
    s.seed = seed;
    return s;
}

GaussianEnsembleSpec GaussianEnsembleSpec::from_correlation(const Eigen::MatrixXd& rho, uint64_t seed) {
    if (rho.rows() != rho.cols()) throw std::invalid_argument("correlation matrix not square");
    if ((rho - rho.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("correlation matrix not symmetric");
    for (int i = 0; i < rho.rows(); ++i)
        if (std::abs(rho(i, i) - 1.0) > 1e-12) throw std::invalid_argument("correlation diagonal must be 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho);
    if (es.eigenvalues().minCoeff() < -1e-9) throw std::invalid_argument("correlation matrix is not PSD");
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXd dirs = lam.asDiagonal() * es.eigenvectors().transpose();
    for (int j = 0; j < dirs.cols(); ++j) dirs.col(j).normalize();
    GaussianEnsembleSpec s;
    s.directions = dirs;
    s.seed = seed;
    return s;
}

Eigen::MatrixXd GaussianEnsembleSpec::correlation() const { return directions.transpose() * directions; }

Eigen::VectorXd project_gaussian(const Eigen::MatrixXd& directions, Rng& rng, Eigen::VectorXd& g) {
    g.resize(directions.rows());
    for (int k = 0; k < g.size(); ++k) g[k] = rng.normal();
    return directions.transpose() * g;
}

std::vector<double> sample_ensemble(const GaussianEnsembleSpec& spec, uint64_t trial) {
    Rng rng(spec.seed, stream::monte_carlo, trial);
    Eigen::VectorXd g;
    Eigen::VectorXd out = project_gaussian(spec.directions, rng, g);
    return std::vector<double>(out.data(), out.data() + out.size());
}

}  // namespace ssve
