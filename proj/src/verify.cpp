#include "ssve/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ssve {

Interval wilson_interval(uint64_t successes, uint64_t trials, double level) {
    if (trials == 0) throw std::invalid_argument("no trials");
    if (successes > trials) throw std::invalid_argument("more successes than trials");
    double z = phi_inv(0.5 + 0.5 * level);
    double n = static_cast<double>(trials);
    double p = static_cast<double>(successes) / n;
    double z2 = z * z;
    double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
    double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

CutEstimate estimate_cut_probability(const GaussianEnsembleSpec& spec, const std::vector<double>& thresholds,
                                     uint64_t N, uint64_t seed) {
    if (N < 10000) throw std::invalid_argument("at least 10^4 trials required");
    if (spec.d() < 1) throw std::invalid_argument("empty ensemble");
    if (static_cast<int>(thresholds.size()) != spec.d()) throw std::invalid_argument("one threshold per Gaussian");
    for (int i = 0; i < spec.d(); ++i)
        if (std::abs(spec.directions.col(i).norm() - 1.0) > 1e-9)
            throw std::invalid_argument("ensemble directions must be unit vectors");
    CutEstimate est;
    est.trials = N;
    Eigen::VectorXd g;
    for (uint64_t k = 0; k < N; ++k) {
        Rng rng(seed, stream::monte_carlo, k);
        Eigen::VectorXd x = project_gaussian(spec.directions, rng, g);
        bool below = false, above = false;
        for (int i = 0; i < spec.d(); ++i) {
            if (x[i] <= thresholds[i])
                below = true;
            else
                above = true;
        }
        if (below && above) ++est.cuts;
    }
    est.p_hat = static_cast<double>(est.cuts) / static_cast<double>(N);
    est.ci = wilson_interval(est.cuts, N);
    return est;
}

double c1_constant(double delta) { return 32.0 * kC0 * std::log(1.0 / delta); }

double a_constant(int d, double delta, AVariant v) {
    double base = kC0 * c1_constant(delta) * std::log(1.0 / delta) * std::log(static_cast<double>(d));
    return v == AVariant::a64 ? 64.0 * base : 16.0 * base;
}

namespace {

std::string variant_name(AVariant v) { return v == AVariant::a64 ? "a64" : "a16"; }

void premise(bool ok, const std::string& what) {
    if (!ok) throw std::logic_error("nice-edge premise violated: " + what);
}

}  // namespace

void check_nice_premises(const NiceEdge& e, AVariant variant) {
    const int d = e.d;
    std::vector<double> m(d);
    for (int i = 0; i < d; ++i) m[i] = e.mirrored ? 1.0 - e.mu[i] : e.mu[i];
    premise(m[0] <= 0.5, "largest bias at most 1/2");
    for (int i = 1; i < d; ++i) premise(m[i] <= m[i - 1] && m[i] >= 0.0, "bias ordering");
    const double A = a_constant(d, e.delta, variant);
    premise(m[0] >= A * e.nu && m[0] >= std::pow(e.delta, kC0), "mu'_1 >= max(A nu, delta^C0)");
    const double rho = 1.0 - e.beta * e.beta;
    const double theta_m = 1.0 - rho * rho;
    for (int i = 0; i < d; ++i) {
        premise(std::abs(m[0] - m[i]) <= 2.0 * e.nu, "(a) bias spread at most 2 nu");
        premise(m[0] / m[i] <= 2.0, "(b) bias ratio at most 2");
        premise(theta_m <= 2.0 * e.nu / m[i] + 1e-15, "(d) theta_m <= 2 nu / mu_i");
        premise(m[i] >= std::pow(e.delta, kC0), "(e) bias floor");
        premise(std::abs(phi_inv(m[i])) <= 2.0 * std::sqrt(kC0 * std::log(2.0 / e.delta)), "(f) threshold bound");
        if (i > 0) {
            premise(theta_m <= 2.0 * e.nu / std::sqrt(m[0] * m[i]) + 1e-15, "(c) theta_m bound");
            premise(rho >= 0.9, "(g) correlation at least 0.9");
        }
    }
}

NiceEdge build_nice_edge(int d, double delta, double nu_target, AVariant variant, bool mirrored) {
    if (d < 2) throw std::invalid_argument("d must be at least 2");
    if (!(delta > 0 && delta <= 0.5)) throw std::invalid_argument("delta out of range");
    if (!(nu_target >= 0)) throw std::invalid_argument("nu must be nonnegative");
    NiceEdge e;
    e.d = d;
    e.delta = delta;
    e.mirrored = mirrored;
    const double mu1 = delta;
    const double spread = nu_target / 4.0;
    std::vector<double> m(d), s(d);
    for (int i = 0; i < d; ++i) {
        m[i] = mu1 - spread * i / (d - 1);
        s[i] = std::sqrt(m[i] * (1.0 - m[i]));
    }
    double dm = m[0] - m[d - 1], ds = s[0] - s[d - 1];
    double b2 = (nu_target - 4.0 * dm * dm - 4.0 * ds * ds) / (8.0 * s[0] * s[d - 1]);
    e.beta = std::sqrt(std::max(0.0, b2));
    const double c = std::sqrt(1.0 - e.beta * e.beta);
    // Coordinates: 0 = phi_bar, 1 = shared direction, 1 + i = private direction of vertex i.
    e.V = Eigen::MatrixXd::Zero(d + 2, d + 1);
    e.V(0, 0) = 1.0;
    const double sign = mirrored ? -1.0 : 1.0;
    for (int i = 0; i < d; ++i) {
        Eigen::VectorXd zbar = Eigen::VectorXd::Zero(d + 2);
        zbar[1] = c;
        zbar[2 + i] = e.beta;
        // Mirroring maps mu to 1 - mu and z to -z, so v to -v.
        e.V.col(i + 1) = sign * ((1.0 - 2.0 * m[i]) * Eigen::VectorXd::Unit(d + 2, 0) - 2.0 * s[i] * zbar);
        e.mu.push_back(mirrored ? 1.0 - m[i] : m[i]);
    }
    for (int i = 0; i < d; ++i) {
        e.alpha = std::max(e.alpha, std::min(e.mu[i], 1.0 - e.mu[i]));
        e.thresholds.push_back(phi_inv(e.mu[i]));
        // Expanded form of |v_i - v_j|^2, free of the cancellation in subtracting unit vectors.
        for (int j = i + 1; j < d; ++j) {
            double dmu = m[i] - m[j], dsj = s[i] - s[j];
            double nu = 4.0 * dmu * dmu + 4.0 * c * c * dsj * dsj + 4.0 * e.beta * e.beta * (s[i] * s[i] + s[j] * s[j]);
            e.nu = std::max(e.nu, nu);
        }
    }
    check_nice_premises(e, variant);
    return e;
}

SweepRow sweep_point(const NiceEdge& e, const std::string& variant, double multiplier, uint64_t N, uint64_t seed,
                     double K) {
    const int d = e.d;
    SweepRow row;
    row.d = d;
    row.delta = e.delta;
    row.multiplier = multiplier;
    row.variant = variant;
    row.mirrored = e.mirrored;
    row.nu = e.nu;
    row.alpha = e.alpha;
    const double beta = e.beta, c = std::sqrt(1.0 - beta * beta);
    const double rho = 1.0 - beta * beta;
    const double root = std::sqrt(1.0 - rho * rho);
    const double sq_theta = root;  // sqrt(theta_m) with theta_m = 1 - rho^2
    const double sign = e.mirrored ? -1.0 : 1.0;
    // Thresholds of the unmirrored picture, used by the sidedness implications.
    std::vector<double> t(d);
    for (int i = 0; i < d; ++i) t[i] = sign * e.thresholds[i];
    const double t_prime = t[d - 1] / rho;
    Rng rng(seed, stream::monte_carlo);
    std::vector<double> h(d + 1), g(d), zeta(d);
    uint64_t cuts = 0;
    for (uint64_t k = 0; k < N; ++k) {
        for (int i = 0; i <= d; ++i) h[i] = rng.normal();
        bool below = false, above = false;
        for (int i = 0; i < d; ++i) {
            g[i] = sign * (c * h[0] + beta * h[i + 1]);
            if (g[i] <= e.thresholds[i])
                below = true;
            else
                above = true;
        }
        if (below && above) ++cuts;
        if (root == 0.0) continue;
        // Decomposition g_j = rho g_1 + sqrt(1 - rho^2) zeta_j in the unmirrored picture.
        const double g1 = sign * g[0];
        double a = 0.0;
        for (int j = 1; j < d; ++j) {
            zeta[j] = (c * beta * beta * h[0] - rho * beta * h[1] + beta * h[j + 1]) / root;
            double rec = rho * g1 + root * zeta[j];
            row.max_decomposition_error = std::max(row.max_decomposition_error, std::abs(rec - sign * g[j]));
            a = std::max(a, std::abs(zeta[j]));
        }
        if (!(a > 0)) continue;
        ++row.samples_checked;
        if (g1 <= t_prime - 2.0 * a * sq_theta) {
            for (int j = 1; j < d; ++j)
                if (!(sign * g[j] < t[j])) {
                    ++row.sidedness_violations;
                    break;
                }
        }
        if (g1 >= t[0] + 2.0 * a * sq_theta) {
            for (int j = 1; j < d; ++j)
                if (!(sign * g[j] > t[j])) {
                    ++row.sidedness_violations;
                    break;
                }
        }
    }
    row.estimate.cuts = cuts;
    row.estimate.trials = N;
    row.estimate.p_hat = static_cast<double>(cuts) / static_cast<double>(N);
    row.estimate.ci = wilson_interval(cuts, N);
    row.bound = std::sqrt(e.alpha * e.nu * std::log(static_cast<double>(d)) * std::log(1.0 / e.delta));
    row.ratio = row.bound > 0 ? row.estimate.p_hat / row.bound : (cuts == 0 ? 0.0 : std::numeric_limits<double>::infinity());
    row.pass = row.ratio <= K && row.sidedness_violations == 0 && row.max_decomposition_error <= 1e-10;
    return row;
}

std::vector<SweepRow> rounding_lemma_sweep(const SweepConfig& cfg) {
    if (cfg.N < 10000) throw std::invalid_argument("at least 10^4 trials required");
    std::vector<SweepRow> rows;
    uint64_t cell = 0;
    for (int d : cfg.ds)
        for (double delta : cfg.deltas)
            for (double mult : cfg.multipliers) {
                // Slightly below mu'_1 / (A m) so rounding in the construction cannot break the premise.
                double nu = (1.0 - 1e-6) * delta / (a_constant(d, delta, cfg.variant) * mult);
                NiceEdge e = build_nice_edge(d, delta, nu, cfg.variant, cfg.mirrored);
                // Per-cell seed derivation keeps cells independent of grid order.
                uint64_t cell_seed = cfg.seed * 1000003ull + cell++;
                rows.push_back(sweep_point(e, variant_name(cfg.variant), mult, cfg.N, cell_seed, cfg.K));
            }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os.precision(10);
    os << "d,delta,multiplier,variant,mirrored,nu,alpha,p_hat,ci_lo,ci_hi,bound,ratio,pass,samples_checked,"
          "sidedness_violations,max_decomposition_error\n";
    for (const auto& r : rows)
        os << r.d << ',' << r.delta << ',' << r.multiplier << ',' << r.variant << ',' << (r.mirrored ? 1 : 0) << ','
           << r.nu << ',' << r.alpha << ',' << r.estimate.p_hat << ',' << r.estimate.ci.lo << ',' << r.estimate.ci.hi
           << ',' << r.bound << ',' << r.ratio << ',' << (r.pass ? 1 : 0) << ',' << r.samples_checked << ','
           << r.sidedness_violations << ',' << r.max_decomposition_error << '\n';
    return os.str();
}

namespace {

ConcentrationStats finish(ConcentrationStats s, double threshold) {
    if (s.trials < 100) throw std::invalid_argument("at least 100 trials required");
    s.threshold = threshold;
    s.fraction = static_cast<double>(s.in_window) / static_cast<double>(s.trials);
    s.tight_fraction = static_cast<double>(s.in_tight_window) / static_cast<double>(s.trials);
    s.pass = s.fraction >= threshold;
    return s;
}

}  // namespace

ConcentrationStats concentration_check(const std::vector<RunReport>& reports, double threshold) {
    ConcentrationStats s;
    for (const auto& r : reports)
        for (const auto& t : r.trials) {
            ++s.trials;
            s.in_window += t.valid;
            s.in_tight_window += t.valid_tight;
        }
    return finish(s, threshold);
}

ConcentrationStats concentration_check(const std::vector<double>& weight_fractions, double delta, double threshold) {
    ConcentrationStats s;
    for (double w : weight_fractions) {
        double ratio = w / delta;
        ++s.trials;
        s.in_window += ratio >= 0.9 && ratio <= 1.1;
        s.in_tight_window += ratio >= 0.99 && ratio <= 1.01;
    }
    return finish(s, threshold);
}

namespace {

struct FactAccumulator {
    FactResult r;
    explicit FactAccumulator(std::string name) {
        r.fact = std::move(name);
        r.worst_slack = std::numeric_limits<double>::infinity();
    }
    void add(double slack, const std::string& point) {
        ++r.points;
        if (slack < r.worst_slack) {
            r.worst_slack = slack;
            r.worst_point = point;
        }
    }
    FactResult done() {
        r.pass = r.points > 0 && r.worst_slack >= 0.0;
        return r;
    }
};

std::string pt(std::initializer_list<std::pair<const char*, double>> kv) {
    std::ostringstream os;
    os.precision(6);
    bool first = true;
    for (auto [k, v] : kv) {
        os << (first ? "" : " ") << k << '=' << v;
        first = false;
    }
    return os.str();
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

// Relative floating-point allowance for closed-form comparisons.
constexpr double kRel = 1e-12;

}  // namespace

std::vector<FactResult> cdf_fact_check(uint64_t N, uint64_t seed, double slack) {
    std::vector<FactResult> out;
    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    {
        // |Phi(x + z) - Phi(x)| <= |z| / sqrt(2 pi)
        FactAccumulator f("fact_cdf_lipschitz");
        for (double x : linspace(-8, 8, 161))
            for (double z : linspace(-4, 4, 81)) {
                double lhs = std::abs(phi(x + z) - phi(x));
                f.add(std::abs(z) * inv_sqrt_2pi * (1 + kRel) - lhs, pt({{"x", x}, {"z", z}}));
            }
        out.push_back(f.done());
    }
    {
        // Tail sandwich for t < 0.
        FactAccumulator f("fact_tail_sandwich");
        for (double t : linspace(-37, -0.001, 3700)) {
            double dens = std::exp(-t * t / 2) * inv_sqrt_2pi;
            double lo = dens / (std::sqrt(2 + t * t) + std::abs(t));
            double hi = dens / std::abs(t);
            double p = phi(t);
            // Relative slack so deep-tail points are not drowned by absolute scale.
            f.add(std::min(p / lo - 1.0, hi / p - 1.0) + kRel, pt({{"t", t}}));
        }
        out.push_back(f.done());
    }
    {
        // |Phi^{-1}(mu)| <= max(2 sqrt(log(1/mu)), 1) for mu in (0, 1/2)
        FactAccumulator f("fact_inverse_cdf_bound");
        for (int k = 1; k <= 300; ++k) {
            double mu = std::pow(10.0, -k);
            f.add(std::max(2.0 * std::sqrt(std::log(1 / mu)), 1.0) - std::abs(phi_inv(mu)), pt({{"mu", mu}}));
        }
        for (double mu : linspace(0.001, 0.499, 499))
            f.add(std::max(2.0 * std::sqrt(std::log(1 / mu)), 1.0) - std::abs(phi_inv(mu)), pt({{"mu", mu}}));
        out.push_back(f.done());
    }
    {
        // Phi(t) - Phi(t - eps) <= 4 eps Phi(t) sqrt(log(1/Phi(t))) for eps <= eps0 = 1, t <= 0
        FactAccumulator f("fact_left_shift_constant_4");
        for (double t : linspace(-30, 0, 601))
            for (double eps : {1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.25, 0.5, 0.75, 1.0}) {
                double p = phi(t);
                double lhs = p - phi(t - eps);
                double rhs = 4.0 * eps * p * std::sqrt(std::log(1 / p));
                f.add((rhs - lhs) / rhs + kRel, pt({{"t", t}, {"eps", eps}}));
            }
        out.push_back(f.done());
    }
    {
        // Phi(t + D) - Phi(t) <= 24 Phi(t) D sqrt(log(1/Phi(t))) for t < 0, D in (0,1), D|t| <= 1
        FactAccumulator f("fact_right_shift_constant_24");
        for (double t : linspace(-38, -0.001, 761)) {
            double dmax = std::min(1.0 - 1e-12, 1.0 / std::abs(t));
            for (double frac : {1e-6, 1e-3, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) {
                double D = frac * dmax;
                double p = phi(t);
                double lhs = phi(t + D) - p;
                double rhs = 24.0 * p * D * std::sqrt(std::log(1 / p));
                f.add((rhs - lhs) / rhs + kRel, pt({{"t", t}, {"Delta", D}}));
            }
        }
        out.push_back(f.done());
    }
    // Maxima of jointly Gaussian families, marginally N(0,1): independent and equicorrelated 1/2.
    const double C = 4.0;
    FactAccumulator tail("fact_max_tail"), second("fact_max_second_moment"), first("fact_max_first_moment");
    uint64_t fam = 0;
    for (int d : {2, 4, 16, 64}) {
        for (double corr : {0.0, 0.5}) {
            Eigen::MatrixXd R = Eigen::MatrixXd::Constant(d, d, corr);
            R.diagonal().setOnes();
            GaussianEnsembleSpec spec = GaussianEnsembleSpec::from_correlation(R, seed * 7919ull + fam++);
            double m1 = 0, m2 = 0;
            std::vector<double> maxabs(N);
            for (uint64_t k = 0; k < N; ++k) {
                auto g = sample_ensemble(spec, k);
                double mx = 0;
                for (double x : g) mx = std::max(mx, std::abs(x));
                maxabs[k] = mx;
                m1 += mx;
                m2 += mx * mx;
            }
            m1 /= static_cast<double>(N);
            m2 /= static_cast<double>(N);
            double logd = std::log(static_cast<double>(d));
            for (double Ct : {4.0, 6.0, 8.0}) {
                double thr = std::sqrt(Ct * logd);
                uint64_t hits = 0;
                for (double mx : maxabs) hits += mx >= thr;
                double p = static_cast<double>(hits) / static_cast<double>(N);
                double bound = std::exp(-Ct * logd / 4.0);
                tail.add((slack * bound - p) / bound, pt({{"d", double(d)}, {"corr", corr}, {"C", Ct}, {"p", p}}));
            }
            second.add((slack * C * logd - m2) / (C * logd), pt({{"d", double(d)}, {"corr", corr}, {"E", m2}}));
            first.add((slack * std::sqrt(C * logd) - m1) / std::sqrt(C * logd),
                      pt({{"d", double(d)}, {"corr", corr}, {"E", m1}}));
        }
    }
    out.push_back(tail.done());
    out.push_back(second.done());
    out.push_back(first.done());
    return out;
}

std::string facts_csv(const std::vector<FactResult>& rows) {
    std::ostringstream os;
    os.precision(10);
    os << "fact,pass,points,worst_slack,worst_point\n";
    for (const auto& r : rows)
        os << r.fact << ',' << (r.pass ? 1 : 0) << ',' << r.points << ',' << r.worst_slack << ",\"" << r.worst_point
           << "\"\n";
    return os.str();
}

}  // namespace ssve
