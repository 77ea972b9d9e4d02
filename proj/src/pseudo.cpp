#include "ssve/pseudo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ssve/gaussian.hpp"

namespace ssve {

namespace {

Eigen::MatrixXd sum_blocks(const std::vector<Eigen::MatrixXd>& blocks) {
    Eigen::MatrixXd r = blocks.front();
    for (size_t k = 1; k < blocks.size(); ++k) r += blocks[k];
    return r;
}

int lift_position(const std::vector<int>& lift, int i) {
    auto it = std::find(lift.begin(), lift.end(), i);
    return it == lift.end() ? -1 : static_cast<int>(it - lift.begin());
}

// Adds p * a a^T where a = (1, x).
void add_outer(Eigen::MatrixXd& B, const Eigen::VectorXd& a, double p) { B.noalias() += p * a * a.transpose(); }

}  // namespace

PseudoDistribution::PseudoDistribution(int n, std::vector<int> lift, std::vector<Eigen::MatrixXd> blocks,
                                       std::map<int, std::array<Eigen::MatrixXd, 2>> singles)
    : n_(n), lift_(std::move(lift)), blocks_(std::move(blocks)), singles_(std::move(singles)) {
    if (lift_.size() > 20) throw std::invalid_argument("lift set too large");
    if (blocks_.size() != (size_t{1} << lift_.size())) throw std::invalid_argument("block count must be 2^|lift|");
    for (const auto& B : blocks_)
        if (B.rows() != n_ + 1 || B.cols() != n_ + 1) throw std::invalid_argument("block side must be n+1");
    for (int v : lift_)
        if (v < 0 || v >= n_) throw std::invalid_argument("lift variable out of range");
    root_ = sum_blocks(blocks_);
}

PseudoDistribution PseudoDistribution::from_distribution(int n, const std::vector<double>& probs,
                                                         const std::vector<int>& lift, bool single_lifts) {
    if (n > 20) throw std::invalid_argument("explicit distribution too large");
    if (probs.size() != (size_t{1} << n)) throw std::invalid_argument("probability vector must have 2^n entries");
    std::vector<Eigen::MatrixXd> blocks(size_t{1} << lift.size(), Eigen::MatrixXd::Zero(n + 1, n + 1));
    std::map<int, std::array<Eigen::MatrixXd, 2>> singles;
    if (single_lifts)
        for (int i = 0; i < n; ++i) singles[i] = {Eigen::MatrixXd::Zero(n + 1, n + 1), Eigen::MatrixXd::Zero(n + 1, n + 1)};
    Eigen::VectorXd a(n + 1);
    for (size_t mask = 0; mask < probs.size(); ++mask) {
        double p = probs[mask];
        if (p < 0) throw std::invalid_argument("negative probability");
        if (p == 0) continue;
        a[0] = 1.0;
        for (int i = 0; i < n; ++i) a[i + 1] = (mask >> i) & 1u;
        size_t alpha = 0;
        for (size_t k = 0; k < lift.size(); ++k) alpha |= ((mask >> lift[k]) & 1u) << k;
        add_outer(blocks[alpha], a, p);
        for (auto& [i, pair] : singles) add_outer(pair[(mask >> i) & 1u], a, p);
    }
    return PseudoDistribution(n, lift, blocks, singles);
}

PseudoDistribution PseudoDistribution::integral(const CutSet& S, const std::vector<int>& lift, bool single_lifts) {
    int n = S.universe();
    Eigen::VectorXd a(n + 1);
    a[0] = 1.0;
    for (int i = 0; i < n; ++i) a[i + 1] = S.contains(i) ? 1.0 : 0.0;
    Eigen::MatrixXd M = a * a.transpose();
    std::vector<Eigen::MatrixXd> blocks(size_t{1} << lift.size(), Eigen::MatrixXd::Zero(n + 1, n + 1));
    size_t alpha = 0;
    for (size_t k = 0; k < lift.size(); ++k) alpha |= size_t{S.contains(lift[k]) ? 1u : 0u} << k;
    blocks[alpha] = M;
    std::map<int, std::array<Eigen::MatrixXd, 2>> singles;
    if (single_lifts)
        for (int i = 0; i < n; ++i) {
            singles[i] = {Eigen::MatrixXd::Zero(n + 1, n + 1), Eigen::MatrixXd::Zero(n + 1, n + 1)};
            singles[i][S.contains(i) ? 1 : 0] = M;
        }
    return PseudoDistribution(n, lift, blocks, singles);
}

PseudoDistribution PseudoDistribution::product(const std::vector<double>& mu, const std::vector<int>& lift,
                                               bool single_lifts) {
    int n = static_cast<int>(mu.size());
    auto moments = [&](const std::vector<int>& fixed, const std::vector<int>& vals, double mass) {
        Eigen::VectorXd m(n + 1), var = Eigen::VectorXd::Zero(n + 1);
        m[0] = 1.0;
        for (int i = 0; i < n; ++i) {
            m[i + 1] = mu[i];
            var[i + 1] = mu[i] * (1.0 - mu[i]);
        }
        for (size_t k = 0; k < fixed.size(); ++k) {
            m[fixed[k] + 1] = vals[k];
            var[fixed[k] + 1] = 0.0;
        }
        Eigen::MatrixXd B = m * m.transpose();
        B.diagonal() += var;
        return Eigen::MatrixXd(mass * B);
    };
    std::vector<Eigen::MatrixXd> blocks;
    for (size_t alpha = 0; alpha < (size_t{1} << lift.size()); ++alpha) {
        std::vector<int> vals(lift.size());
        double mass = 1.0;
        for (size_t k = 0; k < lift.size(); ++k) {
            vals[k] = (alpha >> k) & 1u;
            mass *= vals[k] ? mu[lift[k]] : 1.0 - mu[lift[k]];
        }
        blocks.push_back(moments(lift, vals, mass));
    }
    std::map<int, std::array<Eigen::MatrixXd, 2>> singles;
    if (single_lifts)
        for (int i = 0; i < n; ++i)
            singles[i] = {moments({i}, {0}, 1.0 - mu[i]), moments({i}, {1}, mu[i])};
    return PseudoDistribution(n, lift, blocks, singles);
}

int PseudoDistribution::degree() const {
    int d = 2 + 2 * static_cast<int>(lift_.size());
    if (!singles_.empty()) d = std::max(d, 4);
    return d;
}

std::vector<int> PseudoDistribution::conditionable() const {
    std::vector<int> out = lift_;
    for (const auto& [i, _] : singles_)
        if (lift_position(lift_, i) < 0) out.push_back(i);
    std::sort(out.begin(), out.end());
    return out;
}

bool PseudoDistribution::can_condition(int i) const {
    return lift_position(lift_, i) >= 0 || singles_.count(i) > 0;
}

std::array<double, 4> PseudoDistribution::pair_local(int i, int j) const {
    double p11 = both(i, j);
    double p10 = mu(i) - p11;
    double p01 = mu(j) - p11;
    double p00 = root_(0, 0) - mu(i) - mu(j) + p11;
    return {p00, p01, p10, p11};
}

Eigen::MatrixXd PseudoDistribution::signed_moments() const {
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n_ + 1, n_ + 1);
    L(0, 0) = 1.0;
    for (int i = 1; i <= n_; ++i) {
        L(i, 0) = 1.0;
        L(i, i) = -2.0;
    }
    return L * root_ * L.transpose();
}

PseudoDistribution condition(const PseudoDistribution& pd, int i, int a) {
    if (a != 0 && a != 1) throw std::invalid_argument("conditioning value must be 0 or 1");
    if (i < 0 || i >= pd.n()) throw std::invalid_argument("conditioning variable out of range");
    int pos = lift_position(pd.lift(), i);
    if (pos >= 0) {
        std::vector<int> lift;
        for (int v : pd.lift())
            if (v != i) lift.push_back(v);
        std::vector<Eigen::MatrixXd> blocks;
        double p = 0.0;
        for (size_t alpha = 0; alpha < pd.blocks().size(); ++alpha) {
            if (static_cast<int>((alpha >> pos) & 1u) != a) continue;
            blocks.push_back(pd.blocks()[alpha]);
            p += pd.blocks()[alpha](0, 0);
        }
        if (!(p >= 1e-6)) throw std::runtime_error("degenerate conditioning");
        for (auto& B : blocks) B /= p;
        return PseudoDistribution(pd.n(), lift, blocks);
    }
    auto it = pd.singles().find(i);
    if (it == pd.singles().end()) throw std::invalid_argument("variable is not lifted; degree too low to condition");
    const Eigen::MatrixXd& B = it->second[a];
    double p = B(0, 0);
    if (!(p >= 1e-6)) throw std::runtime_error("degenerate conditioning");
    return PseudoDistribution(pd.n(), {}, {B / p});
}

double mutual_information(const std::array<double, 4>& raw) {
    std::array<double, 4> p;
    double tot = 0;
    for (int k = 0; k < 4; ++k) {
        p[k] = std::max(0.0, raw[k]);
        tot += p[k];
    }
    if (!(tot > 0)) return 0.0;
    for (auto& x : p) x /= tot;
    double px[2] = {p[0] + p[1], p[2] + p[3]};
    double py[2] = {p[0] + p[2], p[1] + p[3]};
    double I = 0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            double pxy = p[2 * x + y];
            if (pxy > 0) I += pxy * std::log2(pxy / (px[x] * py[y]));
        }
    return std::max(0.0, I);
}

double average_mutual_information(const PseudoDistribution& pd, const std::vector<double>& weights) {
    int n = pd.n();
    std::vector<double> w = weights.empty() ? std::vector<double>(n, 1.0) : weights;
    if (static_cast<int>(w.size()) != n) throw std::invalid_argument("weight count mismatch");
    double num = 0, den = 0;
    for (int i = 0; i < n; ++i) {
        if (w[i] <= 0) continue;
        for (int j = i + 1; j < n; ++j) {
            if (w[j] <= 0) continue;
            double ww = w[i] * w[j];
            num += ww * mutual_information(pd.pair_local(i, j));
            den += ww;
        }
    }
    return den > 0 ? num / den : 0.0;
}

std::pair<PseudoDistribution, ConditioningTrace> conditioning_round(const PseudoDistribution& pd, int t_cap,
                                                                    uint64_t seed) {
    if (t_cap < 0) throw std::invalid_argument("t_cap must be nonnegative");
    ConditioningTrace trace;
    trace.mutual_information_before = average_mutual_information(pd);
    PseudoDistribution cur = pd;
    Rng pick(seed, stream::conditioning_set);
    Rng draw(seed, stream::conditioning_values);
    for (int step = 0; step < t_cap; ++step) {
        auto cand = cur.conditionable();
        if (cand.empty()) break;
        int i = cand[pick.below(cand.size())];
        double p1 = std::clamp(cur.mu(i), 0.0, 1.0);
        int a = draw.uniform() < p1 ? 1 : 0;
        double pa = a ? p1 : 1.0 - p1;
        cur = condition(cur, i, a);
        trace.steps.push_back({i, a, pa});
    }
    trace.mutual_information_after = average_mutual_information(cur);
    return {cur, trace};
}

}  // namespace ssve
