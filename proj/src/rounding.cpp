#include "ssve/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "ssve/gaussian.hpp"
#include "ssve/oracle.hpp"

namespace ssve {

std::vector<double> edge_disagreement(const Hypergraph& H, const PseudoDistribution& pd) {
    if (pd.n() != H.n()) throw std::invalid_argument("pseudo-distribution size mismatch");
    std::vector<double> out(H.m(), 0.0);
    for (int e = 0; e < H.m(); ++e) {
        const auto& ed = H.edge(e);
        double best = 0.0;
        for (size_t a = 0; a < ed.size(); ++a)
            for (size_t b = a + 1; b < ed.size(); ++b) best = std::max(best, pd.disagree(ed[a], ed[b]));
        out[e] = best;
    }
    return out;
}

DeletionResult delete_heavy_edges(const Hypergraph& H, const std::vector<double>& Delta) {
    if (static_cast<int>(Delta.size()) != H.m()) throw std::invalid_argument("one Delta per hyperedge required");
    DeletionResult r;
    for (int e = 0; e < H.m(); ++e) {
        r.bound += 10.0 * H.w(e) * Delta[e];
        if (Delta[e] >= kDeletionThreshold) {
            r.deleted.push_back(e);
            r.deleted_weight += H.w(e);
        } else {
            r.survivors.push_back(e);
        }
    }
    r.bound_ok = r.deleted_weight <= r.bound;
    return r;
}

DeletionResult delete_heavy_edges(const Hypergraph& H, const PseudoDistribution& pd) {
    return delete_heavy_edges(H, edge_disagreement(H, pd));
}

PseudoDistribution repair_local_validity(const PseudoDistribution& pd, double delta, LocalRepair* info) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    const int n = pd.n();
    Eigen::MatrixXd M = pd.root() / pd.root()(0, 0);
    Eigen::MatrixXd Q(n + 1, n + 1);
    Q.setConstant(delta * delta);
    Q.row(0).setConstant(delta);
    Q.col(0).setConstant(delta);
    Q(0, 0) = 1.0;
    for (int i = 1; i <= n; ++i) Q(i, i) = delta;

    LocalRepair rep;
    double lambda = 0.0;
    auto need = [&](double p, double q) {
        rep.violation = std::min(rep.violation, p);
        if (p < 0.0) lambda = std::max(lambda, -p / (q - p));
    };
    for (int i = 1; i <= n; ++i) {
        need(M(0, i), delta);
        need(1.0 - M(0, i), 1.0 - delta);
        for (int j = i + 1; j <= n; ++j) {
            double p11 = M(i, j);
            need(p11, delta * delta);
            need(M(0, i) - p11, delta * (1.0 - delta));
            need(M(0, j) - p11, delta * (1.0 - delta));
            need(1.0 - M(0, i) - M(0, j) + p11, (1.0 - delta) * (1.0 - delta));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> em(M, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eq(Q, Eigen::EigenvaluesOnly);
    rep.min_eigenvalue = em.eigenvalues()[0];
    double qmin = eq.eigenvalues()[0];
    if (rep.min_eigenvalue < 0.0) lambda = std::max(lambda, -rep.min_eigenvalue / (qmin - rep.min_eigenvalue));
    rep.lambda = lambda;
    if (info) *info = rep;
    return PseudoDistribution(n, {}, {(1.0 - lambda) * M + lambda * Q});
}

ShiftedSolution preprocess_shift(const VectorSolution& vs, double theta) {
    if (!(theta >= 0.0 && theta * theta <= 0.01)) throw std::invalid_argument("theta out of range");
    const int n = vs.n(), r = vs.r();
    const double s = std::sqrt(1.0 + theta * theta);
    ShiftedSolution ss;
    ss.original = vs;
    ss.theta = theta;
    ss.zhat = Eigen::VectorXd::Zero(r + 1);
    ss.zhat[r] = 1.0;
    ss.V = Eigen::MatrixXd::Zero(r + 1, n + 1);
    ss.V.topRows(r) = vs.V / s;
    ss.V.col(0).head(r) = vs.V.col(0);
    ss.V.row(r).tail(n).setConstant(-theta / s);
    ss.mu.resize(n);
    for (int i = 0; i < n; ++i) ss.mu[i] = vs.mu[i] / s + 0.5 * (1.0 - 1.0 / s);
    ss.Z = Eigen::MatrixXd::Zero(r + 1, n);
    ss.Z.topRows(r) = vs.Z / s;
    ss.Z.row(r).setConstant(0.5 * theta / s);
    ss.Zbar = Eigen::MatrixXd::Zero(r + 1, n);
    ss.thresholds.resize(n);
    for (int i = 0; i < n; ++i) {
        double nz = ss.Z.col(i).norm();
        if (nz > 0) ss.Zbar.col(i) = ss.Z.col(i) / nz;
        double m = ss.mu[i];
        if (m <= 0.0)
            ss.thresholds[i] = -std::numeric_limits<double>::infinity();
        else if (m >= 1.0)
            ss.thresholds[i] = std::numeric_limits<double>::infinity();
        else
            ss.thresholds[i] = phi_inv(m);
    }
    return ss;
}

bool ShiftClaims::ok(double eq_tol, double ineq_tol) const {
    return mu_shift >= -ineq_tol && mu_range >= -ineq_tol && mu_formula <= eq_tol && distance_scaling <= eq_tol &&
           z_inner >= -ineq_tol && mu_lipschitz >= -ineq_tol && angle >= -ineq_tol && small_bias >= -ineq_tol;
}

ShiftClaims check_shift_claims(const ShiftedSolution& ss) {
    const VectorSolution& vs = ss.original;
    const int n = ss.n();
    const double t2 = ss.theta * ss.theta;
    const double s = std::sqrt(1.0 + t2);
    ShiftClaims c;
    const double inf = std::numeric_limits<double>::infinity();
    c.mu_shift = c.mu_range = c.z_inner = c.mu_lipschitz = c.angle = c.small_bias = inf;
    Eigen::MatrixXd Gv = vs.V.transpose() * vs.V;
    Eigen::MatrixXd Gv2 = ss.V.transpose() * ss.V;
    Eigen::MatrixXd Gz = vs.Z.transpose() * vs.Z;
    Eigen::MatrixXd Gz2 = ss.Z.transpose() * ss.Z;
    for (int i = 0; i < n; ++i) {
        double m = vs.mu[i], m2 = ss.mu[i];
        c.mu_shift = std::min(c.mu_shift, t2 - std::abs(m - m2));
        c.mu_range = std::min(c.mu_range, std::min(m2 - t2 / 10.0, 1.0 - t2 / 10.0 - m2));
        c.mu_formula = std::max(c.mu_formula, std::abs(m2 - (m / s + 0.5 * (1.0 - 1.0 / s))));
        if (m2 <= 0.5) c.small_bias = std::min(c.small_bias, 4.0 * Gz2(i, i) - m2);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double d = Gv(i + 1, i + 1) + Gv(j + 1, j + 1) - 2.0 * Gv(i + 1, j + 1);
            double d2 = Gv2(i + 1, i + 1) + Gv2(j + 1, j + 1) - 2.0 * Gv2(i + 1, j + 1);
            c.distance_scaling = std::max(c.distance_scaling, std::abs(d2 - d / (1.0 + t2)));
            c.z_inner = std::min(c.z_inner, std::abs(Gz(i, j)) + t2 / 4.0 - std::abs(Gz2(i, j)));
            c.mu_lipschitz = std::min(c.mu_lipschitz, 2.0 * d2 - std::abs(ss.mu[i] - ss.mu[j]));
            // Direct differences: Gram-matrix cancellation is amplified by 1 / |z'_i||z'_j|.
            double ni = std::sqrt(Gz2(i, i)), nj = std::sqrt(Gz2(j, j));
            if (ni > 0 && nj > 0) {
                double dv = (ss.V.col(i + 1) - ss.V.col(j + 1)).squaredNorm();
                double one_minus_cos = 0.5 * (ss.Zbar.col(i) - ss.Zbar.col(j)).squaredNorm();
                c.angle = std::min(c.angle, dv / (8.0 * ni * nj) - one_minus_cos);
            }
        }
    }
    return c;
}

CutSet shifted_hyperplane_round(const ShiftedSolution& ss, uint64_t seed, uint64_t trial) {
    const int n = ss.n();
    for (int i = 0; i < n; ++i)
        if (!(ss.Z.col(i).norm() > 0)) throw std::runtime_error("zero-norm shifted vector");
    Rng rng(seed, stream::rounding, trial);
    Eigen::VectorXd g;
    Eigen::VectorXd proj = project_gaussian(ss.Zbar, rng, g);
    CutSet S(n);
    for (int i = 0; i < n; ++i)
        if (proj[i] <= ss.thresholds[i]) S.insert(i);
    return S;
}

EdgeCutStats edge_cut_stats(const Hypergraph& H, const PseudoDistribution& pd, const ShiftedSolution& ss) {
    if (ss.n() != H.n()) throw std::invalid_argument("shifted solution size mismatch");
    EdgeCutStats st;
    st.nu_raw = edge_disagreement(H, pd);
    Eigen::MatrixXd G = ss.V.transpose() * ss.V;
    for (int e = 0; e < H.m(); ++e) {
        const auto& ed = H.edge(e);
        double nu = 0.0, al = 0.0;
        for (size_t a = 0; a < ed.size(); ++a) {
            int i = ed[a];
            al = std::max(al, std::min(ss.mu[i], 1.0 - ss.mu[i]));
            for (size_t b = a + 1; b < ed.size(); ++b) {
                int j = ed[b];
                nu = std::max(nu, G(i + 1, i + 1) + G(j + 1, j + 1) - 2.0 * G(i + 1, j + 1));
            }
        }
        st.nu_shifted.push_back(nu);
        st.alpha.push_back(al);
        st.deleted.push_back(st.nu_raw[e] >= kDeletionThreshold);
    }
    return st;
}

namespace {

std::string fnv1a(const std::string& text) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void check_config(double delta, const PipelineConfig& c) {
    if (!(delta > 0.0 && delta <= 0.5)) throw std::invalid_argument("delta must lie in (0, 1/2]");
    if (c.rounds != 2 && c.rounds != 4) throw std::invalid_argument("rounds must be 2 or 4");
    if (c.t_cap < 0 || c.t_cap > 8) throw std::invalid_argument("t_cap must lie in [0, 8]");
    if (c.lift_size > c.t_cap) throw std::invalid_argument("lift_size exceeds t_cap");
    if (c.trials < 1) throw std::invalid_argument("trials must be positive");
    if (!(c.tol > 0)) throw std::invalid_argument("tol must be positive");
    if (c.max_iter < 1) throw std::invalid_argument("max_iter must be positive");
}

RunReport run_pipeline(const Hypergraph& H, double delta, const PipelineConfig& cfg, const Reduction* R) {
    check_config(delta, cfg);
    RunReport rep;
    rep.config = cfg;
    rep.delta = delta;
    rep.theta = cfg.theta < 0 ? std::pow(delta, 12) : cfg.theta;
    rep.target_size = target_size(R ? R->n_original : H.n(), delta);

    // Conditioning set: size uniform in {0..t_cap}, members uniform over V(H).
    Rng pick(cfg.seed, stream::conditioning_set, 1);
    int t = static_cast<int>(pick.below(static_cast<uint64_t>(cfg.t_cap) + 1));
    if (cfg.lift_size >= 0) t = cfg.lift_size;
    t = std::min(t, H.n());
    std::vector<int> perm(H.n());
    for (int i = 0; i < H.n(); ++i) perm[i] = i;
    for (int k = 0; k < t; ++k) std::swap(perm[k], perm[k + pick.below(H.n() - k)]);
    rep.lift.assign(perm.begin(), perm.begin() + t);
    std::sort(rep.lift.begin(), rep.lift.end());

    RelaxationOptions opt;
    opt.lift = rep.lift;
    opt.product_cardinality = cfg.rounds == 4;
    opt.locality = cfg.locality;
    SdpSolution sol = solve_relaxation(H, delta, opt, cfg.tol, cfg.max_iter);
    rep.sdp = sol.report;

    auto [pd, trace] = conditioning_round(sol.pd, t, cfg.seed);
    rep.conditioning = trace;
    PseudoDistribution clean = repair_local_validity(pd, delta, &rep.repair);
    rep.deletion = delete_heavy_edges(H, clean);
    VectorSolution vs = extract_vectors(clean);
    ShiftedSolution ss = preprocess_shift(vs, rep.theta);
    rep.claims = check_shift_claims(ss);

    const double total = H.total_W();
    double best = std::numeric_limits<double>::infinity();
    CutSet best_set;
    for (int k = 0; k < cfg.trials; ++k) {
        TrialRecord tr;
        tr.index = static_cast<uint64_t>(k);
        CutSet S = shifted_hyperplane_round(ss, cfg.seed, tr.index);
        tr.size = S.count();
        tr.weight_fraction = H.weight_of(S) / total;
        double ratio = tr.weight_fraction / delta;
        tr.valid = ratio >= 0.9 && ratio <= 1.1;
        tr.valid_tight = ratio >= 0.99 && ratio <= 1.01;
        try {
            tr.expansion = hyperedge_expansion(H, S);
        } catch (const std::invalid_argument&) {
            tr.expansion = std::numeric_limits<double>::quiet_NaN();
        }
        if (tr.valid && tr.expansion < best) {
            best = tr.expansion;
            best_set = S;
            rep.chosen_trial = k;
        }
        rep.trials.push_back(tr);
    }
    if (rep.chosen_trial < 0) throw NoConcentratedTrial();
    rep.chosen_set = best_set;
    rep.chosen_expansion = best;
    if (R) {
        rep.has_rollback = true;
        rep.rollback = rollback_set(*R, best_set, best);
        rep.phi_v = vertex_expansion(R->original, rep.rollback.set, cfg.convention);
    }
    return rep;
}

nlohmann::json members_json(const CutSet& S) { return S.members(); }

}  // namespace

std::string instance_hash(const Graph& G) {
    std::ostringstream os;
    write_graph(os, G);
    return fnv1a("graph\n" + os.str());
}

std::string instance_hash(const Hypergraph& H) { return fnv1a("hypergraph\n" + hypergraph_to_json(H)); }

RunReport full_pipeline(const Graph& G, double delta, const PipelineConfig& config) {
    Reduction R = ssve_to_hsse(G);
    RunReport rep = run_pipeline(R.H, delta, config, &R);
    rep.mode = "ssve";
    rep.instance_hash = instance_hash(G);
    return rep;
}

RunReport hypergraph_pipeline(const Hypergraph& H, double delta, const PipelineConfig& config) {
    RunReport rep = run_pipeline(H, delta, config, nullptr);
    rep.mode = "hsse";
    rep.instance_hash = instance_hash(H);
    return rep;
}

std::string RunReport::to_json() const {
    using nlohmann::json;
    json j;
    j["mode"] = mode;
    j["instance_hash"] = instance_hash;
    j["config"] = {{"rounds", config.rounds},
                   {"t_cap", config.t_cap},
                   {"lift_size", config.lift_size},
                   {"theta", theta},
                   {"trials", config.trials},
                   {"seed", config.seed},
                   {"tol", config.tol},
                   {"max_iter", config.max_iter},
                   {"convention", to_string(config.convention)},
                   {"locality", config.locality == PairScope::all ? "all" : "hyperedges"}};
    j["delta"] = delta;
    j["target_size"] = target_size;
    j["target_convention"] = "round(delta n)";
    j["sdp_value"] = sdp.objective;
    j["sdp"] = {{"objective", sdp.objective},     {"dual_objective", sdp.dual_objective},
                {"gap", sdp.gap},                 {"primal_residual", sdp.primal_residual},
                {"dual_residual", sdp.dual_residual}, {"min_eigenvalue", sdp.min_eigenvalue},
                {"iterations", sdp.iterations},   {"converged", sdp.converged},
                {"lift", lift}};
    json steps = json::array();
    for (const auto& s : conditioning.steps)
        steps.push_back({{"variable", s.variable}, {"value", s.value}, {"probability", s.probability}});
    j["conditioning"] = {{"steps", steps},
                         {"mutual_information_before", conditioning.mutual_information_before},
                         {"mutual_information_after", conditioning.mutual_information_after}};
    j["local_repair"] = {{"violation", repair.violation},
                         {"min_eigenvalue", repair.min_eigenvalue},
                         {"lambda", repair.lambda}};
    j["deleted_edges"] = deletion.deleted;
    j["deletion"] = {{"deleted_weight", deletion.deleted_weight}, {"bound", deletion.bound},
                     {"bound_ok", deletion.bound_ok}, {"threshold", kDeletionThreshold}};
    j["shift_claims"] = {{"ok", claims.ok()},
                         {"mu_shift", claims.mu_shift},
                         {"mu_range", claims.mu_range},
                         {"mu_formula", claims.mu_formula},
                         {"distance_scaling", claims.distance_scaling},
                         {"z_inner", claims.z_inner},
                         {"mu_lipschitz", claims.mu_lipschitz},
                         {"angle", claims.angle},
                         {"small_bias", claims.small_bias}};
    json tr = json::array();
    int loose = 0, tight = 0;
    for (const auto& t : trials) {
        json e = {{"seed", t.index},
                  {"size", t.size},
                  {"weight_fraction", t.weight_fraction},
                  {"valid", t.valid},
                  {"valid_tight", t.valid_tight}};
        e["expansion"] = std::isnan(t.expansion) ? json(nullptr) : json(t.expansion);
        tr.push_back(e);
        loose += t.valid;
        tight += t.valid_tight;
    }
    j["trials"] = tr;
    j["windows"] = {{"loose", {0.9, 1.1}}, {"tight", {0.99, 1.01}}, {"loose_count", loose}, {"tight_count", tight}};
    json ch = {{"trial", chosen_trial}, {"hypergraph_set", members_json(chosen_set)},
               {"phi_E", chosen_expansion}};
    if (has_rollback) {
        ch["S_prime"] = members_json(rollback.set);
        ch["size"] = rollback.size;
        ch["phi_V"] = phi_v;
        ch["rollback"] = {{"eps_prime", rollback.eps_prime},
                          {"delta_prime", rollback.delta_prime},
                          {"size_window_ok", rollback.size_window_ok},
                          {"expansion_ok", rollback.expansion_ok},
                          {"phi_V_size_convention", rollback.phi_v}};
    } else {
        ch["size"] = chosen_set.count();
    }
    j["chosen"] = ch;
    return j.dump(2) + "\n";
}

}  // namespace ssve
