#include "ssve/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ssve {

namespace {

struct RowSet {
    std::vector<Eigen::Triplet<double>> trip;
    std::vector<double> rhs;
    int rows = 0;

    // Adds the row  sum coef * x[var] + s = rhs.
    void add(const std::vector<std::pair<int, double>>& terms, double b) {
        for (auto [v, c] : terms)
            if (c != 0.0) trip.emplace_back(rows, v, c);
        rhs.push_back(b);
        ++rows;
    }
};

struct Layout {
    int side;
    int per_block;
    std::vector<int> offset;
    int var(int b, int i, int j) const {
        if (i > j) std::swap(i, j);
        return offset[b] + svec_index(i, j);
    }
};

// Lift context of a block: (variable, value) pairs fixed inside it.
using Fixed = std::vector<std::pair<int, int>>;

void add_block_rows(const Hypergraph& H, double delta, const Layout& L, int b, const Fixed& fixed,
                    const std::vector<std::pair<int, int>>& pairs, bool products, RowSet& zero, RowSet& nonneg,
                    int& cardinality_rows) {
    const int n = H.n();
    for (int i = 1; i <= n; ++i) zero.add({{L.var(b, i, i), 1.0}, {L.var(b, 0, i), -1.0}}, 0.0);
    std::vector<std::pair<int, double>> card;
    double WV = H.total_W();
    for (int i = 0; i < n; ++i)
        if (H.W(i) > 0) card.emplace_back(L.var(b, 0, i + 1), H.W(i));
    card.emplace_back(L.var(b, 0, 0), -delta * WV);
    zero.add(card, 0.0);
    ++cardinality_rows;
    if (products) {
        for (int i = 1; i <= n; ++i) {
            std::vector<std::pair<int, double>> row;
            for (int j = 0; j < n; ++j)
                if (H.W(j) > 0) row.emplace_back(L.var(b, i, j + 1), H.W(j));
            row.emplace_back(L.var(b, 0, i), -delta * WV);
            zero.add(row, 0.0);
            ++cardinality_rows;
        }
    }
    for (auto [v, a] : fixed) {
        int r = v + 1;
        for (int j = 0; j <= n; ++j) {
            if (a == 1) {
                if (j == r) continue;
                if (j == 0) {
                    zero.add({{L.var(b, 0, r), 1.0}, {L.var(b, 0, 0), -1.0}}, 0.0);
                } else {
                    zero.add({{L.var(b, r, j), 1.0}, {L.var(b, 0, j), -1.0}}, 0.0);
                }
            } else {
                zero.add({{L.var(b, r, j), 1.0}}, 0.0);
            }
        }
    }
    for (auto [i, j] : pairs) {
        int a = i + 1, c = j + 1;
        int xij = L.var(b, a, c), xi = L.var(b, 0, a), xj = L.var(b, 0, c), x0 = L.var(b, 0, 0);
        nonneg.add({{xij, -1.0}}, 0.0);
        nonneg.add({{xi, -1.0}, {xij, 1.0}}, 0.0);
        nonneg.add({{xj, -1.0}, {xij, 1.0}}, 0.0);
        nonneg.add({{x0, -1.0}, {xi, 1.0}, {xj, 1.0}, {xij, -1.0}}, 0.0);
    }
}

}  // namespace

RelaxationProblem build_relaxation(const Hypergraph& H, double delta, const RelaxationOptions& opt) {
    if (!(delta > 0.0 && delta <= 0.5)) throw std::invalid_argument("delta must lie in (0, 1/2]");
    if (opt.degree != 2 && opt.degree != 4) throw std::invalid_argument("degree must be 2 or 4");
    if (opt.degree == 4 && !opt.lift.empty())
        throw std::invalid_argument("degree 4 lifting and an explicit lift set are exclusive");
    if (!(H.total_W() > 0)) throw std::invalid_argument("W(V) must be positive");
    if (opt.lift.size() > 10) throw std::invalid_argument("lift set too large");
    {
        std::set<int> s(opt.lift.begin(), opt.lift.end());
        if (s.size() != opt.lift.size()) throw std::invalid_argument("repeated lift variable");
        for (int v : opt.lift)
            if (v < 0 || v >= H.n()) throw std::invalid_argument("lift variable out of range");
    }

    RelaxationProblem P;
    P.H = &H;
    P.delta = delta;
    P.options = opt;
    P.n = H.n();
    const int n = H.n();
    for (int e = 0; e < H.m(); ++e)
        if (H.w(e) > 0 && H.edge(e).size() >= 2) P.objective_edges.push_back(e);

    P.primary_blocks = 1 << opt.lift.size();
    int secondary = opt.degree == 4 ? 2 * n : 0;
    P.total_blocks = P.primary_blocks + secondary;

    Layout L;
    L.side = n + 1;
    L.per_block = svec_size(L.side);
    for (int b = 0; b < P.total_blocks; ++b) L.offset.push_back(b * L.per_block);
    P.block_offset = L.offset;
    const int block_vars = P.total_blocks * L.per_block;
    P.epigraph_vars = P.primary_blocks * static_cast<int>(P.objective_edges.size());
    const int nvars = block_vars + P.epigraph_vars;
    auto epi = [&](int b, int k) { return block_vars + b * static_cast<int>(P.objective_edges.size()) + k; };

    std::vector<std::pair<int, int>> pairs;
    if (opt.locality == PairScope::all) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    } else {
        std::set<std::pair<int, int>> ps;
        for (const auto& e : H.edges())
            for (size_t a = 0; a < e.size(); ++a)
                for (size_t c = a + 1; c < e.size(); ++c) ps.emplace(e[a], e[c]);
        pairs.assign(ps.begin(), ps.end());
    }

    RowSet zero, nonneg;
    for (int b = 0; b < P.primary_blocks; ++b) {
        Fixed fixed;
        for (size_t k = 0; k < opt.lift.size(); ++k) fixed.emplace_back(opt.lift[k], (b >> k) & 1);
        add_block_rows(H, delta, L, b, fixed, pairs, opt.product_cardinality, zero, nonneg, P.cardinality_rows);
    }
    for (int i = 0; i < secondary / 2; ++i)
        for (int a = 0; a < 2; ++a)
            add_block_rows(H, delta, L, P.primary_blocks + 2 * i + a, {{i, a}}, pairs, opt.product_cardinality,
                           zero, nonneg, P.cardinality_rows);
    {
        std::vector<std::pair<int, double>> norm;
        for (int b = 0; b < P.primary_blocks; ++b) norm.emplace_back(L.var(b, 0, 0), 1.0);
        zero.add(norm, 1.0);
    }
    for (int i = 0; i < secondary / 2; ++i) {
        int b0 = P.primary_blocks + 2 * i, b1 = b0 + 1;
        for (int c = 0; c <= n; ++c)
            for (int r = 0; r <= c; ++r)
                zero.add({{L.var(b0, r, c), 1.0}, {L.var(b1, r, c), 1.0}, {L.var(0, r, c), -1.0}}, 0.0);
    }

    for (int b = 0; b < P.primary_blocks; ++b) {
        for (size_t k = 0; k < P.objective_edges.size(); ++k) {
            const auto& e = H.edge(P.objective_edges[k]);
            for (size_t a = 0; a < e.size(); ++a)
                for (size_t c = a + 1; c < e.size(); ++c) {
                    int i = e[a] + 1, j = e[c] + 1;
                    // c_e >= X_0i + X_0j - 2 X_ij
                    nonneg.add({{epi(b, static_cast<int>(k)), -1.0},
                                {L.var(b, 0, i), 1.0},
                                {L.var(b, 0, j), 1.0},
                                {L.var(b, i, j), -2.0}},
                               0.0);
                }
        }
        if (opt.l1_constraints) {
            for (const auto& e : H.edges())
                for (size_t a = 0; a < e.size(); ++a)
                    for (size_t c = a + 1; c < e.size(); ++c) {
                        int i = e[a] + 1, j = e[c] + 1;
                        // |mu_i - mu_j| <= mu_i + mu_j - 2 p_ij
                        nonneg.add({{L.var(b, 0, j), -2.0}, {L.var(b, i, j), 2.0}}, 0.0);
                        nonneg.add({{L.var(b, 0, i), -2.0}, {L.var(b, i, j), 2.0}}, 0.0);
                        if (b == 0) ++P.l1_constraint_count;
                    }
        }
    }

    const int m_lin = zero.rows + nonneg.rows;
    const int m = m_lin + P.total_blocks * L.per_block;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(zero.trip.size() + nonneg.trip.size() + block_vars);
    for (auto& t : zero.trip) trip.push_back(t);
    for (auto& t : nonneg.trip) trip.emplace_back(t.row() + zero.rows, t.col(), t.value());
    const double sqrt2 = std::sqrt(2.0);
    for (int b = 0; b < P.total_blocks; ++b)
        for (int c = 0; c < L.side; ++c)
            for (int r = 0; r <= c; ++r) {
                int k = svec_index(r, c);
                trip.emplace_back(m_lin + b * L.per_block + k, L.offset[b] + k, r == c ? -1.0 : -sqrt2);
            }
    P.conic.A.resize(m, nvars);
    P.conic.A.setFromTriplets(trip.begin(), trip.end());
    P.conic.A.makeCompressed();
    P.conic.b = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < zero.rows; ++i) P.conic.b[i] = zero.rhs[i];
    for (int i = 0; i < nonneg.rows; ++i) P.conic.b[zero.rows + i] = nonneg.rhs[i];
    P.conic.q = Eigen::VectorXd::Zero(nvars);
    const double scale = 1.0 / (delta * H.total_W());
    for (int b = 0; b < P.primary_blocks; ++b)
        for (size_t k = 0; k < P.objective_edges.size(); ++k)
            P.conic.q[epi(b, static_cast<int>(k))] = H.w(P.objective_edges[k]) * scale;
    P.conic.cones.zero = zero.rows;
    P.conic.cones.nonneg = nonneg.rows;
    P.conic.cones.psd.assign(P.total_blocks, L.side);
    return P;
}

namespace {

// Rebuilds a PSD block from a Gram factor so that Booleanity and the lift values hold exactly.
Eigen::MatrixXd polish_block(const Eigen::MatrixXd& X, const Fixed& fixed) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X);
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    Eigen::MatrixXd G = lam.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
    const int k = static_cast<int>(X.rows());
    Eigen::VectorXd g0 = G.col(0);
    double r0 = 0.5 * g0.norm();
    std::vector<int> state(k, -1);
    for (auto [v, a] : fixed) state[v + 1] = a;
    for (int i = 1; i < k; ++i) {
        if (state[i] == 1) {
            G.col(i) = g0;
        } else if (state[i] == 0) {
            G.col(i).setZero();
        } else {
            Eigen::VectorXd d = G.col(i) - 0.5 * g0;
            double dn = d.norm();
            if (dn > 0) G.col(i) = 0.5 * g0 + d * (r0 / dn);
        }
    }
    Eigen::MatrixXd B = G.transpose() * G;
    for (int i = 1; i < k; ++i) B(i, i) = B(0, i) = B(i, 0);
    return B;
}

}  // namespace

SdpSolution solve_sdp(const RelaxationProblem& P, double tol, int max_iter) {
    AdmmSettings st;
    st.tol = tol;
    st.max_iter = max_iter;
    AdmmResult r = solve_conic(P.conic, st);
    const int side = P.n + 1;
    const int per = svec_size(side);
    const int m_lin = P.conic.cones.zero + P.conic.cones.nonneg;

    SolveReport rep;
    rep.objective = r.primal_objective;
    rep.dual_objective = r.dual_objective;
    rep.gap = r.gap;
    rep.primal_residual = r.primal_residual;
    rep.dual_residual = r.dual_residual;
    rep.iterations = r.iterations;
    rep.converged = r.converged;
    double lmin = 0;
    std::vector<Eigen::MatrixXd> raw;
    for (int b = 0; b < P.total_blocks; ++b) {
        Eigen::MatrixXd Xx(side, side);
        for (int c = 0; c < side; ++c)
            for (int rr = 0; rr <= c; ++rr) Xx(rr, c) = Xx(c, rr) = r.x[P.block_offset[b] + svec_index(rr, c)];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Xx, Eigen::EigenvaluesOnly);
        lmin = std::min(lmin, es.eigenvalues()[0]);
        raw.push_back(svec_unpack(r.s.data() + m_lin + b * per, side));
    }
    rep.min_eigenvalue = lmin;
    if (!r.converged) {
        std::ostringstream os;
        os << "SDP solver did not converge in " << r.iterations << " iterations (primal residual "
           << r.primal_residual << ", dual residual " << r.dual_residual << ", gap " << r.gap << ")";
        throw std::runtime_error(os.str());
    }

    const auto& lift = P.options.lift;
    std::vector<Eigen::MatrixXd> blocks;
    for (int b = 0; b < P.primary_blocks; ++b) {
        Fixed fixed;
        for (size_t k = 0; k < lift.size(); ++k) fixed.emplace_back(lift[k], (b >> k) & 1);
        blocks.push_back(polish_block(raw[b], fixed));
    }
    std::map<int, std::array<Eigen::MatrixXd, 2>> singles;
    if (P.options.degree == 4)
        for (int i = 0; i < P.n; ++i)
            singles[i] = {polish_block(raw[P.primary_blocks + 2 * i], {{i, 0}}),
                          polish_block(raw[P.primary_blocks + 2 * i + 1], {{i, 1}})};
    SdpSolution sol{PseudoDistribution(P.n, lift, blocks, singles), r.primal_objective, rep};
    return sol;
}

SdpSolution solve_relaxation(const Hypergraph& H, double delta, const RelaxationOptions& options, double tol,
                             int max_iter) {
    RelaxationProblem P = build_relaxation(H, delta, options);
    return solve_sdp(P, tol, max_iter);
}

double relaxation_objective(const Hypergraph& H, double delta, const PseudoDistribution& pd) {
    double tot = 0;
    for (int e = 0; e < H.m(); ++e) {
        const auto& m = H.edge(e);
        double mx = 0;
        for (size_t a = 0; a < m.size(); ++a)
            for (size_t c = a + 1; c < m.size(); ++c) mx = std::max(mx, pd.disagree(m[a], m[c]));
        tot += H.w(e) * mx;
    }
    return tot / (delta * H.total_W());
}

VectorSolution VectorSolution::from_vectors(Eigen::MatrixXd V) {
    VectorSolution vs;
    int n = static_cast<int>(V.cols()) - 1;
    if (n < 0) throw std::invalid_argument("vector solution needs the one vector");
    vs.V = std::move(V);
    vs.mu.resize(n);
    vs.Z.resize(vs.V.rows(), n);
    Eigen::VectorXd phib = vs.V.col(0);
    for (int i = 0; i < n; ++i) {
        double c = phib.dot(vs.V.col(i + 1));
        vs.mu[i] = 0.5 * (1.0 - c);
        vs.Z.col(i) = 0.5 * ((1.0 - 2.0 * vs.mu[i]) * phib - vs.V.col(i + 1));
    }
    return vs;
}

VectorSolution extract_vectors(const PseudoDistribution& pd, double psd_tol) {
    Eigen::MatrixXd Y = pd.signed_moments();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Y);
    const auto& lam = es.eigenvalues();
    if (lam[0] < -psd_tol) throw std::runtime_error("moment matrix is indefinite beyond tolerance");
    double lmax = std::max(lam[lam.size() - 1], 0.0);
    std::vector<int> keep;
    for (int k = 0; k < lam.size(); ++k)
        if (lam[k] > 1e-14 * std::max(1.0, lmax)) keep.push_back(k);
    Eigen::MatrixXd V(keep.size(), Y.cols());
    for (size_t r = 0; r < keep.size(); ++r)
        V.row(r) = std::sqrt(lam[keep[r]]) * es.eigenvectors().col(keep[r]).transpose();
    for (int c = 0; c < V.cols(); ++c) {
        double nrm = V.col(c).norm();
        if (nrm > 0) V.col(c) /= nrm;
    }
    return VectorSolution::from_vectors(V);
}

double vector_objective(const Hypergraph& H, double delta, const VectorSolution& vs) {
    double tot = 0;
    for (int e = 0; e < H.m(); ++e) {
        const auto& m = H.edge(e);
        double mx = 0;
        for (size_t a = 0; a < m.size(); ++a)
            for (size_t c = a + 1; c < m.size(); ++c) mx = std::max(mx, (vs.u(m[a]) - vs.u(m[c])).squaredNorm());
        tot += H.w(e) * mx;
    }
    return tot / (delta * H.total_W());
}

}  // namespace ssve
