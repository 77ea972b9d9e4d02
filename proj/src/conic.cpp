#include "ssve/conic.hpp"

#include <cstdio>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/SparseCholesky>
#include <lapacke.h>

namespace ssve {

int ConeDims::rows() const {
    int r = zero + nonneg;
    for (int k : psd) r += svec_size(k);
    return r;
}

Eigen::MatrixXd svec_unpack(const double* s, int k) {
    Eigen::MatrixXd X(k, k);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < j; ++i) {
            double v = s[svec_index(i, j)] * inv_sqrt2;
            X(i, j) = v;
            X(j, i) = v;
        }
        X(j, j) = s[svec_index(j, j)];
    }
    return X;
}

void svec_pack(const Eigen::MatrixXd& X, double* s) {
    const double sqrt2 = std::sqrt(2.0);
    int k = static_cast<int>(X.rows());
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < j; ++i) s[svec_index(i, j)] = sqrt2 * 0.5 * (X(i, j) + X(j, i));
        s[svec_index(j, j)] = X(j, j);
    }
}

double project_psd(Eigen::MatrixXd& X) {
    int k = static_cast<int>(X.rows());
    Eigen::MatrixXd Q = X;
    Eigen::VectorXd lam(k);
    if (k > 0 && LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', k, Q.data(), k, lam.data()) != 0)
        throw std::runtime_error("eigendecomposition failed");
    double lmin = k ? lam[0] : 0.0;
    if (lmin >= 0) return lmin;
    int neg = 0;
    while (neg < k && lam[neg] < 0) ++neg;
    if (neg <= k - neg) {
        Eigen::MatrixXd Qn = Q.leftCols(neg);
        X.noalias() -= Qn * lam.head(neg).asDiagonal() * Qn.transpose();
    } else {
        Eigen::MatrixXd Qp = Q.rightCols(k - neg);
        X.noalias() = Qp * lam.tail(k - neg).asDiagonal() * Qp.transpose();
    }
    return lmin;
}

namespace {

struct Workspace {
    const ConicProblem& p;
    int n, m;
    Eigen::SparseMatrix<double> A;   // row-scaled
    Eigen::SparseMatrix<double> At;
    Eigen::VectorXd b, q;            // scaled
    Eigen::VectorXd E;               // row scaling
    double c = 1.0;                  // objective scaling
    Eigen::VectorXd rho;
    Eigen::SparseMatrix<double> K;
    std::vector<double*> kdiag;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;

    explicit Workspace(const ConicProblem& prob) : p(prob) {}
};

void set_rho(Workspace& w, double rho, double zero_scale) {
    for (int i = 0; i < w.m; ++i) w.rho[i] = i < w.p.cones.zero ? zero_scale * rho : rho;
    for (int i = 0; i < w.m; ++i) *w.kdiag[i] = -1.0 / w.rho[i];
}

void project_cones(const ConeDims& cones, Eigen::VectorXd& v, double* min_eig) {
    int off = 0;
    for (int i = 0; i < cones.zero; ++i) v[off + i] = 0.0;
    off += cones.zero;
    for (int i = 0; i < cones.nonneg; ++i) v[off + i] = std::max(0.0, v[off + i]);
    off += cones.nonneg;
    double lm = 0.0;
    for (int k : cones.psd) {
        Eigen::MatrixXd X = svec_unpack(v.data() + off, k);
        lm = std::min(lm, project_psd(X));
        svec_pack(X, v.data() + off);
        off += svec_size(k);
    }
    if (min_eig) *min_eig = lm;
}

}  // namespace

AdmmResult solve_conic(const ConicProblem& prob, const AdmmSettings& st) {
    Workspace w(prob);
    w.n = static_cast<int>(prob.A.cols());
    w.m = static_cast<int>(prob.A.rows());
    if (prob.cones.rows() != w.m) throw std::invalid_argument("cone dimensions do not match A");
    if (prob.b.size() != w.m || prob.q.size() != w.n) throw std::invalid_argument("problem vector size mismatch");
    const int n = w.n, m = w.m;
    const int lin_rows = prob.cones.zero + prob.cones.nonneg;

    // Row equilibration on the linear rows only; PSD rows keep the svec geometry.
    w.E = Eigen::VectorXd::Ones(m);
    {
        Eigen::VectorXd rmax = Eigen::VectorXd::Zero(m);
        for (int k = 0; k < prob.A.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(prob.A, k); it; ++it)
                rmax[it.row()] = std::max(rmax[it.row()], std::abs(it.value()));
        for (int i = 0; i < lin_rows; ++i)
            if (rmax[i] > 0) w.E[i] = 1.0 / rmax[i];
    }
    w.A = w.E.asDiagonal() * prob.A;
    w.At = w.A.transpose();
    w.b = w.E.cwiseProduct(prob.b);
    double qmax = prob.q.size() ? prob.q.cwiseAbs().maxCoeff() : 0.0;
    w.c = qmax > 0 ? 1.0 / qmax : 1.0;
    w.q = w.c * prob.q;

    // KKT = [sigma I, A'; A, -diag(1/rho)], lower triangle stored.
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(n + m + w.A.nonZeros());
    for (int j = 0; j < n; ++j) trip.emplace_back(j, j, st.sigma);
    for (int k = 0; k < w.A.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(w.A, k); it; ++it)
            trip.emplace_back(n + it.row(), it.col(), it.value());
    for (int i = 0; i < m; ++i) trip.emplace_back(n + i, n + i, -1.0);
    w.K.resize(n + m, n + m);
    w.K.setFromTriplets(trip.begin(), trip.end());
    w.K.makeCompressed();
    w.kdiag.resize(m);
    for (int i = 0; i < m; ++i) w.kdiag[i] = &w.K.coeffRef(n + i, n + i);
    w.rho.resize(m);
    double rho = st.rho;
    set_rho(w, rho, st.zero_rho_scale);
    w.ldlt.analyzePattern(w.K);
    w.ldlt.factorize(w.K);
    if (w.ldlt.info() != Eigen::Success) throw std::runtime_error("KKT factorization failed");

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n), s = Eigen::VectorXd::Zero(m), y = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd rhs(n + m), sol(n + m), xt(n), st_(m), shat(m), snew(m);
    AdmmResult res;
    double min_eig = 0.0;

    auto residuals = [&](double& rp, double& rd, double& pobj, double& dobj, double& gap, bool& ok) {
        // Unscaled quantities: x is unchanged, s_orig = s / E, y_orig = E y / c.
        Eigen::VectorXd Ax = prob.A * x;
        Eigen::VectorXd so = s.cwiseQuotient(w.E);
        Eigen::VectorXd yo = w.E.cwiseProduct(y) / w.c;
        Eigen::VectorXd Aty = prob.A.transpose() * yo;
        rp = (Ax + so - prob.b).lpNorm<Eigen::Infinity>();
        rd = (prob.q - Aty).lpNorm<Eigen::Infinity>();
        pobj = prob.q.dot(x);
        dobj = prob.b.dot(yo);
        gap = std::abs(pobj - dobj);
        double np = 1.0 + std::max({Ax.lpNorm<Eigen::Infinity>(), so.lpNorm<Eigen::Infinity>(),
                                    prob.b.lpNorm<Eigen::Infinity>()});
        double nd = 1.0 + std::max(prob.q.lpNorm<Eigen::Infinity>(), Aty.lpNorm<Eigen::Infinity>());
        ok = rp <= st.tol * np && rd <= st.tol * nd && gap <= st.tol * (1.0 + std::abs(pobj) + std::abs(dobj));
        return std::pair<double, double>(rp / np, rd / nd);
    };

    int it = 0;
    for (; it < st.max_iter; ++it) {
        rhs.head(n) = st.sigma * x - w.q;
        rhs.tail(m) = w.b - s + y.cwiseQuotient(w.rho);
        sol = w.ldlt.solve(rhs);
        xt = sol.head(n);
        st_ = s - (sol.tail(m) + y).cwiseQuotient(w.rho);
        x = st.alpha * xt + (1.0 - st.alpha) * x;
        shat = st.alpha * st_ + (1.0 - st.alpha) * s;
        snew = shat + y.cwiseQuotient(w.rho);
        project_cones(prob.cones, snew, &min_eig);
        y += w.rho.cwiseProduct(shat - snew);
        s = snew;

        if ((it + 1) % st.check_every == 0) {
            double rp, rd, po, dob, gap;
            bool ok;
            auto [rpn, rdn] = residuals(rp, rd, po, dob, gap, ok);
            if (st.verbose > 0 && (it + 1) % st.verbose == 0)
                std::fprintf(stderr, "admm %6d  rp %.3e  rd %.3e  gap %.3e  obj %.6f  rho %.3e\n", it + 1, rpn, rdn, gap,
                             po, rho);
            if (ok) {
                ++it;
                break;
            }
            if (st.adaptive_rho && (it + 1) % st.adapt_every == 0 && rdn > 0 && rpn > 0) {
                double ratio = std::sqrt(rpn / rdn);
                if (ratio > 5.0 || ratio < 0.2) {
                    double nr = std::clamp(rho * ratio, 1e-6, 1e6);
                    if (nr != rho) {
                        rho = nr;
                        set_rho(w, rho, st.zero_rho_scale);
                        w.ldlt.factorize(w.K);
                        if (w.ldlt.info() != Eigen::Success) throw std::runtime_error("KKT refactorization failed");
                    }
                }
            }
        }
    }
    double rp, rd, po, dob, gap;
    bool ok;
    residuals(rp, rd, po, dob, gap, ok);
    res.x = x;
    res.s = s.cwiseQuotient(w.E);
    res.y = w.E.cwiseProduct(y) / w.c;
    res.converged = ok;
    res.iterations = it;
    res.primal_residual = rp;
    res.dual_residual = rd;
    res.primal_objective = po;
    res.dual_objective = dob;
    res.gap = gap;
    res.min_psd_eigenvalue = min_eig;
    return res;
}

}  // namespace ssve
