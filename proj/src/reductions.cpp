#include "ssve/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "ssve/gaussian.hpp"

namespace ssve {

Graph vertex_to_symmetric(const Graph& G) {
    const int n = G.n();
    std::vector<std::pair<int, int>> edges;
    std::vector<double> w(n + G.m(), 0.0);
    for (int v = 0; v < n; ++v) w[v] = G.weight(v);
    for (int k = 0; k < G.m(); ++k) {
        auto [u, v] = G.edges()[k];
        edges.emplace_back(u, n + k);
        edges.emplace_back(v, n + k);
    }
    return Graph(n + G.m(), edges, w);
}

Hypergraph symmetric_to_hypergraph(const Graph& Gs) {
    std::vector<std::vector<int>> edges;
    std::vector<double> w, W;
    std::vector<int> pi;
    for (int v = 0; v < Gs.n(); ++v) {
        std::vector<int> e{v};
        for (int u : Gs.neighbors(v)) e.push_back(u);
        edges.push_back(e);
        w.push_back(Gs.weight(v));
        W.push_back(Gs.weight(v));
        pi.push_back(v);
    }
    return Hypergraph(W, edges, w, pi);
}

Reduction ssve_to_hsse(const Graph& G) {
    Reduction R;
    R.original = G;
    R.symmetric = vertex_to_symmetric(G);
    R.H = symmetric_to_hypergraph(R.symmetric);
    R.n_original = G.n();
    return R;
}

CutSet completeness_map(const Graph& G, const CutSet& S) {
    if (S.universe() != G.n()) throw std::invalid_argument("set universe mismatch");
    if (S.empty()) throw std::invalid_argument("empty set");
    CutSet out(G.n() + G.m());
    for (int v = 0; v < G.n(); ++v)
        if (S.contains(v)) out.insert(v);
    for (int k = 0; k < G.m(); ++k) {
        auto [u, v] = G.edges()[k];
        if (S.contains(u) || S.contains(v)) out.insert(G.n() + k);
    }
    return out;
}

RollbackResult rollback_set(const Reduction& R, const CutSet& S, double eps_prime) {
    const Graph& Gs = R.symmetric;
    const int n = R.n_original;
    if (S.universe() != Gs.n()) throw std::invalid_argument("set universe mismatch");
    double phiE = hyperedge_expansion(R.H, S);
    if (!(phiE <= eps_prime + 1e-12)) throw std::invalid_argument("rollback precondition");
    const Graph& G = R.original;
    RollbackResult r;
    r.eps_prime = eps_prime;
    r.set = CutSet(n);
    int inS = 0;
    for (int v = 0; v < n; ++v) {
        if (!S.contains(v)) continue;
        ++inS;
        bool keep = true;
        for (int e : Gs.neighbors(v)) keep = keep && S.contains(e);
        if (keep) r.set.insert(v);
    }
    r.delta_prime = static_cast<double>(inS) / n;
    r.size = r.set.count();
    double lo = (1.0 - eps_prime) * r.delta_prime * n;
    r.size_window_ok = r.size >= lo - 1e-9 && r.size <= inS;
    if (r.size == 0) throw std::runtime_error("rollback bound violated: empty rolled-back set");
    r.phi_v = vertex_expansion(G, r.set);
    r.expansion_ok = r.phi_v <= 2.0 * eps_prime + 1e-12;
    if (!r.size_window_ok || !r.expansion_ok) throw std::runtime_error("rollback bound violated");
    return r;
}

GapInstance gap_single_edge(int d) {
    if (d < 2) throw std::invalid_argument("d must be at least 2");
    std::vector<int> e(d);
    for (int i = 0; i < d; ++i) e[i] = i;
    GapInstance g;
    g.H = Hypergraph(std::vector<double>(d, 1.0), {e}, {1.0});
    g.delta = 1.0 / d;
    const double delta = g.delta;
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(d + 1, d + 1);
    V(0, 0) = 1.0;
    for (int i = 1; i <= d; ++i) {
        // v_i = phi_bar - 2 u_i
        V(0, i) = 1.0 - 2.0 * delta;
        V(i, i) = -2.0 * std::sqrt(delta - delta * delta);
    }
    g.vectors = VectorSolution::from_vectors(V);
    return g;
}

Hypergraph random_gap_hypergraph(int d, int n, double C, uint64_t seed) {
    if (d < 2) throw std::invalid_argument("d must be at least 2");
    if (n < d) throw std::invalid_argument("n must be at least d");
    if (C < 1) throw std::invalid_argument("C must be at least 1");
    const int r = static_cast<int>(std::lround(C * n * std::log2(static_cast<double>(d))));
    Rng rng(seed, stream::generator);
    std::vector<int> perm(n);
    std::vector<std::vector<int>> edges;
    for (int k = 0; k < r; ++k) {
        for (int i = 0; i < n; ++i) perm[i] = i;
        for (int i = 0; i < d; ++i) std::swap(perm[i], perm[i + rng.below(n - i)]);
        edges.emplace_back(perm.begin(), perm.begin() + d);
    }
    return Hypergraph(std::vector<double>(n, 1.0), edges, std::vector<double>(r, 1.0));
}

Graph replacement_product(const Graph& G, const Graph& X) {
    if (!G.is_regular() || G.n() == 0) throw std::invalid_argument("base graph must be regular");
    if (!X.is_regular()) throw std::invalid_argument("expander must be regular");
    const int d = G.max_degree();
    if (X.n() != d) throw std::invalid_argument("expander must have one vertex per port");
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v < G.n(); ++v)
        for (auto [a, b] : X.edges()) edges.emplace_back(v * d + a, v * d + b);
    for (auto [u, v] : G.edges()) {
        const auto& nu = G.neighbors(u);
        const auto& nv = G.neighbors(v);
        int pu = static_cast<int>(std::lower_bound(nu.begin(), nu.end(), v) - nu.begin());
        int pv = static_cast<int>(std::lower_bound(nv.begin(), nv.end(), u) - nv.begin());
        edges.emplace_back(u * d + pu, v * d + pv);
    }
    return Graph(G.n() * d, edges);
}

CutSet cloud_lift(const Graph& G, const CutSet& S) {
    const int d = G.max_degree();
    CutSet out(G.n() * d);
    for (int v = 0; v < G.n(); ++v)
        if (S.contains(v))
            for (int i = 0; i < d; ++i) out.insert(v * d + i);
    return out;
}

Graph complete_graph(int k) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) e.emplace_back(i, j);
    return Graph(k, e);
}

Graph cycle_graph(int k) {
    if (k < 3) throw std::invalid_argument("cycle needs at least 3 vertices");
    return circulant_graph(k, {1});
}

Graph circulant_graph(int k, const std::vector<int>& offsets) {
    std::set<std::pair<int, int>> es;
    for (int i = 0; i < k; ++i)
        for (int o : offsets) {
            int j = ((i + o) % k + k) % k;
            if (j == i) throw std::invalid_argument("circulant offset yields a self-loop");
            es.emplace(std::min(i, j), std::max(i, j));
        }
    return Graph(k, std::vector<std::pair<int, int>>(es.begin(), es.end()));
}

Graph regular_expander(int k, int g) {
    if (g < 1 || g >= k) throw std::invalid_argument("expander degree out of range");
    if (g == k - 1) return complete_graph(k);
    if (g % 2 == 1 && k % 2 == 1) throw std::invalid_argument("odd-degree regular graph needs an even vertex count");
    // Spread offsets geometrically so the circulant mixes quickly.
    std::vector<int> offs;
    int half = g / 2;
    for (int t = 0; t < half; ++t) {
        int o = std::max(1, static_cast<int>(std::lround(std::pow(k / 2.0, static_cast<double>(t) / std::max(1, half)))));
        while (std::find(offs.begin(), offs.end(), o) != offs.end() || 2 * o == k) ++o;
        offs.push_back(o);
    }
    if (g % 2 == 1) offs.push_back(k / 2);
    Graph X = circulant_graph(k, offs);
    if (!X.is_regular() || X.max_degree() != g) throw std::runtime_error("expander construction failed");
    return X;
}

PlantedInstance planted_instance(int n, int k, int inner_degree, int crossing, int max_degree, uint64_t seed) {
    if (k < 2 || k >= n) throw std::invalid_argument("planted size out of range");
    if (inner_degree < 1 || inner_degree > max_degree) throw std::invalid_argument("inner degree out of range");
    Rng rng(seed, stream::generator);
    std::set<std::pair<int, int>> es;
    std::vector<int> deg(n, 0);
    auto try_add = [&](int u, int v, int cap) {
        if (u == v || deg[u] >= cap || deg[v] >= cap) return false;
        auto key = std::make_pair(std::min(u, v), std::max(u, v));
        if (!es.insert(key).second) return false;
        ++deg[u];
        ++deg[v];
        return true;
    };
    auto fill = [&](int lo, int hi) {
        int size = hi - lo;
        for (int attempt = 0; attempt < 50 * size * inner_degree; ++attempt) {
            int u = lo + static_cast<int>(rng.below(size));
            int v = lo + static_cast<int>(rng.below(size));
            try_add(u, v, inner_degree);
        }
    };
    fill(0, k);
    fill(k, n);
    int added = 0;
    for (int attempt = 0; added < crossing && attempt < 1000 * (crossing + 1); ++attempt) {
        int u = static_cast<int>(rng.below(k));
        int v = k + static_cast<int>(rng.below(n - k));
        if (try_add(u, v, max_degree)) ++added;
    }
    if (added < crossing) throw std::runtime_error("could not place crossing edges");
    PlantedInstance P;
    P.G = Graph(n, std::vector<std::pair<int, int>>(es.begin(), es.end()));
    P.planted = CutSet(n);
    for (int i = 0; i < k; ++i) P.planted.insert(i);
    P.delta = static_cast<double>(k) / n;
    return P;
}

Graph random_graph(int n, double p, uint64_t seed) {
    Rng rng(seed, stream::generator);
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < p) e.emplace_back(i, j);
    return Graph(n, e);
}

}  // namespace ssve
