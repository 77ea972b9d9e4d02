#include "ssve/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace ssve {

namespace {

// Calls f(mask) for every k-subset of [n] in lexicographic order of member lists.
template <class F>
void for_each_subset(int n, int k, F&& f) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        uint32_t mask = 0;
        for (int i : idx) mask |= 1u << i;
        f(mask);
        int p = k - 1;
        while (p >= 0 && idx[p] == n - k + p) --p;
        if (p < 0) return;
        ++idx[p];
        for (int q = p + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
    }
}

// Maximum matching in the bipartite graph given by adjacency from left vertices.
int max_matching(const std::vector<std::vector<int>>& adj, int right_size) {
    std::vector<int> match_r(right_size, -1);
    std::vector<char> seen;
    std::function<bool(int)> augment = [&](int u) {
        for (int v : adj[u]) {
            if (seen[v]) continue;
            seen[v] = 1;
            if (match_r[v] < 0 || augment(match_r[v])) {
                match_r[v] = u;
                return true;
            }
        }
        return false;
    };
    int m = 0;
    for (size_t u = 0; u < adj.size(); ++u) {
        seen.assign(right_size, 0);
        if (augment(static_cast<int>(u))) ++m;
    }
    return m;
}

// Minimum vertex cover from a maximum matching (Konig).
void min_vertex_cover(const std::vector<std::vector<int>>& adj, int right_size, std::vector<char>& left_in,
                      std::vector<char>& right_in) {
    const int L = static_cast<int>(adj.size());
    std::vector<int> match_r(right_size, -1), match_l(L, -1);
    std::vector<char> seen;
    std::function<bool(int)> augment = [&](int u) {
        for (int v : adj[u]) {
            if (seen[v]) continue;
            seen[v] = 1;
            if (match_r[v] < 0 || augment(match_r[v])) {
                match_r[v] = u;
                match_l[u] = v;
                return true;
            }
        }
        return false;
    };
    for (int u = 0; u < L; ++u) {
        seen.assign(right_size, 0);
        augment(u);
    }
    // Alternating reachability from unmatched left vertices.
    std::vector<char> zl(L, 0), zr(right_size, 0);
    std::vector<int> stack;
    for (int u = 0; u < L; ++u)
        if (match_l[u] < 0) {
            zl[u] = 1;
            stack.push_back(u);
        }
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : adj[u])
            if (!zr[v]) {
                zr[v] = 1;
                int w = match_r[v];
                if (w >= 0 && !zl[w]) {
                    zl[w] = 1;
                    stack.push_back(w);
                }
            }
    }
    left_in.assign(L, 0);
    right_in.assign(right_size, 0);
    for (int u = 0; u < L; ++u)
        if (!zl[u]) left_in[u] = 1;
    for (int v = 0; v < right_size; ++v)
        if (zr[v]) right_in[v] = 1;
}

}  // namespace

int target_size(int n, double delta) {
    if (!(delta > 0 && delta <= 1)) throw std::invalid_argument("delta must lie in (0, 1]");
    return static_cast<int>(std::lround(delta * n));
}

OracleResult exact_ssve(const Graph& G, double delta, Convention conv) {
    const int n = G.n();
    if (n > 24) throw std::invalid_argument("oracle scale");
    int k = target_size(n, delta);
    if (k < 1) throw std::invalid_argument("target size is zero");
    if (conv == Convention::min && k == n) throw std::invalid_argument("degenerate denominator");
    std::vector<uint32_t> nb(n, 0);
    for (int v = 0; v < n; ++v)
        for (int u : G.neighbors(v)) nb[v] |= 1u << u;
    const uint32_t full = n == 32 ? ~0u : ((1u << n) - 1);
    double denom = conv == Convention::size ? k : std::min(k, n - k);
    OracleResult best;
    best.value = std::numeric_limits<double>::infinity();
    uint32_t best_mask = 0;
    for_each_subset(n, k, [&](uint32_t mask) {
        uint32_t reach = 0;
        for (uint32_t m = mask; m; m &= m - 1) reach |= nb[std::countr_zero(m)];
        double val = std::popcount(reach & ~mask & full) / denom;
        if (val < best.value) {
            best.value = val;
            best_mask = mask;
        }
    });
    best.set = CutSet::from_mask(n, best_mask);
    return best;
}

OracleResult exact_hsse(const Hypergraph& H, double delta, double weight_tol) {
    const int n = H.n();
    if (n > 20) throw std::invalid_argument("oracle scale");
    if (weight_tol < 0) {
        double mn = std::numeric_limits<double>::infinity();
        for (int v = 0; v < n; ++v)
            if (H.W(v) > 0) mn = std::min(mn, H.W(v));
        if (!std::isfinite(mn)) throw std::invalid_argument("infeasible weight target");
        weight_tol = mn / 2;
    }
    const double WV = H.total_W();
    const double target = delta * WV;
    std::vector<std::vector<int>> inc(n);
    for (int e = 0; e < H.m(); ++e)
        for (int v : H.edge(e)) inc[v].push_back(e);
    std::vector<int> cnt(H.m(), 0);
    double cut = 0, WS = 0;
    auto is_cut = [&](int e) { return cnt[e] > 0 && cnt[e] < static_cast<int>(H.edge(e).size()); };
    OracleResult best;
    best.value = std::numeric_limits<double>::infinity();
    uint32_t best_mask = 0;
    bool found = false;
    uint32_t gray = 0;
    const uint64_t total = uint64_t{1} << n;
    for (uint64_t i = 0; i < total; ++i) {
        if (i > 0) {
            int v = std::countr_zero(static_cast<uint64_t>(i));
            bool adding = !((gray >> v) & 1u);
            gray ^= 1u << v;
            WS += adding ? H.W(v) : -H.W(v);
            for (int e : inc[v]) {
                bool before = is_cut(e);
                cnt[e] += adding ? 1 : -1;
                bool after = is_cut(e);
                if (before != after) cut += after ? H.w(e) : -H.w(e);
            }
        }
        if (std::abs(WS - target) > weight_tol) continue;
        double den = std::min(WS, WV - WS);
        if (!(den > 0)) continue;
        double val = std::max(0.0, cut) / den;
        if (val < best.value) {
            best.value = val;
            best_mask = gray;
            found = true;
        }
    }
    if (!found) throw std::invalid_argument("infeasible weight target");
    best.set = CutSet::from_mask(n, best_mask);
    // Recompute exactly from the set to drop accumulated rounding.
    best.value = hyperedge_expansion(H, best.set);
    return best;
}

OracleResult exact_reduced_hsse(const Graph& G, double delta) {
    const int n = G.n();
    if (n > 24) throw std::invalid_argument("oracle scale");
    int k = target_size(n, delta);
    if (k < 1 || k >= n) throw std::invalid_argument("target size out of range");
    OracleResult best;
    best.value = std::numeric_limits<double>::infinity();
    uint32_t best_mask = 0;
    int best_cover = -1;
    for_each_subset(n, k, [&](uint32_t mask) {
        std::vector<int> left, right_id(n, -1);
        std::vector<std::vector<int>> adj;
        int rs = 0;
        for (int v = 0; v < n; ++v) {
            if (!((mask >> v) & 1u)) continue;
            std::vector<int> a;
            for (int u : G.neighbors(v))
                if (!((mask >> u) & 1u)) {
                    if (right_id[u] < 0) right_id[u] = rs++;
                    a.push_back(right_id[u]);
                }
            adj.push_back(a);
        }
        int c = max_matching(adj, rs);
        if (best_cover < 0 || c < best_cover) {
            best_cover = c;
            best_mask = mask;
        }
    });
    best.value = static_cast<double>(best_cover) / std::min(k, n - k);
    // Optimal set on V_G u E_G: exactly the cover vertices are cut. A crossing edge stays
    // outside S when its inner endpoint is in the cover, otherwise it joins S.
    std::vector<int> left_v, right_v;
    std::vector<int> right_id(n, -1);
    std::vector<std::vector<int>> adj;
    for (int v = 0; v < n; ++v) {
        if (!((best_mask >> v) & 1u)) continue;
        left_v.push_back(v);
        std::vector<int> a;
        for (int u : G.neighbors(v))
            if (!((best_mask >> u) & 1u)) {
                if (right_id[u] < 0) {
                    right_id[u] = static_cast<int>(right_v.size());
                    right_v.push_back(u);
                }
                a.push_back(right_id[u]);
            }
        adj.push_back(a);
    }
    std::vector<char> lin, rin;
    min_vertex_cover(adj, static_cast<int>(right_v.size()), lin, rin);
    CutSet S(n + G.m());
    for (int v = 0; v < n; ++v)
        if ((best_mask >> v) & 1u) S.insert(v);
    for (int e = 0; e < G.m(); ++e) {
        auto [a, b] = G.edges()[e];
        bool ia = (best_mask >> a) & 1u, ib = (best_mask >> b) & 1u;
        if (ia && ib) {
            S.insert(n + e);
        } else if (ia != ib) {
            int in = ia ? a : b;
            int li = static_cast<int>(std::find(left_v.begin(), left_v.end(), in) - left_v.begin());
            if (!lin[li]) S.insert(n + e);
        }
    }
    best.set = S;
    return best;
}

}  // namespace ssve
