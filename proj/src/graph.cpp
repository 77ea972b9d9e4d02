#include "ssve/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ssve {

CutSet CutSet::from_members(int n, const std::vector<int>& members) {
    CutSet s(n);
    for (int v : members) {
        if (v < 0 || v >= n) throw std::invalid_argument("cut member out of range");
        s.in[v] = 1;
    }
    return s;
}

CutSet CutSet::from_mask(int n, uint64_t mask) {
    CutSet s(n);
    for (int v = 0; v < n; ++v) s.in[v] = (mask >> v) & 1u;
    return s;
}

int CutSet::count() const {
    int c = 0;
    for (auto b : in) c += b != 0;
    return c;
}

CutSet CutSet::complement() const {
    CutSet c(universe());
    for (int v = 0; v < universe(); ++v) c.in[v] = in[v] ? 0 : 1;
    return c;
}

std::vector<int> CutSet::members() const {
    std::vector<int> out;
    for (int v = 0; v < universe(); ++v)
        if (in[v]) out.push_back(v);
    return out;
}

std::string to_string(Convention c) { return c == Convention::size ? "size" : "min"; }

Convention convention_from_string(const std::string& s) {
    if (s == "size") return Convention::size;
    if (s == "min") return Convention::min;
    throw std::invalid_argument("unknown convention: " + s);
}

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges, std::vector<double> weights)
    : n_(n), adj_(n), weights_(std::move(weights)) {
    if (n < 0) throw std::invalid_argument("negative vertex count");
    if (weights_.empty()) weights_.assign(n, 1.0);
    if (static_cast<int>(weights_.size()) != n) throw std::invalid_argument("weight count mismatch");
    for (double w : weights_)
        if (!(w >= 0.0)) throw std::invalid_argument("negative vertex weight");
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n) throw std::invalid_argument("edge endpoint out of range");
        if (u == v) throw std::invalid_argument("self-loop");
        edges_.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw std::invalid_argument("duplicate edge");
    for (auto [u, v] : edges_) {
        adj_[u].push_back(v);
        adj_[v].push_back(u);
    }
    for (auto& a : adj_) {
        std::sort(a.begin(), a.end());
        max_degree_ = std::max(max_degree_, static_cast<int>(a.size()));
    }
}

int Graph::edge_index(int u, int v) const {
    std::pair<int, int> key(std::min(u, v), std::max(u, v));
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
    if (it == edges_.end() || *it != key) return -1;
    return static_cast<int>(it - edges_.begin());
}

bool Graph::adjacent(int u, int v) const {
    return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

double Graph::total_weight() const {
    double s = 0;
    for (double w : weights_) s += w;
    return s;
}

bool Graph::is_regular() const {
    for (int v = 0; v < n_; ++v)
        if (degree(v) != max_degree_) return false;
    return true;
}

bool Graph::connected() const {
    if (n_ == 0) return true;
    std::vector<char> seen(n_, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : adj_[u])
            if (!seen[v]) {
                seen[v] = 1;
                ++reached;
                q.push(v);
            }
    }
    return reached == n_;
}

Hypergraph::Hypergraph(std::vector<double> vertex_weights, std::vector<std::vector<int>> edges,
                       std::vector<double> edge_weights, std::vector<int> pi)
    : W_(std::move(vertex_weights)), edges_(std::move(edges)), w_(std::move(edge_weights)), pi_(std::move(pi)) {
    if (w_.size() != edges_.size()) throw std::invalid_argument("edge weight count mismatch");
    for (double x : W_)
        if (!(x >= 0.0)) throw std::invalid_argument("negative vertex weight");
    for (double x : w_)
        if (!(x >= 0.0)) throw std::invalid_argument("negative edge weight");
    int nv = n();
    for (auto& e : edges_) {
        if (e.empty()) throw std::invalid_argument("empty hyperedge");
        std::sort(e.begin(), e.end());
        if (std::adjacent_find(e.begin(), e.end()) != e.end())
            throw std::invalid_argument("repeated vertex in hyperedge");
        if (e.front() < 0 || e.back() >= nv) throw std::invalid_argument("hyperedge member out of range");
        arity_ = std::max(arity_, static_cast<int>(e.size()));
    }
    if (!pi_.empty()) {
        if (pi_.size() != edges_.size()) throw std::invalid_argument("pi size mismatch");
        std::vector<char> used(nv, 0);
        for (size_t e = 0; e < edges_.size(); ++e) {
            int v = pi_[e];
            if (v < 0 || v >= nv) throw std::invalid_argument("pi out of range");
            if (used[v]) throw std::invalid_argument("pi not injective");
            used[v] = 1;
            if (!std::binary_search(edges_[e].begin(), edges_[e].end(), v))
                throw std::invalid_argument("pi(e) not in e");
        }
    }
}

int Hypergraph::max_vertex_degree() const {
    std::vector<int> deg(n(), 0);
    for (auto& e : edges_)
        for (int v : e) ++deg[v];
    int d = 0;
    for (int x : deg) d = std::max(d, x);
    return d;
}

double Hypergraph::total_W() const {
    double s = 0;
    for (double x : W_) s += x;
    return s;
}

double Hypergraph::total_w() const {
    double s = 0;
    for (double x : w_) s += x;
    return s;
}

double Hypergraph::weight_of(const CutSet& S) const {
    double s = 0;
    for (int v = 0; v < n(); ++v)
        if (S.contains(v)) s += W_[v];
    return s;
}

double Hypergraph::degree_volume(const CutSet& S) const {
    double s = 0;
    for (auto& e : edges_)
        for (int v : e)
            if (S.contains(v)) s += 1.0;
    return s;
}

static void check_universe(int n, const CutSet& S) {
    if (S.universe() != n) throw std::invalid_argument("cut set universe mismatch");
}

CutSet vertex_boundary(const Graph& G, const CutSet& S) {
    check_universe(G.n(), S);
    CutSet b(G.n());
    for (int u = 0; u < G.n(); ++u) {
        if (!S.contains(u)) continue;
        for (int v : G.neighbors(u))
            if (!S.contains(v)) b.insert(v);
    }
    return b;
}

double vertex_expansion(const Graph& G, const CutSet& S, Convention conv) {
    check_universe(G.n(), S);
    int s = S.count();
    if (s == 0) throw std::invalid_argument("empty set");
    int denom = s;
    if (conv == Convention::min) {
        if (s == G.n()) throw std::invalid_argument("degenerate denominator");
        denom = std::min(s, G.n() - s);
    }
    return static_cast<double>(vertex_boundary(G, S).count()) / denom;
}

CutSet symmetric_vertex_boundary(const Graph& G, const CutSet& S) {
    check_universe(G.n(), S);
    CutSet b(G.n());
    for (auto [u, v] : G.edges()) {
        if (S.contains(u) != S.contains(v)) {
            b.insert(u);
            b.insert(v);
        }
    }
    return b;
}

double symmetric_vertex_expansion(const Graph& G, const CutSet& S) {
    check_universe(G.n(), S);
    double ws = 0;
    for (int v = 0; v < G.n(); ++v)
        if (S.contains(v)) ws += G.weight(v);
    if (!(ws > 0)) throw std::invalid_argument("zero-weight set");
    CutSet b = symmetric_vertex_boundary(G, S);
    double wb = 0;
    for (int v = 0; v < G.n(); ++v)
        if (b.contains(v)) wb += G.weight(v);
    return wb / ws;
}

int edges_cut(const Graph& G, const CutSet& S) {
    check_universe(G.n(), S);
    int c = 0;
    for (auto [u, v] : G.edges()) c += S.contains(u) != S.contains(v);
    return c;
}

double edge_expansion(const Graph& G, const CutSet& S, Convention conv) {
    int s = S.count();
    if (s == 0) throw std::invalid_argument("empty set");
    int denom = s;
    if (conv == Convention::min) {
        if (s == G.n()) throw std::invalid_argument("degenerate denominator");
        denom = std::min(s, G.n() - s);
    }
    return static_cast<double>(edges_cut(G, S)) / denom;
}

bool hyperedge_is_cut(const Hypergraph& H, int e, const CutSet& S) {
    const auto& mem = H.edge(e);
    bool first = S.contains(mem[0]);
    for (size_t k = 1; k < mem.size(); ++k)
        if (S.contains(mem[k]) != first) return true;
    return false;
}

double hyperedge_cut_weight(const Hypergraph& H, const CutSet& S) {
    check_universe(H.n(), S);
    double c = 0;
    for (int e = 0; e < H.m(); ++e)
        if (hyperedge_is_cut(H, e, S)) c += H.w(e);
    return c;
}

double hyperedge_expansion(const Hypergraph& H, const CutSet& S, Volume vol) {
    check_universe(H.n(), S);
    double a, b;
    if (vol == Volume::weight) {
        a = H.weight_of(S);
        b = H.total_W() - a;
    } else {
        a = H.degree_volume(S);
        b = H.degree_volume(S.complement());
    }
    double denom = std::min(a, b);
    if (!(denom > 0)) throw std::invalid_argument("zero-weight side");
    return hyperedge_cut_weight(H, S) / denom;
}

Graph read_graph(std::istream& in) {
    std::string line;
    int n = -1, m = -1;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::pair<int, double>> weights;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ls(line.substr(1));
            std::string tag;
            ls >> tag;
            if (tag == "weight") {
                int v;
                double w;
                if (!(ls >> v >> w)) throw std::invalid_argument("bad weight line: " + line);
                weights.emplace_back(v, w);
            }
            continue;
        }
        std::istringstream ls(line);
        int a, b;
        if (!(ls >> a >> b)) throw std::invalid_argument("bad graph line: " + line);
        if (n < 0) {
            n = a;
            m = b;
        } else {
            edges.emplace_back(a, b);
        }
    }
    if (n < 0) throw std::invalid_argument("missing graph header");
    if (static_cast<int>(edges.size()) != m) throw std::invalid_argument("edge count does not match header");
    std::vector<double> w(n, 1.0);
    for (auto [v, x] : weights) {
        if (v < 0 || v >= n) throw std::invalid_argument("weight vertex out of range");
        w[v] = x;
    }
    return Graph(n, edges, w);
}

Graph read_graph_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return read_graph(f);
}

void write_graph(std::ostream& out, const Graph& G) {
    out << G.n() << ' ' << G.m() << '\n';
    for (int v = 0; v < G.n(); ++v)
        if (G.weight(v) != 1.0) out << "# weight " << v << ' ' << G.weight(v) << '\n';
    for (auto [u, v] : G.edges()) out << u << ' ' << v << '\n';
}

Hypergraph read_hypergraph_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    const auto& vs = j.at("vertices");
    std::vector<double> W(vs.size(), 0.0);
    std::vector<char> seen(vs.size(), 0);
    for (const auto& v : vs) {
        int id = v.at("id").get<int>();
        if (id < 0 || id >= static_cast<int>(W.size()) || seen[id])
            throw std::invalid_argument("vertex ids must be 0..n-1 without repeats");
        seen[id] = 1;
        W[id] = v.at("W").get<double>();
    }
    std::vector<std::vector<int>> edges;
    std::vector<double> w;
    std::vector<int> pi;
    bool any_pi = false, all_pi = true;
    for (const auto& e : j.at("edges")) {
        edges.push_back(e.at("members").get<std::vector<int>>());
        w.push_back(e.at("w").get<double>());
        if (e.contains("pi") && !e.at("pi").is_null()) {
            any_pi = true;
            pi.push_back(e.at("pi").get<int>());
        } else {
            all_pi = false;
        }
    }
    if (any_pi && !all_pi) throw std::invalid_argument("pi must be given for all edges or none");
    return Hypergraph(W, edges, w, any_pi ? pi : std::vector<int>{});
}

Hypergraph read_hypergraph_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return read_hypergraph_json(ss.str());
}

std::string hypergraph_to_json(const Hypergraph& H) {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (int v = 0; v < H.n(); ++v) j["vertices"].push_back({{"id", v}, {"W", H.W(v)}});
    j["edges"] = nlohmann::json::array();
    for (int e = 0; e < H.m(); ++e) {
        nlohmann::json je = {{"members", H.edge(e)}, {"w", H.w(e)}};
        if (H.has_pi()) je["pi"] = H.pi(e);
        j["edges"].push_back(je);
    }
    return j.dump();
}

}  // namespace ssve
