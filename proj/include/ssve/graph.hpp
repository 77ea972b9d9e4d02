#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ssve {

// Membership mask over vertices 0..n-1.
struct CutSet {
    std::vector<uint8_t> in;

    CutSet() = default;
    explicit CutSet(int n) : in(n, 0) {}
    static CutSet from_members(int n, const std::vector<int>& members);
    static CutSet from_mask(int n, uint64_t mask);

    int universe() const { return static_cast<int>(in.size()); }
    bool contains(int v) const { return in[v] != 0; }
    void insert(int v) { in[v] = 1; }
    void erase(int v) { in[v] = 0; }
    int count() const;
    bool empty() const { return count() == 0; }
    CutSet complement() const;
    std::vector<int> members() const;
    bool operator==(const CutSet& o) const { return in == o.in; }
};

enum class Convention { size, min };

std::string to_string(Convention c);
Convention convention_from_string(const std::string& s);

class Graph {
public:
    Graph() = default;
    Graph(int n, const std::vector<std::pair<int, int>>& edges, std::vector<double> weights = {});

    int n() const { return n_; }
    int m() const { return static_cast<int>(edges_.size()); }
    int max_degree() const { return max_degree_; }
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }
    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    // Edges as (u, v) with u < v, sorted lexicographically.
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    int edge_index(int u, int v) const;
    bool adjacent(int u, int v) const;
    double weight(int v) const { return weights_[v]; }
    const std::vector<double>& weights() const { return weights_; }
    double total_weight() const;
    bool is_regular() const;
    bool connected() const;

private:
    int n_ = 0;
    std::vector<std::vector<int>> adj_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<double> weights_;
    int max_degree_ = 0;
};

enum class Volume { weight, degree };

class Hypergraph {
public:
    Hypergraph() = default;
    Hypergraph(std::vector<double> vertex_weights, std::vector<std::vector<int>> edges,
               std::vector<double> edge_weights, std::vector<int> pi = {});

    int n() const { return static_cast<int>(W_.size()); }
    int m() const { return static_cast<int>(edges_.size()); }
    int arity() const { return arity_; }
    int max_vertex_degree() const;
    const std::vector<int>& edge(int e) const { return edges_[e]; }
    const std::vector<std::vector<int>>& edges() const { return edges_; }
    double w(int e) const { return w_[e]; }
    double W(int v) const { return W_[v]; }
    const std::vector<double>& edge_weights() const { return w_; }
    const std::vector<double>& vertex_weights() const { return W_; }
    bool has_pi() const { return !pi_.empty(); }
    int pi(int e) const { return pi_[e]; }
    const std::vector<int>& pi_map() const { return pi_; }
    double total_W() const;
    double total_w() const;
    double weight_of(const CutSet& S) const;
    double degree_volume(const CutSet& S) const;

private:
    std::vector<double> W_;
    std::vector<std::vector<int>> edges_;
    std::vector<double> w_;
    std::vector<int> pi_;
    int arity_ = 0;
};

CutSet vertex_boundary(const Graph& G, const CutSet& S);
double vertex_expansion(const Graph& G, const CutSet& S, Convention conv = Convention::size);
CutSet symmetric_vertex_boundary(const Graph& G, const CutSet& S);
double symmetric_vertex_expansion(const Graph& G, const CutSet& S);
// |E(S, S^c)| over |S| (or the smaller side).
double edge_expansion(const Graph& G, const CutSet& S, Convention conv = Convention::size);
int edges_cut(const Graph& G, const CutSet& S);

double hyperedge_cut_weight(const Hypergraph& H, const CutSet& S);
bool hyperedge_is_cut(const Hypergraph& H, int e, const CutSet& S);
double hyperedge_expansion(const Hypergraph& H, const CutSet& S, Volume vol = Volume::weight);

Graph read_graph(std::istream& in);
Graph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const Graph& G);

Hypergraph read_hypergraph_json(const std::string& text);
Hypergraph read_hypergraph_file(const std::string& path);
std::string hypergraph_to_json(const Hypergraph& H);

}  // namespace ssve
