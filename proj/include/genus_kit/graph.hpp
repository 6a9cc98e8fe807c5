#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "genus_kit/errors.hpp"
#include "genus_kit/rng.hpp"

namespace gk {

struct Edge {
    int u;
    int v;  // u < v
    friend bool operator==(const Edge&, const Edge&) = default;
};

// Simple undirected graph on vertices 0..n-1. Immutable after construction.
class Graph {
public:
    Graph() = default;
    // Duplicate edges are collapsed; loops and out-of-range endpoints throw.
    Graph(int n, std::span<const std::pair<int, int>> edges);

    int order() const { return n_; }
    std::size_t size() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int id) const { return edges_[static_cast<std::size_t>(id)]; }

    // Neighbours of v in increasing order, and the matching edge ids.
    std::span<const int> neighbors(int v) const {
        return {adj_.data() + offset_[v], adj_.data() + offset_[v + 1]};
    }
    std::span<const int> incident_edges(int v) const {
        return {adj_edge_.data() + offset_[v], adj_edge_.data() + offset_[v + 1]};
    }
    int degree(int v) const { return offset_[v + 1] - offset_[v]; }

    // Position of u inside neighbors(v), or -1.
    int neighbor_index(int v, int u) const;
    bool adjacent(int u, int v) const { return neighbor_index(u, v) >= 0; }
    // Edge id of {u, v}, or -1.
    int edge_id(int u, int v) const;

    // Darts (directed edge sides) are indexed by adjacency position:
    // dart(u, v) = dart_offset(u) + neighbor_index(u, v).
    int dart_offset(int v) const { return offset_[v]; }
    int dart_count() const { return offset_[n_]; }
    int dart(int u, int v) const {
        const int i = neighbor_index(u, v);
        return i < 0 ? -1 : offset_[u] + i;
    }
    int dart_head(int d) const { return adj_[static_cast<std::size_t>(d)]; }
    // Reverse dart for every dart.
    std::vector<int> reverse_darts() const;

    // Connected component label per vertex, labels 0..count-1 in order of
    // smallest vertex.
    std::vector<int> component_labels(int* count = nullptr) const;

    // Subgraph induced by the listed edge ids, same vertex set.
    Graph edge_subgraph(std::span<const int> edge_ids) const;

    // Induced subgraph on `vertices` relabelled 0..k-1 in the given order.
    Graph induced(std::span<const int> vertices) const;

    Graph relabeled(std::span<const int> new_label) const;

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<int> offset_{0};
    std::vector<int> adj_;
    std::vector<int> adj_edge_;
};

Graph load_graph(const std::string& path);
Graph parse_graph(std::string_view text);
std::string format_graph(const Graph& g);

// Arcs of a digraph obtained by orienting (a subset of) the edges of a Graph.
struct Arc {
    int tail;
    int head;
    int edge;  // edge id in the origin graph
};

class Digraph {
public:
    Digraph() = default;
    Digraph(int n, std::vector<Arc> arcs);

    int order() const { return n_; }
    std::size_t size() const { return arcs_.size(); }
    const std::vector<Arc>& arcs() const { return arcs_; }
    const Arc& arc(int id) const { return arcs_[static_cast<std::size_t>(id)]; }

    // Arc ids leaving / entering v, sorted by the opposite endpoint.
    std::span<const int> out_arcs(int v) const {
        return {out_.data() + out_off_[v], out_.data() + out_off_[v + 1]};
    }
    std::span<const int> in_arcs(int v) const {
        return {in_.data() + in_off_[v], in_.data() + in_off_[v + 1]};
    }
    // Arc id of tail->head, or -1.
    int find_arc(int tail, int head) const;

    // Same arc ids with every arc reversed.
    Digraph reversed() const;

private:
    int n_ = 0;
    std::vector<Arc> arcs_;
    std::vector<int> out_off_{0}, out_, in_off_{0}, in_;
};

Digraph random_orientation(const Graph& g, std::uint64_t seed);
Digraph orient_edges(const Graph& g, std::span<const int> edge_ids, std::uint64_t seed);

// Assigns every item to exactly one part; part i is chosen with probability
// fractions[i]. Fractions must be non-negative and sum to 1 within 1e-9.
void check_fractions(std::span<const double> fractions);

template <class T>
std::vector<std::vector<T>> split_edges(std::span<const T> items,
                                        std::span<const double> fractions,
                                        std::uint64_t seed) {
    check_fractions(fractions);
    std::vector<double> cumulative(fractions.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        acc += fractions[i];
        cumulative[i] = acc;
    }
    std::vector<std::vector<T>> parts(fractions.size());
    Rng rng(seed);
    for (const T& item : items) {
        const double x = rng.uniform() * acc;
        std::size_t k = 0;
        while (k + 1 < cumulative.size() && x >= cumulative[k]) ++k;
        parts[k].push_back(item);
    }
    return parts;
}

enum class Pattern { K2, P3, K3, C4, K4minus, Q6 };

Pattern parse_pattern(std::string_view name);
std::string_view pattern_name(Pattern p);
int pattern_order(Pattern p);

struct HomCounts {
    Pattern pattern;
    double count = 0.0;  // exact for counts below 2^53
    double density = 0.0;
};

// Exact homomorphism count. Q6 is the 6-cycle with one long diagonal,
// K4minus is K4 with one edge removed.
HomCounts hom_count(Pattern pattern, const Graph& g);

struct CodegreeStats {
    double p = 0.0;
    double lambda = 0.0;
    std::vector<long long> codeg;  // per edge id: common neighbours
    std::vector<long long> p3;     // per edge id: paths of length 3
    std::vector<bool> balanced;    // per edge id
    double deviation_sum = 0.0;    // 2 * sum_{uv in E} |codeg - p^2 n|
    long long unbalanced_count = 0;
};

CodegreeStats codegree_stats(const Graph& g, double p, double lambda);

// Number of common neighbours of u and v (degree when u == v).
long long codegree(const Graph& g, int u, int v);

// Edge density 2e / n^2 used as the reference density p.
inline double edge_density(const Graph& g) {
    const double n = g.order();
    return n > 0 ? 2.0 * static_cast<double>(g.size()) / (n * n) : 0.0;
}

// Erdos-Renyi G(n, p) and bipartite G(a, b, p) samplers.
Graph random_graph(int n, double p, std::uint64_t seed);
Graph random_bipartite_graph(int a, int b, double p, std::uint64_t seed);
Graph complete_graph(int n);
Graph complete_bipartite_graph(int a, int b);
Graph cycle_graph(int n);

}  // namespace gk
