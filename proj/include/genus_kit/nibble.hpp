#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "genus_kit/graph.hpp"

namespace gk {

// r-uniform hypergraph (r = 3 or 4). Vertices are arc ids of a digraph; a
// cycle hyperedge lists its arcs in cycle order, starting at the arc whose
// tail is the smallest vertex.
class UniformHypergraph {
public:
    UniformHypergraph() = default;
    UniformHypergraph(int r, int vertices, std::vector<std::array<int, 4>> edges);

    int uniformity() const { return r_; }
    int vertex_count() const { return vertices_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<std::array<int, 4>>& edges() const { return edges_; }
    std::span<const int> edge(std::size_t id) const {
        return {edges_[id].data(), static_cast<std::size_t>(r_)};
    }
    int degree(int v) const { return off_[v + 1] - off_[v]; }
    std::span<const int> incident(int v) const { return {inc_.data() + off_[v], inc_.data() + off_[v + 1]}; }

private:
    int r_ = 3;
    int vertices_ = 0;
    std::vector<std::array<int, 4>> edges_;
    std::vector<int> off_{0}, inc_;
};

// Directed r-cycles of d as hyperedges on its arcs. Stops early and sets
// *overflow when more than cap cycles exist (cap < 0: no limit).
UniformHypergraph build_cycle_hypergraph(const Digraph& d, int r, long long cap = -1,
                                         bool* overflow = nullptr);

// Vertex sequence of a cycle hyperedge.
std::vector<int> hyperedge_cycle(const Digraph& d, std::span<const int> arcs);

struct NibbleDiagnostics {
    double Delta = 0.0;
    double delta = 0.0;
    double cond1_fraction = 0.0;        // vertices with degree within (1 +- delta) Delta
    long long cond2_max_codegree = 0;   // most hyperedges through two vertices
    long long cond3_bad_edge_count = 0; // hyperedges touching a vertex of degree > (1 + delta) Delta
};

NibbleDiagnostics diagnostics(const UniformHypergraph& h, double Delta, double delta);

// Reference degrees: triangle hypergraphs use n p^2 / 4, 4-cycle
// hypergraphs n^2 p^3 / 8, with n the part size and p the density of the
// split piece.
double triangle_reference_degree(double n, double p);
double quadrangle_reference_degree(double n, double p);

struct Matching {
    int r = 3;
    std::vector<std::array<int, 4>> edges;  // chosen hyperedges (arc ids)
    double coverage = 0.0;
    int rounds = 0;
    std::vector<double> coverage_history;   // after every round
};

Matching greedy_matching(const UniformHypergraph& h, std::uint64_t seed, double bite_fraction = 0.1);

// Greedy matching of h_rev after removing hyperedges whose arc set equals a
// member of m (the mirrors of m when h_rev is built on the reversed digraph).
Matching second_matching(const UniformHypergraph& h_rev, const Matching& m, std::uint64_t seed,
                         double bite_fraction = 0.1);

}  // namespace gk
