#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "genus_kit/graph.hpp"

namespace gk {

struct EquitablePartition {
    std::vector<std::vector<int>> parts;  // each part sorted
    std::vector<int> part_of;             // vertex -> part index

    int count() const { return static_cast<int>(parts.size()); }
};

// Random equitable partition into K parts; the larger parts come first.
EquitablePartition equitable_partition(int n, int K, std::uint64_t seed);
// Builds the lookup table and checks that parts are disjoint and cover 0..n-1.
EquitablePartition make_partition(int n, std::vector<std::vector<int>> parts);
bool is_equitable(const EquitablePartition& p);

// Edge count between disjoint vertex sets.
long long edges_between(const Graph& g, std::span<const int> x, std::span<const int> y);
double pair_density(const Graph& g, std::span<const int> x, std::span<const int> y);

struct RegularityWitness {
    int i = -1, j = -1;
    std::vector<int> x, y;  // x within part i, y within part j
    double pair_density = 0.0;
    double subset_density = 0.0;
    double deviation = 0.0;
};

struct PairTestOptions {
    int exhaustive_cap = 16;
    int restarts = 6;
    int max_moves = 30;
    int power_iterations = 40;
    std::uint64_t seed = 1;
};

struct PairVerdict {
    bool regular = true;
    bool exact = false;  // exhaustive search; otherwise a regular verdict is heuristic
    std::optional<RegularityWitness> witness;
    double max_deviation = 0.0;  // largest density deviation seen among admissible subsets
};

// Smallest admissible subset size: ceil(eps * size), at least 1.
int min_subset_size(double eps, std::size_t size);

PairVerdict pair_regularity(const Graph& g, std::span<const int> vi, std::span<const int> vj,
                            double eps, const PairTestOptions& opt = {});

struct QuotientGraph {
    int K = 0;
    std::vector<int> sizes;
    std::vector<double> density;   // raw d_ij, K x K row-major, zero diagonal
    std::vector<double> weight;    // weights used by the LP
    std::vector<char> irregular;   // per pair, K x K

    double w(int i, int j) const { return weight[static_cast<std::size_t>(i) * K + j]; }
    double d(int i, int j) const { return density[static_cast<std::size_t>(i) * K + j]; }
    bool is_irregular(int i, int j) const { return irregular[static_cast<std::size_t>(i) * K + j] != 0; }
    double mean_weight() const;  // over unordered pairs i < j
};

// Quotient with exact densities; weight = density, no pair flagged.
QuotientGraph density_quotient(const Graph& g, const EquitablePartition& p);
// Mean-square density index sum_{i<j} |Vi||Vj| d_ij^2 / n^2.
double partition_index(const QuotientGraph& q, int n);

struct RegularityOptions {
    double eps = 0.25;
    int m = 8;            // initial (minimum) part count
    int max_rounds = 6;
    int k_max = 64;
    int refine_attempts = 4;
    std::uint64_t seed = 1;
    PairTestOptions pair;
};

struct RegularPartition {
    EquitablePartition partition;
    QuotientGraph quotient;  // irregular flags set, weight = density
    std::vector<RegularityWitness> witnesses;
    int rounds = 0;
    long long irregular_pairs = 0;
    bool converged = false;  // irregular pairs <= eps K^2
    bool heuristic = true;   // some pair verdicts were not exhaustive
    std::vector<double> index_history;
    std::vector<int> k_history;
};

RegularPartition regular_partition(const Graph& g, const RegularityOptions& opt);

std::string format_partition(const EquitablePartition& p);
std::string format_quotient(const QuotientGraph& q);

// Dense row-major matrix.
struct DenseMatrix {
    int rows = 0, cols = 0;
    std::vector<double> a;

    DenseMatrix() = default;
    DenseMatrix(int r, int c, double fill = 0.0)
        : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, fill) {}
    double& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

DenseMatrix adjacency_matrix(const Graph& g);
// Weighted complete multipartite template: weight p[i][j] between parts i != j,
// zero inside parts. p is K x K.
DenseMatrix block_template(int n, const EquitablePartition& p, const DenseMatrix& weights);
// Complete graph with every off-diagonal weight equal to p.
DenseMatrix constant_template(int n, double p);

enum class CutMode { full, bipartite, tripartite };

struct CutDistanceEstimate {
    double lower = 0.0;
    double upper = 0.0;
    bool exact = false;
    // Witness sets achieving `lower`: u, w (and z in tripartite mode), given
    // as vertex ids of the compared graphs.
    std::vector<int> u, w, z;
};

struct CutOptions {
    int exhaustive_cap = 20;        // per enumerated side
    int tripartite_enumeration = 22;  // total of the two enumerated sides
    int restarts = 8;
    std::uint64_t seed = 1;
};

// Cut distance between two weighted graphs on the same vertex set. In
// bipartite and tripartite modes `parts` lists the 2 or 3 vertex classes and
// only edges between different classes count.
CutDistanceEstimate cut_distance(const DenseMatrix& a, const DenseMatrix& b, CutMode mode,
                                 const std::vector<std::vector<int>>& parts = {},
                                 const CutOptions& opt = {});

// |e_A - e_B| over the given sets, normalized as in the selected mode.
double cut_value(const DenseMatrix& a, const DenseMatrix& b, CutMode mode,
                 const std::vector<std::vector<int>>& parts, const std::vector<int>& u,
                 const std::vector<int>& w, const std::vector<int>& z = {});

}  // namespace gk
