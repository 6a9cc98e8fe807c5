#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "genus_kit/graph.hpp"
#include "genus_kit/regularity.hpp"

namespace gk {

// Sparse column of a linear program.
struct LpColumn {
    std::vector<int> rows;
    std::vector<double> values;
};

struct LpSolution {
    std::vector<double> x;      // structural variables
    std::vector<double> dual;   // one price per row
    double objective = 0.0;
    double dual_objective = 0.0;
    long long pivots = 0;
};

// max c.x subject to A x <= b, x >= 0, with b >= 0. Dense revised simplex,
// largest-coefficient pricing with Bland's rule on degenerate streaks.
LpSolution solve_lp(int rows, const std::vector<LpColumn>& columns, std::span<const double> c,
                    std::span<const double> b);

// Quotient weights: density, zeroed for irregular pairs and densities below eps1.
// `irregular` is K x K (empty means none flagged).
QuotientGraph build_quotient(const Graph& g, const EquitablePartition& p, double eps1,
                             std::span<const char> irregular = {});
// Quotient from explicit symmetric K x K weights (diagonal ignored).
QuotientGraph weighted_quotient(int K, std::span<const double> weights);

struct Triangle {
    int i = 0, j = 0, k = 0;  // i < j < k
    bool operator==(const Triangle&) const = default;
};

struct TrianglePacking {
    int K = 0;
    std::vector<Triangle> triangles;  // triangles with three positive weights
    std::vector<double> t;
    double nu = 0.0;
    std::vector<double> edge_slack;   // K x K, w_e - sum of t over triangles on e
    std::vector<double> edge_price;   // K x K dual prices
    double dual_objective = 0.0;

    double slack(int i, int j) const { return edge_slack[static_cast<std::size_t>(i) * K + j]; }
    double price(int i, int j) const { return edge_price[static_cast<std::size_t>(i) * K + j]; }
    double duality_gap() const { return dual_objective - nu; }
};

TrianglePacking solve_triangle_lp(const QuotientGraph& h);

// Plain-text dump: "lp K", "edge i j capacity price", "triangle i j k value", "nu value".
std::string format_lp(const QuotientGraph& h, const TrianglePacking& p);

struct MultiQuotient {
    int K = 0;
    std::vector<int> mult;  // K x K symmetric, zero diagonal
    double eps1 = 0.0;

    int m(int i, int j) const { return mult[static_cast<std::size_t>(i) * K + j]; }
};

MultiQuotient multigraph_quotient(const QuotientGraph& h, double eps1);
MultiQuotient make_multiquotient(int K, std::span<const int> mult);

enum class PackingMode { exact, greedy };

struct PackingResult {
    double fractional = 0.0;
    long long integral = 0;
    double gap = 0.0;
    std::vector<std::pair<Triangle, int>> packing;  // triangle and multiplicity used
    bool optimal = false;  // exact mode finished within its node budget
    long long nodes = 0;
};

struct PackingOptions {
    PackingMode mode = PackingMode::exact;
    std::uint64_t seed = 1;
    long long max_nodes = 50'000'000;
};

PackingResult integral_triangle_packing(const MultiQuotient& hstar, const PackingOptions& opt = {});

struct GenusReport {
    int n = 0;
    long long e = 0;
    int K = 0;
    double nu = 0.0;
    double n1 = 0.0;
    double core = 0.0;  // e - nu n1^2
    double estimate = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double nonorientable_lower = 0.0;
    double nonorientable_upper = 0.0;
    bool sparse = false;  // below the density threshold
    bool exact = false;   // exact search result
};

// Estimate (1+eps)(e - nu n1^2)/4 with lower end (1-eps)(e - nu n1^2)/4.
GenusReport genus_estimate(const Graph& g, const QuotientGraph& h, const TrianglePacking& p, double eps);

}  // namespace gk
