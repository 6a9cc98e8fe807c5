#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "genus_kit/graph.hpp"
#include "genus_kit/packing.hpp"
#include "genus_kit/regularity.hpp"

namespace gk {

struct TripartiteEntry {
    int i = 0, j = 0, k = 0;
    double density = 0.0;
};

struct BipartiteEntry {
    int i = 0, j = 0;
    double density = 0.0;
};

struct DecompositionPlan {
    int K = 0;
    std::vector<TripartiteEntry> tripartite;
    std::vector<BipartiteEntry> bipartite;
    // Per pair (K x K): density routed to the residual graph because it fell
    // below the floor; a pair with zero weight sends all its edges there.
    std::vector<double> floored;
    std::vector<char> irregular;  // K x K, pairs whose edges all go to the residual graph
    std::vector<int> sizes;
    bool within_parts = false;  // within-part edges form their own pieces
    double floor = 0.0;
    double residual_budget = 0.0;  // expected residual edge count between parts
};

// d_ijk = t(T), b_ij = d_ij - sum_k d_ijk (clamped at 0); entries below
// `floor` are routed to the residual graph.
DecompositionPlan decomposition_plan(const QuotientGraph& h, const TrianglePacking& p, double floor,
                                     bool within_parts = false);
// Default floor eps * (smallest positive weight) / C(K, 2).
double default_floor(const QuotientGraph& h, double eps);

enum class PieceKind { tripartite, bipartite, monopartite };

struct Piece {
    PieceKind kind = PieceKind::bipartite;
    std::vector<int> parts;  // 3, 2 or 1 part indices
    double target_density = 0.0;
    double part_size = 0.0;  // mean size of the parts
    std::vector<int> edges;  // edge ids of g
    std::uint64_t seed = 0;
};

struct Decomposition {
    std::vector<Piece> pieces;
    std::vector<int> g0;  // residual edge ids
    long long g0_within = 0, g0_irregular = 0, g0_floored = 0;
    std::uint64_t seed = 0;
    DecompositionPlan plan;
};

Decomposition realize_decomposition(const Graph& g, const EquitablePartition& p, const DecompositionPlan& plan,
                                    std::uint64_t seed);

// One line per piece: "piece <id> <kind> <parts> edges <m> density <d> seed <s>",
// then "g0 <m> within <a> irregular <b> floored <c>".
std::string format_manifest(const Decomposition& d);

struct SplitOptions {
    double eps = 0.1;
    long long min_arcs = 64;
    double min_hyperdegree = 0.0;  // 0 disables the hyperdegree clamp
    int t_override = 0;            // > 0 forces the split count
};

struct SplitResult {
    int t = 1;
    double formula_t = 1.0;  // unclamped value from the part size
    std::vector<Digraph> digraphs;
};

// Split count before clamping: n^((2-eps)/(4-eps)) for triangle pieces and
// n^((4-eps)/(6-eps)) for bipartite pieces, n the part size.
double split_formula(PieceKind kind, double part_size, double eps);

SplitResult split_for_nibble(const Graph& g, const Piece& piece, const SplitOptions& opt);

}  // namespace gk
