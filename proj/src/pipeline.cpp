#include "genus_kit/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "genus_kit/errors.hpp"
#include "genus_kit/nibble.hpp"
#include "genus_kit/rng.hpp"

namespace gk {

Config resolve_config(const Config& c) {
    if (!(c.epsilon > 0) || c.epsilon > 0.5) throw InputError("epsilon must lie in (0, 1/2]");
    Config r = c;
    if (r.eps_reg == 0) r.eps_reg = 0.25;
    if (r.eps1 == 0) r.eps1 = c.epsilon / 10;
    if (r.m == 0) r.m = std::min(8, static_cast<int>(std::ceil(4 / c.epsilon - 1e-9)));
    if (!(r.eps_reg > 0) || !(r.eps1 > 0) || r.c1_floor < 0) throw InputError("thresholds must be positive");
    if (r.m < 2) throw InputError("minimum part count must be at least 2");
    if (r.k_max < r.m) throw InputError("k-max must be at least the minimum part count");
    if (r.max_rounds < 1 || r.embed_parts < 1 || r.min_arcs < 0 || r.t_override < 0)
        throw InputError("invalid pipeline settings");
    if (!(r.small_graph_budget > 0) || !(r.exact_seconds > 0)) throw InputError("exact budget must be positive");
    if (!(r.bite_fraction > 0) || r.bite_fraction > 1) throw InputError("bite fraction must lie in (0, 1]");
    return r;
}

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::sparse: return "sparse";
        case Phase::exact: return "exact";
        case Phase::dense: return "dense";
    }
    return "?";
}

EstimateResult estimate(const Graph& g, const Config& config) {
    EstimateResult out;
    out.config = resolve_config(config);
    const Config& c = out.config;
    const double n = g.order();
    GenusReport& r = out.report;
    r.n = g.order();
    r.e = static_cast<long long>(g.size());
    if (static_cast<double>(r.e) <= c.epsilon * n * n) {
        out.phase = Phase::sparse;
        r.sparse = true;
        r.lower = static_cast<double>(euler_lower_bound(g));
        r.upper = c.epsilon * n * n;
        r.estimate = r.upper;
    } else if (rotation_count(g) <= c.small_graph_budget) {
        out.phase = Phase::exact;
        SearchBudget budget;
        budget.max_rotation_count = c.small_graph_budget;
        budget.max_seconds = c.exact_seconds;
        budget.seed = c.seed;
        out.exact = exact_genus(g, budget);
        r.exact = true;
        r.estimate = r.upper = static_cast<double>(out.exact.genus);
        r.lower = out.exact.optimal ? r.upper : static_cast<double>(euler_lower_bound(g));
    } else {
        out.phase = Phase::dense;
        RegularityOptions ro;
        ro.eps = c.eps_reg;
        ro.m = c.m;
        ro.k_max = c.k_max;
        ro.max_rounds = c.max_rounds;
        ro.seed = derive_seed(c.seed, 1);
        out.partition = regular_partition(g, ro);
        out.quotient = build_quotient(g, out.partition.partition, c.eps1, out.partition.quotient.irregular);
        out.packing = solve_triangle_lp(out.quotient);
        r = genus_estimate(g, out.quotient, out.packing, c.epsilon);
        return out;
    }
    r.nonorientable_lower = 2 * r.lower;
    r.nonorientable_upper = 2 * r.upper;
    return out;
}

namespace {

// RMS difference of the density rows of parts i and j, over the other parts.
double row_distance(const QuotientGraph& q, int i, int j) {
    double s = 0;
    int count = 0;
    for (int k = 0; k < q.K; ++k) {
        if (k == i || k == j) continue;
        const double diff = q.d(i, k) - q.d(j, k);
        s += diff * diff;
        ++count;
    }
    return count > 0 ? std::sqrt(s / count) : 0.0;
}

// Merges the parts of p into at most `groups` parts. When density profiles
// differ clearly, farthest-point centers are picked while they stay
// distinguishable and every part joins its nearest center; otherwise
// consecutive parts are merged into groups of equal count.
EquitablePartition coarsen(int n, const EquitablePartition& p, const QuotientGraph& q, int groups) {
    constexpr double kStructure = 0.1;
    const int K = p.count();
    groups = std::min(groups, K);
    std::vector<int> group_of(static_cast<std::size_t>(K));
    double widest = 0;
    int far_a = 0, far_b = 0;
    for (int i = 0; i < K; ++i)
        for (int j = i + 1; j < K; ++j)
            if (const double d = row_distance(q, i, j); d > widest) {
                widest = d;
                far_a = i;
                far_b = j;
            }
    if (widest < kStructure || groups < 2) {
        for (int i = 0; i < K; ++i) group_of[i] = static_cast<int>(static_cast<long long>(i) * groups / K);
    } else {
        std::vector<int> centers{far_a, far_b};
        for (;;) {
            int best = -1;
            double best_d = -1;
            for (int i = 0; i < K; ++i) {
                double near = 1e300;
                for (int c : centers) near = std::min(near, c == i ? 0.0 : row_distance(q, i, c));
                if (near > best_d) {
                    best_d = near;
                    best = i;
                }
            }
            if (static_cast<int>(centers.size()) >= groups || best_d < kStructure) break;
            centers.push_back(best);
        }
        for (int i = 0; i < K; ++i) {
            int best = 0;
            double best_d = 1e300;
            for (std::size_t c = 0; c < centers.size(); ++c) {
                const double d = centers[c] == i ? 0.0 : row_distance(q, i, centers[c]);
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<int>(c);
                }
            }
            group_of[i] = best;
        }
    }
    std::vector<std::vector<int>> merged(static_cast<std::size_t>(groups));
    for (int i = 0; i < K; ++i) merged[group_of[i]].insert(merged[group_of[i]].end(), p.parts[i].begin(), p.parts[i].end());
    std::erase_if(merged, [](const std::vector<int>& part) { return part.empty(); });
    for (auto& part : merged) std::sort(part.begin(), part.end());
    return make_partition(n, std::move(merged));
}

long long triangles_in(const Graph& g, const std::vector<int>& edge_ids) {
    if (edge_ids.empty()) return 0;
    const Graph h = g.edge_subgraph(edge_ids);
    return static_cast<long long>(std::llround(hom_count(Pattern::K3, h).count / 6));
}

// Fewer triangle hyperedges than a third of the arcs.
bool sparse_in_triangles(const std::vector<UniformHypergraph>& h, const std::vector<Digraph>& d) {
    std::size_t edges = 0, arcs = 0;
    for (const auto& x : h) edges += x.edge_count();
    for (const auto& x : d) arcs += x.size();
    return 3 * edges < arcs;
}

void add_piece_cycles(const Graph& g, const Piece& piece, const Config& c, CycleFamily& family,
                      std::vector<double>& coverages) {
    if (piece.edges.empty()) return;
    int r = piece.kind == PieceKind::bipartite ? 4 : 3;
    SplitOptions so;
    so.eps = c.epsilon;
    so.min_arcs = c.min_arcs;
    so.min_hyperdegree = c.min_hyperdegree;
    so.t_override = c.t_override;
    for (;;) {
        SplitResult split = split_for_nibble(g, piece, so);
        std::vector<UniformHypergraph> forward;
        bool overflow = false;
        for (const Digraph& d : split.digraphs) {
            forward.push_back(build_cycle_hypergraph(d, r, c.cycle_cap, &overflow));
            if (overflow) break;
        }
        if (overflow && split.t < static_cast<int>(piece.edges.size())) {
            so.t_override = 2 * split.t;
            continue;
        }
        if (r == 3 && piece.kind == PieceKind::monopartite && sparse_in_triangles(forward, split.digraphs)) {
            // a nearly triangle-free piece is matched with 4-cycles instead
            r = 4;
            continue;
        }
        for (std::size_t x = 0; x < split.digraphs.size(); ++x) {
            const Digraph& d = split.digraphs[x];
            if (d.size() == 0) continue;
            const std::uint64_t s = derive_seed(piece.seed, 100 + x);
            Matching first = greedy_matching(forward[x], derive_seed(s, 1), c.bite_fraction);
            const Digraph rev = d.reversed();
            Matching second = second_matching(build_cycle_hypergraph(rev, r, c.cycle_cap), first,
                                              derive_seed(s, 2), c.bite_fraction);
            coverages.push_back(first.coverage);
            coverages.push_back(second.coverage);
            for (const auto& e : first.edges)
                family.cycles.push_back({hyperedge_cycle(d, std::span<const int>(e.data(), r)), false});
            for (const auto& e : second.edges)
                family.cycles.push_back({hyperedge_cycle(rev, std::span<const int>(e.data(), r)), true});
        }
        return;
    }
}

}  // namespace

EmbeddingReport embed(const Graph& g, const Config& config) {
    EmbeddingReport rep;
    rep.estimate = estimate(g, config);
    const Config& c = rep.estimate.config;
    if (rep.estimate.phase == Phase::exact) {
        rep.rotation = rep.estimate.exact.certificate;
    } else {
        std::vector<Piece> pieces;
        if (rep.estimate.phase == Phase::sparse) {
            Piece whole;
            whole.kind = PieceKind::monopartite;
            whole.parts = {0};
            whole.part_size = g.order();
            whole.target_density = edge_density(g);
            whole.edges.resize(g.size());
            std::iota(whole.edges.begin(), whole.edges.end(), 0);
            whole.seed = derive_seed(c.seed, 2);
            pieces.push_back(std::move(whole));
        } else {
            const EquitablePartition coarse = coarsen(g.order(), rep.estimate.partition.partition, rep.estimate.quotient, c.embed_parts);
            const QuotientGraph hq = build_quotient(g, coarse, c.eps1);
            const TrianglePacking lp = solve_triangle_lp(hq);
            const double floor = c.c1_floor > 0 ? c.c1_floor : default_floor(hq, c.epsilon);
            const DecompositionPlan plan = decomposition_plan(hq, lp, floor, c.within_parts);
            Decomposition dec = realize_decomposition(g, coarse, plan, derive_seed(c.seed, 3));
            rep.g0_edges = static_cast<long long>(dec.g0.size());
            std::vector<int> bipartite_union;
            for (const Piece& piece : dec.pieces)
                if (piece.kind == PieceKind::bipartite)
                    bipartite_union.insert(bipartite_union.end(), piece.edges.begin(), piece.edges.end());
            rep.bipartite_union_triangles = triangles_in(g, bipartite_union);
            pieces = std::move(dec.pieces);
        }
        rep.pieces = static_cast<long long>(pieces.size());
        CycleFamily family;
        for (const Piece& piece : pieces) add_piece_cycles(g, piece, c, family, rep.matching_coverages);
        rep.family_size = static_cast<long long>(family.cycles.size());
        BrokenFamily broken = break_blossoms(g, family);
        rep.blossoms_removed = static_cast<long long>(broken.removed.size());
        rep.rotation = assemble_rotation(g, broken.family, derive_seed(c.seed, 4));
        rep.faces_verified = verify_faces(g, rep.rotation, broken.family).ok;
    }
    rep.census = trace_faces(g, rep.rotation, false);
    rep.genus_achieved = rep.census.genus;
    rep.faces.f3 = rep.census.faces_of_length(3);
    rep.faces.f4 = rep.census.faces_of_length(4);
    rep.faces.other = rep.census.f - rep.faces.f3 - rep.faces.f4;
    if (rep.estimate.phase == Phase::exact) rep.faces_verified = true;
    return rep;
}

FaceCensus verify(const Graph& g, const RotationSystem& r) {
    validate_rotation(g, r);
    return trace_faces(g, r);
}

namespace {

std::string report_head(const EstimateResult& e) {
    const GenusReport& r = e.report;
    std::string out;
    char buf[128];
    std::snprintf(buf, sizeof buf, "n = %d\ne = %lld\nphase = %s\nK = %d\nnu = %.6f\n", r.n, r.e, phase_name(e.phase),
                  r.K, r.nu);
    out += buf;
    std::snprintf(buf, sizeof buf, "estimate = %.6f\nlower = %.6f\nupper = %.6f\n", r.estimate, r.lower, r.upper);
    out += buf;
    return out;
}

}  // namespace

std::string format_report(const EstimateResult& e) {
    std::string out = report_head(e);
    out += "genus_achieved = na\nf3 = na\nf4 = na\nblossoms_removed = na\ng0_edges = na\n";
    out += "seed = " + std::to_string(e.config.seed) + "\n";
    return out;
}

std::string format_report(const EmbeddingReport& r) {
    std::string out = report_head(r.estimate);
    char buf[200];
    std::snprintf(buf, sizeof buf, "genus_achieved = %lld\nf3 = %lld\nf4 = %lld\nblossoms_removed = %lld\ng0_edges = %lld\n",
                  r.genus_achieved, r.faces.f3, r.faces.f4, r.blossoms_removed, r.g0_edges);
    out += buf;
    out += "seed = " + std::to_string(r.estimate.config.seed) + "\n";
    return out;
}

}  // namespace gk
