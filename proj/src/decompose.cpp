#include "genus_kit/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "genus_kit/errors.hpp"
#include "genus_kit/rng.hpp"

namespace gk {

namespace {

std::size_t at(int K, int i, int j) { return static_cast<std::size_t>(i) * K + j; }

const char* kind_name(PieceKind k) {
    switch (k) {
        case PieceKind::tripartite: return "tripartite";
        case PieceKind::bipartite: return "bipartite";
        case PieceKind::monopartite: return "monopartite";
    }
    return "?";
}

}  // namespace

double default_floor(const QuotientGraph& h, double eps) {
    double smallest = 0;
    for (int i = 0; i < h.K; ++i)
        for (int j = i + 1; j < h.K; ++j)
            if (h.w(i, j) > 0 && (smallest == 0 || h.w(i, j) < smallest)) smallest = h.w(i, j);
    const double pairs = h.K * (h.K - 1) / 2.0;
    return pairs > 0 ? eps * smallest / pairs : 0.0;
}

DecompositionPlan decomposition_plan(const QuotientGraph& h, const TrianglePacking& p, double floor,
                                     bool within_parts) {
    const int K = h.K;
    if (!p.triangles.empty() && p.K != K) throw InputError("packing does not match the quotient");
    if (p.t.size() != p.triangles.size()) throw InputError("packing is malformed");
    DecompositionPlan plan;
    plan.K = K;
    plan.floor = floor;
    plan.within_parts = within_parts;
    plan.sizes = h.sizes;
    const auto kk = static_cast<std::size_t>(K) * K;
    plan.floored.assign(kk, 0.0);
    plan.irregular.assign(kk, 0);
    std::vector<double> used(kk, 0.0);
    for (std::size_t q = 0; q < p.triangles.size(); ++q) {
        const Triangle& t = p.triangles[q];
        if (p.t[q] < -1e-12) throw InputError("packing has a negative entry");
        const double d = std::max(0.0, p.t[q]);
        for (auto [a, b] : {std::pair{t.i, t.j}, std::pair{t.i, t.k}, std::pair{t.j, t.k}}) used[at(K, a, b)] += d;
        if (d == 0) continue;
        if (d >= floor) {
            plan.tripartite.push_back({t.i, t.j, t.k, d});
        } else {
            for (auto [a, b] : {std::pair{t.i, t.j}, std::pair{t.i, t.k}, std::pair{t.j, t.k}}) {
                plan.floored[at(K, a, b)] += d;
                plan.floored[at(K, b, a)] += d;
            }
        }
    }
    for (int i = 0; i < K; ++i)
        for (int j = i + 1; j < K; ++j) {
            if (used[at(K, i, j)] > h.w(i, j) + 1e-9) throw InputError("packing is infeasible for the quotient");
            if (h.w(i, j) <= 0) {
                if (h.d(i, j) > 0) {
                    if (h.is_irregular(i, j))
                        plan.irregular[at(K, i, j)] = plan.irregular[at(K, j, i)] = 1;
                    else
                        plan.floored[at(K, i, j)] = plan.floored[at(K, j, i)] = h.d(i, j);
                }
                continue;
            }
            const double b = std::max(0.0, h.d(i, j) - used[at(K, i, j)]);
            if (b <= 1e-12) continue;
            if (b >= floor) {
                plan.bipartite.push_back({i, j, b});
            } else {
                plan.floored[at(K, i, j)] += b;
                plan.floored[at(K, j, i)] += b;
            }
        }
    for (int i = 0; i < K; ++i)
        for (int j = i + 1; j < K; ++j) {
            const double area = h.sizes.empty() ? 0.0 : static_cast<double>(h.sizes[i]) * h.sizes[j];
            plan.residual_budget += plan.floored[at(K, i, j)] * area;
            if (plan.irregular[at(K, i, j)]) plan.residual_budget += h.d(i, j) * area;
        }
    return plan;
}

Decomposition realize_decomposition(const Graph& g, const EquitablePartition& p, const DecompositionPlan& plan,
                                    std::uint64_t seed) {
    const int K = plan.K;
    if (p.count() != K || static_cast<int>(p.part_of.size()) != g.order())
        throw MismatchError("plan does not match the partition");
    if (!plan.sizes.empty())
        for (int i = 0; i < K; ++i)
            if (plan.sizes[i] != static_cast<int>(p.parts[i].size()))
                throw MismatchError("plan part sizes differ from the partition");
    Decomposition out;
    out.seed = seed;
    out.plan = plan;
    // options per pair: (piece index, weight); index -1 is the residual graph
    std::vector<std::vector<std::pair<int, double>>> options(static_cast<std::size_t>(K) * K);
    auto mean_size = [&](std::initializer_list<int> parts) {
        double s = 0;
        for (int x : parts) s += static_cast<double>(p.parts[x].size());
        return s / static_cast<double>(parts.size());
    };
    for (const auto& t : plan.tripartite) {
        const int id = static_cast<int>(out.pieces.size());
        out.pieces.push_back({PieceKind::tripartite, {t.i, t.j, t.k}, t.density, mean_size({t.i, t.j, t.k}), {}, 0});
        for (auto [a, b] : {std::pair{t.i, t.j}, std::pair{t.i, t.k}, std::pair{t.j, t.k}})
            options[at(K, a, b)].emplace_back(id, t.density);
    }
    for (const auto& b : plan.bipartite) {
        const int id = static_cast<int>(out.pieces.size());
        out.pieces.push_back({PieceKind::bipartite, {b.i, b.j}, b.density, mean_size({b.i, b.j}), {}, 0});
        options[at(K, b.i, b.j)].emplace_back(id, b.density);
    }
    std::vector<int> mono(static_cast<std::size_t>(K), -1);
    if (plan.within_parts)
        for (int i = 0; i < K; ++i) {
            mono[i] = static_cast<int>(out.pieces.size());
            out.pieces.push_back({PieceKind::monopartite, {i}, 0.0, mean_size({i}), {}, 0});
        }
    for (std::size_t id = 0; id < out.pieces.size(); ++id)
        out.pieces[id].seed = derive_seed(seed, 1'000'000 + id);
    for (int i = 0; i < K; ++i)
        for (int j = i + 1; j < K; ++j)
            if (plan.floored[at(K, i, j)] > 0) options[at(K, i, j)].emplace_back(-1, plan.floored[at(K, i, j)]);

    std::vector<std::vector<int>> pair_edges(static_cast<std::size_t>(K) * K);
    for (std::size_t id = 0; id < g.size(); ++id) {
        const Edge& e = g.edge(static_cast<int>(id));
        int a = p.part_of[e.u], b = p.part_of[e.v];
        if (a > b) std::swap(a, b);
        pair_edges[at(K, a, b)].push_back(static_cast<int>(id));
    }
    for (int i = 0; i < K; ++i) {
        auto& within = pair_edges[at(K, i, i)];
        if (plan.within_parts) {
            Piece& piece = out.pieces[mono[i]];
            piece.edges = within;
            const double s = static_cast<double>(p.parts[i].size());
            piece.target_density = s > 1 ? static_cast<double>(within.size()) / (s * (s - 1) / 2) : 0.0;
        } else {
            out.g0.insert(out.g0.end(), within.begin(), within.end());
            out.g0_within += static_cast<long long>(within.size());
        }
    }
    for (int i = 0; i < K; ++i)
        for (int j = i + 1; j < K; ++j) {
            const auto& edges = pair_edges[at(K, i, j)];
            if (edges.empty()) continue;
            const auto& opts = options[at(K, i, j)];
            double total = 0;
            for (const auto& o : opts) total += o.second;
            if (plan.irregular[at(K, i, j)] || total <= 0) {
                out.g0.insert(out.g0.end(), edges.begin(), edges.end());
                (plan.irregular[at(K, i, j)] ? out.g0_irregular : out.g0_floored) += static_cast<long long>(edges.size());
                continue;
            }
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i) * K + j));
            for (int id : edges) {
                double x = rng.uniform() * total;
                std::size_t pick = 0;
                while (pick + 1 < opts.size() && x >= opts[pick].second) x -= opts[pick++].second;
                const int target = opts[pick].first;
                if (target < 0) {
                    out.g0.push_back(id);
                    ++out.g0_floored;
                } else {
                    out.pieces[target].edges.push_back(id);
                }
            }
        }
    std::sort(out.g0.begin(), out.g0.end());
    for (auto& piece : out.pieces) std::sort(piece.edges.begin(), piece.edges.end());
    return out;
}

std::string format_manifest(const Decomposition& d) {
    std::string out;
    char buf[200];
    for (std::size_t id = 0; id < d.pieces.size(); ++id) {
        const Piece& piece = d.pieces[id];
        std::snprintf(buf, sizeof buf, "piece %zu %s", id, kind_name(piece.kind));
        out += buf;
        for (int x : piece.parts) out += " " + std::to_string(x);
        std::snprintf(buf, sizeof buf, " edges %zu density %.9f seed %llu\n", piece.edges.size(),
                      piece.target_density, static_cast<unsigned long long>(piece.seed));
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "g0 %zu within %lld irregular %lld floored %lld\n", d.g0.size(), d.g0_within,
                  d.g0_irregular, d.g0_floored);
    out += buf;
    return out;
}

double split_formula(PieceKind kind, double part_size, double eps) {
    if (part_size <= 1) return 1.0;
    const double exponent = kind == PieceKind::bipartite ? (4 - eps) / (6 - eps) : (2 - eps) / (4 - eps);
    return std::pow(part_size, exponent);
}

SplitResult split_for_nibble(const Graph& g, const Piece& piece, const SplitOptions& opt) {
    SplitResult out;
    out.formula_t = split_formula(piece.kind, piece.part_size, opt.eps);
    double t = out.formula_t;
    if (opt.min_arcs > 0) t = std::min(t, static_cast<double>(piece.edges.size()) / static_cast<double>(opt.min_arcs));
    if (opt.min_hyperdegree > 0 && piece.target_density > 0) {
        const double s = piece.part_size, q = piece.target_density;
        // largest t keeping the reference degree of the split pieces above the minimum
        const double limit = piece.kind == PieceKind::bipartite
                                 ? q * std::cbrt(s * s / (8 * opt.min_hyperdegree))
                                 : q * std::sqrt(s / (4 * opt.min_hyperdegree));
        t = std::min(t, limit);
    }
    out.t = std::max(1, static_cast<int>(std::floor(t)));
    if (opt.t_override > 0) out.t = opt.t_override;
    const Digraph oriented = orient_edges(g, piece.edges, derive_seed(piece.seed, 1));
    if (out.t == 1) {
        out.digraphs.push_back(oriented);
        return out;
    }
    const std::vector<double> fractions(static_cast<std::size_t>(out.t), 1.0 / out.t);
    auto groups = split_edges<Arc>(std::span<const Arc>(oriented.arcs()), fractions, derive_seed(piece.seed, 2));
    for (auto& group : groups) out.digraphs.emplace_back(g.order(), std::move(group));
    return out;
}

}  // namespace gk
