#include "genus_kit/nibble.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "genus_kit/errors.hpp"
#include "genus_kit/rng.hpp"

namespace gk {

UniformHypergraph::UniformHypergraph(int r, int vertices, std::vector<std::array<int, 4>> edges)
    : r_(r), vertices_(vertices), edges_(std::move(edges)) {
    if (r != 3 && r != 4) throw InputError("uniformity must be 3 or 4");
    if (vertices < 0) throw InputError("negative vertex count");
    off_.assign(static_cast<std::size_t>(vertices) + 1, 0);
    for (const auto& e : edges_)
        for (int k = 0; k < r_; ++k) {
            if (e[k] < 0 || e[k] >= vertices) throw InputError("hyperedge vertex out of range");
            ++off_[e[k] + 1];
        }
    for (int v = 0; v < vertices; ++v) off_[v + 1] += off_[v];
    inc_.assign(static_cast<std::size_t>(off_[vertices]), 0);
    std::vector<int> fill(off_.begin(), off_.end() - 1);
    for (std::size_t id = 0; id < edges_.size(); ++id)
        for (int k = 0; k < r_; ++k) inc_[fill[edges_[id][k]]++] = static_cast<int>(id);
}

UniformHypergraph build_cycle_hypergraph(const Digraph& d, int r, long long cap, bool* overflow) {
    if (r != 3 && r != 4) throw InputError("cycle length must be 3 or 4");
    if (overflow) *overflow = false;
    std::vector<std::array<int, 4>> edges;
    const int n = d.order();
    auto full = [&]() {
        if (cap >= 0 && static_cast<long long>(edges.size()) > cap) {
            if (overflow) *overflow = true;
            return true;
        }
        return false;
    };
    std::vector<int> pred(static_cast<std::size_t>(n), -1);
    for (int u = 0; u < n && !full(); ++u) {
        if (r == 4)
            for (int a : d.in_arcs(u))
                if (d.arc(a).tail > u) pred[d.arc(a).tail] = a;
        for (int a1 : d.out_arcs(u)) {
            const int v = d.arc(a1).head;
            if (v < u) continue;
            for (int a2 : d.out_arcs(v)) {
                const int w = d.arc(a2).head;
                if (w < u) continue;
                if (r == 3) {
                    const int a3 = d.find_arc(w, u);
                    if (a3 >= 0) edges.push_back({a1, a2, a3, -1});
                    continue;
                }
                for (int a3 : d.out_arcs(w)) {
                    const int x = d.arc(a3).head;
                    if (x < u || x == v || pred[x] < 0) continue;
                    edges.push_back({a1, a2, a3, pred[x]});
                }
            }
            if (full()) break;
        }
        if (r == 4)
            for (int a : d.in_arcs(u)) pred[d.arc(a).tail] = -1;
    }
    if (full()) edges.resize(static_cast<std::size_t>(cap));
    return UniformHypergraph(r, static_cast<int>(d.size()), std::move(edges));
}

std::vector<int> hyperedge_cycle(const Digraph& d, std::span<const int> arcs) {
    std::vector<int> verts;
    for (std::size_t k = 0; k < arcs.size(); ++k) {
        const Arc& a = d.arc(arcs[k]);
        const Arc& b = d.arc(arcs[(k + 1) % arcs.size()]);
        if (a.head != b.tail) throw MismatchError("hyperedge arcs do not form a cycle");
        verts.push_back(a.tail);
    }
    return verts;
}

NibbleDiagnostics diagnostics(const UniformHypergraph& h, double Delta, double delta) {
    if (!(Delta > 0)) throw InputError("reference degree must be positive");
    NibbleDiagnostics out;
    out.Delta = Delta;
    out.delta = delta;
    const int n = h.vertex_count();
    const double lo = (1 - delta) * Delta, hi = (1 + delta) * Delta;
    long long good = 0;
    for (int v = 0; v < n; ++v)
        if (h.degree(v) >= lo && h.degree(v) <= hi) ++good;
    out.cond1_fraction = n > 0 ? static_cast<double>(good) / n : 0.0;
    std::vector<int> count(static_cast<std::size_t>(n), 0);
    std::vector<int> touched;
    for (int v = 0; v < n; ++v) {
        for (int e : h.incident(v))
            for (int x : h.edge(static_cast<std::size_t>(e)))
                if (x != v) {
                    if (count[x]++ == 0) touched.push_back(x);
                    out.cond2_max_codegree = std::max<long long>(out.cond2_max_codegree, count[x]);
                }
        for (int x : touched) count[x] = 0;
        touched.clear();
    }
    for (std::size_t e = 0; e < h.edge_count(); ++e)
        for (int x : h.edge(e))
            if (h.degree(x) > hi) {
                ++out.cond3_bad_edge_count;
                break;
            }
    return out;
}

double triangle_reference_degree(double n, double p) { return n * p * p / 4; }

double quadrangle_reference_degree(double n, double p) { return n * n * p * p * p / 8; }

Matching greedy_matching(const UniformHypergraph& h, std::uint64_t seed, double bite_fraction) {
    if (!(bite_fraction > 0) || bite_fraction > 1) throw InputError("bite fraction must lie in (0, 1]");
    Matching m;
    m.r = h.uniformity();
    const int n = h.vertex_count();
    const std::size_t E = h.edge_count();
    std::vector<char> covered(static_cast<std::size_t>(n), 0), alive(E, 1);
    std::vector<int> deg(static_cast<std::size_t>(n)), hits(static_cast<std::size_t>(n));
    Rng rng(seed);
    auto usable = [&](std::size_t e) {
        for (int x : h.edge(e))
            if (covered[x]) return false;
        return true;
    };
    auto take = [&](std::size_t e) {
        m.edges.push_back(h.edges()[e]);
        for (int x : h.edge(e)) covered[x] = 1;
    };
    std::vector<std::size_t> sampled;
    for (;;) {
        std::fill(deg.begin(), deg.end(), 0);
        std::size_t alive_count = 0;
        for (std::size_t e = 0; e < E; ++e) {
            if (!alive[e]) continue;
            if (!usable(e)) {
                alive[e] = 0;
                continue;
            }
            ++alive_count;
            for (int x : h.edge(e)) ++deg[x];
        }
        if (alive_count == 0) break;
        long long total = 0, active = 0;
        for (int v = 0; v < n; ++v)
            if (deg[v] > 0) {
                total += deg[v];
                ++active;
            }
        const double prob = std::min(1.0, bite_fraction * static_cast<double>(active) / static_cast<double>(total));
        sampled.clear();
        for (std::size_t e = 0; e < E; ++e)
            if (alive[e] && rng.uniform() < prob) sampled.push_back(e);
        for (std::size_t e : sampled)
            for (int x : h.edge(e)) ++hits[x];
        std::size_t kept = 0;
        for (std::size_t e : sampled) {
            bool alone = true;
            for (int x : h.edge(e)) alone = alone && hits[x] == 1;
            if (alone) {
                take(e);
                ++kept;
            }
        }
        for (std::size_t e : sampled)
            for (int x : h.edge(e)) hits[x] = 0;
        if (kept == 0) {
            // cleanup pass over what is left, in seeded random order
            std::vector<std::size_t> rest;
            for (std::size_t e = 0; e < E; ++e)
                if (alive[e]) rest.push_back(e);
            rng.shuffle(rest);
            for (std::size_t e : rest)
                if (usable(e)) take(e);
        }
        ++m.rounds;
        m.coverage_history.push_back(n > 0 ? static_cast<double>(m.r) * m.edges.size() / n : 0.0);
        if (kept == 0) break;
    }
    m.coverage = n > 0 ? static_cast<double>(m.r) * m.edges.size() / n : 0.0;
    return m;
}

Matching second_matching(const UniformHypergraph& h_rev, const Matching& m, std::uint64_t seed,
                         double bite_fraction) {
    if (m.r != h_rev.uniformity() && !m.edges.empty()) throw MismatchError("matching uniformity differs");
    const int r = h_rev.uniformity();
    auto key = [r](std::array<int, 4> e) {
        std::sort(e.begin(), e.begin() + r);
        return e;
    };
    std::set<std::array<int, 4>> mirrors;
    for (const auto& e : m.edges) mirrors.insert(key(e));
    std::vector<std::array<int, 4>> kept;
    for (const auto& e : h_rev.edges())
        if (!mirrors.count(key(e))) kept.push_back(e);
    return greedy_matching(UniformHypergraph(r, h_rev.vertex_count(), std::move(kept)), seed, bite_fraction);
}

}  // namespace gk
