#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "genus_kit/decompose.hpp"
#include "genus_kit/errors.hpp"
#include "oracles.hpp"

using namespace gk;

namespace {

std::vector<double> uniform_weights(int K, double w) {
    std::vector<double> out(static_cast<std::size_t>(K) * K, w);
    for (int i = 0; i < K; ++i) out[i * K + i] = 0.0;
    return out;
}

EquitablePartition blocks(int n, int K) {
    std::vector<std::vector<int>> parts(static_cast<std::size_t>(K));
    for (int v = 0; v < n; ++v) parts[static_cast<std::size_t>(v) * K / n].push_back(v);
    return make_partition(n, parts);
}

TrianglePacking empty_packing(int K) {
    TrianglePacking p;
    p.K = K;
    return p;
}

// Checks that pieces and g0 partition E(g) and that piece edges respect parts.
void check_partition_of_edges(const Graph& g, const EquitablePartition& p, const Decomposition& d) {
    std::vector<int> owner(g.size(), -2);
    for (std::size_t id = 0; id < d.pieces.size(); ++id) {
        const Piece& piece = d.pieces[id];
        const std::set<int> parts(piece.parts.begin(), piece.parts.end());
        for (int e : piece.edges) {
            REQUIRE(owner[e] == -2);
            owner[e] = static_cast<int>(id);
            const int a = p.part_of[g.edge(e).u], b = p.part_of[g.edge(e).v];
            CHECK(parts.count(a));
            CHECK(parts.count(b));
            if (piece.kind == PieceKind::monopartite)
                CHECK(a == b);
            else
                CHECK(a != b);
        }
    }
    for (int e : d.g0) {
        REQUIRE(owner[e] == -2);
        owner[e] = -1;
    }
    for (int o : owner) CHECK(o != -2);
    std::size_t total = d.g0.size();
    for (const auto& piece : d.pieces) total += piece.edges.size();
    CHECK(total == g.size());
    CHECK(static_cast<long long>(d.g0.size()) == d.g0_within + d.g0_irregular + d.g0_floored);
}

// Subgraph of `edges` on the parts x and y, relabelled 0..|x|+|y|-1.
DenseMatrix pair_matrix(const Graph& g, const std::vector<int>& edges, const std::vector<int>& x,
                        const std::vector<int>& y) {
    std::vector<int> label(static_cast<std::size_t>(g.order()), -1);
    int next = 0;
    for (int v : x) label[v] = next++;
    for (int v : y) label[v] = next++;
    DenseMatrix a(next, next, 0.0);
    std::set<int> in_x(x.begin(), x.end()), in_y(y.begin(), y.end());
    for (int e : edges) {
        const Edge& ed = g.edge(e);
        const bool across = (in_x.count(ed.u) && in_y.count(ed.v)) || (in_y.count(ed.u) && in_x.count(ed.v));
        if (!across) continue;
        a(label[ed.u], label[ed.v]) = a(label[ed.v], label[ed.u]) = 1.0;
    }
    return a;
}

}  // namespace

TEST_CASE("plan from the K4 packing") {
    const QuotientGraph h = weighted_quotient(4, uniform_weights(4, 1.0));
    const TrianglePacking p = solve_triangle_lp(h);
    const DecompositionPlan plan = decomposition_plan(h, p, 0.01);
    REQUIRE(plan.tripartite.size() == 4);
    for (const auto& t : plan.tripartite) CHECK(t.density == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(plan.bipartite.empty());
    for (double f : plan.floored) CHECK(f == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(plan.residual_budget == doctest::Approx(0.0));
}

TEST_CASE("plan from an empty packing") {
    std::vector<double> w = uniform_weights(4, 0.3);
    w[0 * 4 + 1] = w[1 * 4 + 0] = 0.7;
    const QuotientGraph h = weighted_quotient(4, w);
    const DecompositionPlan plan = decomposition_plan(h, empty_packing(4), 0.01);
    CHECK(plan.tripartite.empty());
    REQUIRE(plan.bipartite.size() == 6);
    for (const auto& b : plan.bipartite) CHECK(b.density == doctest::Approx(h.d(b.i, b.j)));
}

TEST_CASE("plan floor and errors") {
    const QuotientGraph h = weighted_quotient(3, uniform_weights(3, 0.5));
    TrianglePacking p = empty_packing(3);
    p.triangles = {{0, 1, 2}};
    p.t = {1e-6};
    const DecompositionPlan plan = decomposition_plan(h, p, 1e-3);
    CHECK(plan.tripartite.empty());
    CHECK(plan.bipartite.size() == 3);
    CHECK(plan.floored[0 * 3 + 1] == doctest::Approx(1e-6));
    CHECK(plan.floored[1 * 3 + 0] == doctest::Approx(1e-6));

    p.t = {0.4};
    const DecompositionPlan small_b = decomposition_plan(h, p, 0.2);
    CHECK(small_b.tripartite.size() == 1);
    CHECK(small_b.bipartite.empty());
    CHECK(small_b.floored[0 * 3 + 2] == doctest::Approx(0.1));

    p.t = {0.6};
    CHECK_THROWS_AS(decomposition_plan(h, p, 0.01), InputError);
    p.t = {-0.1};
    CHECK_THROWS_AS(decomposition_plan(h, p, 0.01), InputError);
    p.t = {0.1};
    p.K = 4;
    CHECK_THROWS_AS(decomposition_plan(h, p, 0.01), InputError);
}

TEST_CASE("plan feasibility invariant") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        Rng rng(seed);
        const int K = 3 + static_cast<int>(rng.below(6));
        std::vector<double> w(static_cast<std::size_t>(K) * K, 0.0);
        for (int i = 0; i < K; ++i)
            for (int j = i + 1; j < K; ++j) w[i * K + j] = w[j * K + i] = rng.uniform() < 0.2 ? 0.0 : rng.uniform();
        const QuotientGraph h = weighted_quotient(K, w);
        const TrianglePacking p = solve_triangle_lp(h);
        const DecompositionPlan plan = decomposition_plan(h, p, default_floor(h, 0.1));
        std::vector<double> used(static_cast<std::size_t>(K) * K, 0.0);
        for (const auto& t : plan.tripartite) {
            CHECK(t.density >= 0);
            for (auto [a, b] : {std::pair{t.i, t.j}, std::pair{t.i, t.k}, std::pair{t.j, t.k}}) used[a * K + b] += t.density;
        }
        for (const auto& b : plan.bipartite) {
            CHECK(b.density >= 0);
            used[b.i * K + b.j] += b.density;
        }
        for (int i = 0; i < K; ++i)
            for (int j = i + 1; j < K; ++j) {
                CHECK(used[i * K + j] <= h.d(i, j) + 1e-9);
                CHECK(used[i * K + j] + plan.floored[i * K + j] == doctest::Approx(h.d(i, j)).epsilon(1e-9));
            }
    }
}

TEST_CASE("default floor") {
    std::vector<double> w = uniform_weights(4, 0.5);
    w[0 * 4 + 3] = w[3 * 4 + 0] = 0.2;
    w[1 * 4 + 2] = w[2 * 4 + 1] = 0.0;
    CHECK(default_floor(weighted_quotient(4, w), 0.1) == doctest::Approx(0.1 * 0.2 / 6));
    CHECK(default_floor(weighted_quotient(1, {std::vector<double>{0.0}}), 0.1) == 0.0);
}

TEST_CASE("single bipartite entry") {
    // two parts of 10; edges inside and across
    const Graph g = random_graph(20, 0.5, 3);
    const EquitablePartition p = blocks(20, 2);
    const QuotientGraph h = build_quotient(g, p, 0.0);
    const DecompositionPlan plan = decomposition_plan(h, empty_packing(2), 0.0);
    REQUIRE(plan.bipartite.size() == 1);
    const Decomposition d = realize_decomposition(g, p, plan, 5);
    REQUIRE(d.pieces.size() == 1);
    long long across = 0, within = 0;
    for (const Edge& e : g.edges()) (p.part_of[e.u] == p.part_of[e.v] ? within : across)++;
    CHECK(static_cast<long long>(d.pieces[0].edges.size()) == across);
    CHECK(d.g0_within == within);
    CHECK(static_cast<long long>(d.g0.size()) == within);
    check_partition_of_edges(g, p, d);
}

TEST_CASE("empty graph gives an empty decomposition") {
    const Graph g(12, {});
    const EquitablePartition p = blocks(12, 3);
    const QuotientGraph h = build_quotient(g, p, 0.01);
    const DecompositionPlan plan = decomposition_plan(h, solve_triangle_lp(h), 0.01);
    const Decomposition d = realize_decomposition(g, p, plan, 1);
    CHECK(d.pieces.empty());
    CHECK(d.g0.empty());
}

TEST_CASE("K4 plan on the complete graph") {
    const Graph g = complete_graph(240);
    const EquitablePartition p = blocks(240, 4);
    const QuotientGraph h = build_quotient(g, p, 0.01);
    const DecompositionPlan plan = decomposition_plan(h, solve_triangle_lp(h), 0.01);
    REQUIRE(plan.tripartite.size() == 4);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Decomposition d = realize_decomposition(g, p, plan, seed);
        check_partition_of_edges(g, p, d);
        const double pairs = 60.0 * 60.0;
        const double sigma = std::sqrt(pairs * 0.25) / pairs;
        for (const Piece& piece : d.pieces) {
            REQUIRE(piece.kind == PieceKind::tripartite);
            for (auto [a, b] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
                const int x = piece.parts[a], y = piece.parts[b];
                long long count = 0;
                for (int e : piece.edges) {
                    const int pu = p.part_of[g.edge(e).u], pv = p.part_of[g.edge(e).v];
                    if ((pu == x && pv == y) || (pu == y && pv == x)) ++count;
                }
                CHECK(std::abs(count / pairs - 0.5) <= 3 * sigma);
            }
        }
        CHECK(static_cast<long long>(d.g0.size()) == d.g0_within);
    }
}

TEST_CASE("realize rejects mismatched plans") {
    const Graph g = random_graph(30, 0.5, 1);
    const EquitablePartition p3 = blocks(30, 3);
    const QuotientGraph h = build_quotient(g, p3, 0.01);
    const DecompositionPlan plan = decomposition_plan(h, solve_triangle_lp(h), 0.01);
    CHECK_THROWS_AS(realize_decomposition(g, blocks(30, 2), plan, 1), MismatchError);
    CHECK_THROWS_AS(realize_decomposition(random_graph(31, 0.5, 1), p3, plan, 1), MismatchError);
    std::vector<std::vector<int>> uneven{{0, 1}, {}, {}};
    for (int v = 2; v < 30; ++v) uneven[1 + v % 2].push_back(v);
    CHECK_THROWS_AS(realize_decomposition(g, make_partition(30, uneven), plan, 1), MismatchError);
}

TEST_CASE("edge conservation") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng(seed);
        const int n = 30 + static_cast<int>(rng.below(60));
        const int K = 3 + static_cast<int>(rng.below(5));
        const Graph g = random_graph(n, 0.2 + 0.6 * rng.uniform(), seed);
        const EquitablePartition p = equitable_partition(n, K, seed);
        QuotientGraph h = build_quotient(g, p, 0.05);
        for (int i = 0; i < K; ++i)
            for (int j = i + 1; j < K; ++j)
                if (rng.uniform() < 0.15) {
                    h.irregular[i * K + j] = h.irregular[j * K + i] = 1;
                    h.weight[i * K + j] = h.weight[j * K + i] = 0.0;
                }
        const TrianglePacking pk = solve_triangle_lp(h);
        const bool within = seed % 2 == 0;
        const DecompositionPlan plan = decomposition_plan(h, pk, 0.02, within);
        const Decomposition d = realize_decomposition(g, p, plan, seed);
        check_partition_of_edges(g, p, d);
        if (within)
            CHECK(d.g0_within == 0);
        for (int e : d.g0) {
            const int a = p.part_of[g.edge(e).u], b = p.part_of[g.edge(e).v];
            if (a != b && h.is_irregular(a, b)) CHECK(plan.irregular[a * K + b]);
        }
        const Decomposition again = realize_decomposition(g, p, plan, seed);
        CHECK(format_manifest(again) == format_manifest(d));
    }
}

TEST_CASE("tripartite pieces stay close to constant density") {
    int pieces = 0, close = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Graph g = random_graph(400, 0.5, seed);
        const EquitablePartition p = blocks(400, 4);
        const QuotientGraph h = build_quotient(g, p, 0.01);
        const DecompositionPlan plan = decomposition_plan(h, solve_triangle_lp(h), 0.01);
        const Decomposition d = realize_decomposition(g, p, plan, seed);
        for (const Piece& piece : d.pieces) {
            if (piece.kind != PieceKind::tripartite || piece.target_density < 0.1) continue;
            ++pieces;
            double worst = 0;
            for (auto [a, b] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
                const auto& x = p.parts[piece.parts[a]];
                const auto& y = p.parts[piece.parts[b]];
                const int size = static_cast<int>(x.size() + y.size());
                std::vector<int> left(x.size()), right(y.size());
                std::iota(left.begin(), left.end(), 0);
                std::iota(right.begin(), right.end(), static_cast<int>(x.size()));
                DenseMatrix weights(2, 2, 0.0);
                weights(0, 1) = weights(1, 0) = piece.target_density;
                const EquitablePartition two = make_partition(size, {left, right});
                CutOptions opt;
                opt.seed = seed;
                const auto est = cut_distance(pair_matrix(g, piece.edges, x, y), block_template(size, two, weights),
                                              CutMode::bipartite, {left, right}, opt);
                worst = std::max(worst, est.lower);
            }
            if (worst < 0.15) ++close;
        }
    }
    MESSAGE("tripartite pieces " << pieces << ", close to constant " << close);
    REQUIRE(pieces >= 30);
    CHECK(close >= 0.9 * pieces);
}

TEST_CASE("manifest format") {
    const Graph g = complete_graph(12);
    const EquitablePartition p = blocks(12, 4);
    const QuotientGraph h = build_quotient(g, p, 0.01);
    const DecompositionPlan plan = decomposition_plan(h, solve_triangle_lp(h), 0.01, true);
    const Decomposition d = realize_decomposition(g, p, plan, 9);
    const std::string text = format_manifest(d);
    std::istringstream in(text);
    std::string line;
    int piece_lines = 0;
    bool saw_g0 = false;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "piece") {
            int id;
            std::string kind;
            ls >> id >> kind;
            CHECK(id == piece_lines);
            CHECK((kind == "tripartite" || kind == "monopartite"));
            CHECK(line.find(" edges ") != std::string::npos);
            CHECK(line.find(" density ") != std::string::npos);
            CHECK(line.find(" seed " + std::to_string(d.pieces[id].seed)) != std::string::npos);
            ++piece_lines;
        } else {
            CHECK(tag == "g0");
            saw_g0 = true;
        }
    }
    CHECK(piece_lines == static_cast<int>(d.pieces.size()));
    CHECK(piece_lines == 8);
    CHECK(saw_g0);
}

TEST_CASE("split examples") {
    const Graph g = complete_graph(20);
    Piece piece;
    piece.kind = PieceKind::tripartite;
    piece.part_size = 1000;
    for (int e = 0; e < 100; ++e) piece.edges.push_back(e);
    piece.seed = 4;
    SplitOptions opt;
    const SplitResult one = split_for_nibble(g, piece, opt);
    CHECK(one.formula_t > 1);
    CHECK(one.t == 1);
    REQUIRE(one.digraphs.size() == 1);

    piece.part_size = 1;
    CHECK(split_for_nibble(g, piece, opt).t == 1);

    piece.part_size = 1000;
    opt.t_override = 7;
    const SplitResult seven = split_for_nibble(g, piece, opt);
    CHECK(seven.t == 7);
    REQUIRE(seven.digraphs.size() == 7);
    std::multiset<std::pair<int, int>> got;
    for (const Digraph& d : seven.digraphs)
        for (const Arc& a : d.arcs()) got.insert({std::min(a.tail, a.head), std::max(a.tail, a.head)});
    std::multiset<std::pair<int, int>> want;
    for (int e : piece.edges) want.insert({g.edge(e).u, g.edge(e).v});
    CHECK(got == want);
    const Digraph oriented = split_for_nibble(g, piece, SplitOptions{0.1, 64, 0.0, 1}).digraphs[0];
    std::multiset<std::pair<int, int>> arcs_all, arcs_split;
    for (const Arc& a : oriented.arcs()) arcs_all.insert({a.tail, a.head});
    for (const Digraph& d : seven.digraphs)
        for (const Arc& a : d.arcs()) arcs_split.insert({a.tail, a.head});
    CHECK(arcs_all == arcs_split);
}

TEST_CASE("split formula and clamps") {
    CHECK(split_formula(PieceKind::tripartite, 100, 0.1) == doctest::Approx(std::pow(100.0, 1.9 / 3.9)));
    CHECK(split_formula(PieceKind::monopartite, 100, 0.1) == doctest::Approx(std::pow(100.0, 1.9 / 3.9)));
    CHECK(split_formula(PieceKind::bipartite, 100, 0.1) == doctest::Approx(std::pow(100.0, 3.9 / 5.9)));

    const Graph g = complete_graph(200);
    Piece piece;
    piece.kind = PieceKind::tripartite;
    piece.part_size = 1e6;
    piece.target_density = 0.5;
    for (int e = 0; e < 6400; ++e) piece.edges.push_back(e);
    SplitOptions opt;
    CHECK(split_for_nibble(g, piece, opt).t == 100);
    opt.min_hyperdegree = 4.0;
    // 0.5 * sqrt(1e6 / 16) = 125 is above the arc clamp
    CHECK(split_for_nibble(g, piece, opt).t == 100);
    opt.min_hyperdegree = 100.0;
    CHECK(split_for_nibble(g, piece, opt).t == 25);
    piece.kind = PieceKind::bipartite;
    piece.part_size = 1000;
    opt.min_hyperdegree = 1.0;
    // 0.5 * cbrt(1e6 / 8) = 25
    CHECK(split_for_nibble(g, piece, opt).t == 25);
}

TEST_CASE("large split is balanced") {
    const Graph g = complete_graph(450);
    Piece piece;
    piece.kind = PieceKind::tripartite;
    piece.part_size = 150;
    for (int e = 0; e < 100000; ++e) piece.edges.push_back(e);
    piece.seed = 77;
    SplitOptions opt;
    opt.t_override = 20;
    const SplitResult r = split_for_nibble(g, piece, opt);
    REQUIRE(r.digraphs.size() == 20);
    const double sigma = std::sqrt(100000 * 0.05 * 0.95);
    std::size_t total = 0;
    for (const Digraph& d : r.digraphs) {
        CHECK(std::abs(static_cast<double>(d.size()) - 5000) <= 3 * sigma);
        total += d.size();
    }
    CHECK(total == 100000);
}
