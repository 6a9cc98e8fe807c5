#include "genus_kit/regularity.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

namespace gk {

EquitablePartition equitable_partition(int n, int K, std::uint64_t seed) {
    if (K < 1 || K > std::max(n, 1)) throw InputError("part count out of range");
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);
    std::vector<std::vector<int>> parts(static_cast<std::size_t>(K));
    std::size_t pos = 0;
    for (int i = 0; i < K; ++i) {
        const int size = n / K + (i < n % K ? 1 : 0);
        parts[i].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                        order.begin() + static_cast<std::ptrdiff_t>(pos + size));
        pos += static_cast<std::size_t>(size);
    }
    return make_partition(n, std::move(parts));
}

EquitablePartition make_partition(int n, std::vector<std::vector<int>> parts) {
    EquitablePartition p;
    p.part_of.assign(static_cast<std::size_t>(n), -1);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        std::sort(parts[i].begin(), parts[i].end());
        for (int v : parts[i]) {
            if (v < 0 || v >= n) throw MismatchError("partition vertex out of range");
            if (p.part_of[v] >= 0) throw MismatchError("partition parts overlap");
            p.part_of[v] = static_cast<int>(i);
        }
    }
    for (int v = 0; v < n; ++v)
        if (p.part_of[v] < 0) throw MismatchError("partition misses vertex " + std::to_string(v));
    p.parts = std::move(parts);
    return p;
}

bool is_equitable(const EquitablePartition& p) {
    if (p.parts.empty()) return true;
    std::size_t lo = p.parts[0].size(), hi = lo;
    for (const auto& part : p.parts) {
        lo = std::min(lo, part.size());
        hi = std::max(hi, part.size());
    }
    return hi - lo <= 1;
}

long long edges_between(const Graph& g, std::span<const int> x, std::span<const int> y) {
    std::vector<char> in_y(static_cast<std::size_t>(g.order()), 0);
    for (int v : y) in_y[v] = 1;
    long long count = 0;
    for (int u : x)
        for (int w : g.neighbors(u)) count += in_y[w];
    return count;
}

double pair_density(const Graph& g, std::span<const int> x, std::span<const int> y) {
    if (x.empty() || y.empty()) return 0.0;
    return static_cast<double>(edges_between(g, x, y)) /
           (static_cast<double>(x.size()) * static_cast<double>(y.size()));
}

int min_subset_size(double eps, std::size_t size) {
    const double raw = std::ceil(eps * static_cast<double>(size) - 1e-9);
    return std::max(1, static_cast<int>(raw));
}

namespace {

// 0/1 bipartite adjacency between two vertex lists.
struct BiAdjacency {
    int rows = 0, cols = 0;
    std::vector<char> a;
    long long edges = 0;

    char at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

BiAdjacency bi_adjacency(const Graph& g, std::span<const int> vi, std::span<const int> vj) {
    BiAdjacency b;
    b.rows = static_cast<int>(vi.size());
    b.cols = static_cast<int>(vj.size());
    b.a.assign(static_cast<std::size_t>(b.rows) * b.cols, 0);
    std::vector<int> col_of(static_cast<std::size_t>(g.order()), -1);
    for (int c = 0; c < b.cols; ++c) col_of[vj[c]] = c;
    for (int r = 0; r < b.rows; ++r)
        for (int w : g.neighbors(vi[r]))
            if (col_of[w] >= 0) {
                b.a[static_cast<std::size_t>(r) * b.cols + col_of[w]] = 1;
                ++b.edges;
            }
    return b;
}

struct SubsetPair {
    std::vector<int> x, y;  // local indices
    double density = 0.0;
};

double subset_density(const BiAdjacency& b, const std::vector<int>& x, const std::vector<int>& y) {
    long long e = 0;
    for (int r : x)
        for (int c : y) e += b.at(r, c);
    return static_cast<double>(e) / (static_cast<double>(x.size()) * static_cast<double>(y.size()));
}

// Picks the rows with positive sign * score, but at least `min_size` of them
// (the best ones).
std::vector<int> best_side(const std::vector<double>& score, double sign, int min_size) {
    std::vector<int> idx(score.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return sign * score[a] > sign * score[b]; });
    std::size_t take = 0;
    while (take < idx.size() && sign * score[idx[take]] > 1e-12) ++take;
    take = std::max<std::size_t>(take, static_cast<std::size_t>(min_size));
    take = std::min(take, idx.size());
    std::vector<int> out(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take));
    std::sort(out.begin(), out.end());
    return out;
}

// Alternating maximization of sign * (e(X,Y) - d|X||Y|) starting from Y.
SubsetPair alternate(const BiAdjacency& b, double d, std::vector<int> y, double sign, int kx,
                     int ky, int max_moves) {
    std::vector<int> x;
    std::vector<double> rs(static_cast<std::size_t>(b.rows)), cs(static_cast<std::size_t>(b.cols));
    for (int move = 0; move < max_moves; ++move) {
        for (int r = 0; r < b.rows; ++r) {
            double s = 0;
            for (int c : y) s += b.at(r, c);
            rs[r] = s - d * static_cast<double>(y.size());
        }
        std::vector<int> nx = best_side(rs, sign, kx);
        for (int c = 0; c < b.cols; ++c) {
            double s = 0;
            for (int r : nx) s += b.at(r, c);
            cs[c] = s - d * static_cast<double>(nx.size());
        }
        std::vector<int> ny = best_side(cs, sign, ky);
        const bool stable = nx == x && ny == y;
        x = std::move(nx);
        y = std::move(ny);
        if (stable) break;
    }
    return {x, y, subset_density(b, x, y)};
}

// Top right singular vector of the centered biadjacency by power iteration.
std::vector<double> top_singular_vector(const BiAdjacency& b, double d, int iterations,
                                        std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(static_cast<std::size_t>(b.cols)), u(static_cast<std::size_t>(b.rows));
    for (double& x : v) x = rng.uniform() - 0.5;
    for (int it = 0; it < iterations; ++it) {
        for (int r = 0; r < b.rows; ++r) {
            double s = 0;
            for (int c = 0; c < b.cols; ++c) s += (b.at(r, c) - d) * v[c];
            u[r] = s;
        }
        double norm = 0;
        for (int c = 0; c < b.cols; ++c) {
            double s = 0;
            for (int r = 0; r < b.rows; ++r) s += (b.at(r, c) - d) * u[r];
            v[c] = s;
            norm += s * s;
        }
        norm = std::sqrt(norm);
        if (norm < 1e-300) break;
        for (double& x : v) x /= norm;
    }
    return v;
}

PairVerdict exhaustive_pair(const BiAdjacency& b0, double eps, bool transposed) {
    // enumerate subsets of the rows of b; optimize the columns by sorting
    BiAdjacency b = b0;
    if (transposed) {
        b.rows = b0.cols;
        b.cols = b0.rows;
        b.a.assign(b0.a.size(), 0);
        for (int r = 0; r < b0.rows; ++r)
            for (int c = 0; c < b0.cols; ++c) b.a[static_cast<std::size_t>(c) * b.cols + r] = b0.at(r, c);
    }
    const double d = static_cast<double>(b.edges) / (static_cast<double>(b.rows) * b.cols);
    const int kx = min_subset_size(eps, static_cast<std::size_t>(b.rows));
    const int ky = min_subset_size(eps, static_cast<std::size_t>(b.cols));
    std::vector<std::uint32_t> colmask(static_cast<std::size_t>(b.cols), 0);
    for (int c = 0; c < b.cols; ++c)
        for (int r = 0; r < b.rows; ++r)
            if (b.at(r, c)) colmask[c] |= 1u << r;
    PairVerdict verdict;
    verdict.exact = true;
    double best = -1;
    std::uint32_t best_mask = 0;
    int best_k = 0;
    bool best_top = true;
    std::vector<int> deg(static_cast<std::size_t>(b.cols));
    for (std::uint32_t mask = 1; mask < (1u << b.rows); ++mask) {
        const int xs = std::popcount(mask);
        if (xs < kx) continue;
        for (int c = 0; c < b.cols; ++c) deg[c] = std::popcount(colmask[c] & mask);
        std::sort(deg.begin(), deg.end());
        double top = 0, bottom = 0;
        for (int k = 1; k <= b.cols; ++k) {
            top += deg[b.cols - k];
            bottom += deg[k - 1];
            if (k < ky) continue;
            const double area = static_cast<double>(xs) * k;
            const double up = top / area - d, down = d - bottom / area;
            if (up > best) {
                best = up;
                best_mask = mask;
                best_k = k;
                best_top = true;
            }
            if (down > best) {
                best = down;
                best_mask = mask;
                best_k = k;
                best_top = false;
            }
        }
    }
    verdict.max_deviation = std::max(0.0, best);
    verdict.regular = best < eps;
    if (!verdict.regular) {
        std::vector<int> x, y(static_cast<std::size_t>(b.cols));
        for (int r = 0; r < b.rows; ++r)
            if (best_mask >> r & 1) x.push_back(r);
        std::iota(y.begin(), y.end(), 0);
        std::stable_sort(y.begin(), y.end(), [&](int p, int q) {
            const int dp = std::popcount(colmask[p] & best_mask), dq = std::popcount(colmask[q] & best_mask);
            return best_top ? dp > dq : dp < dq;
        });
        y.resize(static_cast<std::size_t>(best_k));
        std::sort(y.begin(), y.end());
        RegularityWitness w;
        w.x = transposed ? y : x;
        w.y = transposed ? x : y;
        verdict.witness = std::move(w);
    }
    return verdict;
}

}  // namespace

PairVerdict pair_regularity(const Graph& g, std::span<const int> vi, std::span<const int> vj,
                            double eps, const PairTestOptions& opt) {
    if (vi.empty() || vj.empty()) throw InputError("pair regularity needs nonempty parts");
    if (!(eps > 0)) throw InputError("epsilon must be positive");
    const BiAdjacency b = bi_adjacency(g, vi, vj);
    const double d = static_cast<double>(b.edges) / (static_cast<double>(b.rows) * b.cols);
    PairVerdict verdict;
    const int cap = std::min(opt.exhaustive_cap, 24);
    if (b.rows <= cap && b.cols <= cap) {
        verdict = exhaustive_pair(b, eps, b.rows > b.cols);
    } else {
        const int kx = min_subset_size(eps, vi.size());
        const int ky = min_subset_size(eps, vj.size());
        std::vector<std::vector<int>> starts;
        std::vector<int> all(static_cast<std::size_t>(b.cols));
        std::iota(all.begin(), all.end(), 0);
        starts.push_back(all);
        const auto v = top_singular_vector(b, d, opt.power_iterations, opt.seed);
        std::vector<int> pos, neg;
        for (int c = 0; c < b.cols; ++c) (v[c] > 0 ? pos : neg).push_back(c);
        if (!pos.empty()) starts.push_back(pos);
        if (!neg.empty()) starts.push_back(neg);
        Rng rng(derive_seed(opt.seed, 7));
        for (int s = 0; s < opt.restarts; ++s) {
            const int r = static_cast<int>(rng.below(static_cast<std::uint64_t>(b.rows)));
            std::vector<int> nb, non;
            for (int c = 0; c < b.cols; ++c) (b.at(r, c) ? nb : non).push_back(c);
            if (!nb.empty()) starts.push_back(nb);
            if (!non.empty()) starts.push_back(non);
        }
        double best = -1;
        SubsetPair best_pair;
        for (const auto& y0 : starts) {
            for (double sign : {1.0, -1.0}) {
                SubsetPair sp = alternate(b, d, y0, sign, kx, ky, opt.max_moves);
                const double dev = std::abs(sp.density - d);
                if (dev > best) {
                    best = dev;
                    best_pair = std::move(sp);
                }
            }
        }
        verdict.max_deviation = std::max(0.0, best);
        verdict.regular = best < eps;
        if (!verdict.regular) {
            RegularityWitness w;
            w.x = best_pair.x;
            w.y = best_pair.y;
            verdict.witness = std::move(w);
        }
    }
    if (verdict.witness) {
        RegularityWitness& w = *verdict.witness;
        for (int& r : w.x) r = vi[r];
        for (int& c : w.y) c = vj[c];
        w.pair_density = d;
        w.subset_density = pair_density(g, w.x, w.y);
        w.deviation = std::abs(w.subset_density - d);
        // measured again from the graph; drop anything that does not hold up
        if (w.deviation < eps || static_cast<int>(w.x.size()) < min_subset_size(eps, vi.size()) ||
            static_cast<int>(w.y.size()) < min_subset_size(eps, vj.size())) {
            verdict.witness.reset();
            verdict.regular = true;
        }
    }
    return verdict;
}

double QuotientGraph::mean_weight() const {
    if (K < 2) return 0.0;
    double s = 0;
    for (int i = 0; i < K; ++i)
        for (int j = i + 1; j < K; ++j) s += w(i, j);
    return s / (K * (K - 1) / 2.0);
}

QuotientGraph density_quotient(const Graph& g, const EquitablePartition& p) {
    QuotientGraph q;
    q.K = p.count();
    const auto kk = static_cast<std::size_t>(q.K) * q.K;
    q.density.assign(kk, 0.0);
    q.irregular.assign(kk, 0);
    for (const auto& part : p.parts) q.sizes.push_back(static_cast<int>(part.size()));
    std::vector<long long> count(kk, 0);
    for (const Edge& e : g.edges()) {
        const int a = p.part_of[e.u], b = p.part_of[e.v];
        if (a == b) continue;
        ++count[static_cast<std::size_t>(a) * q.K + b];
        ++count[static_cast<std::size_t>(b) * q.K + a];
    }
    for (int i = 0; i < q.K; ++i)
        for (int j = 0; j < q.K; ++j) {
            if (i == j) continue;
            const double area = static_cast<double>(q.sizes[i]) * q.sizes[j];
            q.density[static_cast<std::size_t>(i) * q.K + j] =
                area > 0 ? static_cast<double>(count[static_cast<std::size_t>(i) * q.K + j]) / area : 0.0;
        }
    q.weight = q.density;
    return q;
}

double partition_index(const QuotientGraph& q, int n) {
    if (n == 0) return 0.0;
    double s = 0;
    for (int i = 0; i < q.K; ++i)
        for (int j = i + 1; j < q.K; ++j) s += static_cast<double>(q.sizes[i]) * q.sizes[j] * q.d(i, j) * q.d(i, j);
    return s / (static_cast<double>(n) * n);
}

namespace {

struct PairRound {
    std::vector<RegularityWitness> witnesses;
    std::vector<char> irregular;
    bool heuristic = false;
};

PairRound test_all_pairs(const Graph& g, const EquitablePartition& p, const RegularityOptions& opt,
                         int round) {
    PairRound out;
    const int K = p.count();
    out.irregular.assign(static_cast<std::size_t>(K) * K, 0);
    for (int i = 0; i < K; ++i)
        for (int j = i + 1; j < K; ++j) {
            PairTestOptions po = opt.pair;
            po.seed = derive_seed(derive_seed(opt.seed, static_cast<std::uint64_t>(round) + 1000),
                                  static_cast<std::uint64_t>(i) * 65536 + j);
            PairVerdict v = pair_regularity(g, p.parts[i], p.parts[j], opt.eps, po);
            if (!v.exact) out.heuristic = true;
            if (v.witness) {
                v.witness->i = i;
                v.witness->j = j;
                out.witnesses.push_back(std::move(*v.witness));
                out.irregular[static_cast<std::size_t>(i) * K + j] = 1;
                out.irregular[static_cast<std::size_t>(j) * K + i] = 1;
            }
        }
    return out;
}

// Splits every part along the witness sets touching it, then cuts the
// resulting vertex sequence into `target` equitable parts.
EquitablePartition refine(int n, const EquitablePartition& p,
                          const std::vector<RegularityWitness>& witnesses, int target,
                          std::uint64_t seed) {
    const int K = p.count();
    std::vector<std::vector<const std::vector<int>*>> sets(static_cast<std::size_t>(K));
    for (const auto& w : witnesses) {
        sets[w.i].push_back(&w.x);
        sets[w.j].push_back(&w.y);
    }
    Rng rng(seed);
    std::vector<int> sequence;
    sequence.reserve(static_cast<std::size_t>(n));
    std::vector<int> local(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < K; ++i) {
        const auto& part = p.parts[i];
        for (std::size_t k = 0; k < part.size(); ++k) local[part[k]] = static_cast<int>(k);
        std::vector<std::vector<int>> signature(part.size());
        for (std::size_t s = 0; s < sets[i].size(); ++s)
            for (int v : *sets[i][s]) signature[local[v]].push_back(static_cast<int>(s));
        std::map<std::vector<int>, std::vector<int>> atoms;
        for (std::size_t k = 0; k < part.size(); ++k) atoms[signature[k]].push_back(part[k]);
        std::vector<std::vector<int>> cells;
        for (auto& [sig, members] : atoms) cells.push_back(std::move(members));
        rng.shuffle(cells);
        for (auto& c : cells) sequence.insert(sequence.end(), c.begin(), c.end());
    }
    std::vector<std::vector<int>> parts(static_cast<std::size_t>(target));
    std::size_t pos = 0;
    for (int i = 0; i < target; ++i) {
        const int size = n / target + (i < n % target ? 1 : 0);
        parts[i].assign(sequence.begin() + static_cast<std::ptrdiff_t>(pos),
                        sequence.begin() + static_cast<std::ptrdiff_t>(pos + size));
        pos += static_cast<std::size_t>(size);
    }
    return make_partition(n, std::move(parts));
}

}  // namespace

RegularPartition regular_partition(const Graph& g, const RegularityOptions& opt) {
    if (opt.m < 1) throw InputError("minimum part count must be positive");
    if (!(opt.eps > 0)) throw InputError("epsilon must be positive");
    const int n = g.order();
    if (n == 0) throw InputError("empty graph has no partition");
    const int k_max = std::max(1, std::min(opt.k_max, n));
    RegularPartition out;
    out.partition = equitable_partition(n, std::min(opt.m, k_max), opt.seed);
    for (int round = 0;; ++round) {
        PairRound test = test_all_pairs(g, out.partition, opt, round);
        out.rounds = round + 1;
        out.quotient = density_quotient(g, out.partition);
        out.quotient.irregular = test.irregular;
        out.witnesses = std::move(test.witnesses);
        out.heuristic = test.heuristic;
        out.irregular_pairs = static_cast<long long>(out.witnesses.size());
        const int K = out.partition.count();
        const double index = partition_index(out.quotient, n);
        out.index_history.push_back(index);
        out.k_history.push_back(K);
        out.converged = static_cast<double>(out.irregular_pairs) <= opt.eps * K * K;
        if (out.converged || round + 1 >= opt.max_rounds || K >= k_max) break;
        const int target = std::min(2 * K, k_max);
        bool refined = false;
        for (int attempt = 0; attempt < opt.refine_attempts && !refined; ++attempt) {
            EquitablePartition next =
                refine(n, out.partition, out.witnesses, target,
                       derive_seed(opt.seed, static_cast<std::uint64_t>(round) * 131 + attempt + 1));
            if (partition_index(density_quotient(g, next), n) > index + 1e-12) {
                out.partition = std::move(next);
                refined = true;
            }
        }
        if (!refined) break;
    }
    return out;
}

std::string format_partition(const EquitablePartition& p) {
    std::string out;
    for (std::size_t i = 0; i < p.parts.size(); ++i) {
        out += std::to_string(i) + ":";
        for (int v : p.parts[i]) out += " " + std::to_string(v);
        out += "\n";
    }
    return out;
}

std::string format_quotient(const QuotientGraph& q) {
    std::string out = std::to_string(q.K) + "\n";
    char buf[32];
    for (int i = 0; i < q.K; ++i) {
        for (int j = 0; j < q.K; ++j) {
            std::snprintf(buf, sizeof buf, "%s%.6f", j ? " " : "", q.w(i, j));
            out += buf;
        }
        out += "\n";
    }
    for (int i = 0; i < q.K; ++i)
        for (int j = i + 1; j < q.K; ++j)
            if (q.is_irregular(i, j)) out += "irregular " + std::to_string(i) + " " + std::to_string(j) + "\n";
    return out;
}

DenseMatrix adjacency_matrix(const Graph& g) {
    DenseMatrix m(g.order(), g.order());
    for (const Edge& e : g.edges()) m(e.u, e.v) = m(e.v, e.u) = 1.0;
    return m;
}

DenseMatrix block_template(int n, const EquitablePartition& p, const DenseMatrix& weights) {
    if (static_cast<int>(p.part_of.size()) != n || weights.rows != p.count() || weights.cols != p.count())
        throw MismatchError("template weights do not match the partition");
    DenseMatrix m(n, n);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            const int a = p.part_of[u], b = p.part_of[v];
            if (a != b) m(u, v) = weights(a, b);
        }
    return m;
}

DenseMatrix constant_template(int n, double p) {
    DenseMatrix m(n, n, p);
    for (int v = 0; v < n; ++v) m(v, v) = 0.0;
    return m;
}

namespace {

using Block = Eigen::MatrixXd;

Block difference_block(const DenseMatrix& a, const DenseMatrix& b, const std::vector<int>& rows,
                       const std::vector<int>& cols) {
    Block m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a(rows[r], cols[c]) - b(rows[r], cols[c]);
    return m;
}

// Upper bound on max |1_U^T M 1_W| from the spectral norm, the Frobenius
// norm and the sums of positive and negative entries.
double bilinear_upper(const Block& m) {
    if (m.size() == 0) return 0.0;
    const double rc = std::sqrt(static_cast<double>(m.rows()) * static_cast<double>(m.cols()));
    const Block gram = m.rows() <= m.cols() ? Block(m * m.transpose()) : Block(m.transpose() * m);
    Eigen::SelfAdjointEigenSolver<Block> es(gram, Eigen::EigenvaluesOnly);
    const double sigma = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
    const double spectral = (sigma * (1 + 1e-9) + 1e-12) * rc;
    const double frob = m.norm() * rc;
    const double pos = m.cwiseMax(0.0).sum(), neg = -m.cwiseMin(0.0).sum();
    return std::min({spectral, frob, std::max(pos, neg)});
}

struct BilinearResult {
    double value = 0.0;
    std::vector<int> u, w;
};

// Exact max |1_U^T M 1_W| by enumerating subsets of the rows (rows <= 30).
BilinearResult bilinear_exhaustive(const Block& m) {
    const int r = static_cast<int>(m.rows()), c = static_cast<int>(m.cols());
    BilinearResult best;
    std::vector<double> col(static_cast<std::size_t>(c), 0.0);
    std::uint64_t gray_prev = 0;
    std::uint64_t best_mask = 0;
    bool best_positive = true;
    for (std::uint64_t k = 1; k < (1ULL << r); ++k) {
        const std::uint64_t gray = k ^ (k >> 1);
        const int flip = std::countr_zero(gray ^ gray_prev);
        const double s = (gray >> flip & 1) ? 1.0 : -1.0;
        for (int j = 0; j < c; ++j) col[j] += s * m(flip, j);
        gray_prev = gray;
        double pos = 0, neg = 0;
        for (double x : col) (x > 0 ? pos : neg) += x;
        if (pos > best.value) {
            best.value = pos;
            best_mask = gray;
            best_positive = true;
        }
        if (-neg > best.value) {
            best.value = -neg;
            best_mask = gray;
            best_positive = false;
        }
    }
    for (int i = 0; i < r; ++i)
        if (best_mask >> i & 1) best.u.push_back(i);
    for (int j = 0; j < c; ++j) {
        double x = 0;
        for (int i : best.u) x += m(i, j);
        if (best_positive ? x > 0 : x < 0) best.w.push_back(j);
    }
    return best;
}

std::vector<int> positive_support(const Eigen::VectorXd& v, double sign) {
    std::vector<int> out;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (sign * v(i) > 1e-15) out.push_back(static_cast<int>(i));
    return out;
}

double bilinear_eval(const Block& m, const std::vector<int>& u, const std::vector<int>& w) {
    double s = 0;
    for (int i : u)
        for (int j : w) s += m(i, j);
    return s;
}

BilinearResult bilinear_heuristic(const Block& m, int restarts, std::uint64_t seed) {
    BilinearResult best;
    std::vector<Eigen::VectorXd> starts;
    Eigen::JacobiSVD<Block> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::Index k = std::min<Eigen::Index>(3, svd.singularValues().size());
    for (Eigen::Index i = 0; i < k; ++i) {
        starts.push_back(svd.matrixU().col(i));
        starts.push_back(-svd.matrixU().col(i));
    }
    Rng rng(seed);
    for (int s = 0; s < restarts; ++s) {
        Eigen::VectorXd v(m.rows());
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.uniform() - 0.5;
        starts.push_back(v);
    }
    for (const auto& start : starts) {
        for (double sign : {1.0, -1.0}) {
            std::vector<int> u = positive_support(start, 1.0), w;
            for (int it = 0; it < 50; ++it) {
                Eigen::VectorXd colsum = Eigen::VectorXd::Zero(m.cols());
                for (int i : u) colsum += m.row(i).transpose();
                std::vector<int> nw = positive_support(colsum, sign);
                Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(m.rows());
                for (int j : nw) rowsum += m.col(j);
                std::vector<int> nu = positive_support(rowsum, sign);
                const bool stable = nu == u && nw == w;
                u = std::move(nu);
                w = std::move(nw);
                if (stable) break;
            }
            const double val = std::abs(bilinear_eval(m, u, w));
            if (val > best.value) best = {val, u, w};
        }
    }
    return best;
}

struct TripleResult {
    double value = 0.0;
    std::vector<int> s0, s1, s2;
};

// Blocks m01 (|S0| x |S1|), m02, m12. Objective 1^T m01 1 + 1^T m02 1 + 1^T m12 1
// over S0 x S1, S0 x S2, S1 x S2.
double triple_eval(const Block& m01, const Block& m02, const Block& m12, const std::vector<int>& a,
                   const std::vector<int>& b, const std::vector<int>& c) {
    return bilinear_eval(m01, a, b) + bilinear_eval(m02, a, c) + bilinear_eval(m12, b, c);
}

TripleResult triple_exhaustive(const Block& m01, const Block& m02, const Block& m12) {
    const int a = static_cast<int>(m01.rows()), b = static_cast<int>(m01.cols()),
              c = static_cast<int>(m02.cols());
    TripleResult best;
    std::vector<double> base_col(static_cast<std::size_t>(c)), zc(static_cast<std::size_t>(c));
    std::vector<double> urow(static_cast<std::size_t>(b));
    for (std::uint64_t umask = 0; umask < (1ULL << a); ++umask) {
        std::fill(base_col.begin(), base_col.end(), 0.0);
        std::fill(urow.begin(), urow.end(), 0.0);
        for (int i = 0; i < a; ++i)
            if (umask >> i & 1) {
                for (int z = 0; z < c; ++z) base_col[z] += m02(i, z);
                for (int w = 0; w < b; ++w) urow[w] += m01(i, w);
            }
        zc = base_col;
        double base = 0;
        std::uint64_t prev = 0;
        for (std::uint64_t k = 0; k < (1ULL << b); ++k) {
            const std::uint64_t gray = k ^ (k >> 1);
            if (k > 0) {
                const int flip = std::countr_zero(gray ^ prev);
                const double s = (gray >> flip & 1) ? 1.0 : -1.0;
                base += s * urow[flip];
                for (int z = 0; z < c; ++z) zc[z] += s * m12(flip, z);
            }
            prev = gray;
            double pos = 0, neg = 0;
            for (double x : zc) (x > 0 ? pos : neg) += x;
            for (int sgn = 0; sgn < 2; ++sgn) {
                const double val = std::abs(base + (sgn == 0 ? pos : neg));
                if (val > best.value) {
                    best.value = val;
                    best.s0.clear();
                    best.s1.clear();
                    best.s2.clear();
                    for (int i = 0; i < a; ++i)
                        if (umask >> i & 1) best.s0.push_back(i);
                    for (int i = 0; i < b; ++i)
                        if (gray >> i & 1) best.s1.push_back(i);
                    for (int z = 0; z < c; ++z)
                        if (sgn == 0 ? zc[z] > 0 : zc[z] < 0) best.s2.push_back(z);
                }
            }
        }
    }
    return best;
}

TripleResult triple_heuristic(const Block& m01, const Block& m02, const Block& m12, int restarts,
                              std::uint64_t seed) {
    const int a = static_cast<int>(m01.rows()), b = static_cast<int>(m01.cols()),
              c = static_cast<int>(m02.cols());
    TripleResult best;
    Rng rng(seed);
    auto random_subset = [&](int size) {
        std::vector<int> s;
        for (int i = 0; i < size; ++i)
            if (rng.coin()) s.push_back(i);
        return s;
    };
    std::vector<std::array<std::vector<int>, 3>> starts;
    for (int r = 0; r < restarts; ++r) starts.push_back({random_subset(a), random_subset(b), random_subset(c)});
    {
        BilinearResult x = bilinear_heuristic(m01, 2, seed + 1);
        starts.push_back({x.u, x.w, std::vector<int>{}});
        BilinearResult y = bilinear_heuristic(m02, 2, seed + 2);
        starts.push_back({y.u, std::vector<int>{}, y.w});
        BilinearResult z = bilinear_heuristic(m12, 2, seed + 3);
        starts.push_back({std::vector<int>{}, z.u, z.w});
    }
    for (const auto& st : starts) {
        for (double sign : {1.0, -1.0}) {
            auto s0 = st[0], s1 = st[1], s2 = st[2];
            for (int it = 0; it < 60; ++it) {
                bool changed = false;
                Eigen::VectorXd c0 = Eigen::VectorXd::Zero(a);
                for (int j : s1) c0 += m01.col(j);
                for (int z : s2) c0 += m02.col(z);
                auto n0 = positive_support(c0, sign);
                changed |= n0 != s0;
                s0 = std::move(n0);
                Eigen::VectorXd c1 = Eigen::VectorXd::Zero(b);
                for (int i : s0) c1 += m01.row(i).transpose();
                for (int z : s2) c1 += m12.col(z);
                auto n1 = positive_support(c1, sign);
                changed |= n1 != s1;
                s1 = std::move(n1);
                Eigen::VectorXd c2 = Eigen::VectorXd::Zero(c);
                for (int i : s0) c2 += m02.row(i).transpose();
                for (int j : s1) c2 += m12.row(j).transpose();
                auto n2 = positive_support(c2, sign);
                changed |= n2 != s2;
                s2 = std::move(n2);
                if (!changed) break;
            }
            const double val = std::abs(triple_eval(m01, m02, m12, s0, s1, s2));
            if (val > best.value) best = {val, s0, s1, s2};
        }
    }
    return best;
}

std::vector<int> map_back(const std::vector<int>& local, const std::vector<int>& ids) {
    std::vector<int> out;
    out.reserve(local.size());
    for (int i : local) out.push_back(ids[i]);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

CutDistanceEstimate cut_distance(const DenseMatrix& a, const DenseMatrix& b, CutMode mode,
                                 const std::vector<std::vector<int>>& parts, const CutOptions& opt) {
    if (a.rows != a.cols || b.rows != b.cols || a.rows != b.rows)
        throw MismatchError("cut distance needs square matrices on the same vertex set");
    const int n = a.rows;
    CutDistanceEstimate out;
    if (n == 0) {
        out.exact = true;
        return out;
    }
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    if (mode == CutMode::full || mode == CutMode::bipartite) {
        std::vector<int> rows = all, cols = all;
        double norm = static_cast<double>(n) * n;
        if (mode == CutMode::bipartite) {
            if (parts.size() != 2) throw MismatchError("bipartite cut distance needs two parts");
            rows = parts[0];
            cols = parts[1];
            norm = static_cast<double>(rows.size()) * static_cast<double>(cols.size());
        }
        if (rows.empty() || cols.empty()) {
            out.exact = true;
            return out;
        }
        Block m = difference_block(a, b, rows, cols);
        bool swapped = false;
        if (m.rows() > m.cols()) {
            m.transposeInPlace();
            swapped = true;
        }
        BilinearResult res;
        if (m.rows() <= opt.exhaustive_cap) {
            res = bilinear_exhaustive(m);
            out.exact = true;
            out.upper = res.value / norm;
        } else {
            res = bilinear_heuristic(m, opt.restarts, opt.seed);
            out.upper = std::max(res.value, bilinear_upper(m)) / norm;
        }
        out.lower = res.value / norm;
        const auto& r_ids = swapped ? cols : rows;
        const auto& c_ids = swapped ? rows : cols;
        out.u = map_back(res.u, r_ids);
        out.w = map_back(res.w, c_ids);
        if (swapped) std::swap(out.u, out.w);
        return out;
    }
    if (parts.size() != 3) throw MismatchError("tripartite cut distance needs three parts");
    const double norm = static_cast<double>(parts[0].size()) * static_cast<double>(parts[1].size()) *
                        static_cast<double>(parts[2].size());
    if (norm == 0) {
        out.exact = true;
        return out;
    }
    // enumerate the two smallest classes
    std::array<int, 3> ord{0, 1, 2};
    std::stable_sort(ord.begin(), ord.end(), [&](int x, int y) { return parts[x].size() < parts[y].size(); });
    const auto& p0 = parts[ord[0]];
    const auto& p1 = parts[ord[1]];
    const auto& p2 = parts[ord[2]];
    const Block m01 = difference_block(a, b, p0, p1);
    const Block m02 = difference_block(a, b, p0, p2);
    const Block m12 = difference_block(a, b, p1, p2);
    TripleResult res;
    if (static_cast<int>(p0.size() + p1.size()) <= opt.tripartite_enumeration) {
        res = triple_exhaustive(m01, m02, m12);
        out.exact = true;
        out.upper = res.value / norm;
    } else {
        res = triple_heuristic(m01, m02, m12, opt.restarts, opt.seed);
        const double pos = m01.cwiseMax(0.0).sum() + m02.cwiseMax(0.0).sum() + m12.cwiseMax(0.0).sum();
        const double neg = -(m01.cwiseMin(0.0).sum() + m02.cwiseMin(0.0).sum() + m12.cwiseMin(0.0).sum());
        const double blocks = bilinear_upper(m01) + bilinear_upper(m02) + bilinear_upper(m12);
        out.upper = std::max(res.value, std::min(blocks, std::max(pos, neg))) / norm;
    }
    out.lower = res.value / norm;
    std::array<std::vector<int>, 3> sets;
    sets[ord[0]] = map_back(res.s0, p0);
    sets[ord[1]] = map_back(res.s1, p1);
    sets[ord[2]] = map_back(res.s2, p2);
    out.u = sets[0];
    out.w = sets[1];
    out.z = sets[2];
    return out;
}

double cut_value(const DenseMatrix& a, const DenseMatrix& b, CutMode mode,
                 const std::vector<std::vector<int>>& parts, const std::vector<int>& u,
                 const std::vector<int>& w, const std::vector<int>& z) {
    auto sum = [&](const std::vector<int>& x, const std::vector<int>& y) {
        double s = 0;
        for (int i : x)
            for (int j : y) s += a(i, j) - b(i, j);
        return s;
    };
    const int n = a.rows;
    switch (mode) {
        case CutMode::full:
            return n ? std::abs(sum(u, w)) / (static_cast<double>(n) * n) : 0.0;
        case CutMode::bipartite:
            return std::abs(sum(u, w)) /
                   (static_cast<double>(parts.at(0).size()) * static_cast<double>(parts.at(1).size()));
        case CutMode::tripartite:
            return std::abs(sum(u, w) + sum(u, z) + sum(w, z)) /
                   (static_cast<double>(parts.at(0).size()) * static_cast<double>(parts.at(1).size()) *
                    static_cast<double>(parts.at(2).size()));
    }
    return 0.0;
}

}  // namespace gk
