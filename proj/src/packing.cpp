#include "genus_kit/packing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <Eigen/Dense>

#include "genus_kit/errors.hpp"
#include "genus_kit/rng.hpp"

namespace gk {

namespace {

constexpr double kTol = 1e-9;
constexpr int kDegenerateStreak = 50;

std::size_t at(int K, int i, int j) { return static_cast<std::size_t>(i) * K + j; }

class RevisedSimplex {
public:
    RevisedSimplex(int rows, const std::vector<LpColumn>& columns, std::span<const double> c,
                   std::span<const double> b)
        : m_(rows), n_(static_cast<int>(columns.size())), cols_(columns), c_(c.begin(), c.end()),
          b_(b.begin(), b.end()), basis_(static_cast<std::size_t>(rows)),
          where_(static_cast<std::size_t>(n_ + rows), -1),
          binv_(static_cast<std::size_t>(rows) * rows, 0.0), xb_(b.begin(), b.end()) {
        for (int r = 0; r < m_; ++r) {
            basis_[r] = n_ + r;
            where_[n_ + r] = r;
            binv_[at(m_, r, r)] = 1.0;
        }
    }

    LpSolution run() {
        std::vector<double> y(static_cast<std::size_t>(m_)), alpha(static_cast<std::size_t>(m_));
        const long long refactor_every = std::max(200, m_);
        int degenerate = 0;
        for (;;) {
            prices(y);
            const bool bland = degenerate >= kDegenerateStreak;
            const int enter = entering(y, bland);
            if (enter < 0) break;
            column(enter, alpha);
            const int leave = leaving(alpha);
            if (leave < 0) throw std::runtime_error("linear program is unbounded");
            degenerate = xb_[leave] <= kTol ? degenerate + 1 : 0;
            pivot(enter, leave, alpha);
            if (++pivots_ % refactor_every == 0) refactor();
        }
        refactor();
        prices(y);
        LpSolution s;
        s.pivots = pivots_;
        s.x.assign(static_cast<std::size_t>(n_), 0.0);
        for (int r = 0; r < m_; ++r)
            if (basis_[r] < n_) s.x[basis_[r]] = std::max(0.0, xb_[r]);
        s.dual.resize(static_cast<std::size_t>(m_));
        for (int r = 0; r < m_; ++r) s.dual[r] = std::max(0.0, y[r]);
        for (int j = 0; j < n_; ++j) s.objective += c_[j] * s.x[j];
        for (int r = 0; r < m_; ++r) s.dual_objective += b_[r] * s.dual[r];
        return s;
    }

private:
    double cost(int var) const { return var < n_ ? c_[var] : 0.0; }

    void prices(std::vector<double>& y) const {
        std::fill(y.begin(), y.end(), 0.0);
        for (int r = 0; r < m_; ++r) {
            const double cb = cost(basis_[r]);
            if (cb == 0.0) continue;
            const double* row = &binv_[at(m_, r, 0)];
            for (int k = 0; k < m_; ++k) y[k] += cb * row[k];
        }
    }

    // Largest reduced cost, or the lowest index with positive reduced cost
    // (Bland) while pivots keep being degenerate.
    int entering(const std::vector<double>& y, bool bland) const {
        int best = -1;
        double best_d = kTol;
        for (int j = 0; j < n_ + m_; ++j) {
            if (where_[j] >= 0) continue;
            double d;
            if (j < n_) {
                d = c_[j];
                const LpColumn& col = cols_[j];
                for (std::size_t k = 0; k < col.rows.size(); ++k) d -= y[col.rows[k]] * col.values[k];
            } else {
                d = -y[j - n_];
            }
            if (d > best_d) {
                if (bland) return j;
                best = j;
                best_d = d;
            }
        }
        return best;
    }

    void column(int var, std::vector<double>& alpha) const {
        for (int r = 0; r < m_; ++r) {
            const double* row = &binv_[at(m_, r, 0)];
            if (var < n_) {
                const LpColumn& col = cols_[var];
                double s = 0;
                for (std::size_t k = 0; k < col.rows.size(); ++k) s += row[col.rows[k]] * col.values[k];
                alpha[r] = s;
            } else {
                alpha[r] = row[var - n_];
            }
        }
    }

    int leaving(const std::vector<double>& alpha) const {
        int best = -1;
        double ratio = 0;
        for (int r = 0; r < m_; ++r) {
            if (alpha[r] <= kTol) continue;
            const double q = std::max(0.0, xb_[r]) / alpha[r];
            if (best < 0 || q < ratio - 1e-12) {
                best = r;
                ratio = q;
            } else if (q <= ratio + 1e-12 && basis_[r] < basis_[best]) {
                best = r;
            }
        }
        return best;
    }

    void pivot(int enter, int leave, const std::vector<double>& alpha) {
        double* prow = &binv_[at(m_, leave, 0)];
        const double a = alpha[leave];
        for (int k = 0; k < m_; ++k) prow[k] /= a;
        xb_[leave] /= a;
        for (int r = 0; r < m_; ++r) {
            if (r == leave || alpha[r] == 0.0) continue;
            double* row = &binv_[at(m_, r, 0)];
            const double f = alpha[r];
            for (int k = 0; k < m_; ++k) row[k] -= f * prow[k];
            xb_[r] -= f * xb_[leave];
        }
        where_[basis_[leave]] = -1;
        basis_[leave] = enter;
        where_[enter] = leave;
    }

    void refactor() {
        if (m_ == 0) return;
        Eigen::MatrixXd basis_matrix = Eigen::MatrixXd::Zero(m_, m_);
        for (int r = 0; r < m_; ++r) {
            const int var = basis_[r];
            if (var < n_) {
                const LpColumn& col = cols_[var];
                for (std::size_t k = 0; k < col.rows.size(); ++k) basis_matrix(col.rows[k], r) = col.values[k];
            } else {
                basis_matrix(var - n_, r) = 1.0;
            }
        }
        const Eigen::MatrixXd inv = basis_matrix.partialPivLu().inverse();
        for (int r = 0; r < m_; ++r)
            for (int k = 0; k < m_; ++k) binv_[at(m_, r, k)] = inv(r, k);
        for (int r = 0; r < m_; ++r) {
            double s = 0;
            for (int k = 0; k < m_; ++k) s += binv_[at(m_, r, k)] * b_[k];
            xb_[r] = std::abs(s) < 1e-12 ? 0.0 : s;
        }
    }

    int m_, n_;
    const std::vector<LpColumn>& cols_;
    std::vector<double> c_, b_;
    std::vector<int> basis_, where_;
    std::vector<double> binv_, xb_;
    long long pivots_ = 0;
};

// Triangle LP over K x K capacities; triangles need three positive capacities.
TrianglePacking triangle_lp(int K, std::span<const double> w) {
    TrianglePacking out;
    out.K = K;
    const auto kk = static_cast<std::size_t>(K) * K;
    out.edge_slack.assign(kk, 0.0);
    out.edge_price.assign(kk, 0.0);
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j)
            if (i != j) out.edge_slack[at(K, i, j)] = w[at(K, i, j)];
    if (K < 3) return out;
    std::vector<int> row_of(kk, -1);
    std::vector<std::pair<int, int>> row_edge;
    std::vector<double> b;
    for (int i = 0; i < K; ++i)
        for (int j = i + 1; j < K; ++j)
            if (w[at(K, i, j)] > 0) {
                row_of[at(K, i, j)] = static_cast<int>(row_edge.size());
                row_edge.emplace_back(i, j);
                b.push_back(w[at(K, i, j)]);
            }
    std::vector<LpColumn> cols;
    for (int i = 0; i < K; ++i)
        for (int j = i + 1; j < K; ++j) {
            if (row_of[at(K, i, j)] < 0) continue;
            for (int k = j + 1; k < K; ++k) {
                if (row_of[at(K, i, k)] < 0 || row_of[at(K, j, k)] < 0) continue;
                out.triangles.push_back({i, j, k});
                cols.push_back({{row_of[at(K, i, j)], row_of[at(K, i, k)], row_of[at(K, j, k)]}, {1.0, 1.0, 1.0}});
            }
        }
    if (cols.empty()) return out;
    const std::vector<double> c(cols.size(), 1.0);
    LpSolution s = RevisedSimplex(static_cast<int>(b.size()), cols, c, b).run();
    out.t = std::move(s.x);
    out.nu = s.objective;
    out.dual_objective = s.dual_objective;
    for (std::size_t r = 0; r < row_edge.size(); ++r) {
        auto [i, j] = row_edge[r];
        out.edge_price[at(K, i, j)] = out.edge_price[at(K, j, i)] = s.dual[r];
    }
    for (std::size_t q = 0; q < out.triangles.size(); ++q) {
        const Triangle& t = out.triangles[q];
        for (auto [a, bb] : {std::pair{t.i, t.j}, std::pair{t.i, t.k}, std::pair{t.j, t.k}}) {
            out.edge_slack[at(K, a, bb)] -= out.t[q];
            out.edge_slack[at(K, bb, a)] -= out.t[q];
        }
    }
    return out;
}

}  // namespace

LpSolution solve_lp(int rows, const std::vector<LpColumn>& columns, std::span<const double> c,
                    std::span<const double> b) {
    if (rows < 0 || b.size() != static_cast<std::size_t>(rows) || c.size() != columns.size())
        throw InputError("linear program dimensions do not match");
    for (double v : b)
        if (!(v >= 0)) throw InputError("right-hand side must be non-negative");
    for (const LpColumn& col : columns) {
        if (col.rows.size() != col.values.size()) throw InputError("malformed column");
        for (int r : col.rows)
            if (r < 0 || r >= rows) throw InputError("column row out of range");
    }
    return RevisedSimplex(rows, columns, c, b).run();
}

QuotientGraph build_quotient(const Graph& g, const EquitablePartition& p, double eps1,
                             std::span<const char> irregular) {
    QuotientGraph q = density_quotient(g, p);
    const auto kk = static_cast<std::size_t>(q.K) * q.K;
    if (!irregular.empty()) {
        if (irregular.size() != kk) throw MismatchError("irregular-pair table does not match the partition");
        q.irregular.assign(irregular.begin(), irregular.end());
    }
    for (std::size_t x = 0; x < kk; ++x)
        if (q.irregular[x] || q.density[x] < eps1) q.weight[x] = 0.0;
    return q;
}

QuotientGraph weighted_quotient(int K, std::span<const double> weights) {
    if (K < 0 || weights.size() != static_cast<std::size_t>(K) * K)
        throw InputError("weight matrix must be K x K");
    QuotientGraph q;
    q.K = K;
    q.sizes.assign(static_cast<std::size_t>(K), 0);
    q.density.assign(weights.begin(), weights.end());
    for (int i = 0; i < K; ++i) {
        q.density[at(K, i, i)] = 0.0;
        for (int j = 0; j < i; ++j)
            if (q.density[at(K, i, j)] != q.density[at(K, j, i)]) throw InputError("weight matrix must be symmetric");
    }
    q.weight = q.density;
    q.irregular.assign(weights.size(), 0);
    return q;
}

TrianglePacking solve_triangle_lp(const QuotientGraph& h) {
    for (int i = 0; i < h.K; ++i)
        for (int j = 0; j < h.K; ++j)
            if (i != j && !(h.w(i, j) >= 0.0 && h.w(i, j) <= 1.0))
                throw InputError("quotient weights must lie in [0, 1]");
    return triangle_lp(h.K, h.weight);
}

std::string format_lp(const QuotientGraph& h, const TrianglePacking& p) {
    std::string out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "lp %d\n", h.K);
    out += buf;
    for (int i = 0; i < h.K; ++i)
        for (int j = i + 1; j < h.K; ++j) {
            if (h.w(i, j) <= 0) continue;
            std::snprintf(buf, sizeof buf, "edge %d %d %.9f %.9f\n", i, j, h.w(i, j),
                          p.edge_price.empty() ? 0.0 : p.price(i, j));
            out += buf;
        }
    for (std::size_t q = 0; q < p.triangles.size(); ++q) {
        const Triangle& t = p.triangles[q];
        std::snprintf(buf, sizeof buf, "triangle %d %d %d %.9f\n", t.i, t.j, t.k, p.t[q]);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "nu %.9f\n", p.nu);
    out += buf;
    return out;
}

MultiQuotient multigraph_quotient(const QuotientGraph& h, double eps1) {
    if (!(eps1 > 0)) throw InputError("eps1 must be positive");
    MultiQuotient out;
    out.K = h.K;
    out.eps1 = eps1;
    out.mult.assign(static_cast<std::size_t>(h.K) * h.K, 0);
    const int cap = static_cast<int>(std::floor(1.0 / eps1 + 1e-9));
    for (int i = 0; i < h.K; ++i)
        for (int j = 0; j < h.K; ++j)
            if (i != j)
                out.mult[at(h.K, i, j)] =
                    std::min(cap, static_cast<int>(std::floor(std::max(0.0, h.w(i, j)) / eps1 + 1e-9)));
    return out;
}

MultiQuotient make_multiquotient(int K, std::span<const int> mult) {
    if (K < 0 || mult.size() != static_cast<std::size_t>(K) * K)
        throw InputError("multiplicity matrix must be K x K");
    MultiQuotient out;
    out.K = K;
    out.mult.assign(mult.begin(), mult.end());
    for (int i = 0; i < K; ++i) {
        out.mult[at(K, i, i)] = 0;
        for (int j = 0; j < K; ++j)
            if (out.mult[at(K, i, j)] < 0 || out.mult[at(K, i, j)] != mult[at(K, j, i)])
                throw InputError("multiplicities must be symmetric and non-negative");
    }
    return out;
}

namespace {

std::vector<Triangle> all_triangles(const MultiQuotient& h) {
    std::vector<Triangle> out;
    for (int i = 0; i < h.K; ++i)
        for (int j = i + 1; j < h.K; ++j)
            for (int k = j + 1; k < h.K; ++k)
                if (h.m(i, j) > 0 && h.m(i, k) > 0 && h.m(j, k) > 0) out.push_back({i, j, k});
    return out;
}

std::vector<int> greedy_use(const MultiQuotient& h, const std::vector<Triangle>& tris, std::uint64_t seed) {
    std::vector<int> rem = h.mult;
    std::vector<int> order(tris.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);
    std::vector<int> use(tris.size(), 0);
    const int K = h.K;
    for (bool added = true; added;) {
        added = false;
        for (int q : order) {
            const Triangle& t = tris[q];
            if (rem[at(K, t.i, t.j)] > 0 && rem[at(K, t.i, t.k)] > 0 && rem[at(K, t.j, t.k)] > 0) {
                for (auto [a, b] : {std::pair{t.i, t.j}, std::pair{t.i, t.k}, std::pair{t.j, t.k}}) {
                    --rem[at(K, a, b)];
                    --rem[at(K, b, a)];
                }
                ++use[q];
                added = true;
            }
        }
    }
    return use;
}

class PackingSearch {
public:
    PackingSearch(const MultiQuotient& h, long long max_nodes)
        : K_(h.K), rem_(h.mult), deg_(static_cast<std::size_t>(h.K), 0), max_nodes_(max_nodes) {
        for (int i = 0; i < K_; ++i)
            for (int j = i + 1; j < K_; ++j) {
                edges_.emplace_back(i, j);
                total_ += rem_[at(K_, i, j)];
                deg_[i] += rem_[at(K_, i, j)];
                deg_[j] += rem_[at(K_, i, j)];
            }
    }

    void seed_incumbent(std::vector<std::array<int, 3>> chosen) {
        best_ = static_cast<long long>(chosen.size());
        best_set_ = std::move(chosen);
    }

    void run() { dfs(0, 0); }

    long long best() const { return best_; }
    const std::vector<std::array<int, 3>>& best_set() const { return best_set_; }
    bool aborted() const { return aborted_; }
    long long nodes() const { return nodes_; }

private:
    void take(int a, int b, int delta) {
        rem_[at(K_, a, b)] += delta;
        rem_[at(K_, b, a)] += delta;
        deg_[a] += delta;
        deg_[b] += delta;
        total_ += delta;
    }

    long long bound() const {
        long long half = 0;
        for (int v = 0; v < K_; ++v) half += deg_[v] / 2;
        return std::min(total_ / 3, half / 3);
    }

    void dfs(std::size_t idx, int min_k) {
        if (aborted_) return;
        if (++nodes_ > max_nodes_) {
            aborted_ = true;
            return;
        }
        std::size_t e = idx;
        while (e < edges_.size() && rem_[at(K_, edges_[e].first, edges_[e].second)] == 0) ++e;
        if (e != idx) min_k = 0;
        const long long cur = static_cast<long long>(chosen_.size());
        if (e == edges_.size()) {
            if (cur > best_) {
                best_ = cur;
                best_set_ = chosen_;
            }
            return;
        }
        if (cur + bound() <= best_) return;
        auto [i, j] = edges_[e];
        for (int k = std::max(min_k, j + 1); k < K_; ++k) {
            if (rem_[at(K_, i, k)] == 0 || rem_[at(K_, j, k)] == 0) continue;
            take(i, j, -1);
            take(i, k, -1);
            take(j, k, -1);
            chosen_.push_back({i, j, k});
            dfs(e, k);
            chosen_.pop_back();
            take(i, j, 1);
            take(i, k, 1);
            take(j, k, 1);
            if (aborted_) return;
        }
        const int saved = rem_[at(K_, i, j)];
        take(i, j, -saved);
        dfs(e + 1, 0);
        take(i, j, saved);
    }

    int K_;
    std::vector<int> rem_;
    std::vector<long long> deg_;
    long long total_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::array<int, 3>> chosen_, best_set_;
    long long best_ = -1;
    long long nodes_ = 0, max_nodes_;
    bool aborted_ = false;
};

}  // namespace

PackingResult integral_triangle_packing(const MultiQuotient& hstar, const PackingOptions& opt) {
    if (opt.mode == PackingMode::exact && hstar.K > 12)
        throw InputError("exact packing supports at most 12 parts");
    PackingResult out;
    std::vector<double> w(hstar.mult.begin(), hstar.mult.end());
    out.fractional = triangle_lp(hstar.K, w).nu;
    const std::vector<Triangle> tris = all_triangles(hstar);
    std::vector<int> use = greedy_use(hstar, tris, opt.seed);
    if (opt.mode == PackingMode::exact) {
        std::vector<std::array<int, 3>> chosen;
        for (std::size_t q = 0; q < tris.size(); ++q)
            for (int r = 0; r < use[q]; ++r) chosen.push_back({tris[q].i, tris[q].j, tris[q].k});
        PackingSearch search(hstar, opt.max_nodes);
        search.seed_incumbent(std::move(chosen));
        search.run();
        out.optimal = !search.aborted();
        out.nodes = search.nodes();
        std::fill(use.begin(), use.end(), 0);
        for (const auto& t : search.best_set()) {
            const auto it = std::find(tris.begin(), tris.end(), Triangle{t[0], t[1], t[2]});
            ++use[static_cast<std::size_t>(it - tris.begin())];
        }
    }
    for (std::size_t q = 0; q < tris.size(); ++q)
        if (use[q] > 0) {
            out.packing.emplace_back(tris[q], use[q]);
            out.integral += use[q];
        }
    out.gap = out.fractional - static_cast<double>(out.integral);
    return out;
}

GenusReport genus_estimate(const Graph& g, const QuotientGraph& h, const TrianglePacking& p, double eps) {
    if (!(eps > 0) || eps >= 1) throw InputError("epsilon must lie in (0, 1)");
    if (h.K < 1) throw InputError("quotient has no parts");
    GenusReport r;
    r.n = g.order();
    r.e = static_cast<long long>(g.size());
    r.K = h.K;
    r.nu = p.nu;
    r.n1 = static_cast<double>(r.n) / h.K;
    r.core = static_cast<double>(r.e) - r.nu * r.n1 * r.n1;
    if (r.core < -1e-9 * std::max<double>(1.0, static_cast<double>(r.e)))
        throw InputError("packing value exceeds the edge count");
    r.core = std::max(0.0, r.core);
    r.estimate = (1 + eps) * r.core / 4;
    r.lower = (1 - eps) * r.core / 4;
    r.upper = r.estimate;
    r.nonorientable_lower = 2 * r.lower;
    r.nonorientable_upper = 2 * r.upper;
    return r;
}

}  // namespace gk
