#include "genus_kit/exact_genus.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace gk {

namespace {

using Clock = std::chrono::steady_clock;

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

long long ceil_div(long long a, long long b) {
    return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

// Face count of a connected graph given per-dart rotation successors.
long long count_faces(const std::vector<int>& next, const std::vector<int>& rev,
                      std::vector<char>& used) {
    std::fill(used.begin(), used.end(), 0);
    long long faces = 0;
    for (int s = 0; s < static_cast<int>(next.size()); ++s) {
        if (used[s]) continue;
        ++faces;
        int d = s;
        do {
            used[d] = 1;
            d = next[rev[d]];
        } while (d != s);
    }
    return faces;
}

struct ComponentSearch {
    const Graph& h;
    const SearchBudget& budget;
    Clock::time_point deadline;
    std::vector<int> rev;
    long long n = 0, e = 0;
    long long max_faces = 0;  // faces allowed by the Euler lower bound
    int min_face_len = 3;

    long long best_faces = -1;
    RotationSystem best;
    long long nodes = 0;
    bool timed_out = false;

    ComponentSearch(const Graph& graph, const SearchBudget& b, Clock::time_point dl)
        : h(graph), budget(b), deadline(dl), rev(graph.reverse_darts()) {
        n = h.order();
        e = static_cast<long long>(h.size());
        max_faces = 2 - 2 * euler_lower_bound(h) - n + e;
        min_face_len = is_triangle_free(h) ? 4 : 3;
    }

    std::vector<int> successors(const RotationSystem& r) const {
        std::vector<int> next(static_cast<std::size_t>(h.dart_count()));
        for (int v = 0; v < h.order(); ++v) {
            const auto& rot = r.rotation[v];
            for (std::size_t i = 0; i < rot.size(); ++i)
                next[h.dart(v, rot[i])] = h.dart(v, rot[(i + 1) % rot.size()]);
        }
        return next;
    }

    void offer(const RotationSystem& r, long long faces) {
        if (faces > best_faces) {
            best_faces = faces;
            best = r;
        }
    }

    bool out_of_time() {
        if ((nodes & 1023) == 0 && Clock::now() > deadline) timed_out = true;
        return timed_out;
    }

    void climb(long long steps, std::uint64_t seed) {
        Rng rng(seed);
        RotationSystem cur = random_rotation(h, rng.next());
        std::vector<int> next = successors(cur);
        std::vector<char> used(next.size());
        long long faces = count_faces(next, rev, used);
        offer(cur, faces);
        std::vector<int> movable;
        for (int v = 0; v < h.order(); ++v)
            if (h.degree(v) >= 3) movable.push_back(v);
        if (movable.empty()) return;
        auto refresh = [&](int v) {
            const auto& rot = cur.rotation[v];
            for (std::size_t i = 0; i < rot.size(); ++i)
                next[h.dart(v, rot[i])] = h.dart(v, rot[(i + 1) % rot.size()]);
        };
        for (long long step = 0; step < steps && best_faces < max_faces; ++step) {
            if ((step & 255) == 0 && Clock::now() > deadline) {
                timed_out = true;
                break;
            }
            const int v = movable[rng.below(movable.size())];
            auto& rot = cur.rotation[v];
            const std::size_t i = rng.below(rot.size());
            std::size_t j = rng.below(rot.size() - 1);
            if (j >= i) ++j;
            std::swap(rot[i], rot[j]);
            refresh(v);
            const long long f = count_faces(next, rev, used);
            if (f >= faces) {
                faces = f;
                offer(cur, faces);
            } else {
                std::swap(rot[i], rot[j]);
                refresh(v);
            }
        }
    }

    // Partial face tracing state: darts are chained by the successor rule as
    // soon as the head vertex has a rotation. For every path endpoint,
    // other_end gives the opposite endpoint and len the path length.
    std::vector<int> other_end, len;
    std::vector<std::pair<int*, int>> undo;
    long long closed_faces = 0, closed_darts = 0;
    std::vector<int> order;
    std::vector<std::vector<int>> rotation;
    int first_branching = -1;

    void set(std::vector<int>& a, int i, int value) {
        undo.emplace_back(&a[i], a[i]);
        a[i] = value;
    }

    void link(int x, int y) {
        const int head = other_end[x];
        if (head == y) {
            ++closed_faces;
            closed_darts += len[x];
            return;
        }
        const int tail = other_end[y];
        const int total = len[x] + len[y];
        set(other_end, head, tail);
        set(other_end, tail, head);
        set(len, head, total);
        set(len, tail, total);
    }

    void place(int v, const std::vector<int>& rot) {
        const std::size_t d = rot.size();
        for (std::size_t i = 0; i < d; ++i)
            link(rev[h.dart(v, rot[i])], h.dart(v, rot[(i + 1) % d]));
    }

    void rollback(std::size_t mark) {
        while (undo.size() > mark) {
            *undo.back().first = undo.back().second;
            undo.pop_back();
        }
    }

    void dfs(std::size_t level) {
        ++nodes;
        if (out_of_time() || best_faces >= max_faces) return;
        const long long open = 2 * e - closed_darts;
        if (closed_faces + open / min_face_len <= best_faces) return;
        if (level == order.size()) {
            RotationSystem r;
            r.rotation = rotation;
            offer(r, closed_faces);
            return;
        }
        const int v = order[level];
        auto nb = h.neighbors(v);
        std::vector<int> rest(nb.begin() + 1, nb.end());
        const bool mirror_cut = static_cast<int>(level) == first_branching && rest.size() >= 2;
        do {
            if (mirror_cut && rest.front() > rest.back()) continue;
            auto& rot = rotation[v];
            rot.clear();
            rot.push_back(nb[0]);
            rot.insert(rot.end(), rest.begin(), rest.end());
            const std::size_t mark = undo.size();
            const long long cf = closed_faces, cd = closed_darts;
            place(v, rot);
            dfs(level + 1);
            rollback(mark);
            closed_faces = cf;
            closed_darts = cd;
            if (timed_out || best_faces >= max_faces) return;
        } while (std::next_permutation(rest.begin(), rest.end()));
    }

    void exhaustive() {
        const int darts = h.dart_count();
        other_end.resize(static_cast<std::size_t>(darts));
        std::iota(other_end.begin(), other_end.end(), 0);
        len.assign(static_cast<std::size_t>(darts), 1);
        rotation.assign(static_cast<std::size_t>(h.order()), {});
        std::vector<int> branching;
        std::vector<char> placed(static_cast<std::size_t>(h.order()), 0);
        for (int v = 0; v < h.order(); ++v) {
            if (h.degree(v) <= 2) {
                order.push_back(v);
                placed[v] = 1;
            } else {
                branching.push_back(v);
            }
        }
        first_branching = branching.empty() ? -1 : static_cast<int>(order.size());
        while (!branching.empty()) {
            auto score = [&](int v) {
                int p = 0;
                for (int u : h.neighbors(v)) p += placed[u];
                return std::make_tuple(h.degree(v), p, -v);
            };
            auto it = std::max_element(branching.begin(), branching.end(),
                                       [&](int a, int b) { return score(a) < score(b); });
            order.push_back(*it);
            placed[*it] = 1;
            branching.erase(it);
        }
        dfs(0);
    }
};

}  // namespace

double rotation_count(const Graph& g) {
    double total = 1.0;
    for (int v = 0; v < g.order(); ++v)
        if (g.degree(v) >= 3) total *= factorial(g.degree(v) - 1);
    return total;
}

bool is_triangle_free(const Graph& g) {
    for (const Edge& e : g.edges())
        if (codegree(g, e.u, e.v) > 0) return false;
    return true;
}

long long euler_lower_bound(const Graph& g) {
    int count = 0;
    const std::vector<int> label = g.component_labels(&count);
    std::vector<long long> n(count, 0), e(count, 0);
    std::vector<char> has_triangle(count, 0);
    for (int v = 0; v < g.order(); ++v) ++n[label[v]];
    for (const Edge& ed : g.edges()) {
        ++e[label[ed.u]];
        if (!has_triangle[label[ed.u]] && codegree(g, ed.u, ed.v) > 0) has_triangle[label[ed.u]] = 1;
    }
    long long total = 0;
    for (int c = 0; c < count; ++c) {
        if (e[c] < 3) continue;
        const long long b = has_triangle[c] ? ceil_div(e[c] - 3 * n[c] + 6, 6)
                                            : ceil_div(e[c] - 2 * n[c] + 4, 4);
        total += std::max(0LL, b);
    }
    return total;
}

ExactResult exact_genus(const Graph& g, const SearchBudget& budget) {
    if (!(budget.max_rotation_count > 0) || !(budget.max_seconds > 0))
        throw InputError("search budget caps must be positive");
    const auto deadline =
        Clock::now() + std::chrono::duration_cast<Clock::duration>(
                           std::chrono::duration<double>(std::min(budget.max_seconds, 1e7)));
    ExactResult result;
    result.search_space = rotation_count(g);
    result.optimal = true;
    result.certificate.rotation.resize(static_cast<std::size_t>(g.order()));

    int count = 0;
    const std::vector<int> label = g.component_labels(&count);
    std::vector<std::vector<int>> members(static_cast<std::size_t>(count));
    for (int v = 0; v < g.order(); ++v) members[label[v]].push_back(v);

    for (int c = 0; c < count; ++c) {
        const auto& vs = members[c];
        const Graph h = g.induced(vs);
        ComponentSearch search(h, budget, deadline);
        const std::uint64_t seed = derive_seed(budget.seed, static_cast<std::uint64_t>(c));
        const double space = rotation_count(h);
        const bool trivial = space <= 1.0;
        if (trivial) {
            RotationSystem r = identity_rotation(h);
            search.offer(r, trace_faces(h, r, false).f);
        } else if (budget.mode == SearchMode::exhaustive && space <= budget.max_rotation_count) {
            search.climb(std::min<long long>(budget.max_climb_steps, 20 * search.e + 200), seed);
            search.timed_out = false;
            search.exhaustive();
            if (search.timed_out) {
                result.optimal = false;
                result.budget_exceeded = true;
            }
        } else {
            search.climb(budget.max_climb_steps, seed);
            if (search.best_faces < search.max_faces) {
                result.optimal = false;
                result.budget_exceeded = budget.mode == SearchMode::exhaustive;
            }
        }
        result.nodes += search.nodes;
        result.genus += (2 - search.n + search.e - search.best_faces) / 2;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            auto& rot = result.certificate.rotation[vs[i]];
            for (int u : search.best.rotation[i]) rot.push_back(vs[u]);
        }
    }
    return result;
}

}  // namespace gk
