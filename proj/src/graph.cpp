#include "genus_kit/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

namespace gk {

namespace {

void build_csr(int n, const std::vector<Edge>& edges, std::vector<int>& offset,
               std::vector<int>& adj, std::vector<int>& adj_edge) {
    offset.assign(static_cast<std::size_t>(n) + 1, 0);
    for (const Edge& e : edges) {
        ++offset[e.u + 1];
        ++offset[e.v + 1];
    }
    for (int v = 0; v < n; ++v) offset[v + 1] += offset[v];
    adj.assign(static_cast<std::size_t>(offset[n]), 0);
    adj_edge.assign(adj.size(), 0);
    std::vector<int> fill(offset.begin(), offset.end() - 1);
    for (std::size_t id = 0; id < edges.size(); ++id) {
        const Edge& e = edges[id];
        adj[fill[e.u]] = e.v;
        adj_edge[fill[e.u]++] = static_cast<int>(id);
        adj[fill[e.v]] = e.u;
        adj_edge[fill[e.v]++] = static_cast<int>(id);
    }
    for (int v = 0; v < n; ++v) {
        const int b = offset[v], end = offset[v + 1];
        std::vector<std::pair<int, int>> tmp;
        tmp.reserve(static_cast<std::size_t>(end - b));
        for (int i = b; i < end; ++i) tmp.emplace_back(adj[i], adj_edge[i]);
        std::sort(tmp.begin(), tmp.end());
        for (int i = b; i < end; ++i) {
            adj[i] = tmp[i - b].first;
            adj_edge[i] = tmp[i - b].second;
        }
    }
}

}  // namespace

Graph::Graph(int n, std::span<const std::pair<int, int>> edges) : n_(n) {
    if (n < 0) throw InputError("negative vertex count");
    edges_.reserve(edges.size());
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || a >= n || b >= n)
            throw InputError("edge endpoint out of range: " + std::to_string(a) + " " +
                             std::to_string(b));
        if (a == b) throw InputError("loop at vertex " + std::to_string(a));
        edges_.push_back(a < b ? Edge{a, b} : Edge{b, a});
    }
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& x, const Edge& y) { return x.u != y.u ? x.u < y.u : x.v < y.v; });
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    build_csr(n_, edges_, offset_, adj_, adj_edge_);
}

int Graph::neighbor_index(int v, int u) const {
    auto nb = neighbors(v);
    auto it = std::lower_bound(nb.begin(), nb.end(), u);
    if (it == nb.end() || *it != u) return -1;
    return static_cast<int>(it - nb.begin());
}

int Graph::edge_id(int u, int v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) return -1;
    const int i = neighbor_index(u, v);
    return i < 0 ? -1 : incident_edges(u)[static_cast<std::size_t>(i)];
}

std::vector<int> Graph::reverse_darts() const {
    std::vector<int> rev(adj_.size());
    for (int u = 0; u < n_; ++u)
        for (int d = offset_[u]; d < offset_[u + 1]; ++d) rev[d] = dart(adj_[d], u);
    return rev;
}

std::vector<int> Graph::component_labels(int* count) const {
    std::vector<int> label(static_cast<std::size_t>(n_), -1);
    std::vector<int> stack;
    int c = 0;
    for (int s = 0; s < n_; ++s) {
        if (label[s] >= 0) continue;
        label[s] = c;
        stack.push_back(s);
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int w : neighbors(v)) {
                if (label[w] < 0) {
                    label[w] = c;
                    stack.push_back(w);
                }
            }
        }
        ++c;
    }
    if (count) *count = c;
    return label;
}

Graph Graph::edge_subgraph(std::span<const int> edge_ids) const {
    std::vector<std::pair<int, int>> list;
    list.reserve(edge_ids.size());
    for (int id : edge_ids) list.emplace_back(edge(id).u, edge(id).v);
    return Graph(n_, list);
}

Graph Graph::induced(std::span<const int> vertices) const {
    std::vector<int> local(static_cast<std::size_t>(n_), -1);
    for (std::size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = static_cast<int>(i);
    std::vector<std::pair<int, int>> list;
    for (const Edge& e : edges_)
        if (local[e.u] >= 0 && local[e.v] >= 0) list.emplace_back(local[e.u], local[e.v]);
    return Graph(static_cast<int>(vertices.size()), list);
}

Graph Graph::relabeled(std::span<const int> new_label) const {
    std::vector<std::pair<int, int>> list;
    list.reserve(edges_.size());
    for (const Edge& e : edges_) list.emplace_back(new_label[e.u], new_label[e.v]);
    return Graph(n_, list);
}

Graph parse_graph(std::string_view text) {
    int line_no = 0;
    bool have_header = false;
    long long n = 0, m = 0;
    std::vector<std::pair<int, int>> edges;
    std::size_t pos = 0;
    auto parse_ints = [&](std::string_view line, long long* out, int want) {
        int got = 0;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
            if (i >= line.size()) break;
            if (got == want) throw ParseError("too many fields", line_no);
            long long value = 0;
            auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + line.size(), value);
            if (ec != std::errc() || (ptr != line.data() + line.size() && *ptr != ' ' &&
                                      *ptr != '\t' && *ptr != '\r'))
                throw ParseError("malformed integer", line_no);
            out[got++] = value;
            i = static_cast<std::size_t>(ptr - line.data());
        }
        return got;
    };
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos) {
            if (end == text.size()) break;
            continue;
        }
        if (line[first] == '#') continue;
        long long vals[2];
        if (parse_ints(line, vals, 2) != 2) throw ParseError("expected two integers", line_no);
        if (!have_header) {
            n = vals[0];
            m = vals[1];
            if (n < 0 || m < 0 || n > (1LL << 30)) throw ParseError("bad header", line_no);
            have_header = true;
            edges.reserve(static_cast<std::size_t>(std::min<long long>(m, 1LL << 26)));
        } else {
            if (vals[0] < 0 || vals[1] < 0 || vals[0] >= n || vals[1] >= n)
                throw ParseError("vertex out of range", line_no);
            if (vals[0] == vals[1]) throw ParseError("loop edge", line_no);
            edges.emplace_back(static_cast<int>(vals[0]), static_cast<int>(vals[1]));
        }
        if (end == text.size()) break;
    }
    if (!have_header) throw ParseError("missing header", line_no);
    if (static_cast<long long>(edges.size()) != m)
        throw ParseError("header announces " + std::to_string(m) + " edges, found " +
                             std::to_string(edges.size()),
                         line_no);
    return Graph(static_cast<int>(n), edges);
}

Graph load_graph(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open graph file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_graph(ss.str());
}

std::string format_graph(const Graph& g) {
    std::string out = std::to_string(g.order()) + " " + std::to_string(g.size()) + "\n";
    for (const Edge& e : g.edges()) out += std::to_string(e.u) + " " + std::to_string(e.v) + "\n";
    return out;
}

Digraph::Digraph(int n, std::vector<Arc> arcs) : n_(n), arcs_(std::move(arcs)) {
    out_off_.assign(static_cast<std::size_t>(n) + 1, 0);
    in_off_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (const Arc& a : arcs_) {
        if (a.tail < 0 || a.head < 0 || a.tail >= n || a.head >= n || a.tail == a.head)
            throw InputError("invalid arc");
        ++out_off_[a.tail + 1];
        ++in_off_[a.head + 1];
    }
    for (int v = 0; v < n; ++v) {
        out_off_[v + 1] += out_off_[v];
        in_off_[v + 1] += in_off_[v];
    }
    out_.resize(arcs_.size());
    in_.resize(arcs_.size());
    std::vector<int> fo(out_off_.begin(), out_off_.end() - 1), fi(in_off_.begin(), in_off_.end() - 1);
    for (std::size_t id = 0; id < arcs_.size(); ++id) {
        out_[fo[arcs_[id].tail]++] = static_cast<int>(id);
        in_[fi[arcs_[id].head]++] = static_cast<int>(id);
    }
    for (int v = 0; v < n; ++v) {
        std::sort(out_.begin() + out_off_[v], out_.begin() + out_off_[v + 1],
                  [&](int a, int b) { return arcs_[a].head < arcs_[b].head; });
        std::sort(in_.begin() + in_off_[v], in_.begin() + in_off_[v + 1],
                  [&](int a, int b) { return arcs_[a].tail < arcs_[b].tail; });
        for (int i = out_off_[v] + 1; i < out_off_[v + 1]; ++i)
            if (arcs_[out_[i]].head == arcs_[out_[i - 1]].head) throw InputError("parallel arcs");
    }
}

int Digraph::find_arc(int tail, int head) const {
    auto out = out_arcs(tail);
    auto it = std::lower_bound(out.begin(), out.end(), head,
                               [&](int a, int h) { return arcs_[a].head < h; });
    if (it == out.end() || arcs_[*it].head != head) return -1;
    return *it;
}

Digraph Digraph::reversed() const {
    std::vector<Arc> rev;
    rev.reserve(arcs_.size());
    for (const Arc& a : arcs_) rev.push_back({a.head, a.tail, a.edge});
    return Digraph(n_, std::move(rev));
}

Digraph orient_edges(const Graph& g, std::span<const int> edge_ids, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Arc> arcs;
    arcs.reserve(edge_ids.size());
    for (int id : edge_ids) {
        const Edge& e = g.edge(id);
        if (rng.coin())
            arcs.push_back({e.u, e.v, id});
        else
            arcs.push_back({e.v, e.u, id});
    }
    return Digraph(g.order(), std::move(arcs));
}

Digraph random_orientation(const Graph& g, std::uint64_t seed) {
    std::vector<int> ids(g.size());
    std::iota(ids.begin(), ids.end(), 0);
    return orient_edges(g, ids, seed);
}

void check_fractions(std::span<const double> fractions) {
    if (fractions.empty()) throw InputError("no fractions given");
    double sum = 0.0;
    for (double c : fractions) {
        if (!(c >= 0.0)) throw InputError("negative split fraction");
        sum += c;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw InputError("split fractions must sum to 1");
}

Pattern parse_pattern(std::string_view name) {
    if (name == "K2") return Pattern::K2;
    if (name == "P3") return Pattern::P3;
    if (name == "K3") return Pattern::K3;
    if (name == "C4") return Pattern::C4;
    if (name == "K4minus") return Pattern::K4minus;
    if (name == "Q6") return Pattern::Q6;
    throw InputError("unsupported pattern: " + std::string(name));
}

std::string_view pattern_name(Pattern p) {
    switch (p) {
        case Pattern::K2: return "K2";
        case Pattern::P3: return "P3";
        case Pattern::K3: return "K3";
        case Pattern::C4: return "C4";
        case Pattern::K4minus: return "K4minus";
        case Pattern::Q6: return "Q6";
    }
    return "?";
}

int pattern_order(Pattern p) {
    switch (p) {
        case Pattern::K2: return 2;
        case Pattern::P3: return 3;
        case Pattern::K3: return 3;
        case Pattern::C4: return 4;
        case Pattern::K4minus: return 4;
        case Pattern::Q6: return 6;
    }
    return 0;
}

long long codegree(const Graph& g, int u, int v) {
    auto a = g.neighbors(u), b = g.neighbors(v);
    long long c = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j])
            ++i;
        else if (a[i] > b[j])
            ++j;
        else {
            ++c;
            ++i;
            ++j;
        }
    }
    return c;
}

namespace {

// Fills row[x] = codeg(u, x) for every x reachable in two steps and records
// touched entries so the row can be reset in O(touched).
void codegree_row(const Graph& g, int u, std::vector<long long>& row, std::vector<int>& touched) {
    for (int x : touched) row[x] = 0;
    touched.clear();
    for (int a : g.neighbors(u)) {
        for (int x : g.neighbors(a)) {
            if (row[x] == 0) touched.push_back(x);
            ++row[x];
        }
    }
}

}  // namespace

HomCounts hom_count(Pattern pattern, const Graph& g) {
    const int n = g.order();
    HomCounts out{pattern, 0.0, 0.0};
    long double count = 0.0L;
    switch (pattern) {
        case Pattern::K2:
            count = 2.0L * static_cast<long double>(g.size());
            break;
        case Pattern::P3:
            for (int v = 0; v < n; ++v) count += static_cast<long double>(g.degree(v)) * g.degree(v);
            break;
        case Pattern::K3: {
            long long tri = 0;
            for (const Edge& e : g.edges()) {
                auto a = g.neighbors(e.u), b = g.neighbors(e.v);
                std::size_t i = 0, j = 0;
                while (i < a.size() && j < b.size()) {
                    if (a[i] < b[j])
                        ++i;
                    else if (a[i] > b[j])
                        ++j;
                    else {
                        if (a[i] > e.v) ++tri;
                        ++i;
                        ++j;
                    }
                }
            }
            count = 6.0L * static_cast<long double>(tri);
            break;
        }
        case Pattern::C4:
        case Pattern::K4minus:
        case Pattern::Q6: {
            std::vector<long long> row(static_cast<std::size_t>(n), 0);
            std::vector<int> touched;
            for (int u = 0; u < n; ++u) {
                codegree_row(g, u, row, touched);
                if (pattern == Pattern::C4) {
                    for (int x : touched) count += static_cast<long double>(row[x]) * row[x];
                } else if (pattern == Pattern::K4minus) {
                    for (int v : g.neighbors(u)) count += static_cast<long double>(row[v]) * row[v];
                } else {
                    // walks u-a-b-v of length 3 for each neighbour v of u
                    for (int v : g.neighbors(u)) {
                        long double w3 = 0.0L;
                        for (int b : g.neighbors(v)) w3 += static_cast<long double>(row[b]);
                        count += w3 * w3;
                    }
                }
            }
            break;
        }
    }
    out.count = static_cast<double>(count);
    const double k = pattern_order(pattern);
    out.density = n > 0 ? out.count / std::pow(static_cast<double>(n), k) : 0.0;
    return out;
}

CodegreeStats codegree_stats(const Graph& g, double p, double lambda) {
    CodegreeStats s;
    s.p = p;
    s.lambda = lambda;
    const int n = g.order();
    s.codeg.assign(g.size(), 0);
    s.p3.assign(g.size(), 0);
    s.balanced.assign(g.size(), false);
    std::vector<long long> row(static_cast<std::size_t>(n), 0);
    std::vector<int> touched;
    const double target = p * p * n;
    double dev = 0.0;
    for (int v = 0; v < n; ++v) {
        codegree_row(g, v, row, touched);
        auto nb = g.neighbors(v);
        auto ids = g.incident_edges(v);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            const int u = nb[k];
            const int id = ids[k];
            if (v < u) {
                s.codeg[id] = row[u];
                dev += std::abs(static_cast<double>(row[u]) - target);
                const double c = static_cast<double>(row[u]);
                s.balanced[id] = c >= (1.0 - lambda) * target && c <= (1.0 + lambda) * target;
                if (!s.balanced[id]) ++s.unbalanced_count;
            }
            // paths u-a-b-v with a in N(u)\{v}, b a common neighbour of a and v
            // other than u: codeg(v, a) - 1 each
            if (u < v) {
                long long paths = 0;
                for (int a : g.neighbors(u)) {
                    if (a == v) continue;
                    paths += row[a] - 1;
                }
                s.p3[id] = paths;
            }
        }
    }
    s.deviation_sum = 2.0 * dev;
    return s;
}

Graph random_graph(int n, double p, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.uniform() < p) edges.emplace_back(u, v);
    return Graph(n, edges);
}

Graph random_bipartite_graph(int a, int b, double p, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < a; ++u)
        for (int v = 0; v < b; ++v)
            if (rng.uniform() < p) edges.emplace_back(u, a + v);
    return Graph(a + b, edges);
}

Graph complete_graph(int n) { return random_graph(n, 2.0, 0); }

Graph complete_bipartite_graph(int a, int b) { return random_bipartite_graph(a, b, 2.0, 0); }

Graph cycle_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return Graph(n, edges);
}

}  // namespace gk
