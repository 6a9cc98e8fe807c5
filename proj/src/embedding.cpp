#include "genus_kit/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

namespace gk {

namespace {

// next_at_vertex[d] for dart d = (v -> u) is the dart (v -> w) where w
// follows u in the rotation at v.
std::vector<int> rotation_successors(const Graph& g, const RotationSystem& r) {
    std::vector<int> next(static_cast<std::size_t>(g.dart_count()));
    for (int v = 0; v < g.order(); ++v) {
        const auto& rot = r.rotation[v];
        const std::size_t d = rot.size();
        for (std::size_t i = 0; i < d; ++i)
            next[g.dart(v, rot[i])] = g.dart(v, rot[(i + 1) % d]);
    }
    return next;
}

std::vector<int> dart_tails(const Graph& g) {
    std::vector<int> tail(static_cast<std::size_t>(g.dart_count()));
    for (int v = 0; v < g.order(); ++v)
        for (int d = g.dart_offset(v); d < g.dart_offset(v + 1); ++d) tail[d] = v;
    return tail;
}

std::string cycle_text(const Cycle& c) {
    std::string s;
    for (int v : c.verts) s += (s.empty() ? "" : "->") + std::to_string(v);
    return s;
}

// Partial successor map on darts at each vertex induced by the family:
// a cycle entering v from a and leaving to b sets aux_next[dart(v,a)] =
// dart(v,b).
struct TipConstraints {
    std::vector<int> next;
    std::vector<int> cycle;
    std::vector<char> has_pred;
};

TipConstraints tip_constraints(const Graph& g, const CycleFamily& f) {
    TipConstraints t;
    const auto darts = static_cast<std::size_t>(g.dart_count());
    t.next.assign(darts, -1);
    t.cycle.assign(darts, -1);
    t.has_pred.assign(darts, 0);
    for (std::size_t c = 0; c < f.cycles.size(); ++c) {
        const auto& vs = f.cycles[c].verts;
        const std::size_t k = vs.size();
        for (std::size_t i = 0; i < k; ++i) {
            const int v = vs[i];
            const int a = vs[(i + k - 1) % k];
            const int b = vs[(i + 1) % k];
            const int da = g.dart(v, a), db = g.dart(v, b);
            t.next[da] = db;
            t.cycle[da] = static_cast<int>(c);
            t.has_pred[db] = 1;
        }
    }
    return t;
}

bool is_reverse_of(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    const std::size_t k = a.size();
    for (std::size_t shift = 0; shift < k; ++shift) {
        bool same = true;
        for (std::size_t i = 0; i < k && same; ++i) same = a[i] == b[(shift + k - i) % k];
        if (same) return true;
    }
    return false;
}

}  // namespace

void validate_rotation(const Graph& g, const RotationSystem& r) {
    if (static_cast<int>(r.rotation.size()) != g.order())
        throw MismatchError("rotation covers " + std::to_string(r.rotation.size()) +
                            " vertices, graph has " + std::to_string(g.order()));
    std::vector<char> seen;
    for (int v = 0; v < g.order(); ++v) {
        const auto& rot = r.rotation[v];
        if (static_cast<int>(rot.size()) != g.degree(v))
            throw MismatchError("rotation at vertex " + std::to_string(v) + " lists " +
                                std::to_string(rot.size()) + " neighbours, degree is " +
                                std::to_string(g.degree(v)));
        seen.assign(static_cast<std::size_t>(g.degree(v)), 0);
        for (int u : rot) {
            const int i = (u >= 0 && u < g.order()) ? g.neighbor_index(v, u) : -1;
            if (i < 0)
                throw MismatchError("rotation at vertex " + std::to_string(v) +
                                    " uses non-edge to " + std::to_string(u));
            if (seen[i]++)
                throw MismatchError("rotation at vertex " + std::to_string(v) +
                                    " repeats neighbour " + std::to_string(u));
        }
    }
}

RotationSystem identity_rotation(const Graph& g) {
    RotationSystem r;
    r.rotation.resize(static_cast<std::size_t>(g.order()));
    for (int v = 0; v < g.order(); ++v) {
        auto nb = g.neighbors(v);
        r.rotation[v].assign(nb.begin(), nb.end());
    }
    return r;
}

RotationSystem random_rotation(const Graph& g, std::uint64_t seed) {
    RotationSystem r = identity_rotation(g);
    Rng rng(seed);
    for (auto& rot : r.rotation) rng.shuffle(rot);
    return r;
}

RotationSystem parse_rotation(std::string_view text, const Graph& g) {
    RotationSystem r;
    r.rotation.resize(static_cast<std::size_t>(g.order()));
    std::vector<char> listed(static_cast<std::size_t>(g.order()), 0);
    int line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        const std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos || line[first] == '#') continue;
        const std::size_t colon = line.find(':');
        if (colon == std::string_view::npos) throw ParseError("missing ':'", line_no);
        std::vector<long long> nums;
        auto read_all = [&](std::string_view part, bool single) {
            std::size_t i = 0;
            while (i < part.size()) {
                while (i < part.size() && (part[i] == ' ' || part[i] == '\t' || part[i] == '\r'))
                    ++i;
                if (i >= part.size()) break;
                long long x = 0;
                auto [ptr, ec] = std::from_chars(part.data() + i, part.data() + part.size(), x);
                if (ec != std::errc() || (ptr != part.data() + part.size() && *ptr != ' ' &&
                                          *ptr != '\t' && *ptr != '\r'))
                    throw ParseError("malformed integer", line_no);
                nums.push_back(x);
                i = static_cast<std::size_t>(ptr - part.data());
            }
            if (single && nums.size() != 1) throw ParseError("expected one vertex before ':'", line_no);
        };
        read_all(line.substr(0, colon), true);
        const long long v = nums[0];
        nums.clear();
        read_all(line.substr(colon + 1), false);
        if (v < 0 || v >= g.order())
            throw MismatchError("rotation names unknown vertex " + std::to_string(v));
        if (listed[v]++) throw MismatchError("vertex " + std::to_string(v) + " listed twice");
        auto& rot = r.rotation[v];
        for (long long u : nums) {
            if (u < 0 || u >= g.order())
                throw MismatchError("rotation names unknown vertex " + std::to_string(u));
            rot.push_back(static_cast<int>(u));
        }
    }
    validate_rotation(g, r);
    return r;
}

RotationSystem load_rotation(const std::string& path, const Graph& g) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open rotation file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_rotation(ss.str(), g);
}

std::string format_rotation(const RotationSystem& r) {
    std::string out;
    for (std::size_t v = 0; v < r.rotation.size(); ++v) {
        out += std::to_string(v) + ":";
        for (int u : r.rotation[v]) out += " " + std::to_string(u);
        out += "\n";
    }
    return out;
}

FaceCensus trace_faces(const Graph& g, const RotationSystem& r, bool keep_faces) {
    validate_rotation(g, r);
    const std::vector<int> next = rotation_successors(g, r);
    const std::vector<int> rev = g.reverse_darts();
    const std::vector<int> tail = dart_tails(g);
    int comp_count = 0;
    const std::vector<int> label = g.component_labels(&comp_count);

    FaceCensus c;
    c.components.resize(static_cast<std::size_t>(comp_count));
    for (int v = 0; v < g.order(); ++v) ++c.components[label[v]].n;
    for (const Edge& e : g.edges()) ++c.components[label[e.u]].e;
    c.f_k.assign(4, 0);

    std::vector<char> used(static_cast<std::size_t>(g.dart_count()), 0);
    for (int start = 0; start < g.dart_count(); ++start) {
        if (used[start]) continue;
        std::vector<int> walk;
        std::size_t len = 0;
        int d = start;
        do {
            used[d] = 1;
            if (keep_faces) walk.push_back(tail[d]);
            ++len;
            d = next[rev[d]];
        } while (d != start);
        if (c.f_k.size() <= len) c.f_k.resize(len + 1, 0);
        ++c.f_k[len];
        ++c.components[label[tail[start]]].f;
        if (keep_faces) c.faces.push_back(std::move(walk));
    }
    for (int v = 0; v < g.order(); ++v)
        if (g.degree(v) == 0) ++c.components[label[v]].f;

    for (auto& comp : c.components) {
        const long long twice = 2 - comp.n + comp.e - comp.f;
        if (twice < 0 || twice % 2 != 0)
            throw std::logic_error("face tracing produced a non-integral genus");
        comp.genus = twice / 2;
        c.genus += comp.genus;
        c.f += comp.f;
    }
    return c;
}

long long embedding_genus(const Graph& g, const RotationSystem& r) {
    return trace_faces(g, r, false).genus;
}

void validate_family(const Graph& g, const CycleFamily& f) {
    std::vector<char> used(static_cast<std::size_t>(g.dart_count()), 0);
    std::vector<int> mark(static_cast<std::size_t>(g.order()), -1);
    for (std::size_t c = 0; c < f.cycles.size(); ++c) {
        const auto& vs = f.cycles[c].verts;
        const std::size_t k = vs.size();
        if (k < 3) throw MismatchError("cycle shorter than 3: " + cycle_text(f.cycles[c]));
        for (std::size_t i = 0; i < k; ++i) {
            const int a = vs[i], b = vs[(i + 1) % k];
            if (a < 0 || a >= g.order()) throw MismatchError("cycle vertex out of range");
            if (mark[a] == static_cast<int>(c))
                throw MismatchError("cycle repeats a vertex: " + cycle_text(f.cycles[c]));
            mark[a] = static_cast<int>(c);
            if (b < 0 || b >= g.order()) throw MismatchError("cycle vertex out of range");
            const int d = g.dart(a, b);
            if (d < 0) throw MismatchError("cycle uses a non-edge: " + cycle_text(f.cycles[c]));
            if (used[d]++) throw MismatchError("cycles share the arc " + std::to_string(a) + "->" +
                                               std::to_string(b));
        }
    }
}

void validate_family(const Graph& g, const Digraph& d, const CycleFamily& f) {
    validate_family(g, f);
    for (const Cycle& c : f.cycles) {
        const std::size_t k = c.verts.size();
        for (std::size_t i = 0; i < k; ++i) {
            int a = c.verts[i], b = c.verts[(i + 1) % k];
            if (c.reverse) std::swap(a, b);
            if (d.find_arc(a, b) < 0)
                throw MismatchError(std::string("cycle not in the ") +
                                    (c.reverse ? "reversed " : "") + "digraph: " + cycle_text(c));
        }
    }
}

BlossomReport detect_blossoms(const Graph& g, const CycleFamily& f) {
    validate_family(g, f);
    const TipConstraints t = tip_constraints(g, f);
    const std::vector<int> tail = dart_tails(g);
    BlossomReport report;
    std::vector<char> seen(t.next.size(), 0);
    for (int start = 0; start < static_cast<int>(t.next.size()); ++start) {
        if (seen[start] || t.next[start] < 0) continue;
        int d = start;
        bool closed = false;
        while (d >= 0 && !seen[d]) {
            seen[d] = 1;
            d = t.next[d];
            if (d == start) {
                closed = true;
                break;
            }
        }
        if (!closed) continue;
        Blossom b;
        b.center = tail[start];
        d = start;
        do {
            b.tips.push_back(g.dart_head(d));
            b.cycles.push_back(t.cycle[d]);
            d = t.next[d];
        } while (d != start);
        const std::size_t len = b.cycles.size();
        if (len == 1)
            b.simple = false;
        else if (len == 2)
            b.simple = !is_reverse_of(f.cycles[b.cycles[0]].verts, f.cycles[b.cycles[1]].verts);
        if (report.by_length.size() <= len) report.by_length.resize(len + 1, 0);
        ++report.by_length[len];
        report.blossoms.push_back(std::move(b));
    }
    return report;
}

BrokenFamily break_blossoms(const Graph& g, const CycleFamily& f) {
    const BlossomReport report = detect_blossoms(g, f);
    std::vector<char> removed(f.cycles.size(), 0);
    BrokenFamily out;
    for (const Blossom& b : report.blossoms) {
        bool broken = false;
        for (int c : b.cycles) broken = broken || removed[c];
        if (broken) continue;
        int victim = b.cycles[0];
        for (int c : b.cycles) {
            const auto len = f.cycles[c].verts.size(), best = f.cycles[victim].verts.size();
            if (len > best || (len == best && c < victim)) victim = c;
        }
        removed[victim] = 1;
        out.removed.push_back(victim);
    }
    std::sort(out.removed.begin(), out.removed.end());
    for (std::size_t c = 0; c < f.cycles.size(); ++c)
        if (!removed[c]) out.family.cycles.push_back(f.cycles[c]);
    return out;
}

RotationSystem assemble_rotation(const Graph& g, const CycleFamily& f, std::uint64_t seed) {
    const BlossomReport report = detect_blossoms(g, f);
    if (!report.empty()) {
        const Blossom& b = report.blossoms.front();
        throw BlossomError("cycle family contains " + std::to_string(report.blossoms.size()) +
                           " blossom(s); first has center " + std::to_string(b.center) +
                           " and length " + std::to_string(b.cycles.size()));
    }
    const TipConstraints t = tip_constraints(g, f);
    RotationSystem r;
    r.rotation.resize(static_cast<std::size_t>(g.order()));
    Rng rng(seed);
    std::vector<std::vector<int>> chains;
    for (int v = 0; v < g.order(); ++v) {
        chains.clear();
        for (int d = g.dart_offset(v); d < g.dart_offset(v + 1); ++d) {
            if (t.has_pred[d]) continue;
            std::vector<int> chain;
            for (int x = d; x >= 0; x = t.next[x]) chain.push_back(g.dart_head(x));
            chains.push_back(std::move(chain));
        }
        rng.shuffle(chains);
        auto& rot = r.rotation[v];
        for (const auto& chain : chains) rot.insert(rot.end(), chain.begin(), chain.end());
        if (static_cast<int>(rot.size()) != g.degree(v))
            throw std::logic_error("rotation assembly lost a neighbour");
    }
    return r;
}

FaceCheck verify_faces(const Graph& g, const RotationSystem& r, const CycleFamily& f) {
    validate_rotation(g, r);
    const std::vector<int> next = rotation_successors(g, r);
    const std::vector<int> rev = g.reverse_darts();
    FaceCheck out;
    for (std::size_t c = 0; c < f.cycles.size(); ++c) {
        const auto& vs = f.cycles[c].verts;
        const std::size_t k = vs.size();
        bool ok = k >= 3;
        std::vector<int> darts;
        for (std::size_t i = 0; i < k && ok; ++i) {
            const int a = vs[i], b = vs[(i + 1) % k];
            const bool in_range = a >= 0 && b >= 0 && a < g.order() && b < g.order();
            const int d = in_range ? g.dart(a, b) : -1;
            ok = d >= 0;
            darts.push_back(d);
        }
        for (std::size_t i = 0; i < k && ok; ++i) ok = next[rev[darts[i]]] == darts[(i + 1) % k];
        if (!ok) {
            out.ok = false;
            out.missing.push_back(static_cast<int>(c));
        }
    }
    return out;
}

}  // namespace gk
