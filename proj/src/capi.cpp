#include "genus_kit/genus_kit.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "genus_kit/errors.hpp"
#include "genus_kit/exact_genus.hpp"
#include "genus_kit/pipeline.hpp"

struct gk_graph {
    gk::Graph g;
};

struct gk_rotation {
    gk::RotationSystem r;
};

namespace {

thread_local std::string last_error;

template <class F>
gk_status guard(F&& f) {
    try {
        f();
        last_error.clear();
        return GK_OK;
    } catch (const gk::MismatchError& e) {
        last_error = e.what();
        return GK_ERR_MISMATCH;
    } catch (const gk::InputError& e) {
        last_error = e.what();
        return GK_ERR_INPUT;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return GK_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return GK_ERR_INTERNAL;
    }
}

gk_status fail(gk_status s, const char* msg) {
    last_error = msg;
    return s;
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

gk::Config to_config(const gk_config* c) {
    gk::Config out;
    if (!c) return out;
    out.epsilon = c->epsilon;
    out.eps_reg = c->eps_reg;
    out.eps1 = c->eps1;
    out.c1_floor = c->c1_floor;
    out.m = c->m;
    out.k_max = c->k_max;
    out.max_rounds = c->max_rounds;
    out.seed = c->seed;
    out.small_graph_budget = c->small_graph_budget;
    out.exact_seconds = c->exact_seconds;
    out.embed_parts = c->embed_parts;
    out.within_parts = c->within_parts != 0;
    out.t_override = c->t_override;
    out.min_arcs = c->min_arcs;
    out.min_hyperdegree = c->min_hyperdegree;
    out.bite_fraction = c->bite_fraction;
    out.cycle_cap = c->cycle_cap;
    return out;
}

void fill_report(const gk::EstimateResult& r, gk_report* out) {
    const gk::GenusReport& g = r.report;
    *out = gk_report{};
    out->n = g.n;
    out->e = g.e;
    out->phase = static_cast<gk_phase>(static_cast<int>(r.phase));
    out->K = g.K;
    out->nu = g.nu;
    out->estimate = g.estimate;
    out->lower = g.lower;
    out->upper = g.upper;
    out->nonorientable_lower = g.nonorientable_lower;
    out->nonorientable_upper = g.nonorientable_upper;
    out->genus_achieved = -1;
    out->seed = r.config.seed;
}

}  // namespace

extern "C" {

const char* gk_last_error(void) { return last_error.c_str(); }

const char* gk_version(void) { return "1.0.0"; }

void gk_string_free(char* s) { std::free(s); }

void gk_config_init(gk_config* c) {
    if (!c) return;
    const gk::Config d;
    c->epsilon = d.epsilon;
    c->eps_reg = d.eps_reg;
    c->eps1 = d.eps1;
    c->c1_floor = d.c1_floor;
    c->m = d.m;
    c->k_max = d.k_max;
    c->max_rounds = d.max_rounds;
    c->seed = d.seed;
    c->small_graph_budget = d.small_graph_budget;
    c->exact_seconds = d.exact_seconds;
    c->embed_parts = d.embed_parts;
    c->within_parts = d.within_parts ? 1 : 0;
    c->t_override = d.t_override;
    c->min_arcs = d.min_arcs;
    c->min_hyperdegree = d.min_hyperdegree;
    c->bite_fraction = d.bite_fraction;
    c->cycle_cap = d.cycle_cap;
}

gk_status gk_graph_load(const char* path, gk_graph** out) {
    if (!path || !out) return fail(GK_ERR_INPUT, "null argument");
    *out = nullptr;
    {
        std::ifstream probe(path);
        if (!probe) return fail(GK_ERR_IO, (std::string("cannot open graph file: ") + path).c_str());
    }
    return guard([&] { *out = new gk_graph{gk::load_graph(path)}; });
}

gk_status gk_graph_parse(const char* text, gk_graph** out) {
    if (!text || !out) return fail(GK_ERR_INPUT, "null argument");
    *out = nullptr;
    return guard([&] { *out = new gk_graph{gk::parse_graph(text)}; });
}

gk_status gk_graph_from_edges(int n, const int* edges, size_t m, gk_graph** out) {
    if (!out || (m > 0 && !edges)) return fail(GK_ERR_INPUT, "null argument");
    *out = nullptr;
    return guard([&] {
        if (n < 0) throw gk::InputError("negative vertex count");
        std::vector<std::pair<int, int>> list(m);
        for (size_t i = 0; i < m; ++i) list[i] = {edges[2 * i], edges[2 * i + 1]};
        *out = new gk_graph{gk::Graph(n, list)};
    });
}

void gk_graph_free(gk_graph* g) { delete g; }

int gk_graph_order(const gk_graph* g) { return g ? g->g.order() : 0; }

long long gk_graph_size(const gk_graph* g) { return g ? static_cast<long long>(g->g.size()) : 0; }

gk_status gk_rotation_load(const gk_graph* g, const char* path, gk_rotation** out) {
    if (!g || !path || !out) return fail(GK_ERR_INPUT, "null argument");
    *out = nullptr;
    {
        std::ifstream probe(path);
        if (!probe) return fail(GK_ERR_IO, (std::string("cannot open rotation file: ") + path).c_str());
    }
    return guard([&] { *out = new gk_rotation{gk::load_rotation(path, g->g)}; });
}

gk_status gk_rotation_parse(const gk_graph* g, const char* text, gk_rotation** out) {
    if (!g || !text || !out) return fail(GK_ERR_INPUT, "null argument");
    *out = nullptr;
    return guard([&] { *out = new gk_rotation{gk::parse_rotation(text, g->g)}; });
}

gk_status gk_rotation_format(const gk_rotation* r, char** out) {
    if (!r || !out) return fail(GK_ERR_INPUT, "null argument");
    *out = nullptr;
    return guard([&] { *out = copy_string(gk::format_rotation(r->r)); });
}

gk_status gk_rotation_save(const gk_rotation* r, const char* path) {
    if (!r || !path) return fail(GK_ERR_INPUT, "null argument");
    std::ofstream file(path, std::ios::binary);
    if (!file) return fail(GK_ERR_IO, (std::string("cannot write rotation file: ") + path).c_str());
    const std::string text = gk::format_rotation(r->r);
    file.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!file) return fail(GK_ERR_IO, (std::string("cannot write rotation file: ") + path).c_str());
    last_error.clear();
    return GK_OK;
}

void gk_rotation_free(gk_rotation* r) { delete r; }

gk_status gk_estimate(const gk_graph* g, const gk_config* c, gk_report* report, char** report_text) {
    if (!g) return fail(GK_ERR_INPUT, "null argument");
    if (report_text) *report_text = nullptr;
    return guard([&] {
        const gk::EstimateResult r = gk::estimate(g->g, to_config(c));
        if (report) fill_report(r, report);
        if (report_text) *report_text = copy_string(gk::format_report(r));
    });
}

gk_status gk_embed(const gk_graph* g, const gk_config* c, gk_rotation** rotation, gk_report* report,
                   char** report_text) {
    if (!g) return fail(GK_ERR_INPUT, "null argument");
    if (rotation) *rotation = nullptr;
    if (report_text) *report_text = nullptr;
    return guard([&] {
        gk::EmbeddingReport r = gk::embed(g->g, to_config(c));
        std::string text = gk::format_report(r);
        if (report) {
            fill_report(r.estimate, report);
            report->genus_achieved = r.genus_achieved;
            report->f3 = r.faces.f3;
            report->f4 = r.faces.f4;
            report->f_other = r.faces.other;
            report->blossoms_removed = r.blossoms_removed;
            report->g0_edges = r.g0_edges;
        }
        char* t = report_text ? copy_string(text) : nullptr;
        if (rotation) *rotation = new gk_rotation{std::move(r.rotation)};
        if (report_text) *report_text = t;
    });
}

gk_status gk_exact(const gk_graph* g, double max_rotations, long long* genus, int* optimal,
                   gk_rotation** certificate) {
    if (!g || !genus) return fail(GK_ERR_INPUT, "null argument");
    if (certificate) *certificate = nullptr;
    return guard([&] {
        if (!(max_rotations > 0)) throw gk::InputError("rotation budget must be positive");
        gk::SearchBudget budget;
        budget.max_rotation_count = max_rotations;
        gk::ExactResult r = gk::exact_genus(g->g, budget);
        *genus = r.genus;
        if (optimal) *optimal = r.optimal ? 1 : 0;
        if (certificate) *certificate = new gk_rotation{std::move(r.certificate)};
    });
}

gk_status gk_verify(const gk_graph* g, const gk_rotation* r, long long* genus, long long* faces) {
    if (!g || !r) return fail(GK_ERR_INPUT, "null argument");
    return guard([&] {
        const gk::FaceCensus c = gk::verify(g->g, r->r);
        if (genus) *genus = c.genus;
        if (faces) *faces = c.f;
    });
}

gk_status gk_partition(const gk_graph* g, const gk_config* c, char** text) {
    if (!g || !text) return fail(GK_ERR_INPUT, "null argument");
    *text = nullptr;
    return guard([&] {
        const gk::Config cfg = gk::resolve_config(to_config(c));
        gk::RegularityOptions ro;
        ro.eps = cfg.eps_reg;
        ro.m = std::min(cfg.m, std::max(1, g->g.order()));
        ro.k_max = std::max(ro.m, std::min(cfg.k_max, std::max(1, g->g.order())));
        ro.max_rounds = cfg.max_rounds;
        ro.seed = gk::derive_seed(cfg.seed, 1);
        const gk::RegularPartition p = gk::regular_partition(g->g, ro);
        std::string out = "K = " + std::to_string(p.partition.count()) + "\n";
        out += "rounds = " + std::to_string(p.rounds) + "\n";
        out += "irregular_pairs = " + std::to_string(p.irregular_pairs) + "\n";
        out += std::string("converged = ") + (p.converged ? "true" : "false") + "\n";
        out += "parts\n" + gk::format_partition(p.partition);
        out += "quotient\n" + gk::format_quotient(p.quotient);
        *text = copy_string(out);
    });
}

}  // extern "C"
