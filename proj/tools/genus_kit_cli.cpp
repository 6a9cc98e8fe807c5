#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "genus_kit/genus_kit.h"

namespace {

constexpr int kInputError = 2;
constexpr int kInternalError = 1;

struct GraphDeleter {
    void operator()(gk_graph* g) const { gk_graph_free(g); }
};
struct RotationDeleter {
    void operator()(gk_rotation* r) const { gk_rotation_free(r); }
};
struct StringDeleter {
    void operator()(char* s) const { gk_string_free(s); }
};
using GraphPtr = std::unique_ptr<gk_graph, GraphDeleter>;
using RotationPtr = std::unique_ptr<gk_rotation, RotationDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

class Failure : public std::runtime_error {
public:
    Failure(gk_status s, const std::string& what) : std::runtime_error(what), status(s) {}
    gk_status status;
};

void check(gk_status s) {
    if (s != GK_OK) throw Failure(s, gk_last_error());
}

GraphPtr load(const std::string& path) {
    gk_graph* g = nullptr;
    check(gk_graph_load(path.c_str(), &g));
    return GraphPtr(g);
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw Failure(GK_ERR_IO, "cannot write " + path);
}

struct Options {
    std::string graph, rotation, out, report;
    double eps = 0.1;
    std::uint64_t seed = 1;
    int k_max = 0;
    double max_rotations = 1e8;
};

gk_config make_config(const Options& o) {
    gk_config c;
    gk_config_init(&c);
    c.epsilon = o.eps;
    c.seed = o.seed;
    if (o.k_max > 0) c.k_max = o.k_max;
    return c;
}

int run_estimate(const Options& o) {
    GraphPtr g = load(o.graph);
    const gk_config c = make_config(o);
    char* text = nullptr;
    check(gk_estimate(g.get(), &c, nullptr, &text));
    StringPtr owned(text);
    std::fputs(text, stdout);
    if (!o.report.empty()) write_file(o.report, text);
    return 0;
}

int run_embed(const Options& o) {
    GraphPtr g = load(o.graph);
    const gk_config c = make_config(o);
    gk_rotation* r = nullptr;
    char* text = nullptr;
    check(gk_embed(g.get(), &c, &r, nullptr, &text));
    RotationPtr rot(r);
    StringPtr owned(text);
    check(gk_rotation_save(rot.get(), o.out.c_str()));
    std::fputs(text, stdout);
    if (!o.report.empty()) write_file(o.report, text);
    return 0;
}

int run_exact(const Options& o) {
    GraphPtr g = load(o.graph);
    long long genus = 0;
    int optimal = 0;
    gk_rotation* r = nullptr;
    check(gk_exact(g.get(), o.max_rotations, &genus, &optimal, o.out.empty() ? nullptr : &r));
    RotationPtr rot(r);
    if (rot) check(gk_rotation_save(rot.get(), o.out.c_str()));
    std::printf("genus = %lld\noptimal = %s\n", genus, optimal ? "true" : "false");
    return 0;
}

int run_verify(const Options& o) {
    GraphPtr g = load(o.graph);
    gk_rotation* r = nullptr;
    check(gk_rotation_load(g.get(), o.rotation.c_str(), &r));
    RotationPtr rot(r);
    long long genus = 0, faces = 0;
    check(gk_verify(g.get(), rot.get(), &genus, &faces));
    std::printf("valid = true\nn = %d\ne = %lld\nfaces = %lld\ngenus = %lld\n", gk_graph_order(g.get()),
                gk_graph_size(g.get()), faces, genus);
    return 0;
}

int run_partition(const Options& o) {
    GraphPtr g = load(o.graph);
    const gk_config c = make_config(o);
    char* text = nullptr;
    check(gk_partition(g.get(), &c, &text));
    StringPtr owned(text);
    std::fputs(text, stdout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Genus estimation and near-optimal embeddings of dense graphs"};
    app.require_subcommand(1);
    Options o;

    auto add_graph = [&](CLI::App* sub) { sub->add_option("graph", o.graph, "graph file")->required(); };
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--eps", o.eps, "target approximation slack in (0, 1/2]")->required();
        sub->add_option("--seed", o.seed, "master seed");
        sub->add_option("--k-max", o.k_max, "largest part count");
    };

    CLI::App* est = app.add_subcommand("estimate", "estimate the genus");
    add_graph(est);
    add_common(est);
    est->add_option("--report", o.report, "also write the report to this file");

    CLI::App* emb = app.add_subcommand("embed", "build an embedding and write its rotation system");
    add_graph(emb);
    add_common(emb);
    emb->add_option("--out", o.out, "rotation file")->required();
    emb->add_option("--report", o.report, "also write the report to this file");

    CLI::App* ex = app.add_subcommand("exact", "exact genus by exhaustive search");
    add_graph(ex);
    ex->add_option("--max-rotations", o.max_rotations, "rotation-count budget")->check(CLI::PositiveNumber);
    ex->add_option("--out", o.out, "write the optimal rotation to this file");

    CLI::App* ver = app.add_subcommand("verify", "check a rotation file and report its genus");
    add_graph(ver);
    ver->add_option("rotation", o.rotation, "rotation file")->required();

    CLI::App* part = app.add_subcommand("partition", "print the regular partition and its quotient");
    add_graph(part);
    add_common(part);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        if (*est) return run_estimate(o);
        if (*emb) return run_embed(o);
        if (*ex) return run_exact(o);
        if (*ver) return run_verify(o);
        if (*part) return run_partition(o);
    } catch (const Failure& f) {
        std::fprintf(stderr, "error: %s\n", f.what());
        return f.status == GK_ERR_INTERNAL ? kInternalError : kInputError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kInternalError;
    }
    return kInputError;
}
