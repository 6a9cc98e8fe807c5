#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "genus_kit/decompose.hpp"
#include "genus_kit/embedding.hpp"
#include "genus_kit/exact_genus.hpp"
#include "genus_kit/graph.hpp"
#include "genus_kit/packing.hpp"
#include "genus_kit/regularity.hpp"

namespace gk {

// Zero for a threshold means "derive from epsilon".
struct Config {
    double epsilon = 0.1;
    double eps_reg = 0.0;   // pair regularity threshold; default 0.25
    double eps1 = 0.0;      // quotient density floor; default epsilon / 10
    double c1_floor = 0.0;  // decomposition floor; default from the quotient
    int m = 0;              // minimum part count; default ceil(4 / epsilon) capped at 8
    int k_max = 16;
    int max_rounds = 6;
    std::uint64_t seed = 1;
    double small_graph_budget = 1e8;  // rotation-count cap for the exact path
    double exact_seconds = 60.0;
    int embed_parts = 2;        // coarse partition used by embed
    bool within_parts = true;   // within-part edges become triangle pieces in embed
    int t_override = 0;
    long long min_arcs = 64;
    double min_hyperdegree = 64.0;
    double bite_fraction = 0.1;
    long long cycle_cap = 10'000'000;
};

// Config with every derived threshold filled in. Throws InputError on
// invalid settings.
Config resolve_config(const Config& c);

enum class Phase { sparse, exact, dense };

const char* phase_name(Phase p);

struct EstimateResult {
    Phase phase = Phase::dense;
    GenusReport report;
    Config config;  // resolved
    // dense path
    RegularPartition partition;
    QuotientGraph quotient;
    TrianglePacking packing;
    // exact path
    ExactResult exact;
};

EstimateResult estimate(const Graph& g, const Config& config);

struct FaceHistogram {
    long long f3 = 0, f4 = 0, other = 0;
};

struct EmbeddingReport {
    RotationSystem rotation;
    long long genus_achieved = 0;
    FaceCensus census;
    FaceHistogram faces;
    EstimateResult estimate;
    long long family_size = 0;        // matched cycles before blossom breaking
    long long blossoms_removed = 0;
    std::vector<double> matching_coverages;
    long long g0_edges = 0;
    long long pieces = 0;
    long long bipartite_union_triangles = 0;
    bool faces_verified = false;      // every kept cycle is a face
};

EmbeddingReport embed(const Graph& g, const Config& config);

// Census of a rotation for g; throws on mismatch.
FaceCensus verify(const Graph& g, const RotationSystem& r);

// key = value lines: n, e, phase, K, nu, estimate, lower, upper,
// genus_achieved, f3, f4, blossoms_removed, g0_edges, seed.
std::string format_report(const EstimateResult& e);
std::string format_report(const EmbeddingReport& r);

}  // namespace gk
