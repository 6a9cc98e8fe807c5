#pragma once

#include <cstdint>

#include "genus_kit/embedding.hpp"
#include "genus_kit/graph.hpp"

namespace gk {

enum class SearchMode { exhaustive, randomized };

struct SearchBudget {
    double max_rotation_count = 1e8;  // cap on the product of (deg(v)-1)!
    double max_seconds = 60.0;
    SearchMode mode = SearchMode::exhaustive;
    std::uint64_t seed = 1;
    long long max_climb_steps = 200000;
};

struct ExactResult {
    long long genus = 0;
    bool optimal = false;  // false: genus is only an upper bound
    bool budget_exceeded = false;
    RotationSystem certificate;
    double search_space = 0.0;  // product of (deg(v)-1)! over all vertices
    long long nodes = 0;
};

// Product of (deg(v)-1)! over vertices of degree >= 3.
double rotation_count(const Graph& g);

// Minimum orientable genus. Exhaustive branch and bound when the rotation
// count fits the budget, otherwise (or in randomized mode) seeded
// hill-climbing whose result is flagged as an upper bound.
ExactResult exact_genus(const Graph& g, const SearchBudget& budget = {});

// Euler-formula lower bound, summed over components with at least 3 edges.
long long euler_lower_bound(const Graph& g);

bool is_triangle_free(const Graph& g);

}  // namespace gk
