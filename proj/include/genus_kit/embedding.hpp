#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "genus_kit/graph.hpp"

namespace gk {

// Cyclic neighbour order per vertex. rotation[v] lists every neighbour of v
// exactly once; the successor of the last entry is the first.
struct RotationSystem {
    std::vector<std::vector<int>> rotation;

    friend bool operator==(const RotationSystem&, const RotationSystem&) = default;
};

// Throws MismatchError unless r is a rotation system of g.
void validate_rotation(const Graph& g, const RotationSystem& r);

// Neighbours in increasing order at every vertex.
RotationSystem identity_rotation(const Graph& g);
RotationSystem random_rotation(const Graph& g, std::uint64_t seed);

RotationSystem parse_rotation(std::string_view text, const Graph& g);
RotationSystem load_rotation(const std::string& path, const Graph& g);
std::string format_rotation(const RotationSystem& r);

struct ComponentCensus {
    int n = 0;
    long long e = 0;
    long long f = 0;
    long long genus = 0;
};

struct FaceCensus {
    // Each face is a closed walk given by its vertex sequence; the walk
    // uses darts faces[i][j] -> faces[i][j+1] cyclically.
    std::vector<std::vector<int>> faces;
    long long f = 0;  // includes one face per isolated vertex
    std::vector<long long> f_k;  // f_k[k] = faces of length k
    long long genus = 0;
    std::vector<ComponentCensus> components;

    long long faces_of_length(std::size_t k) const { return k < f_k.size() ? f_k[k] : 0; }
};

// Traces every face. Genus is summed over connected components.
FaceCensus trace_faces(const Graph& g, const RotationSystem& r, bool keep_faces = true);

// Face count and genus without materializing walks.
long long embedding_genus(const Graph& g, const RotationSystem& r);

// A directed cycle given by its vertex sequence, using arcs
// verts[i] -> verts[i+1] (cyclically). reverse marks cycles of the reversed
// digraph.
struct Cycle {
    std::vector<int> verts;
    bool reverse = false;

    friend bool operator==(const Cycle&, const Cycle&) = default;
};

struct CycleFamily {
    std::vector<Cycle> cycles;
};

// Throws MismatchError when a cycle is not a simple cycle of length >= 3 in
// g or when two cycles share a dart.
void validate_family(const Graph& g, const CycleFamily& f);
// Additionally checks every forward cycle uses arcs of d and every reverse
// cycle uses arcs of the reversal of d.
void validate_family(const Graph& g, const Digraph& d, const CycleFamily& f);

struct Blossom {
    int center = 0;
    std::vector<int> cycles;  // indices into the family, in chaining order
    std::vector<int> tips;    // tips[i] enters the center along cycles[i]
    bool simple = true;
};

struct BlossomReport {
    std::vector<Blossom> blossoms;
    std::vector<long long> by_length;  // by_length[l] = blossoms of length l

    bool empty() const { return blossoms.empty(); }
};

BlossomReport detect_blossoms(const Graph& g, const CycleFamily& f);

struct BrokenFamily {
    CycleFamily family;
    std::vector<int> removed;  // indices into the input family
};

// Removes from every blossom its longest cycle (lowest index on ties)
// unless an earlier removal already broke it.
BrokenFamily break_blossoms(const Graph& g, const CycleFamily& f);

// Rotation in which every cycle of f is a face. Throws BlossomError if f
// contains a blossom.
RotationSystem assemble_rotation(const Graph& g, const CycleFamily& f, std::uint64_t seed);

struct FaceCheck {
    bool ok = true;
    std::vector<int> missing;  // indices of cycles that are not faces
};

FaceCheck verify_faces(const Graph& g, const RotationSystem& r, const CycleFamily& f);

}  // namespace gk
