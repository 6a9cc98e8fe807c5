#ifndef GENUS_KIT_H
#define GENUS_KIT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define GK_API __declspec(dllexport)
#else
#define GK_API __attribute__((visibility("default")))
#endif

typedef enum gk_status {
    GK_OK = 0,
    GK_ERR_INPUT = 1,     /* malformed data or invalid argument */
    GK_ERR_MISMATCH = 2,  /* rotation or partition does not fit the graph */
    GK_ERR_IO = 3,        /* file could not be read or written */
    GK_ERR_INTERNAL = 4
} gk_status;

typedef struct gk_graph gk_graph;
typedef struct gk_rotation gk_rotation;

typedef enum gk_phase { GK_PHASE_SPARSE = 0, GK_PHASE_EXACT = 1, GK_PHASE_DENSE = 2 } gk_phase;

/* Zero for a threshold means "derive from epsilon". */
typedef struct gk_config {
    double epsilon;
    double eps_reg;
    double eps1;
    double c1_floor;
    int m;
    int k_max;
    int max_rounds;
    uint64_t seed;
    double small_graph_budget;
    double exact_seconds;
    int embed_parts;
    int within_parts;
    int t_override;
    long long min_arcs;
    double min_hyperdegree;
    double bite_fraction;
    long long cycle_cap;
} gk_config;

typedef struct gk_report {
    int n;
    long long e;
    gk_phase phase;
    int K;
    double nu;
    double estimate, lower, upper;
    double nonorientable_lower, nonorientable_upper;
    long long genus_achieved; /* -1 for estimate-only reports */
    long long f3, f4, f_other;
    long long blossoms_removed;
    long long g0_edges;
    uint64_t seed;
} gk_report;

/* Message of the last failed call on this thread; empty after success. */
GK_API const char* gk_last_error(void);
GK_API const char* gk_version(void);

/* Strings returned through char** are owned by the caller. */
GK_API void gk_string_free(char* s);

GK_API void gk_config_init(gk_config* c);

GK_API gk_status gk_graph_load(const char* path, gk_graph** out);
GK_API gk_status gk_graph_parse(const char* text, gk_graph** out);
/* edges holds m pairs (u, v). */
GK_API gk_status gk_graph_from_edges(int n, const int* edges, size_t m, gk_graph** out);
GK_API void gk_graph_free(gk_graph* g);
GK_API int gk_graph_order(const gk_graph* g);
GK_API long long gk_graph_size(const gk_graph* g);

GK_API gk_status gk_rotation_load(const gk_graph* g, const char* path, gk_rotation** out);
GK_API gk_status gk_rotation_parse(const gk_graph* g, const char* text, gk_rotation** out);
GK_API gk_status gk_rotation_format(const gk_rotation* r, char** out);
GK_API gk_status gk_rotation_save(const gk_rotation* r, const char* path);
GK_API void gk_rotation_free(gk_rotation* r);

/* report_text may be NULL. */
GK_API gk_status gk_estimate(const gk_graph* g, const gk_config* c, gk_report* report, char** report_text);
GK_API gk_status gk_embed(const gk_graph* g, const gk_config* c, gk_rotation** rotation, gk_report* report,
                          char** report_text);

/* Minimum genus with a certificate; *optimal is 0 when the budget forced a
 * heuristic upper bound. certificate may be NULL. */
GK_API gk_status gk_exact(const gk_graph* g, double max_rotations, long long* genus, int* optimal,
                          gk_rotation** certificate);

GK_API gk_status gk_verify(const gk_graph* g, const gk_rotation* r, long long* genus, long long* faces);

/* Regular partition and its density quotient as text. */
GK_API gk_status gk_partition(const gk_graph* g, const gk_config* c, char** text);

#ifdef __cplusplus
}
#endif

#endif
