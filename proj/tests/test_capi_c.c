#include <stdio.h>

#include "genus_kit/genus_kit.h"

int main(void) {
    gk_graph* g = NULL;
    long long genus = -1;
    int optimal = 0;
    if (gk_graph_parse("4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n", &g) != GK_OK) return 1;
    if (gk_exact(g, 1e6, &genus, &optimal, NULL) != GK_OK) return 1;
    gk_graph_free(g);
    printf("K4 genus %lld optimal %d\n", genus, optimal);
    return genus == 0 && optimal == 1 ? 0 : 1;
}
