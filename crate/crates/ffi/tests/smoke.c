#include <stdio.h>
#include <stdlib.h>

#include "tricolor.h"

int main(void) {
    TricolorGraph *g = NULL;
    uint32_t hidden[45];
    if (tricolor_graph_planted(45, 6, 3, &g, hidden) != TRICOLOR_STATUS_OK) {
        fprintf(stderr, "planted: %s\n", tricolor_last_error());
        return 1;
    }
    uint32_t colors[45];
    size_t used = 0;
    bool violation = false;
    if (tricolor_color(g, 2.0, 1, 4, colors, &used, &violation, NULL) != TRICOLOR_STATUS_OK) {
        fprintf(stderr, "color: %s\n", tricolor_last_error());
        return 1;
    }
    bool valid = false;
    tricolor_verify_coloring(g, colors, &valid);
    printf("%zu %d %d\n", used, (int)valid, (int)violation);
    tricolor_graph_free(g);

    if (tricolor_graph_from_dimacs("p edge 2 1\ne 1 1\n", &g) != TRICOLOR_STATUS_PARSE_ERROR) {
        return 1;
    }
    printf("%s\n", tricolor_last_error());
    return valid ? 0 : 1;
}
