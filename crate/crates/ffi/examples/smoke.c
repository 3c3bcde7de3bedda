#include <stdio.h>
#include "pcnlab.h"

int main(void) {
    size_t edges[] = {0, 1, 0, 2, 0, 3, 1, 2, 1, 3, 2, 3};
    PcnGraph *g = NULL;
    if (pcn_graph_new(4, edges, 6, &g) != PCN_STATUS_OK) return 1;
    uint32_t chi = 0;
    bool exact = false;
    uint32_t colors[4];
    if (pcn_chi_p(g, 10, colors, &chi, &exact) != PCN_STATUS_OK || !exact) return 2;
    size_t girth = 0;
    pcn_graph_girth(g, &girth);
    pcn_graph_free(g);

    PcnGraph *bad = NULL;
    PcnStatus s = pcn_graph_parse("2 1\n0 5\n", &bad);
    char msg[256];
    pcn_last_error_message(msg, sizeof msg);
    printf("chi_p=%u girth=%zu parse_status=%d message=%s\n", chi, girth, (int)s, msg);
    return 0;
}
