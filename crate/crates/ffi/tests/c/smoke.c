#include <stdio.h>
#include "numevent.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s\n", #cond); return 1; } } while (0)

int main(void) {
    double polarizers[] = {0.3, 0.7, 0.6, 0.4};
    NumeventFamily *family = NULL;
    CHECK(numevent_family_new(polarizers, 2, 2, 1e-9, &family) == NUMEVENT_STATUS_OK);
    NumeventClassification c;
    CHECK(numevent_classify(family, &c) == NUMEVENT_STATUS_OK);
    CHECK(c.verdict == NUMEVENT_VERDICT_EMBEDDABLE);
    CHECK(c.container.kind == NUMEVENT_CONTAINER_KIND_MO && c.container.size == 2);
    numevent_family_free(family);

    uint64_t count = 0;
    CHECK(numevent_valuation_count(4, &count) == NUMEVENT_STATUS_OK && count == 32767);
    CHECK(numevent_valuation_count(9, &count) == NUMEVENT_STATUS_UNSUPPORTED);
    CHECK(numevent_last_error() != NULL);

    double rows[] = {0.5, 0.5, 0.0, 0.5, 0.0, 0.0, 0.0};
    NumeventTable *table = NULL;
    CHECK(numevent_table_new(3, rows, 1, 1e-9, &table) == NUMEVENT_STATUS_OK);
    double sum_all[] = {1, 1, -1, 1, -1, -1, 1};
    NumeventInequality r;
    CHECK(numevent_table_evaluate(table, sum_all, &r) == NUMEVENT_STATUS_OK);
    CHECK(r.violated && r.max_value == 1.5);
    numevent_table_free(table);

    printf("ok %s\n", numevent_version());
    return 0;
}
