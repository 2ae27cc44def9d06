#include <stdio.h>
#include <string.h>
#include "dowker.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "check failed: %s\n", #cond); return 1; } } while (0)

int main(void) {
    const char *json =
        "{\"x\":[\"a\",\"b\",\"c\",\"d\"],\"y\":[\"1\",\"2\",\"3\",\"4\"],"
        "\"pairs\":[[\"a\",\"2\"],[\"a\",\"4\"],[\"b\",\"1\"],[\"b\",\"2\"],"
        "[\"c\",\"1\"],[\"c\",\"4\"],[\"d\",\"1\"],[\"d\",\"3\"]]}";
    DkRelation *r = NULL;
    CHECK(dk_relation_from_json(json, &r) == DK_STATUS_OK);

    DkComplex *e = NULL;
    CHECK(dk_complex_build(r, DK_KIND_RECTANGLE, 25, &e) == DK_STATUS_OK);
    size_t facets = 0, vertices = 0;
    CHECK(dk_complex_num_facets(e, &facets) == DK_STATUS_OK && facets == 7);
    CHECK(dk_complex_num_vertices(e, &vertices) == DK_STATUS_OK && vertices == 8);

    char *h = NULL;
    CHECK(dk_complex_homology_json(e, false, "z", &h) == DK_STATUS_OK);
    CHECK(strstr(h, "\"betti\":1") != NULL);
    dk_string_free(h);

    bool quasi = false;
    CHECK(dk_projections_are_quasi_isomorphisms(r, &quasi) == DK_STATUS_OK && quasi);

    char *fiber = NULL;
    CHECK(dk_fiber_json(r, "a,d", &fiber) == DK_STATUS_INVALID_INPUT);
    CHECK(dk_last_error() != NULL);

    DkRelation *bad = NULL;
    CHECK(dk_relation_from_json("{", &bad) == DK_STATUS_INVALID_INPUT && bad == NULL);

    dk_complex_free(e);
    dk_relation_free(r);
    printf("ok\n");
    return 0;
}
