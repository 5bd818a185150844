#include <stdio.h>
#include "metakernel.h"

int main(void) {
    MkSession *s = mk_session_new();
    char *out = NULL;
    const char *events =
        "(defstobj st fld1 fld2 fld3)"
        "(simplify (fld2 (update-fld1 5 (update-fld2 7 st))))";
    if (mk_session_events(s, events, &out) != MK_STATUS_OK) {
        fprintf(stderr, "error: %s\n", mk_last_error());
        return 1;
    }
    fputs(out, stdout);
    mk_string_free(out);

    size_t violations = 0;
    MkStatus st = mk_session_check(s, 500, 2017, NULL, &violations);
    printf("violations %zu\n", violations);
    mk_session_free(s);
    return st == MK_STATUS_OK ? 0 : 1;
}
