/* Exercises the C ABI through the generated header. Prints one value per line. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include "isofield.h"

#define CHECK(call)                                                    \
  do {                                                                 \
    IsofieldStatus s_ = (call);                                        \
    if (s_ != ISOFIELD_STATUS_OK) {                                    \
      char msg_[256];                                                  \
      isofield_last_error(msg_, sizeof msg_);                          \
      fprintf(stderr, "%s failed with %d: %s\n", #call, s_, msg_);     \
      return 1;                                                        \
    }                                                                  \
  } while (0)

int main(void) {
  double re, im;
  CHECK(isofield_spin_harmonic(0, 1, 0, 0.0, 0.0, &re, &im));
  printf("y10_pole %.17g\n", re);

  double g;
  CHECK(isofield_godunov_gordienko(0, 0, 1, -1, 1, -1, &g));
  printf("gg_anchor %.17g\n", g);

  double l1 = 1.0, m1 = 0.6, l2 = 1.6, m2 = 0.9;
  IsofieldVectorPair *pair = NULL;
  CHECK(isofield_vector_pair_new(&l1, &m1, 1, &l2, &m2, 1, ISOFIELD_NORMALIZATION_BARYCENTRIC, &pair));
  double sep[3] = {-0.3, 0.2, 0.5}, b[9];
  CHECK(isofield_vector_corr(pair, sep, b));
  printf("b_xy %.17g\n", b[1]);
  isofield_vector_pair_free(pair);

  const char *plan = "{\"model\": {\"kind\": \"scalar\", \"spectrum\": [{\"lambda\": 1.3, \"mass\": 1}]},"
                     " \"points\": [[0,0,0],[0.3,0,0]], \"realizations\": 5}";
  IsofieldRealization *real = NULL;
  CHECK(isofield_simulate_json(plan, 42, &real));
  size_t nr, np, nc;
  CHECK(isofield_realization_shape(real, &nr, &np, &nc));
  double *values = malloc(sizeof(double) * nr * np * nc);
  CHECK(isofield_realization_values(real, values, nr * np * nc));
  printf("shape %zu %zu %zu\n", nr, np, nc);
  printf("first %.17g\n", values[0]);
  free(values);
  isofield_realization_free(real);

  if (isofield_spin_harmonic(2, 1, 0, 0.5, 0.0, &re, &im) != ISOFIELD_STATUS_INVALID_INPUT) return 2;
  char msg[8];
  size_t need = isofield_last_error(msg, sizeof msg);
  printf("error_len %zu truncated %s\n", need, msg);
  return 0;
}
