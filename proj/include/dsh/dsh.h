/* Copyright 2026 The DSH Toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the DSH toolkit.
 *
 * Every function returns a dsh_status. On failure, dsh_last_error() returns
 * a message for the calling thread, valid until that thread's next call.
 * Strings returned through char** out-parameters are owned by the caller
 * and released with dsh_string_free. Handles are released with their
 * matching _free function; passing NULL to any _free function is a no-op.
 *
 * Points are arrays of `dim` doubles. Hamming coordinates must be 0 or 1;
 * sphere points must have unit norm.
 */

#ifndef DSH_DSH_H_
#define DSH_DSH_H_

#include <stddef.h>
#include <stdint.h>

#if defined(DSH_BUILDING_LIBRARY)
#define DSH_API __attribute__((visibility("default")))
#else
#define DSH_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dsh_status {
  DSH_OK = 0,
  DSH_INVALID_ARGUMENT = 1,
  DSH_DOMAIN_MISMATCH = 2,
  DSH_CONSTRUCTION = 3,
  DSH_CONVERGENCE = 4,
  DSH_BUDGET_EXCEEDED = 5,
  DSH_PARSE = 6,
  DSH_IO = 7,
  DSH_INTERNAL = 8
} dsh_status;

typedef enum dsh_domain {
  DSH_HAMMING = 0,
  DSH_SPHERE = 1,
  DSH_EUCLIDEAN = 2
} dsh_domain;

typedef struct dsh_family dsh_family;
typedef struct dsh_pair dsh_pair;
typedef struct dsh_index dsh_index;

DSH_API const char* dsh_last_error(void);
DSH_API const char* dsh_status_name(dsh_status status);
DSH_API void dsh_string_free(char* s);

/* Caps worker threads for this process; 0 restores the DSH_THREADS
 * environment default. */
DSH_API dsh_status dsh_set_threads(unsigned n);

/* Families. */
DSH_API dsh_status dsh_family_parse(const char* spec, size_t dim,
                                    dsh_family** out);
DSH_API void dsh_family_free(dsh_family* family);
DSH_API const char* dsh_family_name(const dsh_family* family);
DSH_API dsh_domain dsh_family_domain(const dsh_family* family);
DSH_API size_t dsh_family_dim(const dsh_family* family);
/* Analytic CPF; DSH_INVALID_ARGUMENT if the family has none. */
DSH_API dsh_status dsh_family_cpf(const dsh_family* family, double argument,
                                  double* out);
DSH_API const char* dsh_family_grammar(void);

/* Pairs. */
DSH_API dsh_status dsh_pair_sample(const dsh_family* family, uint64_t seed,
                                   dsh_pair** out);
DSH_API void dsh_pair_free(dsh_pair* pair);
DSH_API dsh_status dsh_pair_h(const dsh_pair* pair, const double* x,
                              uint64_t* token);
DSH_API dsh_status dsh_pair_g(const dsh_pair* pair, const double* y,
                              uint64_t* token);

/* Monte Carlo estimate of the collision probability at `argument`. */
DSH_API dsh_status dsh_estimate_cpf(const dsh_family* family, double argument,
                                    uint64_t n, uint64_t seed,
                                    double* estimate, double* std_error);

/* Indexes over `count` points stored row-major in `points`. */
DSH_API dsh_status dsh_index_build_annulus(const dsh_family* family,
                                           const double* points, size_t count,
                                           double r_minus, double r,
                                           double r_plus, uint64_t seed,
                                           dsh_index** out);
DSH_API dsh_status dsh_index_build_range(const dsh_family* family,
                                         const double* points, size_t count,
                                         double r, double r_plus,
                                         uint64_t seed, dsh_index** out);
DSH_API void dsh_index_free(dsh_index* index);
DSH_API size_t dsh_index_tables(const dsh_index* index);
DSH_API unsigned dsh_index_power(const dsh_index* index);
/* *found is 1 and *id set when a point in [r_minus, r_plus] is found. */
DSH_API dsh_status dsh_index_annulus_query(const dsh_index* index,
                                           const double* q, int* found,
                                           size_t* id, uint64_t* candidates);
/* Writes up to `capacity` ids and the total count to *count. */
DSH_API dsh_status dsh_index_range_report(const dsh_index* index,
                                          const double* q, size_t* ids,
                                          size_t capacity, size_t* count);

/* Reports. All CSV output is byte-identical for identical arguments. */
DSH_API dsh_status dsh_cpf_curve_csv(const char* family_spec, size_t dim,
                                     const char* grid, uint64_t n,
                                     uint64_t seed, char** csv);
/* Suite names: hamming, sphere, euclidean, bounds, ssse, jensen. */
DSH_API dsh_status dsh_verify_csv(const char* suite, uint64_t seed,
                                  double scale, char** csv,
                                  unsigned* violations);
DSH_API dsh_status dsh_dataset_generate(dsh_domain domain, size_t dim,
                                        size_t count, uint64_t seed,
                                        char** text);
/* Summary CSV; per-query rows go to *detail when detail is non-NULL. */
DSH_API dsh_status dsh_annulus_demo_csv(const char* dataset_text,
                                        const char* family_spec,
                                        double r_minus, double r,
                                        double r_plus, uint64_t queries,
                                        uint64_t seed, char** summary,
                                        char** detail);
DSH_API dsh_status dsh_range_demo_csv(const char* family_spec, size_t dim,
                                      size_t background, double r,
                                      double r_plus, uint64_t queries,
                                      uint64_t seed, char** csv);
DSH_API dsh_status dsh_privacy_demo_csv(size_t dim, double r, double c,
                                        double epsilon, double delta,
                                        uint64_t pairs, uint64_t seed,
                                        char** csv);

#ifdef __cplusplus
}
#endif

#endif /* DSH_DSH_H_ */
