// Copyright 2026 The DSH Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dsh/dsh.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "dsh/cpf_lab.hpp"
#include "dsh/family_spec.hpp"
#include "dsh/indexes.hpp"
#include "dsh/privacy.hpp"
#include "dsh/reports.hpp"

struct dsh_family {
  dsh::FamilyPtr family;
};

struct dsh_pair {
  dsh::PairPtr pair;
  dsh::Domain domain;
  std::size_t dim;
};

struct dsh_index {
  dsh::DshIndex index;
};

namespace {

thread_local std::string g_last_error;

template <class F>
dsh_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return DSH_OK;
  } catch (const dsh::InvalidArgument& e) {
    g_last_error = e.what();
    return DSH_INVALID_ARGUMENT;
  } catch (const dsh::DomainMismatch& e) {
    g_last_error = e.what();
    return DSH_DOMAIN_MISMATCH;
  } catch (const dsh::ConstructionError& e) {
    g_last_error = e.what();
    return DSH_CONSTRUCTION;
  } catch (const dsh::ConvergenceError& e) {
    g_last_error = e.what();
    return DSH_CONVERGENCE;
  } catch (const dsh::BudgetExceeded& e) {
    g_last_error = e.what();
    return DSH_BUDGET_EXCEEDED;
  } catch (const dsh::ParseError& e) {
    g_last_error = e.what();
    return DSH_PARSE;
  } catch (const dsh::Error& e) {
    g_last_error = e.what();
    return DSH_INTERNAL;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return DSH_BUDGET_EXCEEDED;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DSH_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return DSH_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw dsh::InvalidArgument(what);
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.data(), s.size() + 1);
  return p;
}

dsh::Point to_point(dsh::Domain domain, std::size_t dim, const double* v) {
  require(v != nullptr, "null point");
  switch (domain) {
    case dsh::Domain::hamming: {
      std::vector<std::uint8_t> bits(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        require(v[i] == 0.0 || v[i] == 1.0, "Hamming coordinates must be 0/1");
        bits[i] = static_cast<std::uint8_t>(v[i]);
      }
      return dsh::Point::hamming(std::move(bits));
    }
    case dsh::Domain::sphere:
      return dsh::Point::unit(std::vector<double>(v, v + dim));
    case dsh::Domain::euclidean:
      return dsh::Point::euclidean(std::vector<double>(v, v + dim));
  }
  throw dsh::InvalidArgument("bad domain");
}

std::vector<dsh::Point> to_points(const dsh::DshFamily& f, const double* pts,
                                  std::size_t count) {
  require(pts != nullptr || count == 0, "null point array");
  std::vector<dsh::Point> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(to_point(f.domain(), f.dimension(), pts + i * f.dimension()));
  }
  return out;
}

}  // namespace

extern "C" {

const char* dsh_last_error(void) { return g_last_error.c_str(); }

const char* dsh_status_name(dsh_status status) {
  switch (status) {
    case DSH_OK:
      return "ok";
    case DSH_INVALID_ARGUMENT:
      return "invalid argument";
    case DSH_DOMAIN_MISMATCH:
      return "domain mismatch";
    case DSH_CONSTRUCTION:
      return "construction error";
    case DSH_CONVERGENCE:
      return "convergence error";
    case DSH_BUDGET_EXCEEDED:
      return "budget exceeded";
    case DSH_PARSE:
      return "parse error";
    case DSH_IO:
      return "i/o error";
    case DSH_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

void dsh_string_free(char* s) { std::free(s); }

dsh_status dsh_set_threads(unsigned n) {
  return guarded([&] { dsh::set_thread_override(n); });
}

dsh_status dsh_family_parse(const char* spec, size_t dim, dsh_family** out) {
  return guarded([&] {
    require(spec && out, "null argument");
    *out = nullptr;
    auto f = dsh::parse_family(spec, dim);
    *out = new dsh_family{std::move(f)};
  });
}

void dsh_family_free(dsh_family* family) { delete family; }

const char* dsh_family_name(const dsh_family* family) {
  return family ? family->family->name().c_str() : "";
}

dsh_domain dsh_family_domain(const dsh_family* family) {
  return family ? static_cast<dsh_domain>(family->family->domain())
                : DSH_HAMMING;
}

size_t dsh_family_dim(const dsh_family* family) {
  return family ? family->family->dimension() : 0;
}

dsh_status dsh_family_cpf(const dsh_family* family, double argument,
                          double* out) {
  return guarded([&] {
    require(family && out, "null argument");
    const auto& cpf = family->family->cpf();
    require(cpf.has_value(), "family has no analytic CPF");
    *out = cpf(argument);
  });
}

const char* dsh_family_grammar(void) { return dsh::family_grammar(); }

dsh_status dsh_pair_sample(const dsh_family* family, uint64_t seed,
                           dsh_pair** out) {
  return guarded([&] {
    require(family && out, "null argument");
    *out = nullptr;
    const auto& f = *family->family;
    *out = new dsh_pair{dsh::sample_pair(f, seed), f.domain(), f.dimension()};
  });
}

void dsh_pair_free(dsh_pair* pair) { delete pair; }

dsh_status dsh_pair_h(const dsh_pair* pair, const double* x, uint64_t* token) {
  return guarded([&] {
    require(pair && token, "null argument");
    *token = pair->pair->h(to_point(pair->domain, pair->dim, x));
  });
}

dsh_status dsh_pair_g(const dsh_pair* pair, const double* y, uint64_t* token) {
  return guarded([&] {
    require(pair && token, "null argument");
    *token = pair->pair->g(to_point(pair->domain, pair->dim, y));
  });
}

dsh_status dsh_estimate_cpf(const dsh_family* family, double argument,
                            uint64_t n, uint64_t seed, double* estimate,
                            double* std_error) {
  return guarded([&] {
    require(family && estimate, "null argument");
    const auto r = dsh::estimate_cpf(*family->family, argument, n, seed);
    *estimate = r.estimate;
    if (std_error) *std_error = r.std_error;
  });
}

dsh_status dsh_index_build_annulus(const dsh_family* family,
                                   const double* points, size_t count,
                                   double r_minus, double r, double r_plus,
                                   uint64_t seed, dsh_index** out) {
  return guarded([&] {
    require(family && out, "null argument");
    *out = nullptr;
    auto idx = dsh::build_annulus_index(
        to_points(*family->family, points, count), family->family,
        {r_minus, r, r_plus}, seed);
    *out = new dsh_index{std::move(idx)};
  });
}

dsh_status dsh_index_build_range(const dsh_family* family, const double* points,
                                 size_t count, double r, double r_plus,
                                 uint64_t seed, dsh_index** out) {
  return guarded([&] {
    require(family && out, "null argument");
    *out = nullptr;
    auto idx = dsh::build_range_index(to_points(*family->family, points, count),
                                      family->family, r, r_plus, seed);
    *out = new dsh_index{std::move(idx)};
  });
}

void dsh_index_free(dsh_index* index) { delete index; }

size_t dsh_index_tables(const dsh_index* index) {
  return index ? index->index.tables() : 0;
}

unsigned dsh_index_power(const dsh_index* index) {
  return index ? index->index.power() : 0;
}

dsh_status dsh_index_annulus_query(const dsh_index* index, const double* q,
                                   int* found, size_t* id,
                                   uint64_t* candidates) {
  return guarded([&] {
    require(index && found, "null argument");
    const auto& fam = *index->index.family();
    const auto r = dsh::annulus_query(
        index->index, to_point(fam.domain(), fam.dimension(), q));
    *found = r.id.has_value() ? 1 : 0;
    if (id && r.id) *id = *r.id;
    if (candidates) *candidates = r.candidates;
  });
}

dsh_status dsh_index_range_report(const dsh_index* index, const double* q,
                                  size_t* ids, size_t capacity,
                                  size_t* count) {
  return guarded([&] {
    require(index && count, "null argument");
    require(ids || capacity == 0, "null id buffer");
    const auto& fam = *index->index.family();
    const auto r = dsh::range_report(
        index->index, to_point(fam.domain(), fam.dimension(), q));
    *count = r.ids.size();
    for (std::size_t i = 0; i < r.ids.size() && i < capacity; ++i) {
      ids[i] = r.ids[i];
    }
  });
}

dsh_status dsh_cpf_curve_csv(const char* family_spec, size_t dim,
                             const char* grid, uint64_t n, uint64_t seed,
                             char** csv) {
  return guarded([&] {
    require(family_spec && grid && csv, "null argument");
    *csv = nullptr;
    const auto f = dsh::parse_family(family_spec, dim);
    const auto g = dsh::parse_grid(grid);
    *csv = dup(dsh::format_csv(dsh::cpf_curve(*f, g, n, seed)));
  });
}

dsh_status dsh_verify_csv(const char* suite, uint64_t seed, double scale,
                          char** csv, unsigned* violations) {
  return guarded([&] {
    require(suite && csv, "null argument");
    *csv = nullptr;
    const auto r = dsh::run_suite(suite, {seed, scale});
    if (violations) *violations = r.violations();
    *csv = dup(r.csv());
  });
}

dsh_status dsh_dataset_generate(dsh_domain domain, size_t dim, size_t count,
                                uint64_t seed, char** text) {
  return guarded([&] {
    require(text, "null argument");
    require(domain >= DSH_HAMMING && domain <= DSH_EUCLIDEAN, "bad domain");
    *text = nullptr;
    *text = dup(dsh::format_dataset(dsh::random_dataset(
        static_cast<dsh::Domain>(domain), dim, count, seed)));
  });
}

dsh_status dsh_annulus_demo_csv(const char* dataset_text,
                                const char* family_spec, double r_minus,
                                double r, double r_plus, uint64_t queries,
                                uint64_t seed, char** summary, char** detail) {
  return guarded([&] {
    require(dataset_text && family_spec && summary, "null argument");
    *summary = nullptr;
    if (detail) *detail = nullptr;
    const dsh::Dataset data = dsh::parse_dataset(dataset_text);
    dsh::AnnulusDemoConfig cfg;
    cfg.family = family_spec;
    cfg.params = {r_minus, r, r_plus};
    cfg.queries = queries;
    cfg.seed = seed;
    const auto res = dsh::run_annulus_demo(data, cfg);
    std::string s = res.summary_csv();
    std::string d = res.detail_csv();
    *summary = dup(s);
    if (detail) *detail = dup(d);
  });
}

dsh_status dsh_range_demo_csv(const char* family_spec, size_t dim,
                              size_t background, double r, double r_plus,
                              uint64_t queries, uint64_t seed, char** csv) {
  return guarded([&] {
    require(family_spec && csv, "null argument");
    *csv = nullptr;
    dsh::RangeDemoConfig cfg;
    cfg.family = family_spec;
    cfg.d = dim;
    cfg.background = background;
    cfg.r = r;
    cfg.r_plus = r_plus;
    cfg.queries = queries;
    cfg.seed = seed;
    *csv = dup(dsh::run_range_demo(cfg).csv());
  });
}

dsh_status dsh_privacy_demo_csv(size_t dim, double r, double c, double epsilon,
                                double delta, uint64_t pairs, uint64_t seed,
                                char** csv) {
  return guarded([&] {
    require(csv, "null argument");
    *csv = nullptr;
    dsh::PrivacyDemoConfig cfg;
    cfg.d = dim;
    cfg.r = r;
    cfg.c = c;
    cfg.epsilon = epsilon;
    cfg.delta = delta;
    cfg.pairs = pairs;
    cfg.validation_pairs = pairs;
    cfg.seed = seed;
    *csv = dup(dsh::privacy_demo_csv(dsh::run_privacy_demo(cfg), cfg));
  });
}

}  // extern "C"
