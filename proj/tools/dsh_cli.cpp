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

// Command-line front end. Talks to the toolkit only through dsh.h.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dsh/dsh.h"

namespace {

constexpr int kExitViolations = 1;
constexpr int kExitError = 2;

struct Failure {
  dsh_status status;
  std::string message;
};

void check(dsh_status s) {
  if (s != DSH_OK) throw Failure{s, dsh_last_error()};
}

// Owns a string returned by the library.
struct Owned {
  char* p = nullptr;
  ~Owned() { dsh_string_free(p); }
};

void emit(const std::string& path, const char* text) {
  if (path.empty() || path == "-") {
    std::fputs(text, stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{DSH_IO, "cannot open '" + path + "' for writing"};
  out << text;
  if (!out.flush()) throw Failure{DSH_IO, "write to '" + path + "' failed"};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{DSH_IO, "cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

dsh_domain parse_domain(const std::string& s) {
  if (s == "hamming") return DSH_HAMMING;
  if (s == "sphere") return DSH_SPHERE;
  if (s == "euclidean") return DSH_EUCLIDEAN;
  throw Failure{DSH_INVALID_ARGUMENT, "unknown domain '" + s + "'"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distance-sensitive hashing toolkit"};
  app.require_subcommand(1);
  app.footer(std::string("\n") + dsh_family_grammar() +
             "\nDSH_THREADS caps the worker count; output does not depend "
             "on it.");

  std::uint64_t seed = 1;
  std::string out_path;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Master seed")->capture_default_str();
    sub->add_option("--out", out_path, "Output path (default stdout)");
  };

  // cpf-curve
  auto* curve = app.add_subcommand("cpf-curve", "Estimate a CPF over a grid");
  std::string family;
  std::string grid;
  std::size_t dim = 64;
  std::uint64_t n = 100000;
  curve->add_option("--family", family, "Family expression")->required();
  curve->add_option("--grid", grid, "start:step:stop or x1,x2,...")
      ->required();
  curve->add_option("--dim", dim, "Dimension")->capture_default_str();
  curve->add_option("--n", n, "Trials per grid point")->capture_default_str();
  common(curve);

  // verify
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  std::string suite;
  double scale = 1.0;
  verify->add_option("--suite", suite, "Suite name")
      ->required()
      ->check(CLI::IsMember(
          {"hamming", "sphere", "euclidean", "bounds", "ssse", "jensen"}));
  verify->add_option("--scale", scale, "Trial-count multiplier")
      ->capture_default_str();
  common(verify);

  // annulus-demo
  auto* annulus = app.add_subcommand("annulus-demo", "Annulus search demo");
  std::string dataset;
  std::string annulus_family = "product(k1=10,k2=1)";
  double r_minus = 0.0;
  double r = 3.0 / 32;
  double r_plus = 10.0 / 32;
  std::uint64_t queries = 200;
  std::string detail_path;
  annulus->add_option("--dataset", dataset, "Dataset file")->required();
  annulus->add_option("--family", annulus_family, "Family expression")
      ->capture_default_str();
  annulus->add_option("--r-minus", r_minus)->capture_default_str();
  annulus->add_option("--r", r)->capture_default_str();
  annulus->add_option("--r-plus", r_plus)->capture_default_str();
  annulus->add_option("--queries", queries)->capture_default_str();
  annulus->add_option("--detail", detail_path, "Per-query CSV path");
  common(annulus);

  // range-demo
  auto* range = app.add_subcommand("range-demo", "Range reporting demo");
  std::string range_family = "bit";
  std::size_t range_dim = 32;
  std::size_t background = 10000;
  double range_r = 2.0 / 32;
  double range_r_plus = 8.0 / 32;
  std::uint64_t range_queries = 200;
  range->add_option("--family", range_family)->capture_default_str();
  range->add_option("--dim", range_dim)->capture_default_str();
  range->add_option("--n", background, "Background points")
      ->capture_default_str();
  range->add_option("--r", range_r)->capture_default_str();
  range->add_option("--r-plus", range_r_plus)->capture_default_str();
  range->add_option("--queries", range_queries)->capture_default_str();
  common(range);

  // privacy-demo
  auto* privacy = app.add_subcommand(
      "privacy-demo", "Distance-threshold sketch demo (plaintext simulation)");
  std::size_t privacy_dim = 128;
  double privacy_r = 0.1;
  double privacy_c = 2.0;
  double epsilon = 0.05;
  double delta = 0.05;
  std::uint64_t pairs = 2000;
  privacy->add_option("--dim", privacy_dim)->capture_default_str();
  privacy->add_option("--r", privacy_r, "Relative threshold")
      ->capture_default_str();
  privacy->add_option("--c", privacy_c)->capture_default_str();
  privacy->add_option("--epsilon", epsilon)->capture_default_str();
  privacy->add_option("--delta", delta)->capture_default_str();
  privacy->add_option("--n", pairs, "Pairs per class")->capture_default_str();
  common(privacy);

  // gen-dataset
  auto* gen = app.add_subcommand("gen-dataset", "Write a uniform dataset");
  std::string domain = "hamming";
  std::size_t gen_dim = 32;
  std::size_t count = 10000;
  gen->add_option("--domain", domain)->capture_default_str();
  gen->add_option("--dim", gen_dim)->capture_default_str();
  gen->add_option("--n", count, "Number of points")->capture_default_str();
  common(gen);

  CLI11_PARSE(app, argc, argv);

  try {
    Owned text;
    int code = 0;
    if (curve->parsed()) {
      check(dsh_cpf_curve_csv(family.c_str(), dim, grid.c_str(), n, seed,
                              &text.p));
    } else if (verify->parsed()) {
      unsigned violations = 0;
      check(dsh_verify_csv(suite.c_str(), seed, scale, &text.p, &violations));
      if (violations > 0) {
        std::fprintf(stderr, "%u check(s) violated\n", violations);
        code = kExitViolations;
      }
    } else if (annulus->parsed()) {
      const std::string data = slurp(dataset);
      Owned detail;
      check(dsh_annulus_demo_csv(data.c_str(), annulus_family.c_str(), r_minus,
                                 r, r_plus, queries, seed, &text.p,
                                 detail_path.empty() ? nullptr : &detail.p));
      if (!detail_path.empty()) emit(detail_path, detail.p);
    } else if (range->parsed()) {
      check(dsh_range_demo_csv(range_family.c_str(), range_dim, background,
                               range_r, range_r_plus, range_queries, seed,
                               &text.p));
    } else if (privacy->parsed()) {
      check(dsh_privacy_demo_csv(privacy_dim, privacy_r, privacy_c, epsilon,
                                 delta, pairs, seed, &text.p));
    } else if (gen->parsed()) {
      check(dsh_dataset_generate(parse_domain(domain), gen_dim, count, seed,
                                 &text.p));
    }
    emit(out_path, text.p);
    return code;
  } catch (const Failure& f) {
    std::fprintf(stderr, "error (%s): %s\n", dsh_status_name(f.status),
                 f.message.c_str());
    return kExitError;
  }
}
