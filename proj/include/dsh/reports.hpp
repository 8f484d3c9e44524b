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

// CSV reports shared by the command-line tool and the acceptance runner.
// Every float is printed with 17 significant digits, and no report depends
// on the worker count.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsh/core.hpp"
#include "dsh/indexes.hpp"
#include "dsh/privacy.hpp"

namespace dsh {

std::string format_double(double v);

/// "start:step:stop" (inclusive, to within step/1e9) or "x1,x2,...".
std::vector<double> parse_grid(std::string_view text);

struct CsvRow {
  std::string family;
  double argument = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
  std::optional<double> closed_form;
  std::optional<double> lower_bound;
  std::optional<double> upper_bound;
};

inline constexpr const char* kCsvHeader =
    "family,argument,estimate,stderr,n,closed_form,lower_bound,upper_bound";

/// Header plus one line per row.
std::string format_csv(const std::vector<CsvRow>& rows);

/// Estimates the CPF at each grid point; point i uses seed derive_seed(seed,
/// i). Hamming arguments are snapped to multiples of 1/d.
std::vector<CsvRow> cpf_curve(const DshFamily& family,
                              const std::vector<double>& grid,
                              std::uint64_t n, std::uint64_t seed);

enum class CheckStatus { pass, violated, inconclusive };

const char* check_status_name(CheckStatus s);

struct CheckRow {
  std::string suite;
  int criterion = 0;
  std::string check;
  double argument = 0.0;
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  CheckStatus status = CheckStatus::pass;
};

struct SuiteReport {
  std::vector<CheckRow> rows;
  unsigned violations() const;
  /// Header "suite,criterion,check,argument,value,lower,upper,status".
  std::string csv() const;
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  /// Multiplies every Monte Carlo trial count (minimum 1000 trials).
  double scale = 1.0;
};

const std::vector<std::string>& suite_names();

/// hamming, sphere, euclidean, bounds, ssse, or jensen. Unknown names throw
/// InvalidArgument.
SuiteReport run_suite(std::string_view name, const SuiteOptions& options);

// Demos.

struct AnnulusDemoConfig {
  std::string family = "product(k1=10,k2=1)";
  AnnulusQueryParams params{0.0, 3.0 / 32, 10.0 / 32};
  std::uint64_t queries = 200;
  std::uint64_t seed = 1;
};

struct AnnulusDemoQuery {
  std::size_t base = 0;
  bool found = false;
  double distance = 0.0;
  std::uint64_t candidates = 0;
  std::uint64_t final_bucket = 0;
  bool within_cutoff = true;  ///< candidates <= 8L + final bucket
};

struct AnnulusDemoResult {
  std::size_t points = 0;
  unsigned power = 0;
  std::size_t tables = 0;
  std::vector<AnnulusDemoQuery> queries;
  double recall() const;
  bool all_within_cutoff() const;
  std::string summary_csv() const;
  std::string detail_csv() const;
};

/// Each query sits at distance r from a uniformly chosen dataset point. An
/// empty dataset gives an empty report.
AnnulusDemoResult run_annulus_demo(const Dataset& data,
                                   const AnnulusDemoConfig& config);

struct RangeDemoConfig {
  std::size_t d = 32;
  std::size_t background = 10000;
  double r = 2.0 / 32;
  double r_plus = 8.0 / 32;
  std::uint64_t queries = 200;
  /// Hamming distances of the points planted around each query; all must be
  /// at most r d.
  std::vector<std::size_t> planted = {0, 1, 2, 2, 1};
  std::string family = "bit";
  std::uint64_t seed = 1;
};

struct RangeDemoResult {
  unsigned power = 0;
  std::size_t tables = 0;
  /// Per planted slot: queries whose planted point was reported.
  std::vector<std::uint64_t> slot_reported;
  std::uint64_t queries = 0;
  /// Reported points failing the exact distance check (always 0).
  std::uint64_t false_reports = 0;
  std::uint64_t reported = 0;
  std::uint64_t retrieved = 0;
  std::string csv() const;
};

/// Builds one Hamming range index over uniform background points plus the
/// planted points of every query, then reports around each query.
RangeDemoResult run_range_demo(const RangeDemoConfig& config);

/// Confusion matrix of the privacy demo.
std::string privacy_demo_csv(const PrivacyDemoResult& result,
                             const PrivacyDemoConfig& config);

}  // namespace dsh
