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


// Acceptance runner: one PASS/FAIL line per criterion.
//
//   dsh_acceptance [--seed N] [--scale X] [--expect-fail 6,...]
//
// Exit status is 0 when the failing criteria are exactly the expected ones.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dsh/core.hpp"
#include "dsh/indexes.hpp"
#include "dsh/privacy.hpp"
#include "dsh/reports.hpp"

using namespace dsh;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const std::map<int, std::string> kTitles = {
    {1, "closed-form CPF agreement"},
    {2, "filter sandwich and symmetry"},
    {3, "euclidean CPF shape and quadrature"},
    {4, "rho_minus c^2 trend"},
    {5, "lower-bound consistency"},
    {6, "jensen chain"},
    {7, "gaussian tail bounds"},
    {8, "valiant embedding"},
    {9, "polynomial hamming scaling"},
    {10, "annulus index"},
    {11, "range reporting"},
    {12, "privacy protocol"},
    {13, "reproducibility"},
};

// Suite rows grouped by criterion; criterion 0 rows are supplementary.
struct Tally {
  unsigned rows = 0;
  unsigned violated = 0;
  unsigned inconclusive = 0;
};

std::string join_ints(const std::set<int>& s) {
  std::string out;
  for (int v : s) out += (out.empty() ? "" : ",") + std::to_string(v);
  return out.empty() ? "none" : out;
}

std::string csv_fingerprint(double scale, std::uint64_t seed) {
  std::string all;
  for (const auto& name : suite_names()) {
    all += run_suite(name, {seed, scale}).csv();
  }
  Dataset data = random_dataset(Domain::hamming, 32, 2000, seed);
  AnnulusDemoConfig ac;
  ac.queries = 20;
  ac.seed = seed;
  const auto ar = run_annulus_demo(data, ac);
  all += ar.summary_csv() + ar.detail_csv();
  RangeDemoConfig rc;
  rc.background = 2000;
  rc.queries = 20;
  rc.seed = seed;
  all += run_range_demo(rc).csv();
  PrivacyDemoConfig pc;
  pc.pairs = 100;
  pc.validation_pairs = 200;
  pc.seed = seed;
  all += privacy_demo_csv(run_privacy_demo(pc), pc);
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DSH toolkit acceptance runner"};
  std::uint64_t seed = 1;
  double scale = 1.0;
  double repro_scale = 0.01;
  std::vector<int> expect_fail;
  app.add_option("--seed", seed)->capture_default_str();
  app.add_option("--scale", scale, "Trial-count multiplier for the suites")
      ->capture_default_str();
  app.add_option("--repro-scale", repro_scale,
                 "Trial-count multiplier for the reproducibility reruns")
      ->capture_default_str();
  app.add_option("--expect-fail", expect_fail,
                 "Criteria known to fail; the run succeeds when exactly "
                 "these fail")
      ->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const auto start = std::chrono::steady_clock::now();
  std::map<int, Outcome> outcomes;
  std::map<int, Tally> tally;
  std::vector<CheckRow> failing_rows;
  std::string jensen_detail;

  for (const auto& name : suite_names()) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto report = run_suite(name, {seed, scale});
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    std::fprintf(stderr, "suite %-10s %5zu rows %7.1f s\n", name.c_str(),
                 report.rows.size(), secs);
    for (const auto& row : report.rows) {
      if (row.check == "jensen_satisfied") {
        jensen_detail = format_double(row.value) + " of " +
                        format_double(row.upper) + " instances hold";
      }
      auto& t = tally[row.criterion];
      ++t.rows;
      if (row.status == CheckStatus::violated) {
        ++t.violated;
        failing_rows.push_back(row);
      }
      if (row.status == CheckStatus::inconclusive) ++t.inconclusive;
    }
  }
  for (int c : {1, 2, 3, 4, 5, 6, 7, 8, 9}) {
    const Tally t = tally[c];
    std::ostringstream d;
    d << t.rows << " checks, " << t.violated << " violated";
    if (t.inconclusive) d << ", " << t.inconclusive << " inconclusive";
    outcomes[c] = {t.rows > 0 && t.violated == 0,
                   c == 6 && !jensen_detail.empty() ? jensen_detail : d.str()};
  }

  {
    const Dataset data = random_dataset(Domain::hamming, 32, 10000, seed);
    AnnulusDemoConfig cfg;
    cfg.seed = seed;
    const auto res = run_annulus_demo(data, cfg);
    std::ostringstream d;
    d << "recall " << format_double(res.recall()) << " over "
      << res.queries.size() << " queries, L = " << res.tables
      << ", cutoff respected: " << (res.all_within_cutoff() ? "yes" : "no");
    outcomes[10] = {res.queries.size() >= 200 && res.recall() >= 0.5 &&
                        res.all_within_cutoff(),
                    d.str()};
  }

  {
    RangeDemoConfig cfg;
    cfg.seed = seed;
    const auto res = run_range_demo(cfg);
    bool ok = res.queries >= 200 && res.false_reports == 0;
    std::ostringstream d;
    d << "per-slot frequency";
    for (auto hits : res.slot_reported) {
      const double f = static_cast<double>(hits) / res.queries;
      ok = ok && f > 0.5;
      d << " " << format_double(f).substr(0, 5);
    }
    d << ", false reports " << res.false_reports;
    outcomes[11] = {ok, d.str()};
  }

  {
    PrivacyDemoConfig cfg;
    cfg.seed = seed;
    const auto res = run_privacy_demo(cfg);
    const double close = static_cast<double>(res.close_yes) /
                         (res.close_yes + res.close_no);
    const double far =
        static_cast<double>(res.far_yes) / (res.far_yes + res.far_no);
    std::ostringstream d;
    d << "close yes " << res.close_yes << "/" << res.close_yes + res.close_no
      << ", far yes " << res.far_yes << "/" << res.far_yes + res.far_no
      << ", C = " << format_double(res.params.C).substr(0, 6);
    outcomes[12] = {close >= 1 - cfg.epsilon && far <= cfg.delta, d.str()};
  }

  {
    std::string first;
    bool same = true;
    for (unsigned threads : {1u, 4u, 1u, 4u}) {
      set_thread_override(threads);
      const std::string s = csv_fingerprint(repro_scale, seed);
      if (first.empty()) {
        first = s;
      } else {
        same = same && s == first;
      }
    }
    set_thread_override(0);
    outcomes[13] = {same, "suites and demos rerun under 1 and 4 workers, " +
                              std::to_string(first.size()) + " bytes, " +
                              (same ? "identical" : "different")};
  }

  std::set<int> failed;
  for (const auto& [c, o] : outcomes) {
    std::printf("%s %2d %-36s %s\n", o.pass ? "PASS" : "FAIL", c,
                kTitles.at(c).c_str(), o.detail.c_str());
    if (!o.pass) failed.insert(c);
  }
  if (tally.count(0)) {
    const Tally t = tally[0];
    std::printf("     supplementary checks: %u rows, %u violated\n", t.rows,
                t.violated);
    if (t.violated) failed.insert(0);
  }
  for (const auto& row : failing_rows) {
    if (row.criterion == 6) continue;  // summarized below
    std::fprintf(stderr, "violated: %s %d %s at %s\n", row.suite.c_str(),
                 row.criterion, row.check.c_str(),
                 format_double(row.argument).c_str());
  }
  if (tally[6].violated) {
    std::fprintf(stderr, "criterion 6: %s\n", jensen_detail.c_str());
  }

  const std::set<int> expected(expect_fail.begin(), expect_fail.end());
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  std::printf("failed: %s; expected: %s; %.0f s\n", join_ints(failed).c_str(),
              join_ints(expected).c_str(), secs);
  return failed == expected ? 0 : 1;
}
