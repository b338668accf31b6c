#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "covq/cli.hpp"
#include "covq/covert_bounds.hpp"
#include "covq/oracle.hpp"

using namespace covq;

namespace {

struct Outcome {
  bool passed{true};
  std::string detail;
};

Outcome from_reports(const std::vector<VerificationReport>& reports) {
  Outcome outcome;
  std::ostringstream detail;
  for (const auto& r : reports) {
    if (!r.passed) {
      outcome.passed = false;
      detail << r.check_name << " error " << r.metric_error() << " > " << r.tolerance << "; ";
    }
  }
  if (outcome.passed) {
    double worst = 0.0;
    std::string name;
    for (const auto& r : reports)
      if (r.tolerance > 0 && r.metric_error() / r.tolerance >= worst) {
        worst = r.metric_error() / r.tolerance;
        name = r.check_name;
      }
    detail << reports.size() << " reports, worst error/tolerance " << worst << " (" << name << ")";
  }
  outcome.detail = detail.str();
  return outcome;
}

Outcome suite(std::vector<std::string> checks) {
  SuiteOptions options;
  options.checks = std::move(checks);
  return from_reports(run_suite(options));
}

Outcome bound_structure() {
  const ChannelParams params{0.9, 0.12};
  const double delta = 0.05;
  const auto start = std::chrono::steady_clock::now();
  const auto ns = cli::expand(cli::NRange{1e4, 1e14, 50});
  const auto curve = bounds_curve(params, delta, ns, 1e8);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  Outcome outcome;
  std::ostringstream detail;
  auto fail = [&](const std::string& what) {
    outcome.passed = false;
    detail << what << "; ";
  };
  const double lower_ref = curve.front().lower_qubits / std::sqrt(curve.front().n);
  double lower_spread = 0.0;
  for (const auto& p : curve) {
    if (!(p.lower_qubits > 0 && p.upper_qubits > 0)) fail("non-positive bound");
    if (p.upper_qubits < p.lower_qubits) fail("upper below lower");
    if (!(p.assisted_lower_qubits > p.lower_qubits)) fail("assisted not above lower");
    lower_spread = std::max(lower_spread, std::abs(p.lower_qubits / std::sqrt(p.n) / lower_ref - 1));
  }
  if (lower_spread > 1e-14) fail("lower/sqrt(n) not constant");
  const double limit = upper_bound_sqrt_n_limit(params, delta);
  const double last = curve.back().upper_qubits / std::sqrt(curve.back().n);
  const double gap = std::abs(last / limit - 1);
  if (gap > 1e-2) fail("upper/sqrt(n) off its limit");
  if (seconds >= 10.0) fail("sweep too slow");
  detail << "lower/sqrt(n) spread " << lower_spread << ", upper/sqrt(n) vs limit " << gap
         << ", sweep " << seconds << " s";
  outcome.detail = detail.str();
  return outcome;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "covq_acceptance";
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  for (const char* name : {"first.csv", "second.csv"}) {
    const std::string path = (dir / name).string();
    const char* argv[] = {"covert-bosonic", "bounds",        "--eta",          "0.9",
                          "--nbar-b",       "0.12",          "--delta",        "0.05",
                          "--n",            "1e4:1e14:50",   "--modes-per-sec", "1e8",
                          "--out",          path.c_str()};
    std::ostringstream out, err;
    if (cli::run(static_cast<int>(std::size(argv)), argv, out, err) != 0)
      return {false, "bounds run failed: " + err.str()};
    files.push_back(slurp(path));
  }
  std::filesystem::remove_all(dir);
  if (files[0].empty()) return {false, "empty output"};
  if (files[0] != files[1]) return {false, "outputs differ"};
  return {true, std::to_string(files[0].size()) + " identical bytes"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "willie-state equivalence", [] { return suite({"willie_state"}); }},
      {2, "chi2 divergence", [] { return suite({"chi2"}); }},
      {3, "covertness chain", [] { return suite({"pinsker"}); }},
      {4, "depolarizing reduction", [] { return suite({"depolarizing"}); }},
      {5, "bound structure", bound_structure},
      {6, "entanglement-breaking pipelines", [] { return suite({"eb_pipelines"}); }},
      {7, "angular integrals", [] { return suite({"laguerre5", "laguerre6"}); }},
      {8, "determinism", determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!outcome.passed) ++failures;
    std::printf("%s %d %s: %s [%.1f s]\n", outcome.passed ? "PASS" : "FAIL", c.id, c.name,
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
