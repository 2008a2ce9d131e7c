// Acceptance suite: one PASS/FAIL line per criterion, exit code 1 if any fail.
#include <bit>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "sorlayout/benchmark.hpp"
#include "sorlayout/insertion.hpp"
#include "sorlayout/layout.hpp"
#include "sorlayout/regression.hpp"
#include "sorlayout/sor_engine.hpp"

using namespace sorlayout;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Outcome dominant_systems() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> size(1, 20);
  int ok = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = size(rng);
    const oracle::DominantSystem d = oracle::random_dominant_system(rng, n);
    const auto direct = oracle::gauss_solve(d.a, d.b);
    if (!direct) continue;

    ConstraintSystem system(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Term> terms;
      for (std::size_t j = 0; j < n; ++j) {
        if (d.a[i][j] != 0.0) terms.push_back({VariableId{j}, d.a[i][j]});
      }
      system.add_constraint(std::move(terms), Relation::kEq, d.b[i], static_cast<int>(i + 1));
    }
    const PivotAssignment pivots = assign_pivots_diagonal(system);
    SolveOptions options;
    options.fixed_pivots = &pivots;
    SolverConfig config;  // omega 0.7, tolerance 0.01
    const SolveResult r =
        solve(system, system.priority_order(), Solution::zeros(system), config, options);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(r.solution[i] - (*direct)[i]));
    worst = std::max(worst, err);
    if (r.converged && err <= 0.1) ++ok;
  }
  const double secs = seconds_since(t0);
  std::ostringstream detail;
  detail << ok << "/200 converged within 0.1 (max deviation " << worst << "), " << secs << " s";
  return {ok == 200 && secs < 5.0, detail.str()};
}

Outcome gauss_seidel_reduction() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> value(-100.0, 100.0), coeff(-10.0, 10.0);
  std::uniform_int_distribution<int> width(1, 6);
  const std::size_t n = 8;
  int identical = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    // Row i of a dense system; column j sits in term j.
    std::vector<double> a(n, 0.0);
    std::vector<std::size_t> cols(n);
    for (std::size_t j = 0; j < n; ++j) cols[j] = j;
    std::shuffle(cols.begin(), cols.end(), rng);
    const int k = width(rng);
    for (int t = 0; t < k; ++t) {
      double c = 0.0;
      while (std::abs(c) < 1e-3) c = coeff(rng);
      a[cols[t]] = c;
    }
    const std::size_t pivot = cols[std::uniform_int_distribution<int>(0, k - 1)(rng)];
    const double b = value(rng);
    std::vector<double> x(n);
    for (double& v : x) v = value(rng);

    // Gauss-Seidel update for the pivot row.
    double s = b;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != pivot && a[j] != 0.0) s -= a[j] * x[j];
    }
    const double expected = s / a[pivot];

    ConstraintSystem system(n);
    std::vector<Term> terms;
    for (std::size_t j = 0; j < n; ++j) {
      if (a[j] != 0.0) terms.push_back({VariableId{j}, a[j]});
    }
    const ConstraintId id = system.add_constraint(terms, Relation::kEq, b, 1);
    const double got = relax_step(system.constraint(id), VariableId{pivot}, Solution(x), 1.0);
    if (std::bit_cast<std::uint64_t>(got) == std::bit_cast<std::uint64_t>(expected)) ++identical;
  }
  return {identical == 1000, std::to_string(identical) + "/1000 steps bit-identical"};
}

// Fraction of random systems whose enabled set matches the brute-force
// hierarchy, with monotonicity replays counted along the way.
struct HierarchyTally {
  int agree = 0, disabled = 0, monotone = 0;
};

HierarchyTally hierarchy_tally(int trials, int max_coeff, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  HierarchyTally tally;
  for (int trial = 0; trial < trials; ++trial) {
    const ConstraintSystem system = oracle::random_small_system(rng, max_coeff);
    SolverConfig config;
    config.seed = static_cast<std::uint64_t>(trial);

    InsertionOptions options;
    options.on_attempt = [&](const InsertionAttempt& at) {
      if (at.accepted) return;
      ++tally.disabled;
      std::vector<ConstraintId> with(at.enabled_before);
      with.push_back(at.candidate);
      Rng replay = at.rng_before;
      if (!try_enable(system, with, at.start, config, replay).accepted) ++tally.monotone;
    };
    const ResolvedSolve resolved =
        solve_with_insertion(system, Solution::zeros(system), config, options);

    std::vector<std::size_t> got;
    for (ConstraintId id : resolved.enabled) got.push_back(id.value);
    if (got == oracle::greedy_hierarchy(system)) ++tally.agree;
  }
  return tally;
}

Outcome conflict_hierarchy() {
  // Unit coefficients, the form of layout constraints such as x2 - x1 >= 117.
  const HierarchyTally t = hierarchy_tally(500, 1, 99);
  const double rate = t.agree / 500.0;

  // Reported only: general integer coefficients, where the random pivot rule
  // sometimes fails to settle on a feasible set within the sweep budget.
  const HierarchyTally wide = hierarchy_tally(500, 3, 99);
  std::cout << "INFO  hierarchy with coefficients in [-3, 3]: " << wide.agree
            << "/500 match, " << wide.monotone << "/" << wide.disabled
            << " disabled constraints fail on replay\n";

  std::ostringstream detail;
  detail << t.agree << "/500 match the brute-force hierarchy (" << rate * 100 << "%), "
         << t.monotone << "/" << t.disabled << " disabled constraints fail on replay";
  return {rate >= 0.98 && t.monotone == t.disabled, detail.str()};
}

Outcome count_law() {
  int checked = 0, ok = 0;
  for (int n : {0, 1, 50, 201}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      ++checked;
      const LayoutSpec layout = generate_layout(n, 800, 600, seed);
      if (layout.system.size() == static_cast<std::size_t>(4 * n + 4)) ++ok;
    }
  }
  const bool endpoints = generate_layout(0, 800, 600, 0).system.size() == 4 &&
                         generate_layout(201, 800, 600, 0).system.size() == 808;
  return {ok == checked && endpoints,
          std::to_string(ok) + "/" + std::to_string(checked) + " layouts have m = 4n + 4" +
              (endpoints ? ", endpoints 4 and 808" : ", endpoint mismatch")};
}

std::map<int, double> median_sweeps(const std::vector<BenchmarkRecord>& records) {
  std::map<int, std::vector<double>> by_size;
  for (const auto& r : records) by_size[r.n_constraints].push_back(static_cast<double>(r.sweeps));
  std::map<int, double> out;
  for (auto& [c, v] : by_size) out[c] = median(v);
  return out;
}

Outcome warm_start_effect() {
  const auto t0 = Clock::now();
  ExperimentConfig config;
  config.sizes = {25, 50, 100};
  config.layouts_per_size = 10;
  config.changes_per_layout = 20;
  config.master_seed = 2024;
  const auto cold = median_sweeps(run_experiment(UseCase::kSmall, Strategy::kCold, config));
  const auto warm = median_sweeps(run_experiment(UseCase::kSmall, Strategy::kWarm, config));
  const double secs = seconds_since(t0);

  bool all = true;
  std::ostringstream detail;
  for (const auto& [c, cold_median] : cold) {
    const double warm_median = warm.at(c);
    all = all && warm_median <= cold_median;
    detail << "c=" << c << " warm " << warm_median << " vs cold " << cold_median << "; ";
  }
  detail << secs << " s";

  // Reported only: the same comparison for the other use cases.
  ExperimentConfig other = config;
  other.sizes = {25};
  other.layouts_per_size = 3;
  other.changes_per_layout = 10;
  for (UseCase uc : {UseCase::kBig, UseCase::kChange}) {
    const auto c = median_sweeps(run_experiment(uc, Strategy::kCold, other));
    const auto w = median_sweeps(run_experiment(uc, Strategy::kWarm, other));
    for (const auto& [m, cold_median] : c) {
      std::cout << "INFO  warm-start " << to_string(uc) << " c=" << m << ": warm median "
                << w.at(m) << " sweeps vs cold " << cold_median << '\n';
    }
  }
  return {all && secs < 120.0, detail.str()};
}

Outcome regression_fitter() {
  bool ok = true;
  double worst_beta = 0.0, worst_r2 = 0.0, worst_oracle = 0.0;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coef(-5.0, 5.0), cval(4.0, 808.0), tval(0.0, 1e4);

  for (int trial = 0; trial < 20; ++trial) {
    const double beta[4] = {coef(rng) * 100, coef(rng), coef(rng) * 1e-2, coef(rng) * 1e-5};
    std::vector<SamplePoint> points;
    for (int c = 4; c <= 808; c += 40) {
      const double x = c;
      points.push_back({x, beta[0] + beta[1] * x + beta[2] * x * x + beta[3] * x * x * x});
    }
    const RegressionFit fit = fit_cubic(points);
    for (int k = 0; k < 4; ++k) worst_beta = std::max(worst_beta, std::abs(fit.beta[k] - beta[k]));
    worst_r2 = std::max(worst_r2, std::abs(fit.r_squared - 1.0));

    std::vector<double> cs, ts;
    std::vector<SamplePoint> noisy;
    for (int i = 0; i < 20; ++i) {
      cs.push_back(cval(rng));
      ts.push_back(tval(rng));
      noisy.push_back({cs.back(), ts.back()});
    }
    const RegressionFit random_fit = fit_cubic(noisy);
    const std::vector<double> reference = oracle::cubic_lstsq(cs, ts);
    for (int k = 0; k < 4; ++k) {
      worst_oracle = std::max(worst_oracle, std::abs(random_fit.beta[k] - reference[k]));
    }
  }
  ok = worst_beta <= 1e-6 && worst_r2 <= 1e-9 && worst_oracle <= 1e-8;
  std::ostringstream detail;
  detail << "max |beta error| " << worst_beta << ", max |R^2 - 1| " << worst_r2
         << ", max deviation from QR oracle " << worst_oracle;
  return {ok, detail.str()};
}

Outcome harness_smoke() {
  const auto t0 = Clock::now();
  const auto dir = std::filesystem::temp_directory_path() / "sorlayout_acceptance";
  std::filesystem::create_directories(dir);
  const std::string csv = (dir / "run.csv").string();

  std::ostringstream out, err;
  const int code = bench_cli_main(
      {"--use-case", "all", "--max-areas", "50", "--step", "10", "--out", csv}, out, err);
  if (code != 0) return {false, "benchmark exited with " + std::to_string(code) + ": " + err.str()};

  std::vector<BenchmarkRecord> records;
  try {
    records = read_csv(csv);
  } catch (const std::exception& e) {
    return {false, std::string("CSV does not parse: ") + e.what()};
  }
  std::map<std::pair<UseCase, Strategy>, std::size_t> groups;
  for (const auto& r : records) ++groups[{r.use_case, r.strategy}];
  if (groups.size() != 6) return {false, "expected 6 use-case/strategy groups"};

  std::ostringstream fit_out, fit_err;
  if (bench_cli_main({"--fit", csv}, fit_out, fit_err) != 0) {
    return {false, "fit failed: " + fit_err.str()};
  }
  std::istringstream lines(fit_out.str());
  std::string line;
  int fitted = 0;
  double lowest = 1.0;
  while (std::getline(lines, line)) {
    const double r2 = std::stod(line.substr(line.rfind(',') + 1));
    lowest = std::min(lowest, r2);
    ++fitted;
    std::cout << "INFO  fit " << line << '\n';
  }
  const double secs = seconds_since(t0);
  std::ostringstream detail;
  detail << records.size() << " records in 6 groups, " << fitted << " fits, lowest R^2 " << lowest
         << ", " << secs << " s";
  return {fitted == 6 && lowest >= 0.5, detail.str()};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"solver-correctness-oracle", dominant_systems},
      {"omega-one-gauss-seidel", gauss_seidel_reduction},
      {"conflict-hierarchy-oracle", conflict_hierarchy},
      {"constraint-count-law", count_law},
      {"warm-start-effect", warm_start_effect},
      {"regression-fitter", regression_fitter},
      {"harness-smoke", harness_smoke},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS  " : "FAIL  ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
