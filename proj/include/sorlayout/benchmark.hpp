#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sorlayout/regression.hpp"
#include "sorlayout/sor_engine.hpp"

namespace sorlayout {

enum class UseCase { kSmall, kBig, kChange };
enum class Strategy { kCold, kWarm };

std::string_view to_string(UseCase use_case);
std::string_view to_string(Strategy strategy);
UseCase use_case_from_string(std::string_view text);
Strategy strategy_from_string(std::string_view text);

/// One timed solve after one layout change.
struct BenchmarkRecord {
  UseCase use_case = UseCase::kSmall;
  Strategy strategy = Strategy::kCold;
  int n_constraints = 0;
  std::uint64_t layout_seed = 0;
  int change_index = 0;
  std::int64_t time_ns = 0;
  long long sweeps = 0;
  double converged_fraction = 0.0;
  int disabled_count = 0;

  friend bool operator==(const BenchmarkRecord&, const BenchmarkRecord&) = default;
};

struct ExperimentConfig {
  std::vector<int> sizes;  // numbers of areas
  int layouts_per_size = 10;
  int changes_per_layout = 20;
  SolverConfig solver;
  std::uint64_t master_seed = 1;
  double width = 800.0;
  double height = 600.0;
  double change_fraction = 0.1;
};

/// splitmix64 over the combined inputs.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

/// {0, step, 2*step, ...} capped by and always including max_areas.
std::vector<int> size_grid(int max_areas, int step);

/// Generates layouts_per_size layouts per size, applies an untimed warm-up
/// change, then times changes_per_layout changes, each solved by constraint
/// insertion. Cold solves start at zero, warm solves at the previous
/// result. Mutations and solver seeds depend only on (master seed, use case,
/// size, layout, change), so cold and warm runs see identical problems.
std::vector<BenchmarkRecord> run_experiment(UseCase use_case, Strategy strategy,
                                            const ExperimentConfig& config);

/// Sorts by (use_case, strategy, n_constraints, layout_seed, change_index).
void sort_records(std::vector<BenchmarkRecord>& records);

inline constexpr std::string_view kCsvHeader =
    "use_case,strategy,n_constraints,layout_seed,change_index,time_ns,sweeps,"
    "converged_fraction,disabled_count";

/// Writes the header and one sorted row per record. Throws Error(kIoFailure).
void write_csv(std::vector<BenchmarkRecord> records, const std::string& path);
void write_csv(std::vector<BenchmarkRecord> records, std::ostream& out);

/// Throws Error(kIoFailure) or Error(kBadFormat).
std::vector<BenchmarkRecord> read_csv(const std::string& path);
std::vector<BenchmarkRecord> read_csv(std::istream& in);

struct GroupFit {
  UseCase use_case;
  Strategy strategy;
  RegressionFit fit;
  std::size_t points = 0;
};

/// Cubic fit of time_ns against n_constraints per (use_case, strategy).
std::vector<GroupFit> fit_groups(const std::vector<BenchmarkRecord>& records);

/// "use_case,strategy,beta0,beta1,beta2,beta3,r_squared"
std::string format_fit_line(const GroupFit& group);

double median(std::vector<double> values);

/// Entry point of the benchmark CLI. Returns the process exit code.
int bench_cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sorlayout
