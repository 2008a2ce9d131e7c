#include "sorlayout/benchmark.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "sorlayout/error.hpp"
#include "sorlayout/insertion.hpp"
#include "sorlayout/layout.hpp"

namespace sorlayout {

std::string_view to_string(UseCase use_case) {
  switch (use_case) {
    case UseCase::kSmall: return "small";
    case UseCase::kBig: return "big";
    case UseCase::kChange: return "change";
  }
  return "small";
}

std::string_view to_string(Strategy strategy) {
  return strategy == Strategy::kCold ? "cold" : "warm";
}

UseCase use_case_from_string(std::string_view text) {
  if (text == "small") return UseCase::kSmall;
  if (text == "big") return UseCase::kBig;
  if (text == "change") return UseCase::kChange;
  throw Error(ErrorCode::kBadFormat, "unknown use case '" + std::string(text) + "'");
}

Strategy strategy_from_string(std::string_view text) {
  if (text == "cold") return Strategy::kCold;
  if (text == "warm") return Strategy::kWarm;
  throw Error(ErrorCode::kBadFormat, "unknown strategy '" + std::string(text) + "'");
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(master);
  h = mix(h ^ a);
  h = mix(h ^ b);
  return mix(h ^ c);
}

std::vector<int> size_grid(int max_areas, int step) {
  if (max_areas < 0 || step < 1) {
    throw Error(ErrorCode::kInvalidArgument, "need max_areas >= 0 and step >= 1");
  }
  std::vector<int> sizes;
  for (int n = 0; n <= max_areas; n += step) sizes.push_back(n);
  if (sizes.back() != max_areas) sizes.push_back(max_areas);
  return sizes;
}

namespace {

void mutate(UseCase use_case, LayoutSpec& layout, Rng& rng, double fraction) {
  switch (use_case) {
    case UseCase::kSmall: small_step(layout, rng); break;
    case UseCase::kBig: big_step(layout, rng); break;
    case UseCase::kChange: perturb_constraints(layout, fraction, rng); break;
  }
}

}  // namespace

std::vector<BenchmarkRecord> run_experiment(UseCase use_case, Strategy strategy,
                                            const ExperimentConfig& config) {
  if (config.sizes.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "at least one problem size is required");
  }
  if (config.layouts_per_size < 1 || config.changes_per_layout < 1) {
    throw Error(ErrorCode::kInvalidArgument, "layouts and changes must be positive");
  }
  config.solver.validate();

  std::vector<BenchmarkRecord> records;
  for (int n_areas : config.sizes) {
    for (int layout_index = 0; layout_index < config.layouts_per_size; ++layout_index) {
      const std::uint64_t layout_seed =
          derive_seed(config.master_seed, static_cast<std::uint64_t>(use_case),
                      static_cast<std::uint64_t>(n_areas),
                      static_cast<std::uint64_t>(layout_index));
      LayoutSpec layout = generate_layout(n_areas, config.width, config.height, layout_seed);
      Rng mutation_rng(derive_seed(layout_seed, 0x6d7574));
      const Solution zeros = Solution::zeros(layout.system);

      SolverConfig solver = config.solver;
      solver.seed = derive_seed(layout_seed, 0x77u);
      mutate(use_case, layout, mutation_rng, config.change_fraction);
      Solution previous = solve_with_insertion(layout.system, zeros, solver).solution;

      for (int change = 0; change < config.changes_per_layout; ++change) {
        mutate(use_case, layout, mutation_rng, config.change_fraction);
        solver.seed = derive_seed(layout_seed, 0x73u, static_cast<std::uint64_t>(change));
        const Solution& start = strategy == Strategy::kWarm ? previous : zeros;
        ResolvedSolve resolved = solve_with_insertion(layout.system, start, solver);

        BenchmarkRecord rec;
        rec.use_case = use_case;
        rec.strategy = strategy;
        rec.n_constraints = static_cast<int>(layout.system.size());
        rec.layout_seed = layout_seed;
        rec.change_index = change;
        rec.time_ns = resolved.wall_time.count();
        rec.sweeps = resolved.total_sweeps;
        rec.converged_fraction =
            resolved.attempts == 0
                ? 1.0
                : static_cast<double>(resolved.converged_attempts) / resolved.attempts;
        rec.disabled_count = static_cast<int>(resolved.disabled.size());
        records.push_back(rec);

        previous = std::move(resolved.solution);
      }
    }
  }
  return records;
}

void sort_records(std::vector<BenchmarkRecord>& records) {
  std::sort(records.begin(), records.end(), [](const BenchmarkRecord& a, const BenchmarkRecord& b) {
    return std::tie(a.use_case, a.strategy, a.n_constraints, a.layout_seed, a.change_index) <
           std::tie(b.use_case, b.strategy, b.n_constraints, b.layout_seed, b.change_index);
  });
}

void write_csv(std::vector<BenchmarkRecord> records, std::ostream& out) {
  sort_records(records);
  out << kCsvHeader << '\n';
  char fraction[32];
  for (const BenchmarkRecord& r : records) {
    std::snprintf(fraction, sizeof fraction, "%.17g", r.converged_fraction);
    out << to_string(r.use_case) << ',' << to_string(r.strategy) << ',' << r.n_constraints << ','
        << r.layout_seed << ',' << r.change_index << ',' << r.time_ns << ',' << r.sweeps << ','
        << fraction << ',' << r.disabled_count << '\n';
  }
}

void write_csv(std::vector<BenchmarkRecord> records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open '" + path + "' for writing");
  write_csv(std::move(records), out);
  out.flush();
  if (!out) throw Error(ErrorCode::kIoFailure, "failed writing '" + path + "'");
}

std::vector<BenchmarkRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw Error(ErrorCode::kBadFormat, "missing or unexpected CSV header");
  }
  std::vector<BenchmarkRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 9) {
      throw Error(ErrorCode::kBadFormat, "line " + std::to_string(line_no) + ": expected 9 fields");
    }
    try {
      BenchmarkRecord r;
      r.use_case = use_case_from_string(fields[0]);
      r.strategy = strategy_from_string(fields[1]);
      r.n_constraints = std::stoi(fields[2]);
      r.layout_seed = std::stoull(fields[3]);
      r.change_index = std::stoi(fields[4]);
      r.time_ns = std::stoll(fields[5]);
      r.sweeps = std::stoll(fields[6]);
      r.converged_fraction = std::stod(fields[7]);
      r.disabled_count = std::stoi(fields[8]);
      records.push_back(r);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kBadFormat, "line " + std::to_string(line_no) + ": bad number");
    }
  }
  return records;
}

std::vector<BenchmarkRecord> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open '" + path + "'");
  return read_csv(in);
}

std::vector<GroupFit> fit_groups(const std::vector<BenchmarkRecord>& records) {
  std::map<std::pair<UseCase, Strategy>, std::vector<SamplePoint>> groups;
  for (const BenchmarkRecord& r : records) {
    groups[{r.use_case, r.strategy}].push_back(
        SamplePoint{static_cast<double>(r.n_constraints), static_cast<double>(r.time_ns)});
  }
  std::vector<GroupFit> fits;
  for (const auto& [key, points] : groups) {
    fits.push_back(GroupFit{key.first, key.second, fit_cubic(points), points.size()});
  }
  return fits;
}

std::string format_fit_line(const GroupFit& group) {
  char buf[256];
  const auto& b = group.fit.beta;
  std::snprintf(buf, sizeof buf, "%s,%s,%.10g,%.10g,%.10g,%.10g,%.6f",
                std::string(to_string(group.use_case)).c_str(),
                std::string(to_string(group.strategy)).c_str(), b[0], b[1], b[2], b[3],
                group.fit.r_squared);
  return buf;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  double lo = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lo + hi);
}

}  // namespace sorlayout
