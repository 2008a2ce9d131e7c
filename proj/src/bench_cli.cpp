#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <tuple>
#include <ostream>

#include "sorlayout/benchmark.hpp"
#include "sorlayout/error.hpp"
#include "sorlayout/layout.hpp"

namespace sorlayout {

namespace {

void print_summary(const std::vector<BenchmarkRecord>& records, std::ostream& err) {
  std::map<std::tuple<UseCase, int, Strategy>, std::vector<double>> sweeps;
  for (const BenchmarkRecord& r : records) {
    sweeps[{r.use_case, r.n_constraints, r.strategy}].push_back(static_cast<double>(r.sweeps));
  }
  for (const auto& [key, values] : sweeps) {
    const auto& [use_case, c, strategy] = key;
    err << "# " << to_string(use_case) << " c=" << c << " " << to_string(strategy)
        << " median_sweeps=" << median(values) << '\n';
  }
}

}  // namespace

int bench_cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Warm- vs cold-start SOR layout solving benchmark", "sorlayout_bench"};

  std::string use_case = "all";
  int max_areas = 201;
  int step = 10;
  ExperimentConfig config;
  std::string out_path;
  std::string fit_path;
  std::string dump_path;

  app.add_option("--use-case", use_case, "small, big, change or all")
      ->check(CLI::IsMember({"small", "big", "change", "all"}));
  app.add_option("--max-areas", max_areas, "largest number of areas")->check(CLI::NonNegativeNumber);
  app.add_option("--step", step, "spacing of the area-count grid")->check(CLI::PositiveNumber);
  app.add_option("--layouts", config.layouts_per_size, "random layouts per size")
      ->check(CLI::PositiveNumber);
  app.add_option("--changes", config.changes_per_layout, "timed changes per layout")
      ->check(CLI::PositiveNumber);
  app.add_option("--omega", config.solver.omega, "relaxation parameter");
  app.add_option("--tolerance", config.solver.tolerance, "convergence tolerance");
  app.add_option("--max-iterations", config.solver.max_iterations, "sweep budget per attempt");
  app.add_option("--seed", config.master_seed, "master seed");
  app.add_option("--width", config.width, "initial window width in px");
  app.add_option("--height", config.height, "initial window height in px");
  app.add_option("--out", out_path, "write benchmark records to this CSV file");
  app.add_option("--fit", fit_path, "print cubic fits for a records CSV file");
  app.add_option("--dump-spec", dump_path, "write the layout for --max-areas as JSON");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    config.solver.validate();
    const bool run = !out_path.empty() || (fit_path.empty() && dump_path.empty());
    if (run) {
      config.sizes = size_grid(max_areas, step);
      std::vector<UseCase> cases;
      if (use_case == "all") {
        cases = {UseCase::kSmall, UseCase::kBig, UseCase::kChange};
      } else {
        cases = {use_case_from_string(use_case)};
      }
      std::vector<BenchmarkRecord> records;
      for (UseCase uc : cases) {
        for (Strategy s : {Strategy::kCold, Strategy::kWarm}) {
          auto part = run_experiment(uc, s, config);
          records.insert(records.end(), part.begin(), part.end());
        }
      }
      print_summary(records, err);
      if (out_path.empty()) {
        write_csv(std::move(records), out);
      } else {
        write_csv(std::move(records), out_path);
      }
    }

    if (!dump_path.empty()) {
      const LayoutSpec layout = generate_layout(max_areas, config.width, config.height,
                                                derive_seed(config.master_seed, max_areas));
      std::ofstream dump(dump_path);
      if (!dump) throw Error(ErrorCode::kIoFailure, "cannot open '" + dump_path + "'");
      dump << layout_to_json(layout).dump(2) << '\n';
    }

    if (!fit_path.empty()) {
      for (const GroupFit& group : fit_groups(read_csv(fit_path))) {
        out << format_fit_line(group) << '\n';
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace sorlayout
