// Command-line front end: run experiment families, aggregate their CSVs,
// check the quadratic-sum lemma, and solve matrix games.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "duelbench/format.h"
#include "duelbench/gamesolver.h"
#include "duelbench/harness.h"
#include "duelbench/matrix_io.h"

namespace {

using namespace duelbench;

struct RunArgs {
  std::string experiment;
  std::int64_t horizon = 0;
  std::int64_t iterations = 0;
  std::uint64_t seed = 0;
  std::string out;
  int workers = 1;
  std::string dataset_file;
};

int Run(const RunArgs& args) {
  FamilyOptions options;
  if (args.horizon > 0) options.horizon = args.horizon;
  if (args.iterations > 0) options.iterations = args.iterations;
  options.seed = args.seed;
  if (!args.dataset_file.empty()) options.dataset_file = args.dataset_file;

  bool ok = true;
  for (const auto& spec : MakeExperiments(args.experiment, options)) {
    const auto results = RunExperiment(spec, {args.workers});
    WriteResults(args.out, spec, results);
    for (const auto& r : results) {
      std::size_t failed = 0;
      for (const auto& cell : r.cells) {
        if (!cell.failed) continue;
        ++failed;
        std::cerr << r.experiment << ": " << cell.algorithm << " iteration "
                  << cell.iteration << " failed: " << cell.error << '\n';
      }
      std::cout << r.experiment << ": " << r.cells.size() - failed << '/'
                << r.cells.size() << " cells ok\n";
      ok = ok && failed == 0;
    }
  }
  return ok ? 0 : 1;
}

int AggregateCommand(const std::string& in, const std::string& out) {
  const auto result = Aggregate(ReadRunDirectory(in));
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  std::ofstream file(out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + out);
  WriteAggregateCsv(file, result.rows);
  std::cout << result.rows.size() << " groups written to " << out << '\n';
  return 0;
}

int VerifyLemmaCommand(int n_max) {
  const auto report = VerifyLemma(n_max);
  for (const auto& e : report.entries) {
    std::cout << "n=" << e.n << " max=" << FormatDouble(e.maximum)
              << " bound=" << FormatDouble(e.bound);
    if (e.attains_bound) std::cout << (*e.attains_bound ? " attained" : " NOT attained");
    std::cout << (e.within_bound ? " ok" : " VIOLATED") << " witness=(";
    for (std::size_t i = 0; i < e.witness.size(); ++i)
      std::cout << (i ? "," : "") << FormatDouble(e.witness[i]);
    std::cout << ")\n";
  }
  std::cout << (report.ok() ? "lemma verified" : "lemma check FAILED") << '\n';
  return report.ok() ? 0 : 1;
}

int SolveCommand(const std::string& path, double tolerance, bool raw_game,
                 bool simplex) {
  Matrix game = ReadMatrixFile(path);
  if (!raw_game) game = PreferenceMatrix(game).ExpectedOutcomes();
  SolverOptions options;
  options.tolerance = tolerance;
  if (simplex) options.method = SolverMethod::kSimplex;
  const GameSolution s = VonNeumannWinner(game, options);
  std::cout << "winner";
  for (int a = 0; a < s.row.arms(); ++a) std::cout << ' ' << FormatDouble(s.row[a]);
  std::cout << "\nsupport";
  for (int a = 0; a < s.row.arms(); ++a)
    if (s.row[a] > 0.0) std::cout << ' ' << a + 1;
  std::cout << "\nvalue " << FormatDouble(s.value) << "\ngap " << FormatDouble(s.gap)
            << "\niterations " << s.iterations << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adversarial duelling-bandit simulator"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment family");
  run_cmd->add_option("--experiment", run.experiment, "Family or family_dataset")
      ->required();
  run_cmd->add_option("--horizon", run.horizon, "Horizon T (default: family list)")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--iterations", run.iterations, "Iterations per algorithm")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", run.seed, "Master seed")->required();
  run_cmd->add_option("--out", run.out, "Output directory")->required();
  run_cmd->add_option("--workers", run.workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--dataset-file", run.dataset_file,
                      "Preference matrix file for sushi16");

  std::string agg_in, agg_out;
  auto* agg_cmd = app.add_subcommand("aggregate", "Mean and std per checkpoint");
  agg_cmd->add_option("--in", agg_in, "Directory of run CSVs")->required();
  agg_cmd->add_option("--out", agg_out, "Aggregated CSV")->required();

  int n_max = 0;
  auto* lemma_cmd = app.add_subcommand("verify-lemma", "Search the lemma bound");
  lemma_cmd->add_option("--n-max", n_max, "Largest dimension")
      ->required()
      ->check(CLI::PositiveNumber);

  std::string matrix_path;
  double tolerance = 1e-6;
  bool raw_game = false;
  bool simplex = false;
  auto* solve_cmd = app.add_subcommand("solve", "Von-Neumann winner of a matrix");
  solve_cmd->add_option("--matrix", matrix_path, "Matrix file")->required();
  solve_cmd->add_option("--tol", tolerance, "Duality-gap tolerance")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_flag("--game", raw_game,
                      "Treat the file as a payoff matrix instead of preferences");
  solve_cmd->add_flag("--simplex", simplex, "Use the exact simplex route");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // --help exits cleanly
  }

  try {
    if (*run_cmd) return Run(run);
    if (*agg_cmd) return AggregateCommand(agg_in, agg_out);
    if (*lemma_cmd) return VerifyLemmaCommand(n_max);
    if (*solve_cmd) return SolveCommand(matrix_path, tolerance, raw_game, simplex);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
