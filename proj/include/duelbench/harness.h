#pragma once

// Experiment runner. An ExperimentSpec fixes a dataset, an environment, a
// loss model and a list of algorithms; RunExperiment executes every
// (horizon, algorithm, iteration) cell on a worker pool and returns the
// regret checkpoints in a fixed order, so output never depends on how the
// cells were scheduled.

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "duelbench/algos.h"
#include "duelbench/core.h"
#include "duelbench/envs.h"

namespace duelbench {

enum class EnvironmentKind { kStochastic, kBlock, kUtility };

std::string ToString(EnvironmentKind kind);

struct ExperimentSpec {
  std::string name;    // e.g. "borda_stochastic_arxiv6"
  std::string family;  // e.g. "borda_stochastic"
  EnvironmentKind kind = EnvironmentKind::kStochastic;
  std::string dataset;
  std::optional<PreferenceMatrix> preferences;
  std::optional<UtilityVector> utilities;  // utility environments only
  LossModel loss_model = LossModel::kBorda;
  Combiner combiner = Combiner::kWeak;
  Benchmark benchmark = Benchmark::kBestArm;
  int tau = 0;  // block environments only
  std::vector<std::int64_t> horizons;
  std::int64_t iterations = 1;
  std::vector<AlgorithmConfig> algorithms;
  std::uint64_t seed = 0;
  int checkpoints = 200;

  // "<name>_<T>", the experiment column of the CSV.
  std::string ExperimentId(std::int64_t horizon) const;
};

// Every problem with an experiment definition; empty when it can run. Constructs each
// policy once per horizon to catch parameter errors up front.
std::vector<std::string> ValidateSpec(const ExperimentSpec& spec);

struct FamilyOptions {
  std::optional<std::int64_t> horizon;     // replaces the family's list
  std::optional<std::int64_t> iterations;  // replaces the family's count
  std::uint64_t seed = 0;
  std::optional<std::string> dataset_file;  // sushi16 preference matrix
};

// Family names: borda_stochastic, borda_vn, copeland_exp3, copeland_vn,
// vonneumann, utility_stochastic.
std::vector<std::string> ExperimentFamilies();

// Specs for a family name, or for a single "<family>_<dataset>" of a
// stochastic family. Throws std::invalid_argument for unknown names.
std::vector<ExperimentSpec> MakeExperiments(const std::string& name,
                                            const FamilyOptions& options);

struct CellResult {
  std::int64_t horizon = 0;
  std::string algorithm;
  std::int64_t iteration = 0;  // 1-based
  bool failed = false;
  std::string error;
  std::vector<Checkpoint> checkpoints;
};

// One simulation: builds environment and policy from their derived seeds,
// plays `horizon` rounds and tracks regret. Failures are caught and
// reported in the result.
CellResult RunCell(const ExperimentSpec& spec, std::int64_t horizon,
                   const AlgorithmConfig& algorithm, std::int64_t iteration,
                   const BlockSequence* blocks);

// Block sequence used by every cell of one horizon.
BlockSequence ExperimentBlocks(const ExperimentSpec& spec, std::int64_t horizon);

struct HorizonResult {
  std::string experiment;  // ExperimentId(horizon)
  std::int64_t horizon = 0;
  std::vector<CellResult> cells;  // algorithm-major, then iteration

  bool ok() const;
};

struct RunOptions {
  int workers = 1;
};

// Throws std::invalid_argument listing every violation when the experiment
// is invalid. Cell failures are reported in the results, not thrown.
std::vector<HorizonResult> RunExperiment(const ExperimentSpec& spec,
                                         const RunOptions& options = {});

// Long-format CSV: experiment,algorithm,iteration,t,regret. Failed cells
// contribute no rows.
void WriteRunCsv(std::ostream& out, const HorizonResult& result);
// key=value sidecar describing the run, including failed cells.
void WriteRunMeta(std::ostream& out, const ExperimentSpec& spec,
                  const HorizonResult& result);

// Writes <dir>/<experiment>.csv and <dir>/<experiment>.meta per horizon.
void WriteResults(const std::string& dir, const ExperimentSpec& spec,
                  const std::vector<HorizonResult>& results);

struct RunRow {
  std::string experiment;
  std::string algorithm;
  std::int64_t iteration = 0;
  std::int64_t t = 0;
  double regret = 0.0;
};

// Parses a run CSV (with header). Throws std::runtime_error naming the
// offending line.
std::vector<RunRow> ReadRunCsv(std::istream& in);

struct AggregateRow {
  std::string experiment;
  std::string algorithm;
  std::int64_t t = 0;
  std::int64_t count = 0;
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

struct AggregateResult {
  std::vector<AggregateRow> rows;
  std::vector<std::string> warnings;
};

// Groups by (experiment, algorithm, t) in order of first appearance. A
// group holding fewer rows than the largest group of its (experiment,
// algorithm) is incomplete; it is skipped and reported in `warnings`.
AggregateResult Aggregate(const std::vector<RunRow>& rows);

// experiment,algorithm,t,count,mean,std
void WriteAggregateCsv(std::ostream& out, const std::vector<AggregateRow>& rows);

// Reads every *.csv directly inside `dir` in file-name order.
std::vector<RunRow> ReadRunDirectory(const std::string& dir);

// Search for the maximum of f(x) = sum_{i,j} (x_i - x_j + 1)^2 over
// [0,1]^n, compared with the bound 3n^2/2.
struct LemmaEntry {
  int n = 0;
  double maximum = 0.0;
  double bound = 0.0;
  std::vector<double> witness;
  bool within_bound = true;
  // Even n only: whether the bound was attained exactly.
  std::optional<bool> attains_bound;
};

struct LemmaReport {
  std::vector<LemmaEntry> entries;
  bool ok() const;
};

// f evaluated by the plain double sum.
double LemmaObjective(const std::vector<double>& x);

// For each n in 1..n_max: the full 5-point grid {0, 1/4, 1/2, 3/4, 1}^n
// when n <= grid_max_n, `random_trials` random points (half of them random
// vertices of the cube), and the half-zeros vertex.
LemmaReport VerifyLemma(int n_max, int grid_max_n = 4, int random_trials = 10000,
                        std::uint64_t seed = 1);

}  // namespace duelbench
