#include "duelbench/harness.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "duelbench/datasets.h"
#include "duelbench/format.h"
#include "duelbench/matrix_io.h"
#include "duelbench/rng.h"

namespace duelbench {

std::string ToString(EnvironmentKind kind) {
  switch (kind) {
    case EnvironmentKind::kStochastic:
      return "stochastic";
    case EnvironmentKind::kBlock:
      return "block";
    case EnvironmentKind::kUtility:
      return "utility";
  }
  return "unknown";
}

std::string ExperimentSpec::ExperimentId(std::int64_t horizon) const {
  return name + "_" + std::to_string(horizon);
}

std::vector<std::string> ValidateSpec(const ExperimentSpec& spec) {
  std::vector<std::string> problems;
  if (spec.name.empty()) problems.push_back("experiment name is empty");
  if (!spec.preferences) problems.push_back("no preference matrix");
  if (spec.horizons.empty()) problems.push_back("horizon list is empty");
  for (std::int64_t t : spec.horizons)
    if (t < 1) problems.push_back("horizon " + std::to_string(t) + " < 1");
  if (spec.iterations < 1) problems.push_back("iterations must be >= 1");
  if (spec.checkpoints < 1) problems.push_back("checkpoint count must be >= 1");
  if (spec.algorithms.empty()) problems.push_back("no algorithms");

  std::set<std::string> names;
  for (const auto& a : spec.algorithms)
    if (!names.insert(ToString(a.algorithm)).second)
      problems.push_back("algorithm listed twice: " + ToString(a.algorithm));

  switch (spec.kind) {
    case EnvironmentKind::kStochastic:
      if (spec.loss_model != LossModel::kBorda)
        problems.push_back("stochastic environments report Borda losses only");
      break;
    case EnvironmentKind::kUtility:
      if (spec.loss_model != LossModel::kUtility)
        problems.push_back("utility environments report utility losses only");
      if (!spec.utilities) problems.push_back("utility environment without utilities");
      break;
    case EnvironmentKind::kBlock:
      if (spec.loss_model == LossModel::kUtility)
        problems.push_back("block environments have no utility losses");
      if (spec.tau < 1) {
        problems.push_back("block length tau must be >= 1");
      } else if (spec.preferences) {
        try {
          CounterRng probe(0);
          BuildBlockSequence(*spec.preferences, spec.tau, probe);
        } catch (const BlockMultiplicityError& e) {
          problems.push_back(e.what());
        }
      }
      break;
  }

  if (spec.preferences) {
    const int k = spec.preferences->arms();
    if (spec.utilities && spec.utilities->arms() != k)
      problems.push_back("utility vector length differs from K");
    for (std::int64_t t : spec.horizons) {
      if (t < 1) continue;
      for (const auto& a : spec.algorithms) {
        try {
          MakePolicy(a, k, t, 0);
        } catch (const std::exception& e) {
          problems.push_back(ToString(a.algorithm) + " at T=" + std::to_string(t) +
                             ": " + e.what());
        }
      }
    }
  }
  return problems;
}

std::vector<std::string> ExperimentFamilies() {
  return {"borda_stochastic", "borda_vn",   "copeland_exp3",
          "copeland_vn",      "vonneumann", "utility_stochastic"};
}

namespace {

AlgorithmConfig Config(Algorithm algorithm, EtaRule rule = EtaRule::kBorda) {
  AlgorithmConfig c;
  c.algorithm = algorithm;
  c.eta_rule = rule;
  return c;
}

ExperimentSpec BaseSpec(const std::string& family, const Dataset& data,
                        EnvironmentKind kind, LossModel model,
                        std::vector<std::int64_t> horizons,
                        std::int64_t iterations, const FamilyOptions& options) {
  ExperimentSpec spec;
  spec.family = family;
  spec.kind = kind;
  spec.dataset = data.id;
  spec.preferences = data.preferences;
  spec.utilities = data.utilities;
  spec.loss_model = model;
  spec.combiner = Combiner::kWeak;
  spec.horizons = options.horizon ? std::vector<std::int64_t>{*options.horizon}
                                  : std::move(horizons);
  spec.iterations = options.iterations.value_or(iterations);
  spec.seed = options.seed;
  return spec;
}

Dataset LoadDataset(const std::string& id, const FamilyOptions& options) {
  if (id == "sushi16") {
    if (!options.dataset_file)
      throw std::invalid_argument("sushi16 requires --dataset-file");
    return {id, ReadPreferenceMatrixFile(*options.dataset_file), std::nullopt};
  }
  return BuiltinDataset(id);
}

std::vector<ExperimentSpec> BordaStochastic(const FamilyOptions& options,
                                            const std::vector<std::string>& ids) {
  std::vector<ExperimentSpec> specs;
  for (const auto& id : ids) {
    ExperimentSpec spec =
        BaseSpec("borda_stochastic", LoadDataset(id, options),
                 EnvironmentKind::kStochastic, LossModel::kBorda,
                 {10'000, 100'000}, 100, options);
    spec.name = "borda_stochastic_" + id;
    spec.algorithms = {Config(Algorithm::kExp3Unif, EtaRule::kBorda),
                       Config(Algorithm::kUcbUnif), Config(Algorithm::kWsw)};
    specs.push_back(std::move(spec));
  }
  return specs;
}

std::vector<ExperimentSpec> UtilityStochastic(const FamilyOptions& options) {
  ExperimentSpec spec =
      BaseSpec("utility_stochastic", BuiltinDataset("arithmetic8"),
               EnvironmentKind::kUtility, LossModel::kUtility,
               {10'000, 100'000}, 100, options);
  spec.name = "utility_stochastic_arithmetic8";
  spec.algorithms = {Config(Algorithm::kExp3Unif, EtaRule::kUtility),
                     Config(Algorithm::kUcbUnif), Config(Algorithm::kWsw),
                     Config(Algorithm::kRex3)};
  return {spec};
}

ExperimentSpec BlockFamily(const std::string& family, const std::string& id,
                           LossModel model, int tau,
                           std::vector<std::int64_t> horizons,
                           std::int64_t iterations,
                           std::vector<Algorithm> algorithms,
                           const FamilyOptions& options) {
  ExperimentSpec spec = BaseSpec(family, BuiltinDataset(id), EnvironmentKind::kBlock,
                                 model, std::move(horizons), iterations, options);
  spec.name = family;
  spec.tau = tau;
  for (Algorithm a : algorithms) spec.algorithms.push_back(Config(a));
  return spec;
}

}  // namespace

std::vector<ExperimentSpec> MakeExperiments(const std::string& name,
                                            const FamilyOptions& options) {
  if (name == "borda_stochastic") {
    std::vector<std::string> ids = {"arxiv6", "cyclic4"};
    if (options.dataset_file) ids.push_back("sushi16");
    return BordaStochastic(options, ids);
  }
  for (const char* id : {"arxiv6", "cyclic4", "sushi16"})
    if (name == std::string("borda_stochastic_") + id)
      return BordaStochastic(options, {id});
  if (name == "utility_stochastic" || name == "utility_stochastic_arithmetic8")
    return UtilityStochastic(options);
  if (name == "borda_vn")
    return {BlockFamily(name, "borda_vn5", LossModel::kBorda, 20,
                        {1'000, 10'000, 100'000}, 100,
                        {Algorithm::kExp3Unif, Algorithm::kExp3Sparring,
                         Algorithm::kExp3PSparring, Algorithm::kVnUnif},
                        options)};
  if (name == "copeland_exp3")
    return {BlockFamily(name, "copeland5", LossModel::kCopeland, 10,
                        {1'000, 10'000}, 100, {Algorithm::kExp3Unif}, options)};
  if (name == "copeland_vn")
    return {BlockFamily(name, "copeland_vn5", LossModel::kCopeland, 40,
                        {1'000, 10'000}, 100,
                        {Algorithm::kExp3Sparring, Algorithm::kExp3PSparring,
                         Algorithm::kVnUnif},
                        options)};
  if (name == "vonneumann") {
    ExperimentSpec spec =
        BlockFamily(name, "vn16", LossModel::kVonNeumann, 40,
                    {1'000, 10'000, 100'000}, 10,
                    {Algorithm::kExp3Unif, Algorithm::kExp3Sparring,
                     Algorithm::kExp3PSparring, Algorithm::kVnUnif},
                    options);
    spec.benchmark = Benchmark::kZero;
    return {spec};
  }
  throw std::invalid_argument("unknown experiment: " + name);
}

BlockSequence ExperimentBlocks(const ExperimentSpec& spec, std::int64_t horizon) {
  CounterRng rng(DeriveKey(spec.seed, {spec.ExperimentId(horizon), "blocks"}));
  return BuildBlockSequence(*spec.preferences, spec.tau, rng);
}

namespace {

std::unique_ptr<Environment> MakeEnvironment(const ExperimentSpec& spec,
                                             std::int64_t horizon,
                                             const BlockSequence* blocks,
                                             std::uint64_t seed) {
  switch (spec.kind) {
    case EnvironmentKind::kStochastic:
      return MakeBordaEnvironment(*spec.preferences, horizon, seed);
    case EnvironmentKind::kUtility:
      return MakeUtilityEnvironment(*spec.utilities, horizon, seed);
    case EnvironmentKind::kBlock:
      if (!blocks) throw ContractViolation("block experiment without a sequence");
      return std::make_unique<BlockEnvironment>(*blocks, horizon, spec.loss_model,
                                                seed);
  }
  throw ContractViolation("unknown environment kind");
}

}  // namespace

CellResult RunCell(const ExperimentSpec& spec, std::int64_t horizon,
                   const AlgorithmConfig& algorithm, std::int64_t iteration,
                   const BlockSequence* blocks) {
  CellResult cell;
  cell.horizon = horizon;
  cell.algorithm = ToString(algorithm.algorithm);
  cell.iteration = iteration;
  const EnvSeed seed{spec.seed, spec.ExperimentId(horizon), cell.algorithm,
                     iteration};
  try {
    auto env = MakeEnvironment(spec, horizon, blocks, seed.Derive("env"));
    const int k = env->arms();
    auto policy = MakePolicy(algorithm, k, horizon, seed.Derive("policy"));
    RegretLedger ledger(spec.combiner, k,
                        CheckpointGrid(horizon, spec.checkpoints), spec.benchmark);
    std::vector<ActionPair> pairs;
    if (env->deferred()) pairs.reserve(static_cast<std::size_t>(horizon));
    for (std::int64_t t = 1; t <= horizon; ++t) {
      const ActionPair pair = policy->Select();
      RoundResult round = env->Play(t, pair);
      policy->Observe(round.outcome);
      if (round.loss) {
        ledger.Record(pair, *round.loss);
      } else {
        pairs.push_back(pair);
      }
    }
    if (env->deferred()) {
      // Losses are defined through the whole horizon; replay the pairs.
      env->Settle();
      for (std::int64_t t = 1; t <= horizon; ++t)
        ledger.Record(pairs[static_cast<std::size_t>(t - 1)], env->SettledLoss(t));
    }
    cell.checkpoints = ledger.checkpoints();
  } catch (const std::exception& e) {
    cell.failed = true;
    cell.error = e.what();
    cell.checkpoints.clear();
  }
  return cell;
}

bool HorizonResult::ok() const {
  return std::none_of(cells.begin(), cells.end(),
                      [](const CellResult& c) { return c.failed; });
}

std::vector<HorizonResult> RunExperiment(const ExperimentSpec& spec,
                                         const RunOptions& options) {
  const auto problems = ValidateSpec(spec);
  if (!problems.empty()) {
    std::string message = "invalid experiment " + spec.name + ":";
    for (const auto& p : problems) message += "\n  " + p;
    throw std::invalid_argument(message);
  }

  struct Job {
    std::size_t horizon_index;
    std::size_t algorithm_index;
    std::int64_t iteration;
  };
  std::vector<HorizonResult> results(spec.horizons.size());
  std::vector<std::optional<BlockSequence>> blocks(spec.horizons.size());
  std::vector<Job> jobs;
  for (std::size_t h = 0; h < spec.horizons.size(); ++h) {
    results[h].horizon = spec.horizons[h];
    results[h].experiment = spec.ExperimentId(spec.horizons[h]);
    if (spec.kind == EnvironmentKind::kBlock)
      blocks[h] = ExperimentBlocks(spec, spec.horizons[h]);
    results[h].cells.resize(spec.algorithms.size() *
                            static_cast<std::size_t>(spec.iterations));
    for (std::size_t a = 0; a < spec.algorithms.size(); ++a)
      for (std::int64_t i = 1; i <= spec.iterations; ++i) jobs.push_back({h, a, i});
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const Job& job = jobs[j];
      const auto& seq = blocks[job.horizon_index];
      CellResult cell = RunCell(spec, spec.horizons[job.horizon_index],
                                spec.algorithms[job.algorithm_index], job.iteration,
                                seq ? &*seq : nullptr);
      const std::size_t slot =
          job.algorithm_index * static_cast<std::size_t>(spec.iterations) +
          static_cast<std::size_t>(job.iteration - 1);
      results[job.horizon_index].cells[slot] = std::move(cell);
    }
  };
  const int workers = std::max(1, options.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  return results;
}

void WriteRunCsv(std::ostream& out, const HorizonResult& result) {
  out << "experiment,algorithm,iteration,t,regret\n";
  for (const auto& cell : result.cells) {
    if (cell.failed) continue;
    for (const auto& c : cell.checkpoints)
      out << result.experiment << ',' << cell.algorithm << ',' << cell.iteration
          << ',' << c.t << ',' << FormatDouble(c.regret) << '\n';
  }
}

void WriteRunMeta(std::ostream& out, const ExperimentSpec& spec,
                  const HorizonResult& result) {
  out << "experiment=" << result.experiment << '\n'
      << "family=" << spec.family << '\n'
      << "dataset=" << spec.dataset << '\n'
      << "arms=" << (spec.preferences ? spec.preferences->arms() : 0) << '\n'
      << "environment=" << ToString(spec.kind) << '\n'
      << "loss_model=" << ToString(spec.loss_model) << '\n'
      << "combiner=" << ToString(spec.combiner) << '\n'
      << "benchmark=" << (spec.benchmark == Benchmark::kZero ? "zero" : "best_arm")
      << '\n';
  if (spec.kind == EnvironmentKind::kBlock) out << "tau=" << spec.tau << '\n';
  out << "horizon=" << result.horizon << '\n'
      << "iterations=" << spec.iterations << '\n'
      << "seed=" << spec.seed << '\n'
      << "checkpoints=" << spec.checkpoints << '\n';
  for (const auto& a : spec.algorithms) {
    const std::string name = ToString(a.algorithm);
    out << "algorithm=" << name << '\n';
    const auto policy =
        MakePolicy(a, spec.preferences->arms(), result.horizon, 0);
    for (const auto& [key, value] : policy->parameters())
      out << "param." << name << '.' << key << '=' << value << '\n';
  }
  for (const auto& cell : result.cells) {
    if (!cell.failed) continue;
    std::string error = cell.error;
    std::replace(error.begin(), error.end(), '\n', ' ');
    out << "failed_cell=" << cell.algorithm << ':' << cell.iteration << ':' << error
        << '\n';
  }
}

void WriteResults(const std::string& dir, const ExperimentSpec& spec,
                  const std::vector<HorizonResult>& results) {
  std::filesystem::create_directories(dir);
  for (const auto& r : results) {
    const auto base = std::filesystem::path(dir) / r.experiment;
    std::ofstream csv(base.string() + ".csv", std::ios::binary);
    std::ofstream meta(base.string() + ".meta", std::ios::binary);
    if (!csv || !meta)
      throw std::runtime_error("cannot write results under " + dir);
    WriteRunCsv(csv, r);
    WriteRunMeta(meta, spec, r);
  }
}

namespace {

template <typename T>
T ParseField(const std::string& field, std::size_t line, const char* what) {
  T value{};
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw std::runtime_error("line " + std::to_string(line) + ": bad " + what +
                             " '" + field + "'");
  return value;
}

std::vector<std::string> SplitComma(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::vector<RunRow> ReadRunCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "experiment,algorithm,iteration,t,regret")
    throw std::runtime_error("unexpected CSV header: " + line);
  std::vector<RunRow> rows;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = SplitComma(line);
    if (f.size() != 5)
      throw std::runtime_error("line " + std::to_string(number) + ": expected 5 fields");
    RunRow row;
    row.experiment = f[0];
    row.algorithm = f[1];
    row.iteration = ParseField<std::int64_t>(f[2], number, "iteration");
    row.t = ParseField<std::int64_t>(f[3], number, "round");
    row.regret = ParseField<double>(f[4], number, "regret");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<RunRow> ReadRunDirectory(const std::string& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<RunRow> rows;
  for (const auto& path : files) {
    std::ifstream in(path);
    try {
      auto part = ReadRunCsv(in);
      rows.insert(rows.end(), std::make_move_iterator(part.begin()),
                  std::make_move_iterator(part.end()));
    } catch (const std::runtime_error& e) {
      throw std::runtime_error(path.string() + ": " + e.what());
    }
  }
  return rows;
}

AggregateResult Aggregate(const std::vector<RunRow>& rows) {
  using GroupKey = std::tuple<std::string, std::string, std::int64_t>;
  std::map<GroupKey, std::size_t> index;
  std::vector<GroupKey> order;
  std::vector<std::vector<double>> values;
  std::map<std::pair<std::string, std::string>, std::size_t> largest;
  for (const auto& r : rows) {
    GroupKey key{r.experiment, r.algorithm, r.t};
    auto [it, inserted] = index.emplace(key, order.size());
    if (inserted) {
      order.push_back(key);
      values.emplace_back();
    }
    values[it->second].push_back(r.regret);
  }
  for (std::size_t g = 0; g < order.size(); ++g) {
    auto& best = largest[{std::get<0>(order[g]), std::get<1>(order[g])}];
    best = std::max(best, values[g].size());
  }

  AggregateResult result;
  for (std::size_t g = 0; g < order.size(); ++g) {
    const auto& [experiment, algorithm, t] = order[g];
    const auto& v = values[g];
    const std::size_t expected = largest[{experiment, algorithm}];
    if (v.size() < expected) {
      result.warnings.push_back("skipping incomplete group " + experiment + "/" +
                                algorithm + "/t=" + std::to_string(t) + ": " +
                                std::to_string(v.size()) + " of " +
                                std::to_string(expected) + " rows");
      continue;
    }
    double sum = 0.0;
    for (double x : v) sum += x;
    const double mean = sum / v.size();
    double sq = 0.0;
    for (double x : v) sq += (x - mean) * (x - mean);
    result.rows.push_back({experiment, algorithm, t,
                           static_cast<std::int64_t>(v.size()), mean,
                           std::sqrt(sq / v.size())});
  }
  return result;
}

void WriteAggregateCsv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << "experiment,algorithm,t,count,mean,std\n";
  for (const auto& r : rows)
    out << r.experiment << ',' << r.algorithm << ',' << r.t << ',' << r.count << ','
        << FormatDouble(r.mean) << ',' << FormatDouble(r.std) << '\n';
}

double LemmaObjective(const std::vector<double>& x) {
  double total = 0.0;
  for (double xi : x)
    for (double xj : x) {
      const double d = xi - xj + 1.0;
      total += d * d;
    }
  return total;
}

bool LemmaReport::ok() const {
  return std::all_of(entries.begin(), entries.end(), [](const LemmaEntry& e) {
    return e.within_bound && e.attains_bound.value_or(true);
  });
}

LemmaReport VerifyLemma(int n_max, int grid_max_n, int random_trials,
                        std::uint64_t seed) {
  if (n_max < 1) throw ContractViolation("n_max must be >= 1");
  LemmaReport report;
  for (int n = 1; n <= n_max; ++n) {
    LemmaEntry entry;
    entry.n = n;
    entry.bound = 1.5 * n * n;
    entry.maximum = -1.0;
    auto consider = [&](const std::vector<double>& x) {
      const double f = LemmaObjective(x);
      if (f > entry.maximum) {
        entry.maximum = f;
        entry.witness = x;
      }
    };

    std::vector<double> x(n);
    if (n <= grid_max_n) {
      std::vector<int> digits(n, 0);
      while (true) {
        for (int i = 0; i < n; ++i) x[i] = digits[i] / 4.0;
        consider(x);
        int i = 0;
        while (i < n && ++digits[i] == 5) digits[i++] = 0;
        if (i == n) break;
      }
    }

    CounterRng rng(DeriveKey(seed, {"lemma", std::to_string(n)}));
    for (int trial = 0; trial < random_trials; ++trial) {
      const bool vertex = trial % 2 == 1;
      for (double& v : x) v = vertex ? (rng.Bernoulli(0.5) ? 1.0 : 0.0) : rng.Uniform01();
      consider(x);
    }

    for (int i = 0; i < n; ++i) x[i] = i < n / 2 ? 0.0 : 1.0;
    consider(x);

    entry.within_bound = entry.maximum <= entry.bound * (1.0 + 1e-12);
    if (n % 2 == 0) entry.attains_bound = entry.maximum == entry.bound;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace duelbench
