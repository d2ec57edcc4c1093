#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "duelbench/datasets.h"
#include "duelbench/harness.h"
#include "duelbench/losses.h"
#include "duelbench/matrix_io.h"

using namespace duelbench;

namespace {

ExperimentSpec Single(const std::string& name, std::int64_t horizon,
                      std::int64_t iterations, std::uint64_t seed = 1) {
  FamilyOptions options;
  options.horizon = horizon;
  options.iterations = iterations;
  options.seed = seed;
  auto specs = MakeExperiments(name, options);
  REQUIRE(specs.size() == 1);
  return specs.front();
}

std::string Csv(const HorizonResult& r) {
  std::ostringstream out;
  WriteRunCsv(out, r);
  return out.str();
}

double Brute(const std::vector<double>& x) {
  double f = 0.0;
  for (double a : x)
    for (double b : x) f += (a - b + 1) * (a - b + 1);
  return f;
}

}  // namespace

TEST_CASE("built-in datasets") {
  for (const auto& id : BuiltinDatasetIds()) {
    CAPTURE(id);
    CHECK_NOTHROW(BuiltinDataset(id));
  }
  CHECK(BuiltinDataset("arxiv6").preferences(0, 1) == 0.55);
  CHECK(BuiltinDataset("arxiv6").preferences(4, 0) == 0.39);
  CHECK(BuiltinDataset("cyclic4").preferences(1, 2) == 0.9);
  CHECK(BuiltinDataset("arithmetic8").preferences(2, 6) == doctest::Approx(0.7));
  CHECK(BuiltinDataset("vn16").preferences.arms() == 16);
  CHECK_THROWS_AS(BuiltinDataset("sushi16"), std::invalid_argument);
  CHECK_THROWS_AS(BuiltinDataset("nope"), std::invalid_argument);
}

TEST_CASE("experiment family definitions") {
  FamilyOptions options;
  const auto stochastic = MakeExperiments("borda_stochastic", options);
  REQUIRE(stochastic.size() == 2);
  CHECK(stochastic[0].name == "borda_stochastic_arxiv6");
  CHECK(stochastic[0].horizons == std::vector<std::int64_t>{10000, 100000});
  CHECK(stochastic[0].iterations == 100);

  const auto vn = MakeExperiments("vonneumann", options);
  REQUIRE(vn.size() == 1);
  CHECK(vn[0].dataset == "vn16");
  CHECK(vn[0].tau == 40);
  CHECK(vn[0].iterations == 10);
  CHECK(vn[0].horizons == std::vector<std::int64_t>{1000, 10000, 100000});

  const auto copeland = MakeExperiments("copeland_exp3", options);
  REQUIRE(copeland.size() == 1);
  CHECK(copeland[0].tau == 10);
  CHECK(copeland[0].horizons == std::vector<std::int64_t>{1000, 10000});
  CHECK(copeland[0].loss_model == LossModel::kCopeland);

  for (const auto& family : ExperimentFamilies())
    for (const auto& spec : MakeExperiments(family, options)) {
      CAPTURE(spec.name);
      CHECK(ValidateSpec(spec).empty());
    }

  CHECK_THROWS_AS(MakeExperiments("bogus", options), std::invalid_argument);
  CHECK_THROWS_AS(MakeExperiments("borda_stochastic_sushi16", options),
                  std::invalid_argument);
}

TEST_CASE("sushi16 is read from a matrix file") {
  const auto path = std::filesystem::temp_directory_path() / "duelbench_sushi.txt";
  {
    std::ofstream out(path);
    Matrix m(16, 0.5);
    for (int i = 0; i < 16; ++i)
      for (int j = i + 1; j < 16; ++j) {
        m(i, j) = 0.6;
        m(j, i) = 0.4;
      }
    WriteMatrix(out, m);
  }
  FamilyOptions options;
  options.dataset_file = path.string();
  const auto specs = MakeExperiments("borda_stochastic", options);
  REQUIRE(specs.size() == 3);
  CHECK(specs[2].dataset == "sushi16");
  CHECK(specs[2].preferences->arms() == 16);
  std::filesystem::remove(path);
}

TEST_CASE("validation lists every problem") {
  ExperimentSpec spec = Single("copeland_exp3", 1000, 1);
  spec.tau = 3;
  spec.horizons.clear();
  spec.algorithms.push_back(spec.algorithms.front());
  const auto problems = ValidateSpec(spec);
  CHECK(problems.size() >= 3);
  CHECK_THROWS_AS(RunExperiment(spec), std::invalid_argument);

  ExperimentSpec short_horizon = Single("borda_vn", 2, 1);
  CHECK_FALSE(ValidateSpec(short_horizon).empty());
}

TEST_CASE("runs are reproducible and seed dependent") {
  const ExperimentSpec a = Single("borda_vn", 500, 3, 7);
  const ExperimentSpec b = Single("borda_vn", 500, 3, 8);
  const auto ra = RunExperiment(a);
  const auto rb = RunExperiment(a, {3});
  const auto rc = RunExperiment(b);
  REQUIRE(ra.size() == 1);
  CHECK(ra[0].ok());
  CHECK(Csv(ra[0]) == Csv(rb[0]));
  CHECK(Csv(ra[0]) != Csv(rc[0]));
  CHECK(ra[0].experiment == "borda_vn_500");
  CHECK(ra[0].cells.size() == 4 * 3);

  // Rows are unique per (experiment, algorithm, iteration, t).
  std::istringstream in(Csv(ra[0]));
  const auto rows = ReadRunCsv(in);
  std::set<std::tuple<std::string, std::string, std::int64_t, std::int64_t>> keys;
  for (const auto& r : rows) keys.insert({r.experiment, r.algorithm, r.iteration, r.t});
  CHECK(keys.size() == rows.size());
  CHECK(rows.size() == 4 * 3 * 200);
}

TEST_CASE("a failing cell does not affect the others") {
  ExperimentSpec spec = Single("borda_vn", 200, 2);
  const auto broken = RunCell(spec, 200, spec.algorithms[0], 1, nullptr);
  CHECK(broken.failed);  // block experiments need their sequence
  CHECK_FALSE(broken.error.empty());
  const BlockSequence blocks = ExperimentBlocks(spec, 200);
  const auto ok = RunCell(spec, 200, spec.algorithms[0], 1, &blocks);
  CHECK_FALSE(ok.failed);
  CHECK(ok.checkpoints.size() == 200);

  HorizonResult result{"x_200", 200, {ok, broken}};
  CHECK_FALSE(result.ok());
  std::istringstream in(Csv(result));
  CHECK(ReadRunCsv(in).size() == 200);
  std::ostringstream meta;
  WriteRunMeta(meta, spec, result);
  CHECK(meta.str().find("failed_cell=") != std::string::npos);
}

TEST_CASE("regret checkpoints match a direct replay") {
  // The same environment and policy seeds, replayed by hand.
  const ExperimentSpec spec = Single("borda_stochastic_cyclic4", 300, 1, 5);
  const auto result = RunExperiment(spec);
  const CellResult& cell = result[0].cells[0];
  REQUIRE_FALSE(cell.failed);

  const EnvSeed seed{spec.seed, spec.ExperimentId(300), cell.algorithm, 1};
  auto env = MakeBordaEnvironment(*spec.preferences, 300, seed.Derive("env"));
  auto policy = MakePolicy(spec.algorithms[0], 4, 300, seed.Derive("policy"));
  const LossVector l = ExpectedBordaLoss(*spec.preferences);
  const double best = *std::min_element(l.values().begin(), l.values().end());
  double regret = 0.0;
  for (std::int64_t t = 1; t <= 300; ++t) {
    const ActionPair pair = policy->Select();
    policy->Observe(env->Play(t, pair).outcome);
    regret += std::min(l[pair.first], l[pair.second]) - best;
  }
  CHECK(cell.checkpoints.back().t == 300);
  CHECK(cell.checkpoints.back().regret == doctest::Approx(regret).epsilon(1e-9));
}

TEST_CASE("aggregation") {
  std::vector<RunRow> rows = {
      {"e", "A", 1, 10, 1.0}, {"e", "A", 2, 10, 3.0},
      {"e", "B", 1, 10, 5.0}, {"e", "B", 2, 10, 5.0},
      {"e", "A", 1, 20, 2.0},
  };
  const auto result = Aggregate(rows);
  REQUIRE(result.rows.size() == 2);
  CHECK(result.rows[0].mean == 2.0);
  CHECK(result.rows[0].std == 1.0);
  CHECK(result.rows[0].count == 2);
  CHECK(result.rows[1].algorithm == "B");
  CHECK(result.rows[1].std == 0.0);
  CHECK(result.warnings.size() == 1);

  std::ostringstream out;
  WriteAggregateCsv(out, result.rows);
  CHECK(out.str() == "experiment,algorithm,t,count,mean,std\ne,A,10,2,2,1\ne,B,10,2,5,0\n");
}

TEST_CASE("aggregated counts equal the iteration count") {
  const ExperimentSpec spec = Single("copeland_exp3", 100, 4);
  const auto result = RunExperiment(spec);
  std::istringstream in(Csv(result[0]));
  const auto agg = Aggregate(ReadRunCsv(in));
  CHECK(agg.warnings.empty());
  CHECK(agg.rows.size() == 100);
  for (const auto& r : agg.rows) CHECK(r.count == 4);
}

TEST_CASE("run CSV parsing errors name the line") {
  std::istringstream bad_header("a,b\n");
  CHECK_THROWS_AS(ReadRunCsv(bad_header), std::runtime_error);
  std::istringstream bad_row("experiment,algorithm,iteration,t,regret\ne,A,1,x,2\n");
  try {
    ReadRunCsv(bad_row);
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("written results land in one CSV and one sidecar per horizon") {
  const auto dir = std::filesystem::temp_directory_path() / "duelbench_results_test";
  std::filesystem::remove_all(dir);
  const ExperimentSpec spec = Single("copeland_vn", 80, 2, 3);
  WriteResults(dir.string(), spec, RunExperiment(spec));
  CHECK(std::filesystem::exists(dir / "copeland_vn_80.csv"));
  std::ifstream meta(dir / "copeland_vn_80.meta");
  std::string text((std::istreambuf_iterator<char>(meta)), {});
  CHECK(text.find("tau=40\n") != std::string::npos);
  CHECK(text.find("seed=3\n") != std::string::npos);
  CHECK(text.find("algorithm=VN+UnifK-1\n") != std::string::npos);
  CHECK(ReadRunDirectory(dir.string()).size() == 3 * 2 * 80);
  std::filesystem::remove_all(dir);
}

TEST_CASE("matrix files") {
  std::istringstream good("2\n0.5 0.25\n0.75 0.5\n");
  const Matrix m = ReadMatrix(good);
  CHECK(m(0, 1) == 0.25);
  std::istringstream short_input("3 1 2 3");
  CHECK_THROWS_AS(ReadMatrix(short_input), std::runtime_error);
  std::istringstream extra("1 5 6");
  CHECK_THROWS_AS(ReadMatrix(extra), std::runtime_error);
  std::istringstream word("2 a b c d");
  CHECK_THROWS_AS(ReadMatrix(word), std::runtime_error);

  std::ostringstream out;
  WriteMatrix(out, BuiltinDataset("cyclic4").preferences.probabilities());
  std::istringstream back(out.str());
  CHECK(ReadMatrix(back) == BuiltinDataset("cyclic4").preferences.probabilities());
}

TEST_CASE("lemma objective and search") {
  CHECK(LemmaObjective({0.3}) == 1.0);
  CHECK(LemmaObjective({0.0, 1.0}) == 6.0);
  CHECK(LemmaObjective({0.2, 0.9, 0.4}) == doctest::Approx(Brute({0.2, 0.9, 0.4})));

  const LemmaReport report = VerifyLemma(6, 4, 2000);
  CHECK(report.ok());
  REQUIRE(report.entries.size() == 6);
  CHECK(report.entries[0].maximum == 1.0);
  CHECK(report.entries[1].maximum == 6.0);
  CHECK(report.entries[3].maximum == 24.0);
  CHECK(LemmaObjective(report.entries[3].witness) == 24.0);
  for (const auto& e : report.entries) {
    CHECK(e.within_bound);
    CHECK(e.maximum <= 1.5 * e.n * e.n);
    CHECK(e.attains_bound.has_value() == (e.n % 2 == 0));
  }
}
