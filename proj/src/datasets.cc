#include "duelbench/datasets.h"

#include <stdexcept>

#include "duelbench/losses.h"

namespace duelbench {
namespace {

using Rows = std::vector<std::vector<double>>;

Rows Arxiv() {
  // p(4, 5) is 0.54 so that it mirrors p(5, 4) = 0.46.
  return {{0.5, 0.55, 0.55, 0.54, 0.61, 0.61},
          {0.45, 0.5, 0.55, 0.55, 0.58, 0.6},
          {0.45, 0.45, 0.5, 0.54, 0.51, 0.56},
          {0.46, 0.45, 0.46, 0.5, 0.54, 0.5},
          {0.39, 0.42, 0.49, 0.46, 0.5, 0.51},
          {0.39, 0.40, 0.44, 0.5, 0.49, 0.5}};
}

Rows Cyclic() {
  return {{0.5, 0.6, 0.6, 0.6},
          {0.4, 0.5, 0.9, 0.1},
          {0.4, 0.1, 0.5, 0.9},
          {0.4, 0.9, 0.1, 0.5}};
}

Rows BordaVn() {
  return {{0.5, 1.0, 0.55, 0.55, 0.55},
          {0.0, 0.5, 1.0, 1.0, 1.0},
          {0.45, 0.0, 0.5, 0.5, 0.5},
          {0.45, 0.0, 0.5, 0.5, 0.5},
          {0.45, 0.0, 0.5, 0.5, 0.5}};
}

Rows Copeland() {
  return {{0.5, 1.0, 1.0, 0.4, 0.4},
          {0.0, 0.5, 0.6, 0.6, 0.6},
          {0.0, 0.4, 0.5, 0.4, 0.6},
          {0.6, 0.4, 0.6, 0.5, 0.4},
          {0.6, 0.4, 0.4, 0.6, 0.5}};
}

Rows CopelandVn() {
  return {{0.5, 0.75, 0.25, 0.75, 0.025},
          {0.25, 0.5, 0.75, 0.4, 0.75},
          {0.75, 0.25, 0.5, 0.4, 0.75},
          {0.25, 0.6, 0.6, 0.5, 0.75},
          {0.975, 0.25, 0.25, 0.25, 0.5}};
}

Rows Vn16() {
  constexpr int kArms = 16;
  Rows rows = {{0.5, 0.75, 0.25, 1.0, 0.025},
               {0.25, 0.5, 0.75, 1.0, 0.75},
               {0.75, 0.25, 0.5, 1.0, 0.75},
               {0.0, 0.0, 0.0, 0.5, 0.75},
               {0.975, 0.25, 0.25, 0.25, 0.5}};
  for (int i = 0; i < 5; ++i)
    rows[i].resize(kArms, i == 3 ? 1.0 : 0.8);
  for (int i = 5; i < kArms; ++i) {
    std::vector<double> row = {0.2, 0.2, 0.2, 0.0, 0.2};
    row.resize(kArms, 0.5);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> ArithmeticUtilities() {
  std::vector<double> x(8);
  for (int i = 1; i <= 8; ++i) x[i - 1] = 1.0 - i / 10.0;
  return x;
}

}  // namespace

Dataset BuiltinDataset(const std::string& id) {
  if (id == "arxiv6") return {id, PreferenceMatrix::FromRows(Arxiv()), {}};
  if (id == "cyclic4") return {id, PreferenceMatrix::FromRows(Cyclic()), {}};
  if (id == "borda_vn5") return {id, PreferenceMatrix::FromRows(BordaVn()), {}};
  if (id == "copeland5") return {id, PreferenceMatrix::FromRows(Copeland()), {}};
  if (id == "copeland_vn5")
    return {id, PreferenceMatrix::FromRows(CopelandVn()), {}};
  if (id == "vn16") return {id, PreferenceMatrix::FromRows(Vn16()), {}};
  if (id == "arithmetic8") {
    UtilityVector x(ArithmeticUtilities());
    return {id, LinkedPreferences(x), x};
  }
  if (id == "sushi16")
    throw std::invalid_argument(
        "dataset sushi16 is not built in; supply it with --dataset-file");
  throw std::invalid_argument("unknown dataset: " + id);
}

std::vector<std::string> BuiltinDatasetIds() {
  return {"arxiv6", "cyclic4", "borda_vn5", "copeland5",
          "copeland_vn5", "vn16", "arithmetic8"};
}

}  // namespace duelbench
