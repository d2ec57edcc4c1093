#include "duelbench/matrix_io.h"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <string>

#include "duelbench/format.h"

namespace duelbench {
namespace {

double ParseNumber(const std::string& token, int index) {
  double v = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw std::runtime_error("matrix entry " + std::to_string(index + 1) +
                             " is not a number: '" + token + "'");
  return v;
}

}  // namespace

Matrix ReadMatrix(std::istream& in) {
  std::string token;
  if (!(in >> token)) throw std::runtime_error("matrix file is empty");
  int k = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), k);
  if (ec != std::errc() || ptr != token.data() + token.size() || k < 1)
    throw std::runtime_error("first token must be a positive size, got '" +
                             token + "'");
  Matrix m(k, 0.0);
  for (int n = 0; n < k * k; ++n) {
    if (!(in >> token))
      throw std::runtime_error("expected " + std::to_string(k * k) +
                               " entries, found " + std::to_string(n));
    m(n / k, n % k) = ParseNumber(token, n);
  }
  if (in >> token) throw std::runtime_error("trailing data after matrix: '" + token + "'");
  return m;
}

Matrix ReadMatrixFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file " + path);
  try {
    return ReadMatrix(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

PreferenceMatrix ReadPreferenceMatrixFile(const std::string& path) {
  return PreferenceMatrix(ReadMatrixFile(path));
}

void WriteMatrix(std::ostream& out, const Matrix& m) {
  out << m.size() << '\n';
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.size(); ++j) out << (j ? " " : "") << FormatDouble(m(i, j));
    out << '\n';
  }
}

}  // namespace duelbench
