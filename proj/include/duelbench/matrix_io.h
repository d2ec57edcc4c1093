#pragma once

// Plain-text matrix files: the first token is K, followed by K*K decimal
// numbers in row-major order separated by arbitrary whitespace.

#include <istream>
#include <ostream>
#include <string>

#include "duelbench/core.h"

namespace duelbench {

// Reads an arbitrary real K x K matrix. Throws std::runtime_error on
// malformed input (bad K, missing or extra numbers, non-numeric tokens).
Matrix ReadMatrix(std::istream& in);
Matrix ReadMatrixFile(const std::string& path);

// Same, additionally validated as a preference matrix.
PreferenceMatrix ReadPreferenceMatrixFile(const std::string& path);

void WriteMatrix(std::ostream& out, const Matrix& m);

}  // namespace duelbench
