#pragma once

#include <iosfwd>

#include "irs/synthesis.hpp"

namespace irs {

/// Header "t,value", then one row per grid point with 17 significant digits.
void write_path_csv(std::ostream& out, const SamplePath& path);

/// Reads the format written by write_path_csv. The t column is ignored
/// beyond a count check; values are taken as X(t_k) with t_k = k / n.
[[nodiscard]] SamplePath read_path_csv(std::istream& in);

}  // namespace irs
