#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace secgame::normalform {

enum class RowSense { LessEqual, GreaterEqual };

struct InequalityRow {
  std::vector<double> coeffs;
  RowSense sense;
  double rhs;
};

struct EqualityRow {
  std::vector<double> coeffs;
  double rhs;
};

/// maximize objective . x  subject to the rows and per-variable bounds.
/// Bounds may be infinite; free variables use -inf/+inf.
struct LinearProgram {
  std::vector<std::string> labels;
  std::vector<double> objective;
  std::vector<InequalityRow> inequalities;
  std::vector<EqualityRow> equalities;
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t num_variables() const { return objective.size(); }
  /// Throws InvalidInput when row or bound dimensions disagree.
  void validate() const;
};

}  // namespace secgame::normalform
