#include "secgame/linear_program.hpp"

#include <cmath>

#include "secgame/error.hpp"

namespace secgame::normalform {

void LinearProgram::validate() const {
  const std::size_t n = objective.size();
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidInput, what); };
  if (labels.size() != n) fail("LP needs one label per variable");
  if (lower.size() != n || upper.size() != n) fail("LP needs a bound pair per variable");
  for (const auto& r : inequalities) {
    if (r.coeffs.size() != n) fail("LP inequality row has the wrong width");
    if (!std::isfinite(r.rhs)) fail("LP right-hand sides must be finite");
  }
  for (const auto& r : equalities) {
    if (r.coeffs.size() != n) fail("LP equality row has the wrong width");
    if (!std::isfinite(r.rhs)) fail("LP right-hand sides must be finite");
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (std::isnan(lower[v]) || std::isnan(upper[v]) || lower[v] > upper[v]) {
      fail("LP bounds of '" + labels[v] + "' are inconsistent");
    }
    if (lower[v] == INFINITY || upper[v] == -INFINITY) fail("LP bound range is empty");
  }
}

}  // namespace secgame::normalform
