#include "hpdg/problem.hpp"

#include <algorithm>
#include <cmath>

#include "hpdg/errors.hpp"

namespace hpdg {

void ProblemSpec::validate() const {
  if (!wavenumber || !source || !boundary)
    throw InvalidParameter("problem '" + name + "' is missing k, f or g");
  if (!(alpha > 0.0) || !(beta > 0.0) || !(delta > 0.0))
    throw InvalidParameter("penalty constants must be positive");
}

int ProblemSpec::data_order(int p, double k, double h) const {
  if (numerics.data_order_override > 0)
    return std::max(numerics.data_order_override, 2 * p + 2);
  return std::max(2 * p + 4, static_cast<int>(std::ceil(2.0 * k * h)) + 10);
}

} // namespace hpdg
