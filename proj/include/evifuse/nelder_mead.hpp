#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace evifuse::optim {

struct NelderMeadOptions {
  std::size_t max_evaluations = 0;  ///< 0 means 400 * dimension
  double x_tolerance = 1e-6;        ///< stop when the simplex diameter drops below
  double f_tolerance = 1e-9;        ///< stop when the vertex values spread less than
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  double initial_value = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Derivative-free minimization with the standard reflection (1),
/// expansion (2), contraction (1/2) and shrink (1/2) coefficients.
/// Non-finite objective values are treated as +infinity. The returned point
/// is never worse than `start`.
NelderMeadResult nelder_mead(const Objective& f, std::span<const double> start,
                             std::span<const double> steps, const NelderMeadOptions& options);

}  // namespace evifuse::optim
