#include "evifuse/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace evifuse::optim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe(double v) { return std::isfinite(v) ? v : kInf; }

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::span<const double> start,
                             std::span<const double> steps, const NelderMeadOptions& options) {
  const std::size_t n = start.size();
  const std::size_t budget = options.max_evaluations ? options.max_evaluations : 400 * std::max<std::size_t>(n, 1);

  NelderMeadResult result;
  std::size_t evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return safe(f(x));
  };

  std::vector<std::vector<double>> simplex(n + 1, std::vector<double>(start.begin(), start.end()));
  std::vector<double> values(n + 1);
  values[0] = eval(simplex[0]);
  result.initial_value = values[0];
  if (n == 0) {
    result.x = simplex[0];
    result.value = values[0];
    result.evaluations = evals;
    result.converged = true;
    return result;
  }
  for (std::size_t i = 0; i < n; ++i) {
    simplex[i + 1][i] += steps[i];
    values[i + 1] = eval(simplex[i + 1]);
  }

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), reflected(n), expanded(n), contracted(n);
  auto along = [&](double t, const std::vector<double>& worst, std::vector<double>& out) {
    for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + t * (worst[j] - centroid[j]);
  };

  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[n - 1];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        diameter = std::max(diameter, std::abs(simplex[i][j] - simplex[best][j]));
      }
    }
    const double spread = values[worst] - values[best];
    if (std::isfinite(values[best]) &&
        (diameter < options.x_tolerance || (std::isfinite(spread) && spread < options.f_tolerance))) {
      result.converged = true;
      break;
    }
    if (evals >= budget) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    along(-1.0, simplex[worst], reflected);
    const double f_reflected = eval(reflected);
    if (f_reflected < values[best]) {
      along(-2.0, simplex[worst], expanded);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < values[worst];
    along(outside ? -0.5 : 0.5, simplex[worst], contracted);
    const double f_contracted = eval(contracted);
    if (f_contracted < (outside ? f_reflected : values[worst])) {
      simplex[worst] = contracted;
      values[worst] = f_contracted;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j) {
        simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
      }
      values[i] = eval(simplex[i]);
    }
  }

  const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  result.x = simplex[best];
  result.value = values[best];
  result.evaluations = evals;
  return result;
}

}  // namespace evifuse::optim
