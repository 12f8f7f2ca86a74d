#ifndef TELEFOCK_FITTING_HPP
#define TELEFOCK_FITTING_HPP

#include <cstddef>
#include <span>

namespace telefock {

struct FringeSample {
  double phi = 0.0;
  double value = 0.0;  ///< count or probability
};

/// Least-squares fringe A (1 + V cos(phi + phi0)).
struct FitResult {
  double visibility = 0.0;
  double phase_offset = 0.0;  ///< phi0, wrapped to (-pi, pi]
  double mean_level = 0.0;    ///< A
  double residual_norm = 0.0;
  double se_visibility = 0.0;
  double se_phase_offset = 0.0;
  double se_mean_level = 0.0;
  std::size_t points = 0;
};

/// Fits the sinusoid through its linear form a + b cos(phi) + c sin(phi).
///
/// Needs at least five distinct phases that wrap the circle with no gap of
/// pi or more; throws std::invalid_argument otherwise. Standard errors use
/// the residual variance RSS / (n - 3) and first-order propagation.
FitResult fit_visibility(std::span<const FringeSample> samples);

}  // namespace telefock

#endif  // TELEFOCK_FITTING_HPP
