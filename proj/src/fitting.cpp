#include "telefock/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace telefock {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_coverage(std::span<const FringeSample> samples) {
  std::set<double> distinct;
  std::vector<double> wrapped;
  for (const auto& s : samples) {
    if (!std::isfinite(s.phi) || !std::isfinite(s.value)) throw std::invalid_argument("non-finite fringe sample");
    distinct.insert(s.phi);
    double w = std::fmod(s.phi, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    wrapped.push_back(w);
  }
  if (distinct.size() < 5) throw std::invalid_argument("fringe fit needs at least five distinct phases");
  std::sort(wrapped.begin(), wrapped.end());
  double gap = wrapped.front() + kTwoPi - wrapped.back();
  for (std::size_t i = 1; i < wrapped.size(); ++i) gap = std::max(gap, wrapped[i] - wrapped[i - 1]);
  if (gap >= std::numbers::pi) throw std::invalid_argument("fringe samples do not span a full period");
}

}  // namespace

FitResult fit_visibility(std::span<const FringeSample> samples) {
  check_coverage(samples);
  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixX3d design(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double phi = samples[static_cast<std::size_t>(i)].phi;
    design.row(i) << 1.0, std::cos(phi), std::sin(phi);
    y(i) = samples[static_cast<std::size_t>(i)].value;
  }

  const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd resid = y - design * coef;
  const double a = coef(0), b = coef(1), c = coef(2);
  if (!(a > 0.0)) throw std::invalid_argument("fringe has a non-positive mean level");

  FitResult fit;
  fit.points = samples.size();
  fit.residual_norm = resid.norm();
  fit.mean_level = a;
  const double amp = std::hypot(b, c);
  fit.visibility = amp / a;
  // A V cos(phi + phi0) = A V cos(phi0) cos(phi) - A V sin(phi0) sin(phi)
  fit.phase_offset = amp > 0.0 ? std::atan2(-c, b) : 0.0;

  const double dof = static_cast<double>(n - 3);
  const double sigma2 = dof > 0.0 ? resid.squaredNorm() / dof : 0.0;
  const Eigen::Matrix3d cov = sigma2 * (design.transpose() * design).inverse();

  fit.se_mean_level = std::sqrt(cov(0, 0));
  if (amp > 0.0) {
    const Eigen::RowVector3d dv(-fit.visibility / a, b / (a * amp), c / (a * amp));
    const Eigen::RowVector3d dphi(0.0, c / (amp * amp), -b / (amp * amp));
    fit.se_visibility = std::sqrt((dv * cov * dv.transpose())(0, 0));
    fit.se_phase_offset = std::sqrt((dphi * cov * dphi.transpose())(0, 0));
  } else {
    fit.se_visibility = std::sqrt(cov(1, 1) + cov(2, 2)) / a;
    fit.se_phase_offset = std::numbers::pi;
  }
  return fit;
}

}  // namespace telefock
