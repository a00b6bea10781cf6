/*
Copyright 2026 The pbit-pimc Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pbit/observables.hpp"

namespace pbit {

/// a e^{-b x} + c e^{-d x} + g. Single-exponential fits leave c = d = 0.
struct FitResult {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double g = 0.0;
  double residual_norm = 0.0;  // unweighted sqrt(sum r^2)
  double r_squared = 0.0;
  bool converged = false;
  std::size_t iterations = 0;  // robust reweighting passes
  std::string message;

  double operator()(double x) const;
};

struct FitOptions {
  bool robust = true;            // bisquare reweighting
  double bisquare_k = 4.685;
  std::size_t max_reweights = 50;
  std::size_t max_lm_iterations = 300;
};

/// Throws std::invalid_argument with fewer than 10 points, mismatched lengths or non-finite data.
FitResult fit_double_exp(std::span<const double> x, std::span<const double> y, const FitOptions& options = {});
FitResult fit_double_exp(const EnsembleSeries& series, const FitOptions& options = {});
FitResult fit_single_exp(std::span<const double> x, std::span<const double> y, const FitOptions& options = {});
FitResult fit_single_exp(const EnsembleSeries& series, const FitOptions& options = {});

struct ConvergenceResult {
  bool converged = false;      // fitted curve settles within the band before the last point
  double time = 0.0;           // fitted-curve crossing
  bool raw_converged = false;
  double raw_time = 0.0;       // first recorded time after which every raw mean stays in the band
  bool flagged = false;        // raw and fitted crossings disagree by more than 20%
  double threshold = 0.05;
};

/// Earliest time after which |f(t) - g| <= threshold (equivalently an MSE of
/// threshold^2 against the plateau), searched over the series' time range.
ConvergenceResult convergence_time(const EnsembleSeries& series, const FitResult& fit, double threshold = 0.05);

/// Mean confidence half-width over the last `fraction` of the series; the
/// uncertainty attached to the fitted plateau g.
double plateau_half_width(const EnsembleSeries& series, double fraction = 0.1);

struct ScalingResult {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::vector<double> residuals;  // in log space
};

/// Least-squares line through (log x, log y).
ScalingResult scaling_fit(std::span<const std::pair<double, double>> points);

struct WallclockProjection {
  double time_ns = 0.0;
  double flips_per_ns = 0.0;
};

/// time = sweeps * colors * clock; flips/ns = (pbits / colors) / clock.
WallclockProjection wallclock_projection(double sweeps, double clock_period_ns, std::size_t colors,
                                         std::size_t pbits);

}  // namespace pbit
