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

#include "pbit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

namespace pbit {
namespace {

// Slower components barely bend inside the window and trade off against the
// offset, so rates are kept above 0.5 per window length.
constexpr double kMinLogRate = -0.6931471805599453;  // ln(0.5)
constexpr double kMaxLogRate = 11.5;   // ln(1e5)

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
  return m;
}

// Sum of K exponentials plus a constant in normalized time t = x / scale.
// Parameter layout: [amp_0, lograte_0, ..., amp_{K-1}, lograte_{K-1}, offset].
class ExpModel {
 public:
  ExpModel(std::vector<double> t, std::vector<double> y, int terms) : t_(std::move(t)), y_(std::move(y)), k_(terms) {}

  int terms() const { return k_; }
  std::size_t size() const { return t_.size(); }
  std::size_t params() const { return static_cast<std::size_t>(2 * k_ + 1); }

  double eval(const Eigen::VectorXd& p, double t) const {
    double f = p[2 * k_];
    for (int j = 0; j < k_; ++j) f += p[2 * j] * std::exp(-std::exp(p[2 * j + 1]) * t);
    return f;
  }

  double weighted_sse(const Eigen::VectorXd& p, const std::vector<double>& w) const {
    double s = 0.0;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      const double r = eval(p, t_[i]) - y_[i];
      s += w[i] * r * r;
    }
    return s;
  }

  /// Weighted linear least squares for amplitudes and offset at fixed log-rates.
  Eigen::VectorXd solve_linear(const std::vector<double>& log_rates, const std::vector<double>& w) const {
    const int m = k_ + 1;
    Eigen::MatrixXd ata = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd aty = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd phi(m);
    for (std::size_t i = 0; i < t_.size(); ++i) {
      for (int j = 0; j < k_; ++j) phi[j] = std::exp(-std::exp(log_rates[static_cast<std::size_t>(j)]) * t_[i]);
      phi[k_] = 1.0;
      ata.noalias() += w[i] * phi * phi.transpose();
      aty.noalias() += w[i] * y_[i] * phi;
    }
    const Eigen::VectorXd coef = ata.completeOrthogonalDecomposition().solve(aty);
    Eigen::VectorXd p(params());
    for (int j = 0; j < k_; ++j) {
      p[2 * j] = coef[j];
      p[2 * j + 1] = log_rates[static_cast<std::size_t>(j)];
    }
    p[2 * k_] = coef[k_];
    return p;
  }

  /// Levenberg-Marquardt on all parameters. Returns true when it stopped on a
  /// small step or stalled improvement rather than the iteration cap.
  bool levenberg_marquardt(Eigen::VectorXd& p, const std::vector<double>& w, std::size_t max_iter) const {
    const std::size_t n = t_.size();
    const auto np = static_cast<Eigen::Index>(params());
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), np);
    Eigen::VectorXd res(static_cast<Eigen::Index>(n));
    double lambda = 1e-3;
    double sse = weighted_sse(p, w);
    for (std::size_t it = 0; it < max_iter; ++it) {
      for (std::size_t i = 0; i < n; ++i) {
        const double sw = std::sqrt(w[i]);
        const auto row = static_cast<Eigen::Index>(i);
        double f = p[2 * k_];
        for (int j = 0; j < k_; ++j) {
          const double rate = std::exp(p[2 * j + 1]);
          const double e = std::exp(-rate * t_[i]);
          f += p[2 * j] * e;
          jac(row, 2 * j) = sw * e;
          jac(row, 2 * j + 1) = sw * (-p[2 * j] * t_[i] * rate * e);
        }
        jac(row, 2 * k_) = sw;
        res[row] = sw * (f - y_[i]);
      }
      const Eigen::MatrixXd jtj = jac.transpose() * jac;
      const Eigen::VectorXd jtr = jac.transpose() * res;
      bool improved = false;
      while (lambda < 1e16) {
        Eigen::MatrixXd a = jtj;
        for (Eigen::Index d = 0; d < np; ++d) a(d, d) += lambda * std::max(jtj(d, d), 1e-12);
        const Eigen::VectorXd step = a.ldlt().solve(-jtr);
        Eigen::VectorXd trial = p + step;
        for (int j = 0; j < k_; ++j) trial[2 * j + 1] = std::clamp(trial[2 * j + 1], kMinLogRate, kMaxLogRate);
        const double trial_sse = weighted_sse(trial, w);
        if (std::isfinite(trial_sse) && trial_sse <= sse) {
          const double gain = sse - trial_sse;
          p = trial;
          lambda = std::max(lambda / 3.0, 1e-12);
          improved = true;
          if (gain <= 1e-14 * std::max(sse, 1e-300) || step.norm() <= 1e-12 * (p.norm() + 1e-12)) return true;
          sse = trial_sse;
          break;
        }
        lambda *= 4.0;
      }
      if (!improved) return true;  // no descent direction left: local minimum
    }
    return false;
  }

  const std::vector<double>& t() const { return t_; }
  const std::vector<double>& y() const { return y_; }

 private:
  std::vector<double> t_;
  std::vector<double> y_;
  int k_;
};

// Starting log-rates: a deterministic grid plus a head/midpoint slope heuristic.
std::vector<std::vector<double>> candidate_rates(const ExpModel& model) {
  const auto& t = model.t();
  const auto& y = model.y();
  const std::size_t n = t.size();
  const std::size_t tail = std::max<std::size_t>(1, n / 10);
  const double g0 = std::accumulate(y.end() - static_cast<std::ptrdiff_t>(tail), y.end(), 0.0) / tail;
  const auto slope_rate = [&](std::size_t i0, std::size_t i1, double fallback) {
    const double y0 = std::abs(y[i0] - g0);
    const double y1 = std::abs(y[i1] - g0);
    const double dt = t[i1] - t[i0];
    if (y0 <= 0.0 || y1 <= 0.0 || dt <= 0.0) return fallback;
    const double r = std::log(y0 / y1) / dt;
    return r > 0.0 && std::isfinite(r) ? r : fallback;
  };
  const double head = slope_rate(0, std::max<std::size_t>(1, n / 10), 10.0);
  const double mid = slope_rate(n / 10, n / 2, 2.0);

  std::vector<std::vector<double>> out;
  if (model.terms() == 1) {
    out.push_back({std::max(std::log(head), kMinLogRate)});
    for (int g = 0; g <= 40; ++g) out.push_back({kMinLogRate + g * (std::log(1e4) - kMinLogRate) / 40});
  } else {
    out.push_back({std::max(std::log(std::min(head, mid)), kMinLogRate),
                   std::max(std::log(std::max(head, mid) * 1.5), kMinLogRate + 0.1)});
    constexpr int kGrid = 28;
    std::vector<double> grid(kGrid);
    for (int g = 0; g < kGrid; ++g) grid[g] = kMinLogRate + g * (std::log(1e4) - kMinLogRate) / (kGrid - 1);
    for (int i = 0; i < kGrid; ++i)
      for (int j = i + 1; j < kGrid; ++j) out.push_back({grid[i], grid[j]});
  }
  return out;
}

Eigen::VectorXd best_start(const ExpModel& model, const std::vector<double>& w, std::size_t keep,
                           std::size_t max_iter) {
  std::vector<std::pair<double, Eigen::VectorXd>> scored;
  for (const auto& rates : candidate_rates(model)) {
    Eigen::VectorXd p = model.solve_linear(rates, w);
    const double sse = model.weighted_sse(p, w);
    if (std::isfinite(sse)) scored.emplace_back(sse, std::move(p));
  }
  if (scored.empty()) throw std::runtime_error("fit: no finite starting point");
  // Always refine the heuristic start (first entry) plus the best grid points.
  std::vector<std::size_t> order(scored.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return scored[a].first < scored[b].first; });
  std::vector<std::size_t> picks{0};
  for (std::size_t i = 0; i < order.size() && picks.size() < keep + 1; ++i)
    if (order[i] != 0) picks.push_back(order[i]);

  Eigen::VectorXd best;
  double best_sse = std::numeric_limits<double>::infinity();
  for (std::size_t idx : picks) {
    Eigen::VectorXd p = scored[idx].second;
    model.levenberg_marquardt(p, w, max_iter);
    const double sse = model.weighted_sse(p, w);
    if (sse < best_sse) {
      best_sse = sse;
      best = p;
    }
  }
  return best;
}

FitResult fit_exponentials(std::span<const double> x, std::span<const double> y, int terms,
                           const FitOptions& options) {
  if (x.size() != y.size()) throw std::invalid_argument("fit: x and y lengths differ");
  if (x.size() < 10) throw std::invalid_argument("fit: at least 10 points are required");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw std::invalid_argument("fit: non-finite data");
  }
  const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  const double scale = std::max(std::abs(*xmin), std::abs(*xmax));
  if (!(*xmax > *xmin) || scale <= 0.0) throw std::invalid_argument("fit: x must span a nonzero range");

  std::vector<double> t(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) t[i] = x[i] / scale;
  ExpModel model(t, std::vector<double>(y.begin(), y.end()), terms);
  const std::size_t n = t.size();

  std::vector<double> w(n, 1.0);
  Eigen::VectorXd p = best_start(model, w, 4, options.max_lm_iterations);
  bool lm_ok = model.levenberg_marquardt(p, w, options.max_lm_iterations);
  std::size_t passes = 1;
  bool reweight_ok = true;

  if (options.robust) {
    const double y_scale = std::max(1.0, std::abs(model.y().front()));
    reweight_ok = false;
    for (; passes <= options.max_reweights; ++passes) {
      std::vector<double> r(n);
      for (std::size_t i = 0; i < n; ++i) r[i] = model.y()[i] - model.eval(p, t[i]);
      const double med = median(r);
      std::vector<double> dev(n);
      for (std::size_t i = 0; i < n; ++i) dev[i] = std::abs(r[i] - med);
      const double s = median(dev) / 0.6745;
      if (s <= 1e-13 * y_scale) {
        reweight_ok = true;
        break;
      }
      double change = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double u = r[i] / (options.bisquare_k * s);
        const double wi = std::abs(u) < 1.0 ? (1.0 - u * u) * (1.0 - u * u) : 0.0;
        change = std::max(change, std::abs(wi - w[i]));
        w[i] = wi;
      }
      lm_ok = model.levenberg_marquardt(p, w, options.max_lm_iterations);
      if (change < 1e-6) {
        reweight_ok = true;
        break;
      }
    }
  }

  FitResult fit;
  if (terms == 2 && std::exp(p[1]) > std::exp(p[3])) {
    std::swap(p[0], p[2]);
    std::swap(p[1], p[3]);
  }
  fit.a = p[0];
  fit.b = std::exp(p[1]) / scale;
  if (terms == 2) {
    fit.c = p[2];
    fit.d = std::exp(p[3]) / scale;
  }
  fit.g = p[2 * terms];
  fit.iterations = passes;
  fit.converged = lm_ok && reweight_ok;
  double ss_res = 0.0;
  const double ymean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - fit(x[i]);
    ss_res += r * r;
    ss_tot += (y[i] - ymean) * (y[i] - ymean);
  }
  fit.residual_norm = std::sqrt(ss_res);
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res <= 1e-20 ? 1.0 : 0.0);
  if (!fit.converged) fit.message = lm_ok ? "robust reweighting did not settle" : "iteration limit reached";
  return fit;
}

}  // namespace

double FitResult::operator()(double x) const { return a * std::exp(-b * x) + c * std::exp(-d * x) + g; }

FitResult fit_double_exp(std::span<const double> x, std::span<const double> y, const FitOptions& options) {
  return fit_exponentials(x, y, 2, options);
}

FitResult fit_double_exp(const EnsembleSeries& series, const FitOptions& options) {
  return fit_double_exp(series.time, series.mean, options);
}

FitResult fit_single_exp(std::span<const double> x, std::span<const double> y, const FitOptions& options) {
  return fit_exponentials(x, y, 1, options);
}

FitResult fit_single_exp(const EnsembleSeries& series, const FitOptions& options) {
  return fit_single_exp(series.time, series.mean, options);
}

ConvergenceResult convergence_time(const EnsembleSeries& series, const FitResult& fit, double threshold) {
  if (series.size() < 2) throw std::invalid_argument("convergence_time: series too short");
  if (!(threshold > 0.0)) throw std::invalid_argument("convergence_time: threshold must be positive");
  ConvergenceResult out;
  out.threshold = threshold;
  const double x0 = series.time.front();
  const double x1 = series.time.back();
  const auto outside = [&](double x) { return std::abs(fit(x) - fit.g) > threshold; };

  constexpr int kGrid = 4096;
  int last_out = -1;
  for (int k = 0; k <= kGrid; ++k) {
    if (outside(x0 + (x1 - x0) * k / kGrid)) last_out = k;
  }
  if (last_out == kGrid) {
    out.converged = false;
  } else if (last_out < 0) {
    out.converged = true;
    out.time = x0;
  } else {
    double lo = x0 + (x1 - x0) * last_out / kGrid;
    double hi = x0 + (x1 - x0) * (last_out + 1) / kGrid;
    for (int it = 0; it < 100 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      (outside(mid) ? lo : hi) = mid;
    }
    out.converged = true;
    out.time = hi;
  }

  std::size_t last_raw = series.size();
  for (std::size_t i = series.size(); i-- > 0;) {
    if (std::abs(series.mean[i] - fit.g) > threshold) {
      last_raw = i;
      break;
    }
  }
  if (last_raw == series.size()) {
    out.raw_converged = true;
    out.raw_time = x0;
  } else if (last_raw + 1 < series.size()) {
    out.raw_converged = true;
    out.raw_time = series.time[last_raw + 1];
  }
  if (out.converged && out.raw_converged) {
    const double spacing = (x1 - x0) / static_cast<double>(series.size() - 1);
    const double ref = std::max(out.time, spacing);
    out.flagged = std::abs(out.raw_time - out.time) > 0.2 * ref;
  } else {
    out.flagged = out.converged != out.raw_converged;
  }
  return out;
}

double plateau_half_width(const EnsembleSeries& series, double fraction) {
  if (series.size() == 0) throw std::invalid_argument("plateau_half_width: empty series");
  const std::size_t tail = std::max<std::size_t>(1, static_cast<std::size_t>(series.size() * fraction));
  double s = 0.0;
  for (std::size_t i = series.size() - tail; i < series.size(); ++i) s += series.ci_half_width[i];
  return s / static_cast<double>(tail);
}

ScalingResult scaling_fit(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("scaling_fit: at least 3 points are required");
  const std::size_t n = points.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(points[i].first > 0.0) || !(points[i].second > 0.0))
      throw std::invalid_argument("scaling_fit: values must be positive");
    lx[i] = std::log(points[i].first);
    ly[i] = std::log(points[i].second);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("scaling_fit: sizes must differ");
  ScalingResult out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (out.intercept + out.slope * lx[i]);
    out.residuals.push_back(r);
    ss += r * r;
  }
  out.slope_stderr = n > 2 ? std::sqrt(ss / static_cast<double>(n - 2) / sxx) : 0.0;
  return out;
}

WallclockProjection wallclock_projection(double sweeps, double clock_period_ns, std::size_t colors,
                                         std::size_t pbits) {
  if (!(sweeps > 0.0) || !(clock_period_ns > 0.0) || colors == 0 || pbits == 0)
    throw std::invalid_argument("wallclock_projection: inputs must be positive");
  WallclockProjection out;
  out.time_ns = sweeps * static_cast<double>(colors) * clock_period_ns;
  out.flips_per_ns = static_cast<double>(pbits) / static_cast<double>(colors) / clock_period_ns;
  return out;
}

}  // namespace pbit
