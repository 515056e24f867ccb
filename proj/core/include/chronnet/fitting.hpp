#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

namespace chronnet {

enum class FitFamily { PowerLaw, LogNormal };

std::string to_string(FitFamily f);
FitFamily parse_fit_family(const std::string& name);

struct FitResult {
  FitFamily family = FitFamily::PowerLaw;
  bool discrete = true;
  /// power law: P(x) ~ x^-gamma for x >= x_min
  double gamma = 0.0;
  double gamma_stderr = 0.0;
  double x_min = 0.0;
  /// log-normal: ln x ~ N(mu, sigma^2), optionally truncated at x_min
  double mu = 0.0;
  double sigma = 0.0;
  /// Kolmogorov-Smirnov distance between tail data and fitted model
  double ks = 0.0;
  std::size_t n_tail = 0;
  /// set when fewer than 50 samples support the fit
  bool low_tail_warning = false;
};

struct PowerLawOptions {
  /// integer-valued data: discrete MLE with Hurwitz-zeta normalization
  bool discrete = true;
  /// fixed lower cutoff; otherwise chosen to minimize the KS distance
  std::optional<double> x_min;
  /// smallest tail considered while scanning x_min
  std::size_t min_tail = 10;
};

/// Power-law MLE with KS-selected x_min. The discrete estimate maximizes the
/// exact likelihood -n ln zeta(gamma, x_min) - gamma sum ln x_i, starting
/// from the approximation 1 + n / sum ln(x_i / (x_min - 1/2)). Throws with
/// fewer than 2 distinct positive values.
FitResult fit_power_law(std::span<const double> samples, const PowerLawOptions& opts = {});

struct LogNormalOptions {
  /// treat samples as integers: P(x) = F(x + 1/2) - F(x - 1/2)
  bool discrete = false;
  /// fit only x >= x_min with a likelihood truncated there
  std::optional<double> x_min;
};

/// Log-normal MLE. Continuous and untruncated data use the closed form
/// (mean and population standard deviation of ln x); other cases maximize
/// the likelihood numerically.
FitResult fit_log_normal(std::span<const double> samples, const LogNormalOptions& opts = {});

/// Hurwitz zeta sum_{k>=0} (k + q)^-s for s > 1, q > 0.
double hurwitz_zeta(double s, double q);

}  // namespace chronnet
