#include "chronnet/fitting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "chronnet/error.hpp"

namespace chronnet {

std::string to_string(FitFamily f) { return f == FitFamily::PowerLaw ? "powerlaw" : "lognormal"; }

FitFamily parse_fit_family(const std::string& name) {
  if (name == "powerlaw" || name == "power-law") return FitFamily::PowerLaw;
  if (name == "lognormal" || name == "log-normal") return FitFamily::LogNormal;
  throw Error("unknown fit family '" + name + "'");
}

double hurwitz_zeta(double s, double q) {
  if (!(s > 1.0) || !(q > 0.0)) throw Error("hurwitz_zeta needs s > 1 and q > 0");
  // Euler-Maclaurin: direct terms up to q + N, integral tail, Bernoulli corrections.
  constexpr int kDirect = 12;
  static constexpr std::array<double, 7> kB2j = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30,
                                                 5.0 / 66, -691.0 / 2730, 7.0 / 6};
  double sum = 0.0;
  for (int k = 0; k < kDirect; ++k) sum += std::pow(q + k, -s);
  const double a = q + kDirect;
  sum += std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
  double rising = s;  // s (s+1) ... (s+2j-2)
  double fact = 2.0;  // (2j)!
  double apow = std::pow(a, -s - 1.0);
  for (std::size_t j = 1; j <= kB2j.size(); ++j) {
    sum += kB2j[j - 1] / fact * rising * apow;
    rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
    fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    apow /= a * a;
  }
  return sum;
}

namespace {

// Golden-section maximization of a unimodal function on [lo, hi].
double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-10) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol * (1.0 + std::abs(a) + std::abs(b))) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2.0;
}

struct TailFit {
  double gamma = 0.0;
  double ks = 0.0;
  double stderr_ = 0.0;
};

// `tail` is sorted ascending and starts at the first value >= x_min.
TailFit fit_tail(std::span<const double> tail, double x_min, bool discrete) {
  const double n = static_cast<double>(tail.size());
  double sum_log = 0.0;
  TailFit fit;
  if (!discrete) {
    for (double x : tail) sum_log += std::log(x / x_min);
    if (!(sum_log > 0.0)) return {std::numeric_limits<double>::infinity(), 1.0, 0.0};
    fit.gamma = 1.0 + n / sum_log;
    fit.stderr_ = (fit.gamma - 1.0) / std::sqrt(n);
    double d = 0.0;
    for (std::size_t i = 0; i < tail.size();) {
      std::size_t j = i;
      while (j < tail.size() && tail[j] == tail[i]) ++j;
      const double model = 1.0 - std::pow(tail[i] / x_min, 1.0 - fit.gamma);
      d = std::max({d, std::abs(static_cast<double>(i) / n - model),
                    std::abs(static_cast<double>(j) / n - model)});
      i = j;
    }
    fit.ks = d;
    return fit;
  }

  double approx_sum = 0.0;
  for (double x : tail) {
    sum_log += std::log(x);
    approx_sum += std::log(x / (x_min - 0.5));
  }
  const double approx = approx_sum > 0.0 ? 1.0 + n / approx_sum : 10.0;
  auto loglik = [&](double g) { return -n * std::log(hurwitz_zeta(g, x_min)) - g * sum_log; };
  const double lo = 1.0 + 1e-6;
  const double hi = std::max(20.0, 2.0 * approx);
  fit.gamma = golden_max(loglik, lo, hi);

  // Fisher information from the second derivative of ln zeta.
  const double h = 1e-4;
  const double z0 = std::log(hurwitz_zeta(fit.gamma, x_min));
  const double zp = std::log(hurwitz_zeta(fit.gamma + h, x_min));
  const double zm = std::log(hurwitz_zeta(std::max(lo, fit.gamma - h), x_min));
  const double second = (zp - 2.0 * z0 + zm) / (h * h);
  fit.stderr_ = second > 0.0 ? 1.0 / std::sqrt(n * second) : 0.0;

  // KS on the integer support: empirical vs model CDF at every observed value.
  const double norm = hurwitz_zeta(fit.gamma, x_min);
  double d = 0.0;
  for (std::size_t i = 0; i < tail.size();) {
    std::size_t j = i;
    while (j < tail.size() && tail[j] == tail[i]) ++j;
    const double model_cdf = 1.0 - hurwitz_zeta(fit.gamma, tail[i] + 1.0) / norm;
    d = std::max(d, std::abs(static_cast<double>(j) / n - model_cdf));
    i = j;
  }
  fit.ks = d;
  return fit;
}

std::vector<double> sorted_positive(std::span<const double> samples, bool discrete) {
  std::vector<double> v;
  v.reserve(samples.size());
  for (double x : samples) {
    if (!std::isfinite(x)) throw Error("fit samples must be finite");
    if (discrete && x != std::floor(x)) throw Error("discrete fit needs integer samples");
    if (x > 0.0) v.push_back(x);
  }
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

FitResult fit_power_law(std::span<const double> samples, const PowerLawOptions& opts) {
  const auto v = sorted_positive(samples, opts.discrete);
  if (v.empty() || v.front() == v.back()) throw Error("power-law fit needs at least 2 distinct positive values");

  std::vector<double> candidates;
  if (opts.x_min) {
    candidates.push_back(*opts.x_min);
  } else {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0 && v[i] == v[i - 1]) continue;
      if (v.size() - i < std::max<std::size_t>(opts.min_tail, 2)) break;
      candidates.push_back(v[i]);
    }
    if (candidates.empty()) candidates.push_back(v.front());
  }

  FitResult best;
  best.family = FitFamily::PowerLaw;
  best.discrete = opts.discrete;
  best.ks = std::numeric_limits<double>::infinity();
  for (double xm : candidates) {
    auto first = std::lower_bound(v.begin(), v.end(), xm);
    std::span<const double> tail(&*first, static_cast<std::size_t>(v.end() - first));
    if (tail.size() < 2 || tail.front() == tail.back()) continue;
    const TailFit f = fit_tail(tail, xm, opts.discrete);
    if (f.ks < best.ks) {
      best.gamma = f.gamma;
      best.gamma_stderr = f.stderr_;
      best.x_min = xm;
      best.ks = f.ks;
      best.n_tail = tail.size();
    }
  }
  if (!std::isfinite(best.ks)) throw Error("power-law fit: no usable x_min");
  best.low_tail_warning = best.n_tail < 50;
  return best;
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Nelder-Mead on two parameters.
std::array<double, 2> nelder_mead(const std::function<double(std::array<double, 2>)>& f,
                                  std::array<double, 2> start, double step) {
  std::array<std::array<double, 2>, 3> p = {start, start, start};
  p[1][0] += step;
  p[2][1] += step;
  std::array<double, 3> fv = {f(p[0]), f(p[1]), f(p[2])};
  for (int iter = 0; iter < 2000; ++iter) {
    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    const auto best = p[idx[0]], mid = p[idx[1]], worst = p[idx[2]];
    if (std::abs(fv[idx[2]] - fv[idx[0]]) < 1e-12 * (1.0 + std::abs(fv[idx[0]])) &&
        std::abs(worst[0] - best[0]) + std::abs(worst[1] - best[1]) < 1e-10) {
      break;
    }
    const std::array<double, 2> centroid = {(best[0] + mid[0]) / 2, (best[1] + mid[1]) / 2};
    auto along = [&](double t) {
      return std::array<double, 2>{centroid[0] + t * (worst[0] - centroid[0]),
                                   centroid[1] + t * (worst[1] - centroid[1])};
    };
    const auto refl = along(-1.0);
    const double fr = f(refl);
    if (fr < fv[idx[0]]) {
      const auto exp = along(-2.0);
      const double fe = f(exp);
      if (fe < fr) {
        p[idx[2]] = exp;
        fv[idx[2]] = fe;
      } else {
        p[idx[2]] = refl;
        fv[idx[2]] = fr;
      }
    } else if (fr < fv[idx[1]]) {
      p[idx[2]] = refl;
      fv[idx[2]] = fr;
    } else {
      const auto con = along(0.5);
      const double fc = f(con);
      if (fc < fv[idx[2]]) {
        p[idx[2]] = con;
        fv[idx[2]] = fc;
      } else {
        for (int k : {idx[1], idx[2]}) {
          p[k] = {best[0] + 0.5 * (p[k][0] - best[0]), best[1] + 0.5 * (p[k][1] - best[1])};
          fv[k] = f(p[k]);
        }
      }
    }
  }
  int arg = 0;
  for (int k = 1; k < 3; ++k) {
    if (fv[k] < fv[arg]) arg = k;
  }
  return p[arg];
}

}  // namespace

FitResult fit_log_normal(std::span<const double> samples, const LogNormalOptions& opts) {
  auto v = sorted_positive(samples, opts.discrete);
  if (opts.x_min) v.erase(v.begin(), std::lower_bound(v.begin(), v.end(), *opts.x_min));
  if (v.empty() || v.front() == v.back()) throw Error("log-normal fit needs at least 2 distinct positive values");

  const double n = static_cast<double>(v.size());
  double mu = 0.0;
  for (double x : v) mu += std::log(x);
  mu /= n;
  double var = 0.0;
  for (double x : v) var += (std::log(x) - mu) * (std::log(x) - mu);
  double sigma = std::sqrt(var / n);

  const double lower = opts.x_min ? (opts.discrete ? *opts.x_min - 0.5 : *opts.x_min) : 0.0;
  auto cdf = [](double x, double m, double s) { return x <= 0.0 ? 0.0 : normal_cdf((std::log(x) - m) / s); };

  if (opts.discrete || opts.x_min) {
    auto nll = [&](std::array<double, 2> q) {
      const double m = q[0];
      const double s = std::exp(q[1]);
      const double mass_above = 1.0 - cdf(lower, m, s);
      if (!(mass_above > 0.0)) return std::numeric_limits<double>::infinity();
      double total = 0.0;
      for (double x : v) {
        double p = 0.0;
        if (opts.discrete) {
          p = cdf(x + 0.5, m, s) - cdf(x - 0.5, m, s);
        } else {
          const double z = (std::log(x) - m) / s;
          p = std::exp(-0.5 * z * z) / (x * s * std::sqrt(2.0 * M_PI));
        }
        if (!(p > 0.0)) return std::numeric_limits<double>::infinity();
        total -= std::log(p / mass_above);
      }
      return total;
    };
    const auto opt = nelder_mead(nll, {mu, std::log(std::max(sigma, 1e-3))}, 0.25);
    mu = opt[0];
    sigma = std::exp(opt[1]);
  }

  FitResult r;
  r.family = FitFamily::LogNormal;
  r.discrete = opts.discrete;
  r.mu = mu;
  r.sigma = sigma;
  r.x_min = opts.x_min.value_or(v.front());
  r.n_tail = v.size();
  r.low_tail_warning = v.size() < 50;

  const double base = cdf(lower, mu, sigma);
  const double scale = 1.0 - base;
  double d = 0.0;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    const double at = opts.discrete ? v[i] + 0.5 : v[i];
    const double model = (cdf(at, mu, sigma) - base) / scale;
    d = std::max(d, std::abs(static_cast<double>(j) / n - model));
    if (!opts.discrete) {
      const double before = (cdf(v[i], mu, sigma) - base) / scale;
      d = std::max(d, std::abs(static_cast<double>(i) / n - before));
    }
    i = j;
  }
  r.ks = d;
  return r;
}

}  // namespace chronnet
