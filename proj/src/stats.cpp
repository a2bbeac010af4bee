#include "kacmix/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kacmix {

namespace {

double ks_p_from_stat(double stat, double effective_n) {
  const double sqrt_n = std::sqrt(effective_n);
  const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * stat;
  return kolmogorov_sf(lambda);
}

// series expansion of Q(a, x), valid for x < a + 1
double gamma_q_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k < 10000; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  const double log_prefix = a * std::log(x) - x - std::lgamma(a);
  return 1.0 - sum * std::exp(log_prefix);
}

// Lentz continued fraction for Q(a, x), valid for x >= a + 1
double gamma_q_cf(double a, double x) {
  const double tiny = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double f = d;
  for (int k = 1; k < 10000; ++k) {
    const double an = -k * (k - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  const double log_prefix = a * std::log(x) - x - std::lgamma(a);
  return f * std::exp(log_prefix);
}

}  // namespace

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double regularized_gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw std::invalid_argument("gamma_q requires a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  return x < a + 1.0 ? gamma_q_series(a, x) : gamma_q_cf(a, x);
}

TestResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_test requires samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double stat = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const double f = cdf(sorted[k]);
    stat = std::max(stat, (k + 1) / n - f);
    stat = std::max(stat, f - k / n);
  }
  return {stat, ks_p_from_stat(stat, n)};
}

TestResult ks_test_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_test requires samples");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  double stat = 0.0;
  std::size_t ia = 0;
  std::size_t ib = 0;
  while (ia < sa.size() && ib < sb.size()) {
    const double value = std::min(sa[ia], sb[ib]);
    while (ia < sa.size() && sa[ia] <= value) ++ia;
    while (ib < sb.size() && sb[ib] <= value) ++ib;
    stat = std::max(stat, std::abs(ia / na - ib / nb));
  }
  return {stat, ks_p_from_stat(stat, na * nb / (na + nb))};
}

TestResult chi_square_test(std::span<const std::int64_t> observed,
                           std::span<const double> expected) {
  if (observed.size() != expected.size() || observed.size() < 2)
    throw std::invalid_argument("chi_square_test requires matching bins (at least 2)");
  double stat = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    if (expected[k] <= 0.0) throw std::invalid_argument("expected counts must be positive");
    const double diff = observed[k] - expected[k];
    stat += diff * diff / expected[k];
  }
  const double dof = static_cast<double>(observed.size() - 1);
  return {stat, regularized_gamma_q(0.5 * dof, 0.5 * stat)};
}

BinomialCi binomial_ci(std::int64_t hits, std::int64_t samples, double z) {
  if (samples <= 0 || hits < 0 || hits > samples)
    throw std::invalid_argument("binomial_ci requires 0 <= hits <= samples");
  const double n = static_cast<double>(samples);
  const double p = hits / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

MeanStderr mean_stderr(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean_stderr requires values");
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / values.size();
  if (values.size() == 1) return {mean, 0.0, 1};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double variance = ss / (values.size() - 1);
  return {mean, std::sqrt(variance / values.size()), values.size()};
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3)
    throw std::invalid_argument("least_squares requires >= 3 matched points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("least_squares requires varying x");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = y[k] - fit.intercept - fit.slope * x[k];
    rss += r * r;
  }
  fit.slope_stderr = std::sqrt(rss / (n - 2.0) / sxx);
  return fit;
}

double sample_std(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("sample_std requires >= 2 values");
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / values.size();
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (values.size() - 1));
}

}  // namespace kacmix
