#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace kacmix {

struct TestResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

// Kolmogorov-Smirnov one-sample test against a continuous CDF
// (asymptotic p-value with the Stephens small-sample correction).
TestResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf);

// two-sample Kolmogorov-Smirnov test
TestResult ks_test_two_sample(std::span<const double> a, std::span<const double> b);

// chi-square goodness of fit for observed counts against expected counts
TestResult chi_square_test(std::span<const std::int64_t> observed,
                           std::span<const double> expected);

// upper regularized incomplete gamma Q(a, x) = Gamma(a, x)/Gamma(a)
double regularized_gamma_q(double a, double x);

// survival function of the Kolmogorov distribution
double kolmogorov_sf(double lambda);

struct BinomialCi {
  double low = 0.0;
  double high = 1.0;
};

// Wilson score interval at z standard normal quantiles (z = 1.96 ~ 95%).
// Gives a strictly positive upper limit at zero hits.
BinomialCi binomial_ci(std::int64_t hits, std::int64_t samples, double z);

struct MeanStderr {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  std::size_t count = 0;
};
MeanStderr mean_stderr(std::span<const double> values);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};
// ordinary least squares y ~ intercept + slope * x
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

double sample_std(std::span<const double> values);

}  // namespace kacmix
