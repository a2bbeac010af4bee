#include "kacmix/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kacmix/parallel.hpp"

namespace kacmix {

namespace {

constexpr double kPi = 3.14159265358979323846;
// measurement noise floor of D^2 near the diagonal; the decay fit stops
// 1000x above it
constexpr double kD2FloatNoise = 1e-15;

double binom2(int n) { return 0.5 * static_cast<double>(n) * (n - 1); }

// disjoint substream namespaces per experiment stage
constexpr std::uint64_t kStreamBlock = 1ull << 40;

}  // namespace

const char* walk_kind_name(WalkKind kind) {
  switch (kind) {
    case WalkKind::KacUniform:
      return "kac";
    case WalkKind::KacDensity:
      return "density";
    case WalkKind::Unitary:
      return "unitary";
  }
  return "unknown";
}

double predicted_contraction_coefficient(int n, WalkKind kind,
                                         const std::optional<AngleDensity>& rho) {
  if (n < 2) throw std::invalid_argument("contraction coefficient requires n >= 2");
  switch (kind) {
    case WalkKind::KacUniform:
    case WalkKind::Unitary:
      return 1.0 - 1.0 / binom2(n);
    case WalkKind::KacDensity: {
      if (!rho) throw std::invalid_argument("density kernel requires an angle density");
      return 1.0 - RngStream::two_pi() * rho->rho_min / binom2(n);
    }
  }
  throw std::logic_error("unknown walk kind");
}

GroupElement worst_case_start(int n, Field field, double angle) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  for (int b = 0; b + 1 < n; b += 2) {
    m(b, b) = c;
    m(b + 1, b + 1) = c;
    m(b + 1, b) = s;
    m(b, b + 1) = -s;
  }
  if (field == Field::RealOrthogonal) return GroupElement::trusted_real(std::move(m));
  return GroupElement::trusted_complex(m.cast<std::complex<double>>());
}

namespace {

struct ProbePair {
  GroupElement x;
  GroupElement y;
  double r_actual = 0.0;
  double prediction = 0.0;  // tangent-space expansion of E[D^2]/r^2
};

ProbePair make_probe_pair(int n, WalkKind kind, const std::optional<AngleDensity>& rho, double r,
                          RngStream& rng) {
  const Field field = kind == WalkKind::Unitary ? Field::ComplexUnitary : Field::RealOrthogonal;
  GroupElement x = haar_sample(n, field, rng);
  const double coeff = binom2(n);
  ProbePair out{x, x, 0.0, 0.0};
  if (field == Field::RealOrthogonal) {
    const Eigen::MatrixXd dir = random_unit_skew(n, rng);
    out.y = group_exp(Eigen::MatrixXd(r * dir)) * x;
    // h = skew part of y x^T; expansion of the coupled second moment
    const Eigen::MatrixXd h = tangent_project(Eigen::MatrixXd(out.y.real() * x.real().transpose()));
    const double h2 = h.squaredNorm();
    out.r_actual = geodesic_distance(x, out.y);
    const double r2 = out.r_actual * out.r_actual;
    if (kind == WalkKind::KacUniform) {
      out.prediction = (1.0 - 1.0 / coeff) * h2 / r2;
    } else {
      const double uniform_mass = RngStream::two_pi() * rho->rho_min;
      out.prediction = (uniform_mass * (1.0 - 1.0 / coeff) * h2 + (1.0 - uniform_mass) * r2) / r2;
    }
  } else {
    const Eigen::MatrixXcd dir = random_unit_anti_hermitian(n, rng);
    out.y = group_exp(Eigen::MatrixXcd(r * dir)) * x;
    const Eigen::MatrixXcd h =
        tangent_project(Eigen::MatrixXcd(out.y.cplx() * x.cplx().adjoint()));
    out.r_actual = geodesic_distance(x, out.y);
    const double r2 = out.r_actual * out.r_actual;
    double diag_sq = 0.0;
    for (int k = 0; k < n; ++k) diag_sq += h(k, k).imag() * h(k, k).imag();
    double off_sq = 0.0;
    for (int l = 1; l < n; ++l)
      for (int k = 0; k < l; ++k) off_sq += std::norm(h(l, k));
    const double h2 = diag_sq + 2.0 * off_sq;
    out.prediction = (h2 - 2.0 / n * diag_sq - 2.0 / coeff * off_sq) / r2;
  }
  return out;
}

}  // namespace

ContractionReport local_contraction_probe(int n, WalkKind kind,
                                          const std::optional<AngleDensity>& rho, double r,
                                          std::int64_t pairs, std::int64_t trials_per_pair,
                                          std::uint64_t seed, int threads) {
  if (n < 2) throw std::invalid_argument("contraction probe requires n >= 2");
  if (!(r > 0.0) || r > 0.05)
    throw std::invalid_argument("contraction probe requires 0 < r <= 0.05 (small-r regime)");
  if (pairs < 1 || trials_per_pair < 1)
    throw std::invalid_argument("contraction probe requires pairs, trials >= 1");
  if (kind == WalkKind::KacDensity && !rho)
    throw std::invalid_argument("density kernel requires an angle density");

  ContractionReport report;
  report.n = n;
  report.kind = kind;
  report.r = r;
  report.pairs = pairs;
  report.trials_per_pair = trials_per_pair;
  report.seed = seed;
  report.predicted = predicted_contraction_coefficient(n, kind, rho);
  report.pair_means.assign(pairs, 0.0);
  report.pair_predictions.assign(pairs, 0.0);

  const std::uint64_t streams_per_pair = static_cast<std::uint64_t>(trials_per_pair) + 1;
  parallel_for(pairs, threads, [&](std::int64_t p) {
    RngStream pair_rng(seed, kStreamBlock + p * streams_per_pair);
    const ProbePair base = make_probe_pair(n, kind, rho, r, pair_rng);
    const double r2 = base.r_actual * base.r_actual;
    double sum = 0.0;
    for (std::int64_t t = 0; t < trials_per_pair; ++t) {
      RngStream trial_rng(seed, kStreamBlock + p * streams_per_pair + 1 + t);
      CoupledState state{base.x, base.y};
      const CoupledStepRecord rec = coupled_step(state, kind, rho, trial_rng);
      sum += rec.d_after * rec.d_after / r2;
    }
    report.pair_means[p] = sum / static_cast<double>(trials_per_pair);
    report.pair_predictions[p] = base.prediction;
  });

  const MeanStderr agg = mean_stderr(report.pair_means);
  report.mean_ratio = agg.mean;
  report.stderr_of_mean = agg.stderr_of_mean;
  report.expansion_mean = mean_stderr(report.pair_predictions).mean;
  return report;
}

DecayCurve coupled_decay_curve(int n, WalkKind kind, const std::optional<AngleDensity>& rho,
                               double d0, std::int64_t steps, std::int64_t trials,
                               std::uint64_t seed, int threads) {
  if (n < 2) throw std::invalid_argument("decay curve requires n >= 2");
  if (!(d0 > 0.0) || d0 > 0.1)
    throw std::invalid_argument("decay curve requires 0 < d0 <= 0.1 (small-r regime)");
  if (steps < 2 || trials < 1) throw std::invalid_argument("decay curve requires steps >= 2, trials >= 1");

  DecayCurve curve;
  curve.n = n;
  curve.kind = kind;
  curve.d0 = d0;
  curve.steps = steps;
  curve.trials = trials;
  curve.seed = seed;
  curve.predicted_slope = std::log(predicted_contraction_coefficient(n, kind, rho));

  std::vector<std::vector<double>> per_trial(trials);
  parallel_for(trials, threads, [&](std::int64_t trial) {
    RngStream rng(seed, kStreamBlock + 2 * trial);
    const Field field = kind == WalkKind::Unitary ? Field::ComplexUnitary : Field::RealOrthogonal;
    GroupElement x = haar_sample(n, field, rng);
    GroupElement y = field == Field::RealOrthogonal
                         ? group_exp(Eigen::MatrixXd(d0 * random_unit_skew(n, rng))) * x
                         : group_exp(Eigen::MatrixXcd(d0 * random_unit_anti_hermitian(n, rng))) * x;
    CoupledState state{std::move(x), std::move(y)};
    RngStream step_rng(seed, kStreamBlock + 2 * trial + 1);
    std::vector<double> d2(steps + 1);
    d2[0] = geodesic_distance(state.x, state.y);
    d2[0] *= d2[0];
    for (std::int64_t t = 1; t <= steps; ++t) {
      const CoupledStepRecord rec = coupled_step(state, kind, rho, step_rng);
      d2[t] = rec.d_after * rec.d_after;
    }
    per_trial[trial] = std::move(d2);
  });

  curve.mean_d2.assign(steps + 1, 0.0);
  for (std::int64_t trial = 0; trial < trials; ++trial)
    for (std::int64_t t = 0; t <= steps; ++t) curve.mean_d2[t] += per_trial[trial][t];
  for (double& v : curve.mean_d2) v /= static_cast<double>(trials);

  const double floor = 1e3 * kD2FloatNoise;
  std::int64_t window_end = 0;
  while (window_end + 1 <= steps && curve.mean_d2[window_end + 1] > floor) ++window_end;
  if (window_end < 2) throw std::runtime_error("decay window degenerate: distances at noise floor");
  curve.window_end = window_end;

  std::vector<double> ts(window_end + 1);
  std::vector<double> logs(window_end + 1);
  for (std::int64_t t = 0; t <= window_end; ++t) {
    ts[t] = static_cast<double>(t);
    logs[t] = std::log(curve.mean_d2[t]);
  }
  const LinearFit fit = least_squares(ts, logs);
  curve.slope = fit.slope;
  curve.slope_stderr = fit.slope_stderr;
  return curve;
}

MixingCurve mixing_curve(int n, WalkKind kind, const std::optional<AngleDensity>& rho,
                         std::span<const std::int64_t> times, int sample_size, MetricKind metric,
                         double p, std::uint64_t seed, int threads, int baseline_reps) {
  if (n < 2) throw std::invalid_argument("mixing curve requires n >= 2");
  if (sample_size < 2 || sample_size > 500)
    throw std::invalid_argument("mixing curve requires 2 <= N <= 500 (cubic assignment cost)");
  if (times.empty()) throw std::invalid_argument("mixing curve requires at least one time");
  if (baseline_reps < 2) throw std::invalid_argument("mixing curve requires >= 2 baseline replicates");
  if (kind == WalkKind::KacDensity && !rho)
    throw std::invalid_argument("density kernel requires an angle density");

  MixingCurve curve;
  curve.n = n;
  curve.kind = kind;
  curve.metric = metric;
  curve.p = p;
  curve.sample_size = sample_size;
  curve.seed = seed;
  curve.baseline_reps = baseline_reps;
  curve.times.assign(times.begin(), times.end());
  std::sort(curve.times.begin(), curve.times.end());
  curve.times.erase(std::unique(curve.times.begin(), curve.times.end()), curve.times.end());
  if (curve.times.front() < 0) throw std::invalid_argument("mixing times must be nonnegative");

  const Field field = kind == WalkKind::Unitary ? Field::ComplexUnitary : Field::RealOrthogonal;
  const GroupElement start = worst_case_start(n, field, kPi - 1e-6);
  const std::int64_t t_max = curve.times.back();
  const std::size_t n_times = curve.times.size();

  WalkConfig step_config;
  step_config.n = n;
  step_config.kind = kind;
  step_config.density = rho;

  // N independent walks from the worst-case start, observed at all times
  std::vector<std::vector<GroupElement>> observed(n_times);
  for (auto& row : observed) row.reserve(sample_size);
  {
    std::vector<std::vector<GroupElement>> per_walker(sample_size);
    parallel_for(sample_size, threads, [&](std::int64_t w) {
      RngStream rng(seed, kStreamBlock + w);
      GroupElement x = start;
      std::vector<GroupElement> snaps;
      snaps.reserve(n_times);
      std::size_t next = 0;
      for (std::int64_t t = 0; t <= t_max; ++t) {
        if (t > 0) apply_step_in_place(x, sample_step(step_config, rng));
        while (next < n_times && curve.times[next] == t) {
          snaps.push_back(x);
          ++next;
        }
      }
      per_walker[w] = std::move(snaps);
    });
    for (int w = 0; w < sample_size; ++w)
      for (std::size_t ti = 0; ti < n_times; ++ti) observed[ti].push_back(per_walker[w][ti]);
  }

  // fresh Haar reference and baseline replicates
  RngStream ref_rng(seed, 2 * kStreamBlock);
  std::vector<GroupElement> reference;
  reference.reserve(sample_size);
  for (int k = 0; k < sample_size; ++k) reference.push_back(haar_sample(n, field, ref_rng));
  const EmpiricalMeasure ref = EmpiricalMeasure::make(reference);

  curve.estimates.assign(n_times, 0.0);
  parallel_for(static_cast<std::int64_t>(n_times), threads, [&](std::int64_t ti) {
    const EmpiricalMeasure walk_measure = EmpiricalMeasure::make(observed[ti]);
    curve.estimates[ti] = empirical_wasserstein(walk_measure, ref, metric, p);
  });

  std::vector<double> baselines(baseline_reps, 0.0);
  parallel_for(baseline_reps, threads, [&](std::int64_t b) {
    RngStream rng_a(seed, 3 * kStreamBlock + 2 * b);
    RngStream rng_b(seed, 3 * kStreamBlock + 2 * b + 1);
    std::vector<GroupElement> sa;
    std::vector<GroupElement> sb;
    sa.reserve(sample_size);
    sb.reserve(sample_size);
    for (int k = 0; k < sample_size; ++k) {
      sa.push_back(haar_sample(n, field, rng_a));
      sb.push_back(haar_sample(n, field, rng_b));
    }
    baselines[b] =
        empirical_wasserstein(EmpiricalMeasure::make(sa), EmpiricalMeasure::make(sb), metric, p);
  });
  curve.baseline_mean = mean_stderr(baselines).mean;
  curve.baseline_spread = sample_std(baselines);
  return curve;
}

DiameterReport diameter_probe(int n, std::int64_t trials, std::uint64_t seed, int threads) {
  if (n < 2) throw std::invalid_argument("diameter probe requires n >= 2");
  if (trials < 1) throw std::invalid_argument("diameter probe requires trials >= 1");
  DiameterReport report;
  report.n = n;
  report.trials = trials;
  report.seed = seed;
  report.bound = kPi * std::sqrt(static_cast<double>(n));

  std::vector<double> per_trial(trials, 0.0);
  parallel_for(trials, threads, [&](std::int64_t t) {
    RngStream rng(seed, kStreamBlock + t);
    const GroupElement a = haar_sample(n, Field::RealOrthogonal, rng);
    const GroupElement b = haar_sample(n, Field::RealOrthogonal, rng);
    per_trial[t] = geodesic_distance(a, b);
  });
  report.max_distance = *std::max_element(per_trial.begin(), per_trial.end());

  const double angle = kPi - 1e-6;
  const GroupElement block = worst_case_start(n, Field::RealOrthogonal, angle);
  report.block_distance = geodesic_distance(GroupElement::identity(n, Field::RealOrthogonal), block);
  report.block_predicted = std::sqrt(2.0 * (n / 2)) * angle;
  return report;
}

SandwichReport metric_sandwich_probe(int n, std::int64_t pairs, std::span<const double> scales,
                                     std::uint64_t seed, int threads) {
  if (n < 2) throw std::invalid_argument("sandwich probe requires n >= 2");
  if (pairs < 1) throw std::invalid_argument("sandwich probe requires pairs >= 1");
  for (double s : scales)
    if (!(s > 0.0) || s > 0.5)
      throw std::invalid_argument("sandwich scales must lie in (0, 0.5]");

  SandwichReport report;
  report.n = n;
  report.seed = seed;

  for (std::size_t si = 0; si < scales.size(); ++si) {
    const double scale = scales[si];
    SandwichScale row;
    row.scale = scale;
    row.pairs = pairs;
    std::vector<double> gap_quad(pairs), gap_cube(pairs), proj_quad(pairs), proj_cube(pairs);
    std::vector<std::int64_t> violations(pairs, 0);
    parallel_for(pairs, threads, [&](std::int64_t k) {
      RngStream rng(seed, kStreamBlock * (si + 1) + k);
      const GroupElement x = haar_sample(n, Field::RealOrthogonal, rng);
      const GroupElement z = group_exp(Eigen::MatrixXd(scale * random_unit_skew(n, rng)));
      const GroupElement y = z * x;
      const double d = geodesic_distance(x, y);
      const double hs = hs_distance(x, y);
      violations[k] = hs > d ? 1 : 0;
      const double gap = d - hs;
      gap_quad[k] = gap / (hs * hs);
      gap_cube[k] = gap / (hs * hs * hs);
      // Eq. 12 residual on z = y x^T near the identity
      const Eigen::MatrixXd skew = tangent_project(z.real());
      const double proj_gap = std::abs(d - skew.norm());
      proj_quad[k] = proj_gap / (hs * hs);
      proj_cube[k] = proj_gap / (hs * hs * hs);
    });
    for (std::int64_t k = 0; k < pairs; ++k) row.order_violations += violations[k];
    row.max_gap_quad = *std::max_element(gap_quad.begin(), gap_quad.end());
    row.max_gap_cube = *std::max_element(gap_cube.begin(), gap_cube.end());
    row.max_proj_quad = *std::max_element(proj_quad.begin(), proj_quad.end());
    row.max_proj_cube = *std::max_element(proj_cube.begin(), proj_cube.end());
    report.scales.push_back(row);
  }
  return report;
}

VolumeEstimate ball_volume_mc(int n, double r, std::int64_t samples, std::uint64_t seed,
                              int threads) {
  if (n < 3) throw std::invalid_argument("ball volume requires n >= 3");
  if (r < 0.0) throw std::invalid_argument("ball volume requires r >= 0");
  if (samples < 1) throw std::invalid_argument("ball volume requires samples >= 1");

  VolumeEstimate est;
  est.target = "ball";
  est.dim = n;
  est.radius = r;
  est.samples = samples;
  est.seed = seed;

  std::vector<std::int64_t> hits(std::max<std::int64_t>(1, (samples + 4095) / 4096), 0);
  parallel_for(static_cast<std::int64_t>(hits.size()), threads, [&](std::int64_t chunk) {
    const std::int64_t begin = chunk * 4096;
    const std::int64_t end = std::min<std::int64_t>(samples, begin + 4096);
    std::int64_t local = 0;
    for (std::int64_t k = begin; k < end; ++k) {
      RngStream rng(seed, kStreamBlock + k);
      const GroupElement x = haar_sample(n, Field::RealOrthogonal, rng);
      const double hs2 = std::max(0.0, 2.0 * n - 2.0 * x.real().trace());
      if (std::sqrt(hs2) < r) ++local;
    }
    hits[chunk] = local;
  });
  for (std::int64_t h : hits) est.hits += h;
  est.estimate = static_cast<double>(est.hits) / static_cast<double>(samples);
  est.ci = binomial_ci(est.hits, samples, 1.96);
  est.packing_log_lower = est.ci.high > 0.0 ? -std::log(est.ci.high) : 0.0;
  if (est.packing_log_lower < 0.0) est.packing_log_lower = 0.0;
  return est;
}

VolumeEstimate cap_volume_mc(int m, double tau, std::int64_t samples, std::uint64_t seed,
                             int threads) {
  if (m < 2) throw std::invalid_argument("cap volume requires sphere dimension m >= 2");
  if (tau < 2.0 / std::sqrt(static_cast<double>(m)) || tau > 1.0)
    throw std::invalid_argument("cap volume requires tau in [2/sqrt(m), 1]");
  if (samples < 1) throw std::invalid_argument("cap volume requires samples >= 1");

  VolumeEstimate est;
  est.target = "cap";
  est.dim = m;
  est.radius = tau;
  est.samples = samples;
  est.seed = seed;

  std::vector<std::int64_t> hits(std::max<std::int64_t>(1, (samples + 65535) / 65536), 0);
  parallel_for(static_cast<std::int64_t>(hits.size()), threads, [&](std::int64_t chunk) {
    const std::int64_t begin = chunk * 65536;
    const std::int64_t end = std::min<std::int64_t>(samples, begin + 65536);
    RngStream rng(seed, kStreamBlock + chunk);
    std::int64_t local = 0;
    for (std::int64_t k = begin; k < end; ++k) {
      // first coordinate of a uniform point on S^m: x_1 / |x|
      double first = rng.next_gaussian();
      double norm2 = first * first;
      for (int c = 0; c < m; ++c) {
        const double g = rng.next_gaussian();
        norm2 += g * g;
      }
      if (first > tau * std::sqrt(norm2)) ++local;
    }
    hits[chunk] = local;
  });
  for (std::int64_t h : hits) est.hits += h;
  est.estimate = static_cast<double>(est.hits) / static_cast<double>(samples);
  est.ci = binomial_ci(est.hits, samples, 1.96);
  const double body = std::pow(1.0 - tau * tau, 0.5 * (m - 1));
  est.bracket_low = body / (6.0 * tau * std::sqrt(static_cast<double>(m)));
  est.bracket_high = body / (2.0 * tau * std::sqrt(static_cast<double>(m)));
  return est;
}

LowerBoundResult lower_bound_calculator(int n, double eps, double ln_packing, int max_iters) {
  if (n < 2) throw std::invalid_argument("lower bound requires n >= 2");
  if (!(eps > 0.0)) throw std::invalid_argument("lower bound requires eps > 0");
  if (max_iters < 1) throw std::invalid_argument("lower bound requires max_iters >= 1");

  LowerBoundResult out;
  out.n = n;
  out.eps = eps;
  out.ln_packing = ln_packing;

  const double numerator = ln_packing - std::log(2.0);
  if (numerator <= 0.0) {
    out.fixed_point = 0.0;
    out.bound = 0;
    out.converged = true;
    return out;
  }

  const double scale = kPi * n * n / eps;  // covering bound: C_H(eps/tau) <= pi n^2 tau / eps
  const double tau_floor = std::exp(1.0) / scale;  // keep the denominator log >= 1
  double tau = 1.0;
  for (int k = 0; k < max_iters; ++k) {
    const double next = std::max(tau_floor, numerator / std::log(scale * tau));
    ++out.iterations;
    if (std::abs(next - tau) < 1e-10 * std::max(1.0, std::abs(tau))) {
      tau = next;
      out.converged = true;
      break;
    }
    tau = next;
  }
  out.fixed_point = tau;
  out.bound = static_cast<std::int64_t>(std::floor(tau));
  return out;
}

}  // namespace kacmix
