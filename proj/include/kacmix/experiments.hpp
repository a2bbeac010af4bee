#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kacmix/couplings.hpp"
#include "kacmix/stats.hpp"
#include "kacmix/transport.hpp"
#include "kacmix/walks.hpp"

namespace kacmix {

// Predicted one-step L2 contraction coefficient of E[D(X,Y)^2]/r^2 for the
// coupled kernels: 1 - 1/binom(n,2) for Kac and the unitary bound, and
// 1 - 2*pi*rho_min/binom(n,2) for the density kernel.
double predicted_contraction_coefficient(int n, WalkKind kind,
                                         const std::optional<AngleDensity>& rho);

// Block-rotation element with all floor(n/2) canonical angles equal to
// `angle` (the diameter-attaining construction); the farthest convenient
// start for mixing experiments.
GroupElement worst_case_start(int n, Field field, double angle);

struct ContractionReport {
  int n = 0;
  WalkKind kind = WalkKind::KacUniform;
  double r = 0.0;
  std::int64_t pairs = 0;
  std::int64_t trials_per_pair = 0;
  std::uint64_t seed = 0;
  double mean_ratio = 0.0;      // grand mean of D(X,Y)^2 / r^2
  double stderr_of_mean = 0.0;  // between-pair standard error
  double predicted = 0.0;       // paper coefficient
  double expansion_mean = 0.0;  // tangent-space expansion averaged over sampled pairs
  std::vector<double> pair_means;
  std::vector<double> pair_predictions;
};

// One coupled step from pairs at geodesic distance r (Haar base point,
// random tangent direction), averaged over pairs x trials.
ContractionReport local_contraction_probe(int n, WalkKind kind,
                                          const std::optional<AngleDensity>& rho, double r,
                                          std::int64_t pairs, std::int64_t trials_per_pair,
                                          std::uint64_t seed, int threads);

struct DecayCurve {
  int n = 0;
  WalkKind kind = WalkKind::KacUniform;
  double d0 = 0.0;
  std::int64_t steps = 0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> mean_d2;  // index = time, 0..steps
  std::int64_t window_end = 0;  // fit used t in [0, window_end]
  double slope = 0.0;
  double slope_stderr = 0.0;
  double predicted_slope = 0.0;  // ln of the contraction coefficient
};

// Least-squares slope of log E[D_t^2] over the window where the mean is
// above 1000x the D^2 measurement noise floor.
DecayCurve coupled_decay_curve(int n, WalkKind kind, const std::optional<AngleDensity>& rho,
                               double d0, std::int64_t steps, std::int64_t trials,
                               std::uint64_t seed, int threads);

struct MixingCurve {
  int n = 0;
  WalkKind kind = WalkKind::KacUniform;
  MetricKind metric = MetricKind::Geodesic;
  double p = 2.0;
  int sample_size = 0;
  std::uint64_t seed = 0;
  std::vector<std::int64_t> times;
  std::vector<double> estimates;  // empirical W(walk sample at t, Haar sample)
  double baseline_mean = 0.0;     // Haar-vs-Haar at the same sample size
  double baseline_spread = 0.0;   // sample std over baseline replicates
  int baseline_reps = 0;
};

// N independent walks from the worst-case start, observed at the requested
// times; empirical W against a fresh Haar reference plus a matched
// Haar-vs-Haar baseline.
MixingCurve mixing_curve(int n, WalkKind kind, const std::optional<AngleDensity>& rho,
                         std::span<const std::int64_t> times, int sample_size, MetricKind metric,
                         double p, std::uint64_t seed, int threads, int baseline_reps = 8);

struct DiameterReport {
  int n = 0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  double max_distance = 0.0;     // over random Haar pairs
  double bound = 0.0;            // pi * sqrt(n)
  double block_distance = 0.0;   // D(id, block construction at pi - 1e-6)
  double block_predicted = 0.0;  // sqrt(2*floor(n/2)) * (pi - 1e-6)
};

DiameterReport diameter_probe(int n, std::int64_t trials, std::uint64_t seed, int threads);

struct SandwichScale {
  double scale = 0.0;
  std::int64_t pairs = 0;
  std::int64_t order_violations = 0;  // pairs with hs > D
  double max_gap_quad = 0.0;          // max (D - hs) / hs^2   (Eq. 10 residual)
  double max_gap_cube = 0.0;          // max (D - hs) / hs^3
  double max_proj_quad = 0.0;         // max |D - |skew(z - id)|| / hs^2  (Eq. 12)
  double max_proj_cube = 0.0;
};

struct SandwichReport {
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<SandwichScale> scales;
};

// Pointwise hs <= D check plus fitted residual constants per scale for the
// metric comparison estimates.
SandwichReport metric_sandwich_probe(int n, std::int64_t pairs, std::span<const double> scales,
                                     std::uint64_t seed, int threads);

struct VolumeEstimate {
  std::string target;  // "ball" or "cap"
  int dim = 0;         // group dimension n, resp. sphere dimension m
  double radius = 0.0; // hs radius r, resp. cap threshold tau
  std::int64_t hits = 0;
  std::int64_t samples = 0;
  double estimate = 0.0;
  BinomialCi ci;                   // Wilson, z = 1.96
  double packing_log_lower = 0.0;  // ball: ln N >= -ln(ci.high)
  double bracket_low = 0.0;        // cap: lower/upper cap-volume bounds
  double bracket_high = 0.0;
  std::uint64_t seed = 0;
};

// Haar measure of the hs ball around the identity, with the implied packing
// lower bound via the covering identity.
VolumeEstimate ball_volume_mc(int n, double r, std::int64_t samples, std::uint64_t seed,
                              int threads);

// Volume of the spherical cap {v in S^m : v_1 > tau}, with the closed-form
// bracket it must fall in for tau in [2/sqrt(m), 1].
VolumeEstimate cap_volume_mc(int m, double tau, std::int64_t samples, std::uint64_t seed,
                             int threads);

struct LowerBoundResult {
  int n = 0;
  double eps = 0.0;
  double ln_packing = 0.0;
  double fixed_point = 0.0;
  std::int64_t bound = 0;  // fixed point rounded down
  bool converged = false;
  int iterations = 0;
};

// Mixing-time lower bound tau >= (ln N_M(8 eps) - ln 2) / ln(pi n^2 tau/eps),
// resolved by fixed-point iteration from tau = 1.
LowerBoundResult lower_bound_calculator(int n, double eps, double ln_packing, int max_iters = 100);

const char* walk_kind_name(WalkKind kind);

}  // namespace kacmix
