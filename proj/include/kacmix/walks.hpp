#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "kacmix/geometry.hpp"
#include "kacmix/rng.hpp"

namespace kacmix {

// A probability density on [0, 2*pi] with a strictly positive floor.
// rho_min > 0 is what makes the mixture coupling contract; rho_max is the
// rejection envelope. The factory checks normalization numerically (within
// 1e-6) and the floor/cap on a sample grid.
struct AngleDensity {
  std::function<double(double)> pdf;
  double rho_min = 0.0;
  double rho_max = 0.0;

  static AngleDensity create(std::function<double(double)> pdf, double rho_min, double rho_max);
};

// (1 + amplitude * cos(theta)) / 2pi, amplitude in [0, 1);
// 2*pi*rho_min = 1 - amplitude.
AngleDensity cosine_angle_density(double amplitude);
AngleDensity uniform_angle_density();

enum class WalkKind { KacUniform, KacDensity, Unitary };

struct WalkConfig {
  int n = 2;
  WalkKind kind = WalkKind::KacUniform;
  std::optional<AngleDensity> density;  // KacDensity only
  std::uint64_t seed = 0;
  std::int64_t reorthonormalize_period = 10000;

  Field field() const { return kind == WalkKind::Unitary ? Field::ComplexUnitary : Field::RealOrthogonal; }
  void validate() const;
};

// uniform pair, uniform angle on [0, 2pi)
PlanarStep sample_kac_step(int n, RngStream& rng);

// uniform pair, angle by rejection against the rho_max envelope
PlanarStep sample_density_step(int n, const AngleDensity& rho, RngStream& rng);

// uniform pair, 2x2 payload Haar on U(2)
PlanarStep sample_unitary_step(int n, RngStream& rng);

PlanarStep sample_step(const WalkConfig& config, RngStream& rng);

// Left-multiplication by the step's rotation: touches only rows i and j,
// O(n) work. Field of the step must match the state.
GroupElement apply_step(const GroupElement& x, const PlanarStep& s);
void apply_step_in_place(GroupElement& x, const PlanarStep& s);

// The collision update on a velocity vector; only coordinates i, j change,
// and |v|_2 is conserved up to roundoff. Real steps only.
void apply_step_to_vector(Eigen::VectorXd& v, const PlanarStep& s);

// Haar sample via Gaussian QR with diagonal sign/phase correction;
// determinant fixed to +1 in the real case.
GroupElement haar_sample(int n, Field field, RngStream& rng);

// 2x2 Haar unitary (payload sampler for the L kernel)
Eigen::Matrix2cd haar_unitary_2x2(RngStream& rng);

// random unit-hs-norm tangent vector at the identity
Eigen::MatrixXd random_unit_skew(int n, RngStream& rng);
Eigen::MatrixXcd random_unit_anti_hermitian(int n, RngStream& rng);

struct Trajectory {
  WalkConfig config;
  std::vector<std::pair<std::int64_t, GroupElement>> snapshots;
};

// Runs `steps` steps from x0 and records the state at each requested time
// (times outside [0, steps] are ignored; time 0 is the initial state).
// Deterministic given config.seed: the step sequence comes from
// RngStream(seed, 0).
Trajectory run_walk(const GroupElement& x0, std::int64_t steps, const WalkConfig& config,
                    std::span<const std::int64_t> snapshot_times);
Trajectory run_walk(const GroupElement& x0, std::int64_t steps, const WalkConfig& config);

}  // namespace kacmix
