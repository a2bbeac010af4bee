#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kacmix/geometry.hpp"
#include "kacmix/walks.hpp"

namespace kacmix {

// A coupled pair of walk states with matching dimension and field.
struct CoupledState {
  GroupElement x;
  GroupElement y;

  static CoupledState make(GroupElement x, GroupElement y);
};

enum class CouplingBranch { Uniform, Residual };

// Per-step record of a coupled run. For angle kernels: Y's angle is
// theta_prime = (theta - alpha) mod 2pi on the uniform branch and
// theta_prime = theta on the residual branch. For the unitary kernel the
// payloads u (X side) and v (Y side, = u * exp(h_ij) compression) are kept.
struct CoupledStepRecord {
  int i = 0;
  int j = 1;
  double theta = 0.0;
  double theta_prime = 0.0;
  double alpha = 0.0;
  Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd v = Eigen::Matrix2cd::Identity();
  CouplingBranch branch = CouplingBranch::Uniform;
  double d_before = 0.0;
  double d_after = 0.0;
};

struct CoupledTrace {
  WalkKind kind = WalkKind::KacUniform;
  std::uint64_t seed = 0;
  double initial_distance = 0.0;
  std::vector<CoupledStepRecord> records;
};

// The shift that best aligns one planar rotation with the displacement
// between x and y: alpha = <h, a_ij>_hs / sqrt(2) = h(j, i) for
// h = tangent_project(y x^T - id). Depends on i, j, x, y but not on the
// sampled angle, so the shifted angle stays uniform.
double coupling_angle(const GroupElement& x, const GroupElement& y, int i, int j);

// One coupled step of the uniform Kac kernel K: shared (i, j, theta),
// Y rotated by (theta - alpha) mod 2pi. Each marginal is exactly one K step.
CoupledStepRecord coupled_kac_step(CoupledState& state, RngStream& rng);

// One coupled step of K^(rho): with probability 2*pi*rho_min the uniform
// branch (alpha-shifted coupling), otherwise the residual branch with the
// same angle on both sides, drawn from (rho - rho_min) normalized.
CoupledStepRecord coupled_density_step(CoupledState& state, const AngleDensity& rho, RngStream& rng);

// One coupled step of the unitary kernel L: shared (i, j), X side applies
// Haar u, Y side applies u * v where v = exp of the 2x2 compression of
// h = tangent_project(y x^* - id) to the (i, j) plane. u * v is again Haar.
CoupledStepRecord coupled_unitary_step(CoupledState& state, RngStream& rng);

CoupledStepRecord coupled_step(CoupledState& state, WalkKind kind,
                               const std::optional<AngleDensity>& rho, RngStream& rng);

// Full coupled trajectory with the per-step distance series. Deterministic
// given seed (steps come from RngStream(seed, 0)).
CoupledTrace run_coupled_walk(const GroupElement& x0, const GroupElement& y0, std::int64_t steps,
                              WalkKind kind, const std::optional<AngleDensity>& rho,
                              std::uint64_t seed);

// Closed-form exponential of a 2x2 anti-Hermitian matrix; exact identity
// for the zero matrix.
Eigen::Matrix2cd exp_anti_hermitian_2x2(const Eigen::Matrix2cd& h);

}  // namespace kacmix
