#include "kacmix/couplings.hpp"

#include <cmath>
#include <stdexcept>

namespace kacmix {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr int kRejectionCap = 1 << 20;

double mod_two_pi(double t) {
  double r = std::fmod(t, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

}  // namespace

CoupledState CoupledState::make(GroupElement x, GroupElement y) {
  if (x.field() != y.field() || x.dim() != y.dim())
    throw std::invalid_argument("coupled states must share dimension and field");
  return CoupledState{std::move(x), std::move(y)};
}

double coupling_angle(const GroupElement& x, const GroupElement& y, int i, int j) {
  if (!x.is_real() || !y.is_real())
    throw std::invalid_argument("coupling_angle is defined for real-orthogonal pairs");
  if (i < 0 || i >= j || j >= x.dim())
    throw std::invalid_argument("coupling_angle requires 0 <= i < j < n");
  // h = tangent_project(y x^T - id); the identity drops out of the skew part
  const Eigen::MatrixXd yxt = y.real() * x.real().transpose();
  return 0.5 * (yxt(j, i) - yxt(i, j));
}

CoupledStepRecord coupled_kac_step(CoupledState& state, RngStream& rng) {
  if (!state.x.is_real())
    throw std::invalid_argument("kac coupling is defined for real-orthogonal pairs");
  CoupledStepRecord rec;
  rec.d_before = geodesic_distance(state.x, state.y);

  const auto [i, j] = rng.next_pair(state.x.dim());
  rec.i = i;
  rec.j = j;
  rec.theta = rng.next_angle();
  const bool sticky = state.x.same_entries(state.y);
  rec.alpha = sticky ? 0.0 : coupling_angle(state.x, state.y, i, j);
  rec.theta_prime = sticky ? rec.theta : mod_two_pi(rec.theta - rec.alpha);

  PlanarStep sx;
  sx.i = i;
  sx.j = j;
  sx.theta = rec.theta;
  apply_step_in_place(state.x, sx);
  PlanarStep sy = sx;
  sy.theta = rec.theta_prime;
  apply_step_in_place(state.y, sy);

  rec.d_after = geodesic_distance(state.x, state.y);
  return rec;
}

CoupledStepRecord coupled_density_step(CoupledState& state, const AngleDensity& rho,
                                       RngStream& rng) {
  if (!state.x.is_real())
    throw std::invalid_argument("density coupling is defined for real-orthogonal pairs");
  if (!(rho.rho_min > 0.0)) throw std::invalid_argument("density coupling requires rho_min > 0");
  const double uniform_mass = kTwoPi * rho.rho_min;

  if (rng.next_double() < uniform_mass) {
    CoupledStepRecord rec = coupled_kac_step(state, rng);
    rec.branch = CouplingBranch::Uniform;
    return rec;
  }

  // residual branch: theta from (rho - rho_min) normalized, same angle on
  // both sides, so the pair moves rigidly and the distance is unchanged
  CoupledStepRecord rec;
  rec.branch = CouplingBranch::Residual;
  rec.d_before = geodesic_distance(state.x, state.y);
  const auto [i, j] = rng.next_pair(state.x.dim());
  rec.i = i;
  rec.j = j;
  const double excess_cap = rho.rho_max - rho.rho_min;
  double theta = 0.0;
  bool accepted = false;
  for (int attempt = 0; attempt < kRejectionCap && !accepted; ++attempt) {
    theta = rng.next_angle();
    const double excess = rho.pdf(theta) - rho.rho_min;
    if (excess > excess_cap * (1.0 + 1e-12))
      throw std::runtime_error("rejection envelope violated: pdf exceeds rho_max at a sampled angle");
    accepted = rng.next_double() * excess_cap <= excess;
  }
  if (!accepted) throw std::runtime_error("rejection sampling failed to accept");
  rec.theta = theta;
  rec.theta_prime = theta;
  rec.alpha = 0.0;

  PlanarStep s;
  s.i = i;
  s.j = j;
  s.theta = theta;
  apply_step_in_place(state.x, s);
  apply_step_in_place(state.y, s);
  rec.d_after = geodesic_distance(state.x, state.y);
  return rec;
}

CoupledStepRecord coupled_unitary_step(CoupledState& state, RngStream& rng) {
  if (state.x.is_real())
    throw std::invalid_argument("unitary coupling is defined for complex-unitary pairs");
  CoupledStepRecord rec;
  rec.d_before = geodesic_distance(state.x, state.y);

  const auto [i, j] = rng.next_pair(state.x.dim());
  rec.i = i;
  rec.j = j;
  rec.u = haar_unitary_2x2(rng);

  const bool sticky = state.x.same_entries(state.y);
  if (sticky) {
    rec.v = rec.u;
  } else {
    // h = tangent_project(y x^* - id) restricted to span{e_i, e_j}. The
    // correction factor applied on y's side is exp(-h_ij): then
    // D(X, Y) = D(exp(h_ij), y x^*) = |h_ij - h|_hs + O(r^2), matching the
    // Kac coupling where y's extra factor is the rotation by -alpha.
    const Eigen::MatrixXcd c = state.y.cplx() * state.x.cplx().adjoint();
    Eigen::Matrix2cd hij;
    hij(0, 0) = std::complex<double>(0.0, c(i, i).imag());
    hij(1, 1) = std::complex<double>(0.0, c(j, j).imag());
    hij(1, 0) = 0.5 * (c(j, i) - std::conj(c(i, j)));
    hij(0, 1) = -std::conj(hij(1, 0));
    rec.v = rec.u * exp_anti_hermitian_2x2(-hij);
  }

  PlanarStep sx = PlanarStep::unitary_block(i, j, rec.u);
  apply_step_in_place(state.x, sx);
  PlanarStep sy = PlanarStep::unitary_block(i, j, rec.v);
  apply_step_in_place(state.y, sy);

  rec.d_after = geodesic_distance(state.x, state.y);
  return rec;
}

CoupledStepRecord coupled_step(CoupledState& state, WalkKind kind,
                               const std::optional<AngleDensity>& rho, RngStream& rng) {
  switch (kind) {
    case WalkKind::KacUniform:
      return coupled_kac_step(state, rng);
    case WalkKind::KacDensity:
      if (!rho) throw std::invalid_argument("density kernel requires an angle density");
      return coupled_density_step(state, *rho, rng);
    case WalkKind::Unitary:
      return coupled_unitary_step(state, rng);
  }
  throw std::logic_error("unknown walk kind");
}

CoupledTrace run_coupled_walk(const GroupElement& x0, const GroupElement& y0, std::int64_t steps,
                              WalkKind kind, const std::optional<AngleDensity>& rho,
                              std::uint64_t seed) {
  CoupledState state = CoupledState::make(x0, y0);
  if ((kind == WalkKind::Unitary) == state.x.is_real())
    throw std::invalid_argument("coupled walk kind does not match state field");
  CoupledTrace trace;
  trace.kind = kind;
  trace.seed = seed;
  trace.initial_distance = geodesic_distance(x0, y0);
  trace.records.reserve(static_cast<std::size_t>(steps));
  RngStream rng(seed, 0);
  for (std::int64_t t = 0; t < steps; ++t)
    trace.records.push_back(coupled_step(state, kind, rho, rng));
  return trace;
}

Eigen::Matrix2cd exp_anti_hermitian_2x2(const Eigen::Matrix2cd& h) {
  // h = i*(mean phase)*id + traceless part; exp via the 2x2 closed form
  const double a = h(0, 0).imag();
  const double d = h(1, 1).imag();
  if ((h + h.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("payload exponential requires an anti-Hermitian matrix");
  const double mean = 0.5 * (a + d);
  const double half_gap = 0.5 * (a - d);
  const std::complex<double> b = h(0, 1);
  const double omega = std::sqrt(half_gap * half_gap + std::norm(b));
  Eigen::Matrix2cd traceless;
  traceless(0, 0) = std::complex<double>(0.0, half_gap);
  traceless(1, 1) = std::complex<double>(0.0, -half_gap);
  traceless(0, 1) = b;
  traceless(1, 0) = h(1, 0);
  Eigen::Matrix2cd out;
  if (omega == 0.0) {
    out = Eigen::Matrix2cd::Identity() + traceless;
  } else {
    out = std::cos(omega) * Eigen::Matrix2cd::Identity() +
          (std::sin(omega) / omega) * traceless;
  }
  return std::polar(1.0, mean) * out;
}

}  // namespace kacmix
