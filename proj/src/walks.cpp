#include "kacmix/walks.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kacmix {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr int kDensityGridPoints = 4096;
constexpr int kRejectionCap = 1 << 20;

}  // namespace

AngleDensity AngleDensity::create(std::function<double(double)> pdf, double rho_min, double rho_max) {
  if (!pdf) throw std::invalid_argument("angle density requires an evaluator");
  if (!(rho_min > 0.0)) throw std::invalid_argument("angle density requires rho_min > 0");
  if (!(rho_max >= rho_min) || !std::isfinite(rho_max))
    throw std::invalid_argument("angle density requires finite rho_max >= rho_min");

  // floor/cap on a grid, and Simpson normalization check
  double integral = 0.0;
  const double step = kTwoPi / kDensityGridPoints;
  for (int k = 0; k <= kDensityGridPoints; ++k) {
    const double theta = k * step;
    const double value = pdf(theta);
    if (value < rho_min - 1e-12 || value > rho_max + 1e-12)
      throw std::invalid_argument("density leaves the [rho_min, rho_max] band on the check grid");
    const double weight = (k == 0 || k == kDensityGridPoints) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    integral += weight * value;
  }
  integral *= step / 3.0;
  if (std::abs(integral - 1.0) > 1e-6)
    throw std::invalid_argument("density does not integrate to 1 within 1e-6");

  AngleDensity d;
  d.pdf = std::move(pdf);
  d.rho_min = rho_min;
  d.rho_max = rho_max;
  return d;
}

AngleDensity cosine_angle_density(double amplitude) {
  if (amplitude < 0.0 || amplitude >= 1.0)
    throw std::invalid_argument("cosine density amplitude must lie in [0, 1)");
  return AngleDensity::create(
      [amplitude](double theta) { return (1.0 + amplitude * std::cos(theta)) / kTwoPi; },
      (1.0 - amplitude) / kTwoPi, (1.0 + amplitude) / kTwoPi);
}

AngleDensity uniform_angle_density() {
  return AngleDensity::create([](double) { return 1.0 / kTwoPi; }, 1.0 / kTwoPi, 1.0 / kTwoPi);
}

void WalkConfig::validate() const {
  if (n < 2) throw std::invalid_argument("walk dimension must be at least 2");
  if (kind == WalkKind::KacDensity && !density)
    throw std::invalid_argument("density kernel requires an angle density");
}

PlanarStep sample_kac_step(int n, RngStream& rng) {
  if (n < 2) throw std::invalid_argument("kac step requires n >= 2");
  const auto [i, j] = rng.next_pair(n);
  PlanarStep s;
  s.i = i;
  s.j = j;
  s.theta = rng.next_angle();
  return s;
}

PlanarStep sample_density_step(int n, const AngleDensity& rho, RngStream& rng) {
  if (n < 2) throw std::invalid_argument("density step requires n >= 2");
  const auto [i, j] = rng.next_pair(n);
  PlanarStep s;
  s.i = i;
  s.j = j;
  for (int attempt = 0; attempt < kRejectionCap; ++attempt) {
    const double theta = rng.next_angle();
    const double value = rho.pdf(theta);
    if (value > rho.rho_max * (1.0 + 1e-12))
      throw std::runtime_error("rejection envelope violated: pdf exceeds rho_max at a sampled angle");
    if (rng.next_double() * rho.rho_max <= value) {
      s.theta = theta;
      return s;
    }
  }
  throw std::runtime_error("rejection sampling failed to accept");
}

PlanarStep sample_unitary_step(int n, RngStream& rng) {
  if (n < 2) throw std::invalid_argument("unitary step requires n >= 2");
  const auto [i, j] = rng.next_pair(n);
  PlanarStep s;
  s.i = i;
  s.j = j;
  s.u = haar_unitary_2x2(rng);
  s.unitary = true;
  return s;
}

PlanarStep sample_step(const WalkConfig& config, RngStream& rng) {
  switch (config.kind) {
    case WalkKind::KacUniform:
      return sample_kac_step(config.n, rng);
    case WalkKind::KacDensity:
      return sample_density_step(config.n, *config.density, rng);
    case WalkKind::Unitary:
      return sample_unitary_step(config.n, rng);
  }
  throw std::logic_error("unknown walk kind");
}

GroupElement apply_step(const GroupElement& x, const PlanarStep& s) {
  GroupElement out = x;
  apply_step_in_place(out, s);
  return out;
}

void apply_step_in_place(GroupElement& x, const PlanarStep& s) {
  const int n = x.dim();
  if (s.i < 0 || s.i >= s.j || s.j >= n) throw std::invalid_argument("step indices invalid for state dimension");
  if (s.unitary != !x.is_real())
    throw std::invalid_argument("step field does not match state field");
  if (x.is_real()) {
    auto& m = x.mutable_real();
    const double c = std::cos(s.theta);
    const double sn = std::sin(s.theta);
    for (int col = 0; col < n; ++col) {
      const double vi = m(s.i, col);
      const double vj = m(s.j, col);
      m(s.i, col) = c * vi - sn * vj;
      m(s.j, col) = sn * vi + c * vj;
    }
  } else {
    auto& m = x.mutable_cplx();
    for (int col = 0; col < n; ++col) {
      const std::complex<double> vi = m(s.i, col);
      const std::complex<double> vj = m(s.j, col);
      m(s.i, col) = s.u(0, 0) * vi + s.u(0, 1) * vj;
      m(s.j, col) = s.u(1, 0) * vi + s.u(1, 1) * vj;
    }
  }
}

void apply_step_to_vector(Eigen::VectorXd& v, const PlanarStep& s) {
  if (s.unitary) throw std::invalid_argument("vector action is defined for rotation steps only");
  if (s.j >= v.size()) throw std::invalid_argument("step indices exceed vector dimension");
  const double c = std::cos(s.theta);
  const double sn = std::sin(s.theta);
  const double vi = v(s.i);
  const double vj = v(s.j);
  v(s.i) = c * vi - sn * vj;
  v(s.j) = sn * vi + c * vj;
}

GroupElement haar_sample(int n, Field field, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("haar_sample requires n >= 1");
  if (field == Field::RealOrthogonal) {
    Eigen::MatrixXd g(n, n);
    for (int col = 0; col < n; ++col)
      for (int row = 0; row < n; ++row) g(row, col) = rng.next_gaussian();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd& r = qr.matrixQR();
    for (int col = 0; col < n; ++col)
      if (r(col, col) < 0.0) q.col(col) *= -1.0;
    if (q.determinant() < 0.0) q.col(n - 1) *= -1.0;
    return GroupElement::trusted_real(std::move(q));
  }
  Eigen::MatrixXcd g(n, n);
  for (int col = 0; col < n; ++col)
    for (int row = 0; row < n; ++row)
      g(row, col) = std::complex<double>(rng.next_gaussian(), rng.next_gaussian());
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd& r = qr.matrixQR();
  for (int col = 0; col < n; ++col) {
    const std::complex<double> d = r(col, col);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(col) *= d / mag;
  }
  return GroupElement::trusted_complex(std::move(q));
}

Eigen::Matrix2cd haar_unitary_2x2(RngStream& rng) {
  Eigen::Matrix2cd g;
  for (int col = 0; col < 2; ++col)
    for (int row = 0; row < 2; ++row)
      g(row, col) = std::complex<double>(rng.next_gaussian(), rng.next_gaussian());
  // classical Gram-Schmidt; its R has a real positive diagonal, so the
  // result is already Haar distributed
  Eigen::Vector2cd c0 = g.col(0);
  c0 /= c0.norm();
  Eigen::Vector2cd c1 = g.col(1) - c0 * c0.dot(g.col(1));
  c1 /= c1.norm();
  Eigen::Matrix2cd u;
  u.col(0) = c0;
  u.col(1) = c1;
  return u;
}

Eigen::MatrixXd random_unit_skew(int n, RngStream& rng) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int l = 1; l < n; ++l)
    for (int k = 0; k < l; ++k) {
      const double g = rng.next_gaussian();
      h(l, k) = g;
      h(k, l) = -g;
    }
  const double norm = h.norm();
  if (norm == 0.0) return random_unit_skew(n, rng);
  return h / norm;
}

Eigen::MatrixXcd random_unit_anti_hermitian(int n, RngStream& rng) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n; ++k) h(k, k) = std::complex<double>(0.0, rng.next_gaussian());
  for (int l = 1; l < n; ++l)
    for (int k = 0; k < l; ++k) {
      const std::complex<double> g(rng.next_gaussian(), rng.next_gaussian());
      h(l, k) = g;
      h(k, l) = -std::conj(g);
    }
  const double norm = h.norm();
  if (norm == 0.0) return random_unit_anti_hermitian(n, rng);
  return h / norm;
}

Trajectory run_walk(const GroupElement& x0, std::int64_t steps, const WalkConfig& config,
                    std::span<const std::int64_t> snapshot_times) {
  config.validate();
  if (x0.dim() != config.n || x0.field() != config.field())
    throw std::invalid_argument("initial state does not match walk config");
  if (steps < 0) throw std::invalid_argument("step count must be nonnegative");

  std::vector<std::int64_t> times(snapshot_times.begin(), snapshot_times.end());
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  Trajectory out;
  out.config = config;
  RngStream rng(config.seed, 0);
  GroupElement x = x0;
  std::size_t next_time = 0;
  auto maybe_snapshot = [&](std::int64_t t) {
    while (next_time < times.size() && times[next_time] == t) {
      out.snapshots.emplace_back(t, x);
      ++next_time;
    }
  };
  while (next_time < times.size() && times[next_time] < 0) ++next_time;
  maybe_snapshot(0);
  for (std::int64_t t = 1; t <= steps; ++t) {
    apply_step_in_place(x, sample_step(config, rng));
    if (config.reorthonormalize_period > 0 && t % config.reorthonormalize_period == 0)
      x = reorthonormalize(x);
    maybe_snapshot(t);
  }
  return out;
}

Trajectory run_walk(const GroupElement& x0, std::int64_t steps, const WalkConfig& config) {
  const std::int64_t times[] = {0, steps};
  return run_walk(x0, steps, config, times);
}

}  // namespace kacmix
