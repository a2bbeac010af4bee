#include "kacmix/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace kacmix {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_square(Eigen::Index rows, Eigen::Index cols) {
  if (rows != cols || rows < 1) throw std::invalid_argument("matrix must be square and nonempty");
}

template <typename Matrix>
double defect_of(const Matrix& m) {
  Matrix gram = m.adjoint() * m;
  gram.diagonal().array() -= 1.0;
  return gram.cwiseAbs().maxCoeff();
}

// angle of a numerically-near-rotation 2x2 block [[c,-s],[s,c]]
double block_angle(double m00, double m01, double m10, double m11) {
  const double c = 0.5 * (m00 + m11);
  const double s = 0.5 * (m10 - m01);
  double theta = std::atan2(s, c);
  if (theta <= -kPi) theta = kPi;
  return theta;
}

}  // namespace

GroupElement GroupElement::from_real(Eigen::MatrixXd m) {
  check_square(m.rows(), m.cols());
  if (defect_of(m) > kOrthogonalityTol)
    throw std::invalid_argument("matrix is not orthogonal within tolerance");
  if (std::abs(m.determinant() - 1.0) > kOrthogonalityTol)
    throw std::invalid_argument("determinant is not +1 within tolerance");
  return GroupElement(std::move(m), Field::RealOrthogonal);
}

GroupElement GroupElement::from_complex(Eigen::MatrixXcd m) {
  check_square(m.rows(), m.cols());
  if (defect_of(m) > kOrthogonalityTol)
    throw std::invalid_argument("matrix is not unitary within tolerance");
  return GroupElement(std::move(m), Field::ComplexUnitary);
}

GroupElement GroupElement::identity(int n, Field field) {
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  if (field == Field::RealOrthogonal)
    return GroupElement(Eigen::MatrixXd::Identity(n, n), field);
  return GroupElement(Eigen::MatrixXcd::Identity(n, n), field);
}

GroupElement GroupElement::trusted_real(Eigen::MatrixXd m) {
  return GroupElement(std::move(m), Field::RealOrthogonal);
}

GroupElement GroupElement::trusted_complex(Eigen::MatrixXcd m) {
  return GroupElement(std::move(m), Field::ComplexUnitary);
}

int GroupElement::dim() const {
  return is_real() ? static_cast<int>(real().rows()) : static_cast<int>(cplx().rows());
}

const Eigen::MatrixXd& GroupElement::real() const {
  if (!is_real()) throw std::logic_error("element is complex-unitary, not real-orthogonal");
  return std::get<Eigen::MatrixXd>(m_);
}

const Eigen::MatrixXcd& GroupElement::cplx() const {
  if (is_real()) throw std::logic_error("element is real-orthogonal, not complex-unitary");
  return std::get<Eigen::MatrixXcd>(m_);
}

Eigen::MatrixXd& GroupElement::mutable_real() {
  if (!is_real()) throw std::logic_error("element is complex-unitary, not real-orthogonal");
  return std::get<Eigen::MatrixXd>(m_);
}

Eigen::MatrixXcd& GroupElement::mutable_cplx() {
  if (is_real()) throw std::logic_error("element is real-orthogonal, not complex-unitary");
  return std::get<Eigen::MatrixXcd>(m_);
}

GroupElement GroupElement::inverse() const {
  if (is_real()) return GroupElement(real().transpose(), field_);
  return GroupElement(cplx().adjoint(), field_);
}

GroupElement GroupElement::operator*(const GroupElement& rhs) const {
  if (field_ != rhs.field_ || dim() != rhs.dim())
    throw std::invalid_argument("field or dimension mismatch in group product");
  if (is_real()) return GroupElement(Eigen::MatrixXd(real() * rhs.real()), field_);
  return GroupElement(Eigen::MatrixXcd(cplx() * rhs.cplx()), field_);
}

bool GroupElement::same_entries(const GroupElement& rhs) const {
  if (field_ != rhs.field_ || dim() != rhs.dim()) return false;
  if (is_real()) return real() == rhs.real();
  return cplx() == rhs.cplx();
}

double GroupElement::orthogonality_defect() const {
  return is_real() ? defect_of(real()) : defect_of(cplx());
}

PlanarStep PlanarStep::rotation(int i, int j, double theta) {
  if (i < 0 || i >= j) throw std::invalid_argument("step requires 0 <= i < j");
  PlanarStep s;
  s.i = i;
  s.j = j;
  s.theta = std::fmod(theta, kTwoPi);
  if (s.theta < 0.0) s.theta += kTwoPi;
  return s;
}

PlanarStep PlanarStep::unitary_block(int i, int j, Eigen::Matrix2cd u) {
  if (i < 0 || i >= j) throw std::invalid_argument("step requires 0 <= i < j");
  Eigen::Matrix2cd gram = u.adjoint() * u;
  gram.diagonal().array() -= 1.0;
  if (gram.cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("2x2 payload is not unitary within 1e-12");
  PlanarStep s;
  s.i = i;
  s.j = j;
  s.u = std::move(u);
  s.unitary = true;
  return s;
}

GroupElement planar_rotation(int i, int j, double theta, int n) {
  if (i < 0 || j >= n || i >= j) throw std::invalid_argument("planar_rotation requires 0 <= i < j < n");
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  m(i, i) = c;
  m(j, j) = c;
  m(j, i) = s;
  m(i, j) = -s;
  return GroupElement::trusted_real(std::move(m));
}

double hs_distance(const GroupElement& a, const GroupElement& b) {
  if (a.field() != b.field() || a.dim() != b.dim())
    throw std::invalid_argument("hs_distance requires matching dimension and field");
  if (a.is_real()) return (a.real() - b.real()).norm();
  return (a.cplx() - b.cplx()).norm();
}

double geodesic_distance(const GroupElement& a, const GroupElement& b) {
  if (a.field() != b.field() || a.dim() != b.dim())
    throw std::invalid_argument("geodesic_distance requires matching dimension and field");
  const int n = a.dim();
  if (a.is_real()) {
    // D^2 = 2 * sum of squared canonical angles of b a^T
    if (n == 2) {
      const Eigen::Matrix2d c = b.real() * a.real().transpose();
      const double theta = std::atan2(c(1, 0), c(0, 0));
      return std::sqrt(2.0) * std::abs(theta);
    }
    if (n == 3) {
      // single canonical angle; atan2 of (|skew part|, trace) keeps full
      // relative accuracy near both 0 and pi, unlike acos of the trace
      const Eigen::Matrix3d c = b.real() * a.real().transpose();
      const double cosang = 0.5 * (c.trace() - 1.0);
      const double sinang = 0.5 * (c - c.transpose()).norm() / std::sqrt(2.0);
      return std::sqrt(2.0) * std::atan2(sinang, cosang);
    }
    GroupElement c = GroupElement::trusted_real(b.real() * a.real().transpose());
    double sum = 0.0;
    for (double t : canonical_angles(c)) sum += t * t;
    return std::sqrt(2.0 * sum);
  }
  // U(n): sum of squared eigenphases of b a^*
  const Eigen::MatrixXcd c = b.cplx() * a.cplx().adjoint();
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(c, /*computeU=*/false);
  if (schur.info() != Eigen::Success) throw std::runtime_error("Schur decomposition failed");
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double phase = std::arg(schur.matrixT()(k, k));
    sum += phase * phase;
  }
  return std::sqrt(sum);
}

CanonicalDecomposition canonical_decomposition(const GroupElement& a) {
  if (!a.is_real()) throw std::invalid_argument("canonical decomposition requires a real-orthogonal element");
  const int n = a.dim();
  if (a.orthogonality_defect() > 1e-8)
    throw std::invalid_argument("input drifted off the group; reorthonormalize first");

  Eigen::RealSchur<Eigen::MatrixXd> schur(a.real());
  if (schur.info() != Eigen::Success) throw std::runtime_error("Schur decomposition failed");
  const Eigen::MatrixXd& t = schur.matrixT();
  Eigen::MatrixXd q = schur.matrixU();

  CanonicalDecomposition out;
  out.angles.reserve(n / 2);
  std::vector<int> plus_ones;
  std::vector<int> minus_ones;

  // orthogonal input => T is block diagonal: 2x2 rotation blocks and +-1 scalars
  int k = 0;
  std::vector<std::pair<int, double>> blocks;  // (start column, angle)
  while (k < n) {
    const bool is_block = (k + 1 < n) && (std::abs(t(k + 1, k)) > 1e-9);
    if (is_block) {
      blocks.emplace_back(k, block_angle(t(k, k), t(k, k + 1), t(k + 1, k), t(k + 1, k + 1)));
      k += 2;
    } else {
      (t(k, k) > 0.0 ? plus_ones : minus_ones).push_back(k);
      ++k;
    }
  }
  if (minus_ones.size() % 2 != 0)
    throw std::runtime_error("odd number of -1 eigenvalues; element is not special orthogonal");

  // pair the -1 eigenvalues into angle-pi blocks, +1s into angle-0 blocks
  std::vector<int> order;  // column permutation putting paired directions adjacent
  order.reserve(n);
  for (const auto& [start, angle] : blocks) {
    out.angles.push_back(angle);
    order.push_back(start);
    order.push_back(start + 1);
  }
  for (std::size_t m = 0; m + 1 < minus_ones.size(); m += 2) {
    out.angles.push_back(kPi);
    order.push_back(minus_ones[m]);
    order.push_back(minus_ones[m + 1]);
  }
  for (std::size_t m = 0; m + 1 < plus_ones.size(); m += 2) {
    out.angles.push_back(0.0);
    order.push_back(plus_ones[m]);
    order.push_back(plus_ones[m + 1]);
  }
  if (plus_ones.size() % 2 != 0) order.push_back(plus_ones.back());

  Eigen::MatrixXd basis(n, n);
  for (int c = 0; c < n; ++c) basis.col(c) = q.col(order[c]);
  out.basis = std::move(basis);
  return out;
}

std::vector<double> canonical_angles(const GroupElement& a) {
  CanonicalDecomposition d = canonical_decomposition(a);
  std::vector<double> mags(d.angles.size());
  std::transform(d.angles.begin(), d.angles.end(), mags.begin(),
                 [](double t) { return std::abs(t); });
  std::sort(mags.begin(), mags.end(), std::greater<>());
  return mags;
}

Eigen::MatrixXd tangent_project(const Eigen::MatrixXd& m) {
  check_square(m.rows(), m.cols());
  return 0.5 * (m - m.transpose());
}

Eigen::MatrixXcd tangent_project(const Eigen::MatrixXcd& m) {
  check_square(m.rows(), m.cols());
  return 0.5 * (m - m.adjoint());
}

double basis_coefficient(const Eigen::MatrixXd& skew, int k, int l) {
  if (k < 0 || k >= l || l >= skew.rows()) throw std::invalid_argument("basis_coefficient requires 0 <= k < l < n");
  return std::sqrt(2.0) * skew(l, k);
}

namespace {

template <typename Matrix>
GroupElement exp_of_tangent(const Matrix& h, Field field) {
  check_square(h.rows(), h.cols());
  const Eigen::MatrixXcd hc = h.template cast<std::complex<double>>();
  if ((hc + hc.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("group_exp requires a tangent (anti-self-adjoint) matrix");
  // -i h is Hermitian; exp(h) = v diag(exp(i lambda)) v^*
  const Eigen::MatrixXcd herm = std::complex<double>(0, -1) * hc;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(herm);
  if (eig.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  Eigen::VectorXcd phases(h.rows());
  for (int k = 0; k < h.rows(); ++k)
    phases(k) = std::polar(1.0, eig.eigenvalues()(k));
  Eigen::MatrixXcd result = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
  if (field == Field::RealOrthogonal) return GroupElement::trusted_real(result.real());
  return GroupElement::trusted_complex(std::move(result));
}

}  // namespace

GroupElement group_exp(const Eigen::MatrixXd& skew) {
  return exp_of_tangent(skew, Field::RealOrthogonal);
}

GroupElement group_exp(const Eigen::MatrixXcd& anti_hermitian) {
  return exp_of_tangent(anti_hermitian, Field::ComplexUnitary);
}

GroupElement reorthonormalize(const Eigen::MatrixXd& m) {
  check_square(m.rows(), m.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::MatrixXd q = svd.matrixU() * svd.matrixV().transpose();
  if (q.determinant() < 0.0) {
    // flip the direction of least weight to land in SO(n)
    Eigen::MatrixXd u = svd.matrixU();
    u.col(m.cols() - 1) *= -1.0;
    q = u * svd.matrixV().transpose();
  }
  if ((m - q).norm() > 0.1) throw std::invalid_argument("input too far from the group to repair");
  return GroupElement::trusted_real(std::move(q));
}

GroupElement reorthonormalize(const Eigen::MatrixXcd& m) {
  check_square(m.rows(), m.cols());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::MatrixXcd q = svd.matrixU() * svd.matrixV().adjoint();
  if ((m - q).norm() > 0.1) throw std::invalid_argument("input too far from the group to repair");
  return GroupElement::trusted_complex(std::move(q));
}

GroupElement reorthonormalize(const GroupElement& x) {
  return x.is_real() ? reorthonormalize(x.real()) : reorthonormalize(x.cplx());
}

const char* field_name(Field f) {
  return f == Field::RealOrthogonal ? "so" : "u";
}

}  // namespace kacmix
