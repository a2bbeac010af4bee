#pragma once

#include <Eigen/Dense>
#include <string>
#include <variant>
#include <vector>

namespace kacmix {

enum class Field { RealOrthogonal, ComplexUnitary };

inline constexpr double kOrthogonalityTol = 1e-10;

// An element of SO(n) (real entries) or U(n) (complex entries), certified
// orthogonal/unitary within kOrthogonalityTol at construction. Immutable
// value type; all mutating walk machinery goes through the factories in
// walks.hpp, which preserve the invariants by construction.
class GroupElement {
 public:
  // validating factories
  static GroupElement from_real(Eigen::MatrixXd m);
  static GroupElement from_complex(Eigen::MatrixXcd m);
  static GroupElement identity(int n, Field field);

  // trusted factories for operations that preserve the invariants
  // algebraically (rotation steps, products of group elements)
  static GroupElement trusted_real(Eigen::MatrixXd m);
  static GroupElement trusted_complex(Eigen::MatrixXcd m);

  int dim() const;
  Field field() const { return field_; }
  bool is_real() const { return field_ == Field::RealOrthogonal; }

  const Eigen::MatrixXd& real() const;
  const Eigen::MatrixXcd& cplx() const;
  Eigen::MatrixXd& mutable_real();
  Eigen::MatrixXcd& mutable_cplx();

  // group inverse (= conjugate transpose)
  GroupElement inverse() const;
  GroupElement operator*(const GroupElement& rhs) const;
  bool same_entries(const GroupElement& rhs) const;

  // max |(a^dagger a - id)_{kl}|, the certification residual
  double orthogonality_defect() const;

 private:
  GroupElement(Eigen::MatrixXd m, Field f) : m_(std::move(m)), field_(f) {}
  GroupElement(Eigen::MatrixXcd m, Field f) : m_(std::move(m)), field_(f) {}

  std::variant<Eigen::MatrixXd, Eigen::MatrixXcd> m_;
  Field field_;
};

// A sampled step of any of the three kernels: a coordinate pair i < j plus
// either a rotation angle (Kac / density kernels) or a 2x2 unitary payload.
// Indices are 0-based throughout the library.
struct PlanarStep {
  int i = 0;
  int j = 1;
  double theta = 0.0;
  Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
  bool unitary = false;

  static PlanarStep rotation(int i, int j, double theta);
  static PlanarStep unitary_block(int i, int j, Eigen::Matrix2cd u);
};

// Rotation by theta of the plane spanned by basis vectors i and j, identity
// elsewhere: e_i -> cos(theta) e_i + sin(theta) e_j,
//            e_j -> cos(theta) e_j - sin(theta) e_i.
GroupElement planar_rotation(int i, int j, double theta, int n);

// sqrt(Tr((a-b)^dagger (a-b)))
double hs_distance(const GroupElement& a, const GroupElement& b);

// Bi-invariant Riemannian distance induced by the Hilbert-Schmidt inner
// product: sqrt(sum of squared eigenphases of b a^dagger). For SO(n) this
// equals sqrt(2 * sum of squared canonical angles).
double geodesic_distance(const GroupElement& a, const GroupElement& b);

// Real block-diagonalization a = q * blockdiag(R(theta_1), ..., +-1s) * q^T.
// Angles are signed and consistent with `basis`; floor(n/2) of them.
struct CanonicalDecomposition {
  Eigen::MatrixXd basis;       // orthogonal q
  std::vector<double> angles;  // in (-pi, pi], one per 2x2 block
};
CanonicalDecomposition canonical_decomposition(const GroupElement& a);

// Magnitudes of the canonical angles, sorted decreasing; block sign and
// ordering are convention, so only |theta_i| is canonical.
std::vector<double> canonical_angles(const GroupElement& a);

// Orthogonal projector onto the tangent space at the identity:
// skew-symmetric part (m - m^T)/2, resp. anti-Hermitian part (m - m^*)/2.
// Exact in floating point: output satisfies h^dagger = -h bitwise.
Eigen::MatrixXd tangent_project(const Eigen::MatrixXd& m);
Eigen::MatrixXcd tangent_project(const Eigen::MatrixXcd& m);

// Coefficient <h, a_kl>_hs = sqrt(2) * h(l, k) of a real skew matrix in the
// orthonormal basis a_kl (a_kl maps e_k -> e_l/sqrt2, e_l -> -e_k/sqrt2).
double basis_coefficient(const Eigen::MatrixXd& skew, int k, int l);

// Group exponential of a tangent vector (skew / anti-Hermitian matrix),
// computed by a Hermitian eigendecomposition of -i*h; exact for the
// bi-invariant structure, O(n^3).
GroupElement group_exp(const Eigen::MatrixXd& skew);
GroupElement group_exp(const Eigen::MatrixXcd& anti_hermitian);

// Nearest group element in hs norm (polar correction via SVD; determinant
// fixed to +1 in the real case). Throws if the input is farther than 0.1
// from the group.
GroupElement reorthonormalize(const Eigen::MatrixXd& m);
GroupElement reorthonormalize(const Eigen::MatrixXcd& m);
GroupElement reorthonormalize(const GroupElement& x);

const char* field_name(Field f);

}  // namespace kacmix
