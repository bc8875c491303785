#pragma once

#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "pvstab/error.hpp"
#include "pvstab/state.hpp"

namespace pvstab {

template <typename Scalar> using Matrix8 = Eigen::Matrix<Scalar, 8, 8, Eigen::RowMajor>;
template <typename Scalar> using Matrix6 = Eigen::Matrix<Scalar, 6, 6, Eigen::RowMajor>;
template <typename Scalar> using Matrix3 = Eigen::Matrix<Scalar, 3, 3, Eigen::RowMajor>;
template <typename Scalar> using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

// U = (p, v1, v2, v3, H1, H2, H3, S), V = (Hv1, Hv2, Hv3, E1, E2, E3).
namespace idx {
inline constexpr int p = 0, v1 = 1, H1 = 4, S = 7;
inline constexpr int Hv1 = 0, E1 = 3;
}  // namespace idx

template <typename Scalar>
Matrix8<Scalar> plasma_a0(Scalar rho, Scalar a) {
  Matrix8<Scalar> A = Matrix8<Scalar>::Zero();
  A(0, 0) = Scalar(1) / (rho * a * a);
  for (int i = 1; i <= 3; ++i) A(i, i) = rho;
  for (int i = 4; i < 8; ++i) A(i, i) = Scalar(1);
  return A;
}

// Coefficient of d/dx_j (j = 1, 2, 3) in the symmetric plasma system.
template <typename Scalar>
Matrix8<Scalar> plasma_flux(int j, Scalar rho, Scalar a, const Vector3<Scalar>& v,
                            const Vector3<Scalar>& H) {
  const int c = j - 1;
  Matrix8<Scalar> A = Matrix8<Scalar>::Zero();
  A(0, 0) = v(c) / (rho * a * a);
  A(0, 1 + c) = A(1 + c, 0) = Scalar(1);
  for (int i = 0; i < 3; ++i) {
    A(1 + i, 1 + i) = rho * v(c);
    A(4 + i, 4 + i) = v(c);
    for (int k = 0; k < 3; ++k) {
      Scalar m = (i == k ? -H(c) : Scalar(0)) + (i == c ? H(k) : Scalar(0));
      A(1 + i, 4 + k) = m;
      A(4 + k, 1 + i) = m;
    }
  }
  A(7, 7) = v(c);
  return A;
}

template <typename Scalar = double>
struct PlasmaMatrices {
  Matrix8<Scalar> A0;
  std::array<Matrix8<Scalar>, 3> A;
  std::array<Matrix8<Scalar>, 3> A_hat;
};

template <typename Scalar = double>
PlasmaMatrices<Scalar> build_plasma_matrices(const EquilibriumState& s) {
  const Scalar rho(s.rho), a(s.a);
  const Vector3<Scalar> v = s.v.cast<Scalar>();
  const Vector3<Scalar> H = s.H.cast<Scalar>();
  PlasmaMatrices<Scalar> m;
  m.A0 = plasma_a0(rho, a);
  for (int j = 1; j <= 3; ++j) m.A[j - 1] = plasma_flux(j, rho, a, v, H);
  m.A_hat = m.A;
  m.A_hat[0] -= Scalar(s.kappa) * m.A0;
  return m;
}

// Block b_j = [e_j]_x, so that sum_j B_j d_j V = (curl E, -curl Hv).
template <typename Scalar>
Matrix3<Scalar> curl_block(int j) {
  Matrix3<Scalar> b = Matrix3<Scalar>::Zero();
  const int c = j - 1, n1 = (c + 1) % 3, n2 = (c + 2) % 3;
  b(n2, n1) = Scalar(1);
  b(n1, n2) = Scalar(-1);
  return b;
}

template <typename Scalar>
Matrix6<Scalar> maxwell_flux(int j) {
  Matrix6<Scalar> B = Matrix6<Scalar>::Zero();
  B.template topRightCorner<3, 3>() = curl_block<Scalar>(j);
  B.template bottomLeftCorner<3, 3>() = curl_block<Scalar>(j).transpose();
  return B;
}

template <typename Scalar = double>
struct VacuumMatrices {
  std::array<Matrix6<Scalar>, 3> B;
  Matrix6<Scalar> B1_hat;
};

template <typename Scalar = double>
VacuumMatrices<Scalar> build_vacuum_matrices(const EquilibriumState& s) {
  VacuumMatrices<Scalar> m;
  for (int j = 1; j <= 3; ++j) m.B[j - 1] = maxwell_flux<Scalar>(j);
  m.B1_hat = Scalar(s.epsilon * s.kappa) * Matrix6<Scalar>::Identity() - m.B[0];
  return m;
}

template <typename Scalar>
Matrix3<Scalar> cross_matrix(const Vector3<Scalar>& w) {
  Matrix3<Scalar> m;
  m << Scalar(0), -w(2), w(1),
       w(2), Scalar(0), -w(0),
       -w(1), w(0), Scalar(0);
  return m;
}

template <typename Scalar = double>
struct SecondaryMatrices {
  Vector3<Scalar> nu;
  Matrix6<Scalar> SB0;
  std::array<Matrix6<Scalar>, 3> SB;
};

template <typename Scalar>
Matrix6<Scalar> secondary_b0(const Vector3<Scalar>& nu) {
  Matrix6<Scalar> m = Matrix6<Scalar>::Identity();
  m.template topRightCorner<3, 3>() = cross_matrix(nu).transpose();
  m.template bottomLeftCorner<3, 3>() = cross_matrix(nu);
  return m;
}

template <typename Scalar>
Matrix6<Scalar> secondary_flux(int j, const Vector3<Scalar>& nu) {
  const int c = j - 1;
  Matrix3<Scalar> C = -nu(c) * Matrix3<Scalar>::Identity();
  C.col(c) += nu;
  C.row(c) += nu.transpose();
  Matrix6<Scalar> m = maxwell_flux<Scalar>(j);
  m.template topLeftCorner<3, 3>() = C;
  m.template bottomRightCorner<3, 3>() = C;
  return m;
}

template <typename Scalar = double>
SecondaryMatrices<Scalar> build_secondary_symmetrizer(const Vector3<Scalar>& nu) {
  using std::sqrt;
  if (!(sqrt(nu.squaredNorm()) < Scalar(1))) {
    throw Error(ErrorKind::HyperbolicityViolated, "secondary symmetrizer needs |nu| < 1");
  }
  SecondaryMatrices<Scalar> m;
  m.nu = nu;
  m.SB0 = secondary_b0(nu);
  for (int j = 1; j <= 3; ++j) m.SB[j - 1] = secondary_flux(j, nu);
  return m;
}

template <typename Scalar = double>
struct BoundaryMatrix {
  Scalar dt_phi, d2_phi, d3_phi, epsilon;
  Matrix6<Scalar> Bfrak;
  std::array<Scalar, 6> eigenvalues;
};

template <typename Scalar = double>
BoundaryMatrix<Scalar> build_boundary_matrix(Scalar dt_phi, Scalar d2_phi, Scalar d3_phi,
                                             Scalar epsilon) {
  using std::sqrt;
  BoundaryMatrix<Scalar> b{dt_phi, d2_phi, d3_phi, epsilon, {}, {}};
  b.Bfrak = epsilon * dt_phi * Matrix6<Scalar>::Identity() - maxwell_flux<Scalar>(1) +
            d2_phi * maxwell_flux<Scalar>(2) + d3_phi * maxwell_flux<Scalar>(3);
  const Scalar r = sqrt(Scalar(1) + d2_phi * d2_phi + d3_phi * d3_phi);
  const Scalar c = epsilon * dt_phi;
  b.eigenvalues = {c + r, c + r, c - r, c - r, c, c};
  return b;
}

struct Inertia {
  int positive = 0, negative = 0, zero = 0;
  bool operator==(const Inertia&) const = default;
};

template <typename Derived>
Inertia inertia(const Eigen::MatrixBase<Derived>& m, double tol = 1e-12) {
  using Plain = Eigen::Matrix<double, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
  Eigen::SelfAdjointEigenSolver<Plain> es(Plain(m), Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  Inertia r;
  for (double l : es.eigenvalues()) {
    if (l > tol * scale) ++r.positive;
    else if (l < -tol * scale) ++r.negative;
    else ++r.zero;
  }
  return r;
}

struct PlaneWave {
  double omega = 0.0;
  Eigen::Vector3d k = Eigen::Vector3d::Zero();
  Eigen::Vector3cd Hbar = Eigen::Vector3cd::Zero();
  Eigen::Vector3cd Ebar = Eigen::Vector3cd::Zero();
};

// Norm of the secondary-system symbol applied to a plane wave exp(i(k.x - omega t)).
inline double plane_wave_residual(const PlaneWave& w, const Eigen::Vector3d& nu, double epsilon) {
  const auto sm = build_secondary_symmetrizer<double>(nu);
  const std::complex<double> I(0.0, 1.0);
  Eigen::Matrix<std::complex<double>, 6, 6> symbol =
      (-I * epsilon * w.omega) * sm.SB0.cast<std::complex<double>>();
  for (int j = 0; j < 3; ++j) symbol += (I * w.k(j)) * sm.SB[j].cast<std::complex<double>>();
  Eigen::Matrix<std::complex<double>, 6, 1> V;
  V << w.Hbar, w.Ebar;
  return (symbol * V).norm();
}

}  // namespace pvstab
