#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pvstab/matrices.hpp"
#include "pvstab/polynomial.hpp"
#include "pvstab/state.hpp"

namespace pvstab {

struct BoundaryResolution {
  double mu_hat = 0.0;
  // Rows (dt, d2, d3) of phi; columns (H1 trace, Hv1 trace).
  Eigen::Matrix<double, 3, 2, Eigen::RowMajor> a = Eigen::Matrix<double, 3, 2, Eigen::RowMajor>::Zero();
};

double mu_hat(const EquilibriumState& state);

// Throws CollinearFields when H2*Hv3 - H3*Hv2 = 0.
BoundaryResolution boundary_resolution(const EquilibriumState& state);

inline constexpr int kEnergyDimension = 42;
template <typename Scalar> using Matrix42 = Eigen::Matrix<Scalar, 42, 42, Eigen::RowMajor>;

// Position of field f (U first, then V at offset 8) differentiated in direction d (0: t, 1: x2, 2: x3).
constexpr int z_index(int d, int field) { return 14 * d + field; }

namespace detail {

struct Product {
  double c;
  int i, j;
};

// Bilinear terms c z_i z_j whose sum is the boundary integral after conversion to the interior.
std::vector<Product> boundary_products(const EquilibriumState& s, const BoundaryResolution& br);

}  // namespace detail

template <typename Scalar = double>
Matrix42<Scalar> energy_base_matrix(const EquilibriumState& s) {
  const auto A0 = plasma_a0<Scalar>(Scalar(s.rho), Scalar(s.a));
  const Vector3<Scalar> nu = (s.epsilon * s.v).cast<Scalar>();
  const auto SB0 = secondary_b0<Scalar>(nu);
  Matrix42<Scalar> m = Matrix42<Scalar>::Zero();
  for (int d = 0; d < 3; ++d) {
    m.template block<8, 8>(14 * d, 14 * d) = A0;
    m.template block<6, 6>(14 * d + 8, 14 * d + 8) = SB0;
  }
  return m;
}

template <typename Scalar = double>
Matrix42<Scalar> energy_coupling_matrix(const EquilibriumState& s) {
  const BoundaryResolution br = boundary_resolution(s);
  Matrix42<Scalar> q = Matrix42<Scalar>::Zero();
  for (const auto& [c, i, j] : detail::boundary_products(s, br)) {
    q(i, j) += Scalar(c);
    q(j, i) += Scalar(c);
  }
  return q;
}

template <typename Scalar = double>
struct EnergyForm {
  static constexpr int dimension = kEnergyDimension;
  Matrix42<Scalar> M;
  Scalar min_eig;
};

template <typename Scalar = double>
EnergyForm<Scalar> assemble_energy_form(const EquilibriumState& s) {
  if (s.kappa > 0.0) throw Error(ErrorKind::ExpansionViolated, "kappa must be <= 0");
  EnergyForm<Scalar> f;
  f.M = energy_base_matrix<Scalar>(s) + Scalar(mu_hat(s)) * energy_coupling_matrix<Scalar>(s);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Scalar, 42, 42>> es(f.M, Eigen::EigenvaluesOnly);
  f.min_eig = es.eigenvalues()(0);
  return f;
}

struct PCasePolynomial {
  double E1 = 0.0, Hv2 = 0.0, H3 = 0.0, v3 = 0.0;
  std::array<Polynomial<double>, 4> factors;  // in y = (1 - x)^2

  Polynomial<double> in_y() const;
  Polynomial<double> in_x() const;
  // Roots of each factor, concatenated.
  Eigen::VectorXcd roots_in_y() const;
};

// Throws NotPCase.
PCasePolynomial pcase_characteristic_poly(const EquilibriumState& state);

// Left minus right side of each inequality; positive means satisfied.
std::array<double, 4> posdef_margins(double E1, double Hv2, double H3, double v3);

// min{1/3, Hv2^2 H3^2 / (2 (Hv2^2 + H3^2))}; the static stability bound on E1^2.
double static_threshold(double Hv2, double H3);

enum class Sufficiency { Sufficient, NotSufficient, Inapplicable, Indeterminate };

std::string_view to_string(Sufficiency s);

inline constexpr double kDefiniteness = 1e-9;

struct StabilityReport {
  Sufficiency verdict = Sufficiency::Inapplicable;
  std::string witness;
  std::optional<double> min_eig;
  std::optional<std::array<double, 4>> inequalities;
  std::optional<double> static_margin;
};

StabilityReport check_sufficient_stability(const EquilibriumState& state);

}  // namespace pvstab
