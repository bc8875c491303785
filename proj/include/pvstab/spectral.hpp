#pragma once

#include <complex>
#include <optional>
#include <string_view>
#include <vector>

#include "pvstab/polynomial.hpp"
#include "pvstab/state.hpp"

namespace pvstab {

using cdouble = std::complex<double>;

enum class DeterminantVariant { H2hatZero, PCase2D, StaticGeneralAngle };

std::string_view to_string(DeterminantVariant v);

struct ModeProblem {
  EquilibriumState state;
  double psi = 0.0;
  DeterminantVariant variant = DeterminantVariant::StaticGeneralAngle;
};

// Throws UnsupportedCase when the state does not fit the variant.
ModeProblem make_mode_problem(const EquilibriumState& state, double psi, DeterminantVariant variant);

// Variant used by classify_point for this state; throws UnsupportedCase.
DeterminantVariant default_variant(const EquilibriumState& state);

struct BranchPair {
  cdouble xi_p, xi_v;
};

// Principal branches, Re xi <= 0. Throws DegenerateDenominator.
BranchPair dispersion_xi(cdouble tau, const EquilibriumState& state, double psi);
BranchPair dispersion_xi(cdouble tau, const ModeProblem& problem);

struct ResidualParts {
  cdouble lhs, rhs;
  cdouble value() const { return lhs - rhs; }
  // |lhs - rhs| / max(1, |lhs| + |rhs|)
  double relative() const;
};

ResidualParts lopatinski_parts(cdouble tau, const ModeProblem& problem);
cdouble lopatinski_residual(cdouble tau, const ModeProblem& problem);

// The determinant equation with square roots cleared.
Polynomial<cdouble> lopatinski_polynomial(const ModeProblem& problem);

struct RootTolerances {
  double growth = 1e-8;
  double residual = 1e-9;
  double branch = 1e-8;
};

struct ModeRoot {
  cdouble tau, xi_p, xi_v, residual;
  double relative_residual = 0.0;
  bool growing = false, decaying_p = false, decaying_v = false;
  bool valid() const { return growing && decaying_p && decaying_v; }
};

ModeRoot evaluate_root(cdouble tau, const ModeProblem& problem, const RootTolerances& tol = {});

// Certified roots with Re tau > tol.growth, sorted by decreasing Re tau.
std::vector<ModeRoot> find_unstable_roots(const ModeProblem& problem, const RootTolerances& tol = {});

// pi/2, 0, then k * step for k >= 1 while below 2 pi.
std::vector<double> psi_scan_order(double step = 1e-2);

enum class VerdictKind { Unstable, NoGrowingMode, SufficientlyStable };

std::string_view to_string(VerdictKind k);

struct Verdict {
  VerdictKind kind = VerdictKind::NoGrowingMode;
  std::optional<ModeRoot> root;
  double psi = 0.0;
  double max_growth_rate = 0.0;
};

Verdict classify_point(const EquilibriumState& state, const std::vector<double>& psi_grid,
                       const RootTolerances& tol = {});

}  // namespace pvstab
