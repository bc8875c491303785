#include "pvstab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pvstab/energy.hpp"
#include "pvstab/error.hpp"

namespace pvstab {

namespace {

constexpr cdouble I{0.0, 1.0};

struct Params {
  double E1, Hv2, Hv3, H3, eps, s, c;
};

Params params(const ModeProblem& p) {
  const auto& st = p.state;
  const bool general = p.variant == DeterminantVariant::StaticGeneralAngle;
  return {st.E.x(), st.Hv.y(), st.Hv.z(), st.H.z(), st.epsilon,
          general ? std::sin(p.psi) : 0.0, general ? std::cos(p.psi) : 1.0};
}

using CPoly = Polynomial<cdouble>;

CPoly cpoly(std::initializer_list<cdouble> c) { return poly<cdouble>(c); }

}  // namespace

std::string_view to_string(DeterminantVariant v) {
  switch (v) {
    case DeterminantVariant::H2hatZero: return "H2hatZero";
    case DeterminantVariant::PCase2D: return "PCase2D";
    case DeterminantVariant::StaticGeneralAngle: return "StaticGeneralAngle";
  }
  return "Unknown";
}

std::string_view to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Unstable: return "Unstable";
    case VerdictKind::NoGrowingMode: return "NoGrowingMode";
    case VerdictKind::SufficientlyStable: return "SufficientlyStable";
  }
  return "Unknown";
}

ModeProblem make_mode_problem(const EquilibriumState& s, double psi, DeterminantVariant variant) {
  switch (variant) {
    case DeterminantVariant::StaticGeneralAngle:
      if (!is_pcase(s) || s.v.z() != 0.0)
        throw Error(ErrorKind::UnsupportedCase, "general-angle determinant needs a static PCase state");
      break;
    case DeterminantVariant::PCase2D:
      if (!is_pcase(s)) throw Error(ErrorKind::UnsupportedCase, "2D determinant needs a PCase state");
      break;
    case DeterminantVariant::H2hatZero:
      if (!is_unfl(s) || s.Hv.y() != 0.0)
        throw Error(ErrorKind::UnsupportedCase, "Hv2 = 0 determinant needs v1 = v2 = H2 = Hv2 = 0");
      break;
  }
  return {s, psi, variant};
}

DeterminantVariant default_variant(const EquilibriumState& s) {
  if (is_pcase(s)) {
    return s.v.z() == 0.0 ? DeterminantVariant::StaticGeneralAngle : DeterminantVariant::PCase2D;
  }
  if (is_unfl(s) && s.Hv.y() == 0.0) return DeterminantVariant::H2hatZero;
  throw Error(ErrorKind::UnsupportedCase, "no determinant equation for this state");
}

BranchPair dispersion_xi(cdouble tau, const EquilibriumState& st, double psi) {
  const double H = st.H.z() * st.H.z();
  const double s = std::sin(psi);
  const cdouble tau2 = tau * tau;
  const cdouble D = (1.0 + H) * tau2 + s * s * H;
  if (D == 0.0) throw Error(ErrorKind::DegenerateDenominator, "(1+H3^2) tau^2 + sin^2(psi) H3^2 = 0");
  return {-std::sqrt(1.0 + tau2 * tau2 / D), -std::sqrt(1.0 + st.epsilon * st.epsilon * tau2)};
}

BranchPair dispersion_xi(cdouble tau, const ModeProblem& p) {
  if (p.variant == DeterminantVariant::StaticGeneralAngle) return dispersion_xi(tau, p.state, p.psi);
  const double H3 = p.state.H.z();
  const double K = 1.0 / (1.0 + H3 * H3);
  const double eps = p.state.epsilon;
  return {-std::sqrt(1.0 + K * tau * tau), -std::sqrt(1.0 + eps * eps * tau * tau)};
}

double ResidualParts::relative() const {
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs) + std::abs(rhs));
}

ResidualParts lopatinski_parts(cdouble tau, const ModeProblem& p) {
  const Params q = params(p);
  const BranchPair xi = dispersion_xi(tau, p);
  const cdouble tp = -xi.xi_p, tv = -xi.xi_v;
  const cdouble tau2 = tau * tau;
  switch (p.variant) {
    case DeterminantVariant::H2hatZero: {
      const cdouble m = q.E1 + I * tau * q.eps * q.Hv3;
      return {tau2 * tv, m * m * tp};
    }
    case DeterminantVariant::PCase2D:
      return {tau2 * tv, (q.E1 * q.E1 - q.Hv2 * q.Hv2 * (1.0 + q.eps * q.eps * tau2)) * tp};
    case DeterminantVariant::StaticGeneralAngle: {
      const cdouble R = q.E1 * q.E1 - q.Hv2 * q.Hv2 * (q.eps * q.eps * tau2 + q.c * q.c) -
                        2.0 * I * q.eps * tau * q.E1 * q.Hv2 * q.s;
      return {(tau2 + q.H3 * q.H3 * q.s * q.s) * tv, R * tp};
    }
  }
  return {};
}

cdouble lopatinski_residual(cdouble tau, const ModeProblem& p) { return lopatinski_parts(tau, p).value(); }

Polynomial<cdouble> lopatinski_polynomial(const ModeProblem& p) {
  const Params q = params(p);
  const double H = q.H3 * q.H3, e2 = q.eps * q.eps;
  const CPoly vac = cpoly({1.0, 0.0, e2});  // xi_v^2
  switch (p.variant) {
    case DeterminantVariant::H2hatZero: {
      // tau^4 xi_v^2 (1+H) - m^4 ((1+H) + tau^2)
      const CPoly m = cpoly({q.E1, I * q.eps * q.Hv3});
      const CPoly lhs = poly_mul(cpoly({0.0, 0.0, 0.0, 0.0, 1.0 + H}), vac);
      return poly_sub(lhs, poly_mul(poly_pow(m, 4), cpoly({1.0 + H, 0.0, 1.0})));
    }
    case DeterminantVariant::PCase2D: {
      const double h = q.Hv2 * q.Hv2;
      const CPoly r = cpoly({q.E1 * q.E1 - h, 0.0, -h * e2});
      const CPoly lhs = poly_mul(cpoly({0.0, 0.0, 0.0, 0.0, 1.0 + H}), vac);
      return poly_sub(lhs, poly_mul(poly_mul(r, r), cpoly({1.0 + H, 0.0, 1.0})));
    }
    case DeterminantVariant::StaticGeneralAngle: {
      // (tau^2 + H s^2)^2 xi_v^2 D - R^2 (D + tau^4), D = (1+H) tau^2 + H s^2
      const double s2 = q.s * q.s, h = q.Hv2 * q.Hv2;
      const CPoly A = cpoly({H * s2, 0.0, 1.0});
      const CPoly D = cpoly({H * s2, 0.0, 1.0 + H});
      const CPoly R = cpoly({q.E1 * q.E1 - h * q.c * q.c, -2.0 * I * q.eps * q.E1 * q.Hv2 * q.s, -h * e2});
      const CPoly lhs = poly_mul(poly_mul(poly_mul(A, A), vac), D);
      return poly_sub(lhs, poly_mul(poly_mul(R, R), poly_add(D, cpoly({0.0, 0.0, 0.0, 0.0, 1.0}))));
    }
  }
  return {};
}

ModeRoot evaluate_root(cdouble tau, const ModeProblem& p, const RootTolerances& tol) {
  ModeRoot r;
  r.tau = tau;
  const BranchPair xi = dispersion_xi(tau, p);
  r.xi_p = xi.xi_p;
  r.xi_v = xi.xi_v;
  const ResidualParts parts = lopatinski_parts(tau, p);
  r.residual = parts.value();
  r.relative_residual = parts.relative();
  r.growing = tau.real() > tol.growth;
  r.decaying_p = xi.xi_p.real() < -tol.branch;
  r.decaying_v = xi.xi_v.real() < -tol.branch;
  return r;
}

namespace {

// Newton on the unsquared residual; keeps the iterate with the smallest residual.
cdouble refine_unsquared(cdouble tau, const ModeProblem& p) {
  double best = lopatinski_parts(tau, p).relative();
  for (int it = 0; it < 6 && best > 0.0; ++it) {
    const double h = 1e-7 * std::max(1.0, std::abs(tau));
    const cdouble f = lopatinski_residual(tau, p);
    const cdouble df = (lopatinski_residual(tau + h, p) - lopatinski_residual(tau - h, p)) / (2.0 * h);
    if (df == 0.0) break;
    const cdouble next = tau - f / df;
    const double r = lopatinski_parts(next, p).relative();
    if (!(r < best)) break;
    best = r;
    tau = next;
  }
  return tau;
}

}  // namespace

std::vector<ModeRoot> find_unstable_roots(const ModeProblem& p, const RootTolerances& tol) {
  const CPoly poly = lopatinski_polynomial(p);
  const Eigen::VectorXcd raw = companion_roots(poly);
  std::vector<ModeRoot> out;
  for (cdouble tau : raw) {
    if (tau.real() < -1e-4 * (1.0 + std::abs(tau))) continue;
    tau = polish_root(poly, tau);
    if (!(tau.real() > tol.growth)) continue;
    ModeRoot r = evaluate_root(tau, p, tol);
    if (!r.valid() || !(r.relative_residual < tol.residual)) continue;
    r = evaluate_root(refine_unsquared(tau, p), p, tol);
    if (!r.valid() || !(r.relative_residual < tol.residual)) continue;
    const bool dup = std::any_of(out.begin(), out.end(), [&](const ModeRoot& o) {
      return std::abs(o.tau - r.tau) <= 1e-10 * (1.0 + std::abs(r.tau));
    });
    if (!dup) out.push_back(r);
  }
  std::sort(out.begin(), out.end(), [](const ModeRoot& a, const ModeRoot& b) {
    return a.tau.real() > b.tau.real() || (a.tau.real() == b.tau.real() && a.tau.imag() > b.tau.imag());
  });
  return out;
}

std::vector<double> psi_scan_order(double step) {
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidInput, "psi step must be positive");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> psi{std::numbers::pi / 2.0, 0.0};
  for (long k = 1; double(k) * step < two_pi; ++k) psi.push_back(double(k) * step);
  return psi;
}

Verdict classify_point(const EquilibriumState& state, const std::vector<double>& psi_grid,
                       const RootTolerances& tol) {
  const DeterminantVariant variant = default_variant(state);
  const bool scan_angles = variant == DeterminantVariant::StaticGeneralAngle;
  const std::vector<double> only_zero{0.0};
  Verdict v;
  for (double psi : scan_angles ? psi_grid : only_zero) {
    const auto roots = find_unstable_roots(make_mode_problem(state, psi, variant), tol);
    if (!roots.empty()) {
      v.kind = VerdictKind::Unstable;
      v.root = roots.front();
      v.psi = psi;
      v.max_growth_rate = roots.front().tau.real();
      return v;
    }
  }
  v.kind = check_sufficient_stability(state).verdict == Sufficiency::Sufficient
               ? VerdictKind::SufficientlyStable
               : VerdictKind::NoGrowingMode;
  return v;
}

}  // namespace pvstab
