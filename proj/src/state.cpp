#include "pvstab/state.hpp"

#include <cmath>
#include <string>

#include "pvstab/error.hpp"

namespace pvstab {

namespace {

bool all_finite(const EquilibriumState& s) {
  return std::isfinite(s.p) && s.v.allFinite() && s.H.allFinite() && std::isfinite(s.S) &&
         s.Hv.allFinite() && s.E.allFinite() && std::isfinite(s.kappa) &&
         std::isfinite(s.epsilon) && std::isfinite(s.rho) && std::isfinite(s.a);
}

void require_equal(double actual, double expected, const char* what) {
  if (std::abs(actual - expected) > kConstraintTolerance) {
    throw Error(ErrorKind::InterfaceConstraintViolated,
                std::string(what) + " (got " + std::to_string(actual) + ", expected " +
                    std::to_string(expected) + ")");
  }
}

}  // namespace

std::string_view to_string(CaseFlag flag) {
  switch (flag) {
    case CaseFlag::GeneralNonCollinear: return "GeneralNonCollinear";
    case CaseFlag::UnflFamily: return "UnflFamily";
    case CaseFlag::PCase: return "PCase";
    case CaseFlag::VacuumFieldAlongX3: return "VacuumFieldAlongX3";
    case CaseFlag::Collinear: return "Collinear";
  }
  return "Unknown";
}

EquilibriumState validate_equilibrium(const EquilibriumState& raw) {
  if (!all_finite(raw)) throw Error(ErrorKind::NonFiniteInput, "all fields must be finite");
  if (!(raw.rho > 0.0) || !(raw.a * raw.a > 0.0)) {
    throw Error(ErrorKind::HyperbolicityViolated, "rho > 0 and a^2 > 0 required");
  }
  if (!(raw.epsilon > 0.0 && raw.epsilon < 1.0)) {
    throw Error(ErrorKind::EpsilonOutOfRange, "epsilon must lie in (0, 1)");
  }
  if (!(raw.epsilon * raw.v.norm() < 1.0)) {
    throw Error(ErrorKind::EpsilonOutOfRange, "epsilon*|v| must be below 1");
  }
  if (raw.kappa > 0.0) throw Error(ErrorKind::ExpansionViolated, "kappa must be <= 0");

  const double ek = raw.epsilon * raw.kappa;
  require_equal(raw.v.x(), raw.kappa, "v1 = kappa");
  require_equal(raw.H.x(), 0.0, "H1 = 0");
  require_equal(raw.Hv.x(), 0.0, "Hv1 = 0");
  require_equal(raw.E.y(), ek * raw.Hv.z(), "E2 = epsilon*kappa*Hv3");
  require_equal(raw.E.z(), -ek * raw.Hv.y(), "E3 = -epsilon*kappa*Hv2");
  return raw;
}

double field_cross(const EquilibriumState& s) { return s.H.y() * s.Hv.z() - s.H.z() * s.Hv.y(); }

bool is_unfl(const EquilibriumState& s) {
  return s.v.x() == 0.0 && s.v.y() == 0.0 && s.H.y() == 0.0;
}

bool is_pcase(const EquilibriumState& s) {
  return is_unfl(s) && s.Hv.z() == 0.0 && s.H.z() * s.Hv.y() != 0.0;
}

CaseFlag classify_case(const EquilibriumState& s) {
  if (is_pcase(s)) return CaseFlag::PCase;
  if (is_unfl(s) && s.Hv.y() == 0.0 && s.Hv.z() != 0.0) return CaseFlag::VacuumFieldAlongX3;
  if (field_cross(s) == 0.0) return CaseFlag::Collinear;
  if (is_unfl(s)) return CaseFlag::UnflFamily;
  return CaseFlag::GeneralNonCollinear;
}

EquilibriumState make_pcase_state(double E1, double Hv2, double H3, double v3, double epsilon) {
  EquilibriumState s;
  s.v = {0.0, 0.0, v3};
  s.H = {0.0, 0.0, H3};
  s.Hv = {0.0, Hv2, 0.0};
  s.E = {E1, 0.0, 0.0};
  s.epsilon = epsilon;
  return s;
}

}  // namespace pvstab
