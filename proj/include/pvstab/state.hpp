#pragma once

#include <string_view>

#include <Eigen/Core>

namespace pvstab {

// Constant flow about which the interface problem is linearized.
// Plasma occupies x1 > 0, vacuum x1 < 0; the interface moves with speed kappa.
struct EquilibriumState {
  double p = 1.0;
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  Eigen::Vector3d H = Eigen::Vector3d::Zero();
  double S = 0.0;
  Eigen::Vector3d Hv = Eigen::Vector3d::Zero();
  Eigen::Vector3d E = Eigen::Vector3d::Zero();
  double kappa = 0.0;
  double epsilon = 1e-6;
  double rho = 1.0;
  double a = 1.0;

  bool operator==(const EquilibriumState&) const = default;
};

enum class CaseFlag { GeneralNonCollinear, UnflFamily, PCase, VacuumFieldAlongX3, Collinear };

std::string_view to_string(CaseFlag flag);

inline constexpr double kConstraintTolerance = 1e-12;

// Throws pvstab::Error naming the first violated condition.
EquilibriumState validate_equilibrium(const EquilibriumState& raw);

CaseFlag classify_case(const EquilibriumState& state);

// H2 * Hv3 - H3 * Hv2; zero iff the tangential fields are collinear.
double field_cross(const EquilibriumState& state);

bool is_pcase(const EquilibriumState& state);
bool is_unfl(const EquilibriumState& state);

// Static-frame state with v = (0, 0, v3), H = (0, 0, H3), Hv = (0, Hv2, 0), E = (E1, 0, 0).
EquilibriumState make_pcase_state(double E1, double Hv2, double H3, double v3 = 0.0,
                                  double epsilon = 1e-6);

}  // namespace pvstab
