#include "pvstab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pvstab/error.hpp"

namespace pvstab {

namespace {

enum Field : int {
  P = 0, V1 = 1, V2 = 2, V3 = 3, H1 = 4, H2 = 5, H3 = 6,
  HV1 = 8, HV2 = 9, HV3 = 10, E1 = 11, E2 = 12, E3 = 13,
};
enum Deriv : int { T = 0, X2 = 1, X3 = 2 };

using detail::Product;
using Combo = std::vector<std::pair<double, int>>;  // coefficient, z index

Combo normal_derivative(Field f, const EquilibriumState& s) {
  const double c = 1.0 / (s.rho * s.a * s.a);
  switch (f) {
    case V1:
      return {{-c, z_index(T, P)}, {-c * s.v.y(), z_index(X2, P)}, {-c * s.v.z(), z_index(X3, P)},
              {-1.0, z_index(X2, V2)}, {-1.0, z_index(X3, V3)}};
    case H1: return {{-1.0, z_index(X2, H2)}, {-1.0, z_index(X3, H3)}};
    case HV1: return {{1.0, z_index(X2, HV2)}, {1.0, z_index(X3, HV3)}};
    case E1: return {{1.0, z_index(X2, E2)}, {1.0, z_index(X3, E3)}};
    default: throw Error(ErrorKind::InvalidInput, "no normal-derivative rule for field");
  }
}

// Trace term c * f * dt E1 moved into the half-space.
void time_term(std::vector<Product>& out, double c, Field f, const EquilibriumState& s) {
  if (c == 0.0) return;
  out.push_back({c, z_index(X2, f), z_index(T, E2)});
  out.push_back({c, z_index(X3, f), z_index(T, E3)});
  for (const auto& [cc, z] : normal_derivative(f, s)) out.push_back({-c * cc, z, z_index(T, E1)});
}

// Trace term c * f * dk E1, k = x2 or x3.
void tangential_term(std::vector<Product>& out, double c, Field f, Deriv k,
                     const EquilibriumState& s) {
  if (c == 0.0) return;
  for (const auto& [cc, z] : normal_derivative(E1, s)) out.push_back({c * cc, z_index(k, f), z});
  for (const auto& [cc, z] : normal_derivative(f, s)) out.push_back({-c * cc, z, z_index(k, E1)});
}

}  // namespace

double mu_hat(const EquilibriumState& s) {
  return s.E.x() + s.epsilon * s.v.y() * s.Hv.z() - s.epsilon * s.v.z() * s.Hv.y();
}

BoundaryResolution boundary_resolution(const EquilibriumState& s) {
  const double D = field_cross(s);
  if (D == 0.0) {
    throw Error(ErrorKind::CollinearFields, "H2*Hv3 - H3*Hv2 = 0, energy method inapplicable");
  }
  BoundaryResolution br;
  br.mu_hat = mu_hat(s);
  br.a(1, 0) = s.Hv.z() / D;
  br.a(1, 1) = -s.H.z() / D;
  br.a(2, 0) = -s.Hv.y() / D;
  br.a(2, 1) = s.H.y() / D;
  for (int j = 0; j < 2; ++j) br.a(0, j) = -s.v.y() * br.a(1, j) - s.v.z() * br.a(2, j);
  return br;
}

namespace detail {

std::vector<Product> boundary_products(const EquilibriumState& s, const BoundaryResolution& br) {
  std::vector<Product> out;
  time_term(out, 1.0, V1, s);
  const Field trace[2] = {H1, HV1};
  for (int j = 0; j < 2; ++j) {
    time_term(out, br.a(0, j), trace[j], s);
    tangential_term(out, br.a(1, j), trace[j], X2, s);
    tangential_term(out, br.a(2, j), trace[j], X3, s);
  }
  return out;
}

}  // namespace detail

Polynomial<double> PCasePolynomial::in_y() const {
  Polynomial<double> r = factors[0];
  for (int i = 1; i < 4; ++i) r = poly_mul(r, factors[i]);
  return r;
}

Polynomial<double> PCasePolynomial::in_x() const {
  // y = (1 - x)^2 = 1 - 2x + x^2
  return poly_compose(in_y(), poly<double>({1.0, -2.0, 1.0}));
}

Eigen::VectorXcd PCasePolynomial::roots_in_y() const {
  Eigen::VectorXcd all(6);
  Eigen::Index k = 0;
  for (const auto& f : factors) {
    const Eigen::VectorXcd r = companion_roots(f);
    all.segment(k, r.size()) = r;
    k += r.size();
  }
  return all.head(k);
}

PCasePolynomial pcase_characteristic_poly(const EquilibriumState& s) {
  if (!is_pcase(s)) throw Error(ErrorKind::NotPCase, "state is not in the particular case");
  PCasePolynomial p;
  p.E1 = s.E.x();
  p.Hv2 = s.Hv.y();
  p.H3 = s.H.z();
  p.v3 = s.v.z();
  const double e = p.E1 * p.E1, h = p.Hv2 * p.Hv2, H = p.H3 * p.H3, w = p.v3 * p.v3;
  const auto Y = poly<double>({0.0, 1.0});
  const auto f1 = poly<double>({-2.0 * e / h, 1.0});
  p.factors[0] = f1;
  p.factors[1] = poly<double>({-e * (1.0 + w / H), 1.0});
  p.factors[2] = poly_sub(poly_mul(poly<double>({-e, 1.0}),
                                   poly<double>({-2.0 * e * (h + H) / (h * H), 1.0})),
                          Polynomial<double>(w * e / H * f1));
  p.factors[3] = poly_sub(poly_mul(Y, poly<double>({-2.0 * e * (1.0 + w) / H, 1.0})),
                          Polynomial<double>(e * (3.0 + w) * poly<double>({-2.0 * e / H, 1.0})));
  return p;
}

std::array<double, 4> posdef_margins(double E1, double Hv2, double H3, double v3) {
  const double e = E1 * E1, h = Hv2 * Hv2, H = H3 * H3, w = v3 * v3;
  return {
      0.5 * h - e,
      1.0 - e * (1.0 + w / H),
      2.0 * e * e * (h + H + w) / (H * h) - e * (1.0 + 2.0 * (H + h) / (H * h) + w / H) + 1.0,
      2.0 * e * e * (3.0 + w) / H - e * (3.0 + w + 2.0 * (1.0 + w) / H) + 1.0,
  };
}

double static_threshold(double Hv2, double H3) {
  const double h = Hv2 * Hv2, H = H3 * H3;
  return std::min(1.0 / 3.0, h * H / (2.0 * (h + H)));
}

std::string_view to_string(Sufficiency s) {
  switch (s) {
    case Sufficiency::Sufficient: return "Sufficient";
    case Sufficiency::NotSufficient: return "NotSufficient";
    case Sufficiency::Inapplicable: return "Inapplicable";
    case Sufficiency::Indeterminate: return "Indeterminate";
  }
  return "Unknown";
}

namespace {

Sufficiency sign_verdict(double margin) {
  if (margin > kDefiniteness) return Sufficiency::Sufficient;
  if (margin < -kDefiniteness) return Sufficiency::NotSufficient;
  return Sufficiency::Indeterminate;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

StabilityReport check_sufficient_stability(const EquilibriumState& s) {
  StabilityReport r;
  if (field_cross(s) == 0.0) {
    r.verdict = Sufficiency::Inapplicable;
    r.witness = "collinear tangential fields: H2*Hv3 - H3*Hv2 = 0";
    return r;
  }
  r.min_eig = assemble_energy_form(s).min_eig;
  if (!is_pcase(s)) {
    r.verdict = sign_verdict(*r.min_eig);
    r.witness = "min_eig = " + fmt(*r.min_eig);
    return r;
  }

  const auto m = posdef_margins(s.E.x(), s.Hv.y(), s.H.z(), s.v.z());
  r.inequalities = m;
  const double worst = *std::min_element(m.begin(), m.end());
  r.verdict = sign_verdict(worst);
  int first = -1;
  for (int i = 0; i < 4 && first < 0; ++i)
    if (m[i] < -kDefiniteness) first = i;
  if (first < 0)
    for (int i = 0; i < 4 && first < 0; ++i)
      if (m[i] <= kDefiniteness) first = i;
  if (first < 0) {
    r.witness = "all four inequalities hold, smallest margin " + fmt(worst);
  } else {
    r.witness = "inequality " + std::to_string(first + 1) + " " +
                (m[first] < -kDefiniteness ? "fails" : "is marginal") + ", margin " + fmt(m[first]);
  }

  if (s.v.z() == 0.0) {
    const double c = static_threshold(s.Hv.y(), s.H.z()) - s.E.x() * s.E.x();
    r.static_margin = c;
    const Sufficiency cv = sign_verdict(c);
    if (cv != Sufficiency::Indeterminate && r.verdict != Sufficiency::Indeterminate &&
        cv != r.verdict) {
      throw Error(ErrorKind::ConsistencyViolation,
                  "static closed form disagrees with the four inequalities");
    }
  }
  return r;
}

}  // namespace pvstab
