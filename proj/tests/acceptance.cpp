#include <chrono>
#include <cstdio>
#include <random>
#include <string>

#include "pvstab/energy.hpp"
#include "pvstab/error.hpp"
#include "pvstab/matrices.hpp"
#include "pvstab/scan.hpp"
#include "pvstab/spectral.hpp"

using namespace pvstab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool report(int id, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  return ok;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

EquilibriumState random_state(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  EquilibriumState s;
  s.kappa = -std::abs(u(rng)) * 0.5;
  s.epsilon = 1e-3;
  s.v = {s.kappa, u(rng), u(rng)};
  s.H = {0.0, u(rng), u(rng)};
  s.Hv = {0.0, u(rng), u(rng)};
  s.E = {u(rng), s.epsilon * s.kappa * s.Hv.z(), -s.epsilon * s.kappa * s.Hv.y()};
  return validate_equilibrium(s);
}

Eigen::Vector3d random_direction(std::mt19937& rng) {
  std::normal_distribution<double> g;
  Eigen::Vector3d d(g(rng), g(rng), g(rng));
  return d.normalized();
}

bool criterion1() {
  const auto t0 = Clock::now();
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  int failures = 0;
  double spec_err = 0.0, b0_err = 0.0;
  if (build_plasma_matrices<double>(EquilibriumState{}).A0 != Matrix8<double>::Identity()) ++failures;
  for (int n = 0; n < 1000; ++n) {
    const auto s = random_state(rng);
    const auto pm = build_plasma_matrices<double>(s);
    for (int j = 0; j < 3; ++j)
      if (pm.A[j] != pm.A[j].transpose() || pm.A_hat[j] != pm.A_hat[j].transpose()) ++failures;
    if (!(inertia(pm.A_hat[0]) == Inertia{1, 1, 6})) ++failures;
    const auto vm = build_vacuum_matrices<double>(s);
    for (int j = 0; j < 3; ++j)
      if (vm.B[j] != vm.B[j].transpose()) ++failures;

    const auto bm = build_boundary_matrix(u(rng), u(rng), u(rng), std::abs(u(rng)) / 3.0);
    Eigen::SelfAdjointEigenSolver<Matrix6<double>> es(bm.Bfrak, Eigen::EigenvaluesOnly);
    auto closed = bm.eigenvalues;
    std::sort(closed.begin(), closed.end());
    for (int i = 0; i < 6; ++i) spec_err = std::max(spec_err, std::abs(es.eigenvalues()(i) - closed[i]));

    const Eigen::Vector3d nu = random_direction(rng) * std::uniform_real_distribution<double>(0.0, 0.999)(rng);
    const auto sm = build_secondary_symmetrizer<double>(nu);
    if (sm.SB0 != sm.SB0.transpose()) ++failures;
    for (int j = 0; j < 3; ++j)
      if (sm.SB[j] != sm.SB[j].transpose()) ++failures;
    Eigen::SelfAdjointEigenSolver<Matrix6<double>> eb(sm.SB0, Eigen::EigenvaluesOnly);
    const double r = nu.norm();
    const std::array<double, 6> expect{1 - r, 1 - r, 1, 1, 1 + r, 1 + r};
    for (int i = 0; i < 6; ++i) b0_err = std::max(b0_err, std::abs(eb.eigenvalues()(i) - expect[i]));
  }
  bool flip = true;
  for (int n = 0; n < 100; ++n) {
    const Eigen::Vector3d d = random_direction(rng);
    Eigen::SelfAdjointEigenSolver<Matrix6<double>> below(secondary_b0<double>(d * (1.0 - 1e-9)), Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Matrix6<double>> above(secondary_b0<double>(d * (1.0 + 1e-9)), Eigen::EigenvaluesOnly);
    flip = flip && below.eigenvalues()(0) > 0.0 && above.eigenvalues()(0) < 0.0;
  }
  // Unit norm exactly representable.
  for (const Eigen::Vector3d d : {Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, -1, 0), Eigen::Vector3d(0, 0, 1),
                                  Eigen::Vector3d(0.6, 0.8, 0), Eigen::Vector3d(0, 0.28, -0.96)}) {
    if (d.squaredNorm() != 1.0) continue;
    try {
      build_secondary_symmetrizer<double>(d);
      flip = false;
    } catch (const Error&) {
    }
  }
  const double dt = seconds_since(t0);
  const bool ok = failures == 0 && spec_err <= 1e-10 && b0_err <= 1e-12 && flip && dt < 1.0;
  return report(1, ok,
                fmt("symmetry/inertia failures %d, boundary spectrum err %.2e, B0 spectrum err %.2e, flip %s, %.3f s",
                    failures, spec_err, b0_err, flip ? "ok" : "wrong", dt));
}

bool criterion2() {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> scale(0.5, 2.0), ueps(1e-3, 0.5);
  double worst_good = 0.0, best_bad = INFINITY;
  for (int w = 0; w < 100; ++w) {
    const Eigen::Vector3d khat = random_direction(rng);
    const Eigen::Vector3d e = khat.cross(random_direction(rng)).normalized();
    const double eps = ueps(rng), kn = scale(rng);
    PlaneWave good;
    good.k = kn * khat;
    good.omega = kn / eps;
    good.Ebar = e.cast<std::complex<double>>();
    good.Hbar = khat.cross(e).cast<std::complex<double>>();
    PlaneWave bad = good;
    bad.Ebar += (0.1 * khat).cast<std::complex<double>>();
    for (int n = 0; n < 10; ++n) {
      const Eigen::Vector3d nu = random_direction(rng) * std::uniform_real_distribution<double>(0.0, 0.99)(rng);
      worst_good = std::max(worst_good, plane_wave_residual(good, nu, eps));
      best_bad = std::min(best_bad, plane_wave_residual(bad, nu, eps));
    }
  }
  return report(2, worst_good <= 1e-12 && best_bad > 1e-3,
                fmt("max transverse residual %.2e, min divergent residual %.2e", worst_good, best_bad));
}

bool criterion3() {
  const auto t0 = Clock::now();
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.05, 2.0), uv(-1.0, 1.0);
  int compared = 0, disagree = 0, static_compared = 0;
  while (compared < 10000) {
    const bool is_static = compared % 3 == 0;
    const double E1 = 0.6 * u(rng), Hv2 = u(rng), H3 = u(rng), v3 = is_static ? 0.0 : uv(rng);
    const auto s = make_pcase_state(E1, Hv2, H3, v3);
    const auto m = posdef_margins(E1, Hv2, H3, v3);
    const double worst = *std::min_element(m.begin(), m.end());
    double ymax = 0.0;
    for (auto y : pcase_characteristic_poly(s).roots_in_y()) ymax = std::max(ymax, y.real());
    const double root_margin = 1.0 - ymax;
    const double min_eig = assemble_energy_form(s).min_eig;
    double static_margin = 1.0;
    if (is_static) static_margin = static_threshold(Hv2, H3) - E1 * E1;
    if (std::abs(worst) <= 1e-9 || std::abs(root_margin) <= 1e-9 || std::abs(min_eig) <= 1e-9 ||
        std::abs(static_margin) <= 1e-9)
      continue;
    ++compared;
    const bool a = worst > 0, b = root_margin > 0, c = min_eig > 0;
    if (a != b || a != c) ++disagree;
    if (is_static) {
      ++static_compared;
      if (a != (static_margin > 0)) ++disagree;
    }
  }
  const double dt = seconds_since(t0);
  return report(3, disagree == 0 && dt < 60.0,
                fmt("%d samples (%d static), %d disagreements, %.1f s", compared, static_compared, disagree, dt));
}

bool criterion4() {
  auto sufficient = [](double e) {
    return check_sufficient_stability(make_pcase_state(std::sqrt(e), 1.0, 1.0)).verdict == Sufficiency::Sufficient;
  };
  double lo = 0.0, hi = 1.0;
  if (!sufficient(lo) || sufficient(hi)) return report(4, false, "bracket does not straddle the threshold");
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (sufficient(mid) ? lo : hi) = mid;
  }
  const double t = 0.5 * (lo + hi);
  return report(4, std::abs(t - 0.25) <= 1e-9, fmt("threshold E1^2 = %.12f", t));
}

struct RootAudit {
  int roots = 0;
  double max_abs_residual = 0.0, max_rel_residual = 0.0, min_margin = INFINITY;
  void add(const ModeRoot& r) {
    ++roots;
    max_abs_residual = std::max(max_abs_residual, std::abs(r.residual));
    max_rel_residual = std::max(max_rel_residual, r.relative_residual);
    min_margin = std::min({min_margin, r.tau.real(), -r.xi_p.real(), -r.xi_v.real()});
  }
};

bool criterion5(RootAudit& audit) {
  const auto s = make_pcase_state(1.0, 0.5, 1.0);
  const auto roots = find_unstable_roots(make_mode_problem(s, 0.0, default_variant(s)));
  const double y = 0.5 * (0.28125 + std::sqrt(0.28125 * 0.28125 + 4 * 0.5625));
  const double oracle = std::sqrt(y);
  for (const auto& r : roots) audit.add(r);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int n = 0; n < 200; ++n) {
    const auto st = make_pcase_state(u(rng), u(rng), u(rng) + 0.1);
    const auto pr = make_mode_problem(st, u(rng) * M_PI, DeterminantVariant::StaticGeneralAngle);
    for (const auto& r : find_unstable_roots(pr)) audit.add(r);
  }
  const bool fixture = roots.size() == 1 && std::abs(roots[0].tau.imag()) < 1e-12 &&
                       std::abs(roots[0].tau.real() - oracle) / oracle <= 1e-4;
  const bool sound = audit.max_rel_residual < 1e-9 && audit.max_abs_residual < 1e-9 && audit.min_margin > 1e-8;
  return report(5, fixture && sound,
                fmt("fixture tau %.13f vs %.13f; %d roots, max |residual| %.2e, max relative %.2e, min margin %.2e",
                    roots.empty() ? NAN : roots[0].tau.real(), oracle, audit.roots, audit.max_abs_residual,
                    audit.max_rel_residual, audit.min_margin));
}

bool criterion6() {
  const auto t0 = Clock::now();
  const std::array<double, 4> h3s{1.0, 2.0 / 3.0, 0.5, 0.25};
  const auto psi = psi_scan_order(1e-2);
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  int missed = 0, spurious = 0;
  for (int n = 0; n < 1000; ++n) {
    const double H3 = h3s[n % 4];
    double E1, Hv2;
    do {
      E1 = u(rng);
      Hv2 = u(rng);
    } while (E1 * E1 <= Hv2 * Hv2);
    if (classify_point(make_pcase_state(E1, Hv2, H3), psi).kind != VerdictKind::Unstable) ++missed;
  }
  for (int n = 0; n < 1000; ++n) {
    double Hv2;
    do Hv2 = u(rng);
    while (Hv2 == 0.0);
    if (classify_point(make_pcase_state(0.0, Hv2, h3s[n % 4]), psi).kind == VerdictKind::Unstable) ++spurious;
  }
  return report(6, missed == 0 && spurious == 0,
                fmt("%d of 1000 unstable-side points missed, %d of 1000 zero-field points flagged, %.1f s", missed,
                    spurious, seconds_since(t0)));
}

bool criterion7() {
  bool ok = true;
  std::string detail;
  for (double H3 : {1.0, 2.0 / 3.0, 0.5, 0.25}) {
    const auto t0 = Clock::now();
    ScanSpec spec;
    spec.H3 = H3;
    std::array<int, 5> counts{};
    bool consistent = true, inclusion = true;
    try {
      const RegionGrid g = label_regions(scan_plane(spec));
      for (const auto& p : g.points) {
        ++counts[p.label];
        if (p.label == 1 && p.verdict != VerdictKind::Unstable) inclusion = false;
        if (p.label == 3 && p.verdict == VerdictKind::Unstable) inclusion = false;
      }
    } catch (const Error& e) {
      consistent = false;
      detail += fmt("H3=%.4g: %s; ", H3, e.what());
    }
    const double dt = seconds_since(t0);
    const bool this_ok = consistent && inclusion && counts[2] > 0 && counts[4] > 0 && dt <= 600.0;
    ok = ok && this_ok;
    detail += fmt("H3=%.4g labels %d/%d/%d/%d in %.0f s; ", H3, counts[1], counts[2], counts[3], counts[4], dt);
  }
  return report(7, ok, detail);
}

bool criterion8() {
  ScanSpec spec;
  spec.H3 = 0.5;
  spec.e1_range.count = 24;
  spec.h2_range.count = 24;
  const std::string a = export_grid(label_regions(scan_plane(spec, 1)), ExportFormat::Csv);
  const std::string b = export_grid(label_regions(scan_plane(spec)), ExportFormat::Csv);
  const std::string c = export_grid(label_regions(scan_plane(spec, 3)), ExportFormat::Csv);
  return report(8, a == b && b == c, fmt("three 24x24 scans, %zu bytes each, identical: %s", a.size(),
                                          a == b && b == c ? "yes" : "no"));
}

}  // namespace

int main(int argc, char** argv) {
  const std::string which = argc > 1 ? argv[1] : "all";
  const bool fast = which == "all" || which == "fast";
  const bool scan = which == "all" || which == "scan";
  if (!fast && !scan) {
    std::fprintf(stderr, "usage: %s [all|fast|scan]\n", argv[0]);
    return 2;
  }
  bool ok = true;
  try {
    if (fast) {
      RootAudit audit;
      ok = criterion1() && ok;
      ok = criterion2() && ok;
      ok = criterion3() && ok;
      ok = criterion4() && ok;
      ok = criterion5(audit) && ok;
      ok = criterion6() && ok;
    }
    if (scan) ok = criterion7() && ok;
    if (fast) ok = criterion8() && ok;
  } catch (const std::exception& e) {
    std::printf("[FAIL] unexpected error: %s\n", e.what());
    return 1;
  }
  return ok ? 0 : 1;
}
