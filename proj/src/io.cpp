#include "pvstab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <unistd.h>

#include "pvstab/error.hpp"
#include "pvstab/matrices.hpp"

namespace pvstab {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& m) { throw Error(ErrorKind::InvalidInput, m); }

double number(const json& j, const char* key) {
  if (!j.contains(key)) invalid(std::string("missing key '") + key + "'");
  if (!j.at(key).is_number()) invalid(std::string("'") + key + "' must be a number");
  return j.at(key).get<double>();
}

Eigen::Vector3d vec3(const json& j, const char* key) {
  if (!j.contains(key)) invalid(std::string("missing key '") + key + "'");
  const json& a = j.at(key);
  if (!a.is_array() || a.size() != 3) invalid(std::string("'") + key + "' must be an array of 3 numbers");
  Eigen::Vector3d v;
  for (int i = 0; i < 3; ++i) {
    if (!a[i].is_number()) invalid(std::string("'") + key + "' must be an array of 3 numbers");
    v(i) = a[i].get<double>();
  }
  return v;
}

template <typename M>
json rows(const M& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    out.push_back(row);
  }
  return out;
}

json cplx(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

}  // namespace

EquilibriumState state_from_json(const json& j) {
  if (!j.is_object()) invalid("state must be a JSON object");
  static const std::set<std::string> keys{"p", "v", "H", "Hv", "E", "S", "kappa", "epsilon", "rho", "a"};
  for (const auto& [k, _] : j.items())
    if (!keys.count(k)) invalid("unknown key '" + k + "'");

  EquilibriumState s;
  s.p = number(j, "p");
  s.v = vec3(j, "v");
  s.H = vec3(j, "H");
  s.Hv = vec3(j, "Hv");
  s.S = number(j, "S");
  s.kappa = number(j, "kappa");
  s.epsilon = number(j, "epsilon");
  if (j.contains("rho")) s.rho = number(j, "rho");
  if (j.contains("a")) s.a = number(j, "a");

  if (!j.contains("E")) invalid("missing key 'E'");
  const json& e = j.at("E");
  const double ek = s.epsilon * s.kappa;
  s.E = {0.0, ek * s.Hv.z() + 0.0, -ek * s.Hv.y() + 0.0};
  if (e.is_number()) {
    s.E.x() = e.get<double>();
  } else if (e.is_array() && !e.empty() && e.size() <= 3 && e[0].is_number()) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i].is_null()) continue;
      if (!e[i].is_number()) invalid("'E' entries must be numbers or null");
      s.E(Eigen::Index(i)) = e[i].get<double>();
    }
  } else {
    invalid("'E' must be a number or an array [E1, E2?, E3?]");
  }
  return s;
}

json state_to_json(const EquilibriumState& s) {
  auto v3 = [](const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); };
  return {{"p", s.p},   {"v", v3(s.v)},         {"H", v3(s.H)},           {"Hv", v3(s.Hv)},
          {"E", v3(s.E)}, {"S", s.S},           {"kappa", s.kappa},       {"epsilon", s.epsilon},
          {"rho", s.rho}, {"a", s.a}};
}

json report_to_json(const StabilityReport& r) {
  json out = {{"verdict", to_string(r.verdict)}, {"witness", r.witness}};
  out["min_eig"] = r.min_eig ? json(*r.min_eig) : json(nullptr);
  if (r.inequalities) {
    out["inequalities"] = json::array();
    for (double m : *r.inequalities) out["inequalities"].push_back(m);
  } else {
    out["inequalities"] = nullptr;
  }
  if (r.static_margin) out["static_margin"] = *r.static_margin;
  return out;
}

json root_to_json(const ModeRoot& r) {
  return {{"tau", cplx(r.tau)},
          {"xi_p", cplx(r.xi_p)},
          {"xi_v", cplx(r.xi_v)},
          {"residual", cplx(r.residual)},
          {"relative_residual", r.relative_residual}};
}

json matrices_to_json(const EquilibriumState& s) {
  const auto pm = build_plasma_matrices<double>(s);
  const auto vm = build_vacuum_matrices<double>(s);
  const auto sm = build_secondary_symmetrizer<double>(s.epsilon * s.v);
  const auto bm = build_boundary_matrix<double>(s.kappa, 0.0, 0.0, s.epsilon);
  json out;
  out["A0"] = rows(pm.A0);
  for (int j = 0; j < 3; ++j) {
    const std::string n = std::to_string(j + 1);
    out["A" + n] = rows(pm.A[j]);
    out["A" + n + "_hat"] = rows(pm.A_hat[j]);
    out["B" + n] = rows(vm.B[j]);
    out["SB" + n] = rows(sm.SB[j]);
  }
  out["B1_hat"] = rows(vm.B1_hat);
  out["SB0"] = rows(sm.SB0);
  out["nu"] = json::array({sm.nu.x(), sm.nu.y(), sm.nu.z()});
  out["boundary"] = {{"dt_phi", bm.dt_phi},
                     {"d2_phi", bm.d2_phi},
                     {"d3_phi", bm.d3_phi},
                     {"matrix", rows(bm.Bfrak)},
                     {"eigenvalues", bm.eigenvalues}};
  return out;
}

json scan_spec_to_json(const ScanSpec& s) {
  auto range = [](const AxisRange& r) { return json{{"lo", r.lo}, {"hi", r.hi}, {"count", r.count}}; };
  return {{"H3", s.H3},
          {"epsilon", s.epsilon},
          {"e1_range", range(s.e1_range)},
          {"h2_range", range(s.h2_range)},
          {"psi_step", s.psi_step},
          {"tolerances", {{"growth", s.tol.growth}, {"residual", s.tol.residual}, {"branch", s.tol.branch}}}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IOError, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IOError, "cannot open '" + tmp + "' for writing");
    out.write(content.data(), std::streamsize(content.size()));
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw Error(ErrorKind::IOError, "write to '" + tmp + "' failed");
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error(ErrorKind::IOError, "cannot rename '" + tmp + "' to '" + path + "'");
  }
}

}  // namespace pvstab
