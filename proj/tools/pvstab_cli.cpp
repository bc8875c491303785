// pvstab: stability checks, normal-mode roots and parameter-plane scans
// for a planar plasma-vacuum interface.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pvstab/energy.hpp"
#include "pvstab/error.hpp"
#include "pvstab/io.hpp"
#include "pvstab/scan.hpp"
#include "pvstab/spectral.hpp"
#include "pvstab/state.hpp"

using nlohmann::json;
using namespace pvstab;

namespace {

constexpr const char* kStateSchema = R"(state JSON (keys exactly; rho, a optional, default 1):
  {"p": 1, "v": [v1, v2, v3], "H": [0, H2, H3], "S": 0,
   "Hv": [0, Hv2, Hv3], "E": [E1, E2?, E3?] or E1,
   "kappa": k <= 0, "epsilon": 0 < e < 1, "rho": 1, "a": 1}
E2 and E3 may be omitted or null; they are set to epsilon*kappa*Hv3 and -epsilon*kappa*Hv2.)";

constexpr const char* kConfigSchema = R"(config JSON (all keys optional; command-line flags take precedence):
  {"H3": 1, "epsilon": 1e-6, "grid": "100x100", "e1_range": [0, 2], "h2_range": [0, 2],
   "psi_step": 0.01, "psi": 0, "format": "csv", "threads": 0,
   "tolerances": {"growth": 1e-8, "residual": 1e-9, "branch": 1e-8}})";

struct Options {
  std::string config_path;
  std::string in_path, state_text, out_path;
  bool json_stdout = false;
  unsigned threads = 0;
  double psi = 0.0;
  std::string variant = "auto";
  double H3 = 1.0, epsilon = 1e-6, psi_step = 1e-2;
  std::string grid = "100x100", e1_range = "0:2", h2_range = "0:2", format = "csv";
  double growth = 1e-8, residual = 1e-9, branch = 1e-8;
};

int fail(int code, const std::string& msg) {
  std::cerr << "pvstab: " << msg << '\n';
  return code;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::UnsupportedCase:
    case ErrorKind::CollinearFields:
    case ErrorKind::NotPCase: return 1;
    case ErrorKind::ConsistencyViolation: return 3;
    default: return 2;
  }
}

std::pair<double, double> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw Error(ErrorKind::InvalidInput, "range must look like lo:hi");
  try {
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidInput, "range must look like lo:hi");
  }
}

std::pair<int, int> parse_grid(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw Error(ErrorKind::InvalidInput, "grid must look like NxM");
  try {
    return {std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidInput, "grid must look like NxM");
  }
}

EquilibriumState load_state(const Options& o) {
  if (o.in_path.empty() == o.state_text.empty())
    throw Error(ErrorKind::InvalidInput, "give exactly one of --in or --state");
  const std::string text = o.in_path.empty() ? o.state_text : read_file(o.in_path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("state is not valid JSON: ") + e.what());
  }
  return validate_equilibrium(state_from_json(j));
}

void emit(const Options& o, const std::string& text) {
  if (o.out_path.empty()) std::cout << text;
  else write_atomic(o.out_path, text);
}

json tolerances_json(const Options& o) {
  return {{"growth", o.growth}, {"residual", o.residual}, {"branch", o.branch}};
}

RootTolerances tolerances(const Options& o) { return {o.growth, o.residual, o.branch}; }

int run_check(const Options& o) {
  const EquilibriumState s = load_state(o);
  const StabilityReport r = check_sufficient_stability(s);
  json out = report_to_json(r);
  out["case"] = to_string(classify_case(s));
  out["state"] = state_to_json(s);
  emit(o, out.dump(2) + "\n");
  return r.verdict == Sufficiency::Inapplicable ? 1 : 0;
}

DeterminantVariant pick_variant(const std::string& name, const EquilibriumState& s) {
  if (name == "auto") return default_variant(s);
  if (name == "general") return DeterminantVariant::StaticGeneralAngle;
  if (name == "pcase2d") return DeterminantVariant::PCase2D;
  if (name == "h2zero") return DeterminantVariant::H2hatZero;
  throw Error(ErrorKind::InvalidInput, "unknown variant '" + name + "'");
}

int run_roots(const Options& o) {
  const EquilibriumState s = load_state(o);
  const ModeProblem p = make_mode_problem(s, o.psi, pick_variant(o.variant, s));
  json roots = json::array();
  for (const ModeRoot& r : find_unstable_roots(p, tolerances(o))) roots.push_back(root_to_json(r));
  json out = {{"variant", to_string(p.variant)},
              {"psi", p.psi},
              {"config", {{"tolerances", tolerances_json(o)}}},
              {"state", state_to_json(s)},
              {"roots", roots}};
  emit(o, out.dump(2) + "\n");
  return 0;
}

int run_dump(const Options& o) {
  const EquilibriumState s = load_state(o);
  json out = matrices_to_json(s);
  out["state"] = state_to_json(s);
  emit(o, out.dump(2) + "\n");
  return 0;
}

int run_scan(const Options& o) {
  ScanSpec spec;
  spec.H3 = o.H3;
  spec.epsilon = o.epsilon;
  spec.psi_step = o.psi_step;
  spec.tol = tolerances(o);
  const auto [nx, ny] = parse_grid(o.grid);
  const auto [e_lo, e_hi] = parse_range(o.e1_range);
  const auto [h_lo, h_hi] = parse_range(o.h2_range);
  spec.e1_range = {e_lo, e_hi, nx};
  spec.h2_range = {h_lo, h_hi, ny};
  validate_scan_spec(spec);
  const ExportFormat format = parse_export_format(o.format);

  const RegionGrid grid = label_regions(scan_plane(spec, o.threads));
  const std::string doc = export_grid(grid, format);
  json config = scan_spec_to_json(spec);
  config["format"] = o.format;
  config["threads"] = o.threads;

  if (o.out_path.empty()) {
    std::cout << doc;
  } else {
    write_atomic(o.out_path, doc);
    if (format == ExportFormat::Csv) write_atomic(o.out_path + ".meta.json", config.dump(2) + "\n");
  }
  int counts[5] = {0, 0, 0, 0, 0};
  for (const GridPoint& p : grid.points) ++counts[p.label];
  json summary = {{"config", config},
                  {"out", o.out_path.empty() ? json(nullptr) : json(o.out_path)},
                  {"labels", {{"1", counts[1]}, {"2", counts[2]}, {"3", counts[3]}, {"4", counts[4]}}}};
  if (o.json_stdout) std::cerr << summary.dump(2) << '\n';
  else if (!o.out_path.empty())
    std::cerr << "wrote " << o.out_path << ": labels 1/2/3/4 = " << counts[1] << '/' << counts[2] << '/'
              << counts[3] << '/' << counts[4] << '\n';
  return 0;
}

// Fills options not given on the command line from the config file.
void apply_config(Options& o, const CLI::App& app) {
  if (o.config_path.empty()) return;
  json c;
  try {
    c = json::parse(read_file(o.config_path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("config is not valid JSON: ") + e.what());
  }
  if (!c.is_object()) throw Error(ErrorKind::InvalidInput, "config must be a JSON object");
  auto given = [&](const char* flag) {
    auto has = [&](const CLI::App* a) {
      const CLI::Option* opt = a->get_option_no_throw(flag);
      return opt != nullptr && opt->count() > 0;
    };
    for (const CLI::App* sub : app.get_subcommands())
      if (has(sub)) return true;
    return has(&app);
  };
  auto range_text = [](const json& v) {
    if (!v.is_array() || v.size() != 2) throw Error(ErrorKind::InvalidInput, "config ranges must be [lo, hi]");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g:%.17g", v[0].get<double>(), v[1].get<double>());
    return std::string(buf);
  };
  try {
    for (const auto& [key, v] : c.items()) {
      if (key == "H3") { if (!given("--H3")) o.H3 = v.get<double>(); }
      else if (key == "epsilon") { if (!given("--epsilon")) o.epsilon = v.get<double>(); }
      else if (key == "psi_step") { if (!given("--psi-step")) o.psi_step = v.get<double>(); }
      else if (key == "psi") { if (!given("--psi")) o.psi = v.get<double>(); }
      else if (key == "grid") { if (!given("--grid")) o.grid = v.get<std::string>(); }
      else if (key == "e1_range") { if (!given("--e1-range")) o.e1_range = range_text(v); }
      else if (key == "h2_range") { if (!given("--h2-range")) o.h2_range = range_text(v); }
      else if (key == "format") { if (!given("--format")) o.format = v.get<std::string>(); }
      else if (key == "threads") { if (!given("--threads")) o.threads = v.get<unsigned>(); }
      else if (key == "tolerances") {
        for (const auto& [tk, tv] : v.items()) {
          if (tk == "growth") { if (!given("--growth-tol")) o.growth = tv.get<double>(); }
          else if (tk == "residual") { if (!given("--residual-tol")) o.residual = tv.get<double>(); }
          else if (tk == "branch") { if (!given("--branch-tol")) o.branch = tv.get<double>(); }
          else throw Error(ErrorKind::InvalidInput, "unknown tolerance '" + tk + "'");
        }
      } else {
        throw Error(ErrorKind::InvalidInput, "unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("bad config value: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Planar plasma-vacuum interface stability toolkit"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
  auto* threads_opt = app.add_option("--threads", o.threads, "worker threads (0: all cores)");
  app.footer(std::string(kStateSchema) + "\n\n" + kConfigSchema);

  auto add_state_io = [&](CLI::App* sub) {
    sub->add_option("--in", o.in_path, "state JSON file")->check(CLI::ExistingFile);
    sub->add_option("--state", o.state_text, "inline state JSON");
    sub->add_option("--out", o.out_path, "output file (written atomically)");
    sub->add_flag("--json", o.json_stdout, "machine-readable output");
  };
  auto add_tolerances = [&](CLI::App* sub) {
    sub->add_option("--growth-tol", o.growth, "growth-rate threshold for Re tau");
    sub->add_option("--residual-tol", o.residual, "relative residual threshold");
    sub->add_option("--branch-tol", o.branch, "margin for Re xi < 0");
  };

  auto* check = app.add_subcommand("check-stability", "sufficient stability verdict from the energy method");
  add_state_io(check);

  auto* roots = app.add_subcommand("roots", "growing normal modes at one wave angle");
  add_state_io(roots);
  roots->add_option("--psi", o.psi, "wave-vector angle");
  roots->add_option("--variant", o.variant, "auto, general, pcase2d or h2zero");
  add_tolerances(roots);

  auto* dump = app.add_subcommand("dump-matrices", "all system matrices for a state");
  add_state_io(dump);

  auto* scan = app.add_subcommand("scan", "region map over the (E1, Hv2) plane");
  scan->add_option("--H3", o.H3, "plasma field H3");
  scan->add_option("--epsilon", o.epsilon, "light-speed ratio");
  scan->add_option("--grid", o.grid, "points NxM along E1 and Hv2");
  scan->add_option("--e1-range", o.e1_range, "E1 range lo:hi");
  scan->add_option("--h2-range", o.h2_range, "Hv2 range lo:hi");
  scan->add_option("--psi-step", o.psi_step, "wave-angle step");
  scan->add_option("--format", o.format, "csv, json or plotscript");
  scan->add_option("--out", o.out_path, "output file (written atomically)");
  scan->add_flag("--json", o.json_stdout, "machine-readable summary on stderr");
  add_tolerances(scan);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "pvstab: " << e.what() << "\n\n" << app.help() << '\n';
    return 2;
  }

  try {
    apply_config(o, app);
    if (threads_opt->count() == 0 && o.threads == 0) {
      if (const char* env = std::getenv("PV_STAB_THREADS")) {
        try {
          o.threads = unsigned(std::stoul(env));
        } catch (const std::exception&) {
          throw Error(ErrorKind::InvalidInput, "PV_STAB_THREADS must be a non-negative integer");
        }
      }
    }
    if (check->parsed()) return run_check(o);
    if (roots->parsed()) return run_roots(o);
    if (dump->parsed()) return run_dump(o);
    return run_scan(o);
  } catch (const Error& e) {
    const int code = exit_code(e.kind());
    if (e.kind() == ErrorKind::InvalidInput) std::cerr << kStateSchema << "\n";
    return fail(code, e.what());
  }
}
