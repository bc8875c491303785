#include "pvstab/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "pvstab/energy.hpp"
#include "pvstab/io.hpp"
#include "pvstab/error.hpp"

namespace pvstab {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

VerdictKind parse_verdict(const std::string& s) {
  for (VerdictKind k : {VerdictKind::Unstable, VerdictKind::NoGrowingMode, VerdictKind::SufficientlyStable})
    if (s == to_string(k)) return k;
  throw Error(ErrorKind::InvalidInput, "unknown verdict '" + s + "'");
}

AxisRange range_from(const nlohmann::json& j) {
  return {j.at("lo").get<double>(), j.at("hi").get<double>(), j.at("count").get<int>()};
}

}  // namespace

void validate_scan_spec(const ScanSpec& s) {
  auto bad = [](const std::string& m) { throw Error(ErrorKind::InvalidInput, m); };
  if (!(std::isfinite(s.H3) && s.H3 > 0.0)) bad("H3 must be positive and finite");
  if (!(s.epsilon > 0.0 && s.epsilon < 1.0)) throw Error(ErrorKind::EpsilonOutOfRange, "epsilon must lie in (0, 1)");
  for (const AxisRange* r : {&s.e1_range, &s.h2_range}) {
    if (r->count < 2) bad("grid point counts must be at least 2");
    if (!std::isfinite(r->lo) || !std::isfinite(r->hi)) bad("grid ranges must be finite");
  }
  if (!(s.psi_step > 0.0 && std::isfinite(s.psi_step))) bad("psi step must be positive");
  if (!(s.tol.growth > 0.0 && s.tol.residual > 0.0 && s.tol.branch > 0.0)) bad("tolerances must be positive");
}

EquilibriumState grid_state(const ScanSpec& spec, double E1, double Hv2) {
  return make_pcase_state(E1, Hv2, spec.H3, 0.0, spec.epsilon);
}

RegionGrid scan_plane(const ScanSpec& spec, unsigned threads) {
  validate_scan_spec(spec);
  RegionGrid g;
  g.spec = spec;
  const std::size_t n = std::size_t(g.nx()) * g.ny();
  g.points.assign(n, GridPoint{});
  const std::vector<double> psi = psi_scan_order(spec.psi_step);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      const int i = int(k % g.nx()), j = int(k / g.nx());
      const Verdict v = classify_point(grid_state(spec, g.E1(i), g.Hv2(j)), psi, spec.tol);
      g.points[k].verdict = v.kind;
      g.points[k].max_growth_rate = v.max_growth_rate;
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = unsigned(std::min<std::size_t>(threads, n));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return g;
}

int region_label(double E1, double Hv2, double H3, VerdictKind verdict, const RootTolerances& tol) {
  const double e = E1 * E1, h = Hv2 * Hv2;
  const bool unstable = verdict == VerdictKind::Unstable;
  if (e > h) {
    // Growth rates vanish like sqrt(e - h); points within the neutral band are not checked.
    if (!unstable && e - h > tol.growth * tol.growth * 100.0) {
      throw Error(ErrorKind::ConsistencyViolation,
                  "E1 = " + num(E1) + ", Hv2 = " + num(Hv2) + " satisfies E1^2 > Hv2^2 but is not unstable");
    }
    return 1;
  }
  if (h > 0.0 && e < static_threshold(Hv2, H3)) {
    if (unstable) {
      throw Error(ErrorKind::ConsistencyViolation,
                  "E1 = " + num(E1) + ", Hv2 = " + num(Hv2) + " satisfies the stability bound but is unstable");
    }
    return 3;
  }
  return unstable ? 4 : 2;
}

RegionGrid label_regions(RegionGrid g) {
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      GridPoint& p = g.at(i, j);
      p.label = region_label(g.E1(i), g.Hv2(j), g.spec.H3, p.verdict, g.spec.tol);
    }
  return g;
}

ExportFormat parse_export_format(std::string_view name) {
  if (name == "csv") return ExportFormat::Csv;
  if (name == "json") return ExportFormat::Json;
  if (name == "plotscript" || name == "gnuplot") return ExportFormat::PlotScript;
  throw Error(ErrorKind::InvalidInput, "unknown export format '" + std::string(name) + "'");
}

namespace {

std::string to_csv(const RegionGrid& g) {
  std::string out = "E1,H2,verdict,label,max_growth_rate\n";
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const GridPoint& p = g.at(i, j);
      out += num(g.E1(i)) + ',' + num(g.Hv2(j)) + ',' + std::string(to_string(p.verdict)) + ',' +
             std::to_string(p.label) + ',' + num(p.max_growth_rate) + '\n';
    }
  return out;
}

std::string to_json(const RegionGrid& g) {
  nlohmann::json pts = nlohmann::json::array();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const GridPoint& p = g.at(i, j);
      pts.push_back({{"E1", g.E1(i)},
                     {"H2", g.Hv2(j)},
                     {"verdict", to_string(p.verdict)},
                     {"label", p.label},
                     {"max_growth_rate", p.max_growth_rate}});
    }
  nlohmann::json doc = {{"schema", "pv-scan/1"}, {"spec", scan_spec_to_json(g.spec)}, {"points", pts}};
  return doc.dump(1) + "\n";
}

std::string to_plotscript(const RegionGrid& g) {
  const ScanSpec& s = g.spec;
  std::ostringstream os;
  os << "# pv-scan/1 region map\n"
     << "# H3 = " << num(s.H3) << ", epsilon = " << num(s.epsilon) << ", psi_step = " << num(s.psi_step) << '\n'
     << "# E1 in [" << num(s.e1_range.lo) << ", " << num(s.e1_range.hi) << "] x " << s.e1_range.count
     << ", H2 in [" << num(s.h2_range.lo) << ", " << num(s.h2_range.hi) << "] x " << s.h2_range.count << '\n'
     << "# regions: 1 anins (unstable), 2 stable, 3 sufficient stability bound, 4 unstable\n"
     << "set title \"H3 = " << num(s.H3) << "\"\n"
     << "set xlabel \"E1\"\nset ylabel \"H2\"\n"
     << "set xrange [" << num(std::min(s.e1_range.lo, s.e1_range.hi)) << ":"
     << num(std::max(s.e1_range.lo, s.e1_range.hi)) << "]\n"
     << "set yrange [" << num(std::min(s.h2_range.lo, s.h2_range.hi)) << ":"
     << num(std::max(s.h2_range.lo, s.h2_range.hi)) << "]\n"
     << "set cbrange [0.5:4.5]\n"
     << "set palette maxcolors 4\n"
     << "set palette defined (1 \"#d7301f\", 2 \"#fdd49e\", 3 \"#4393c3\", 4 \"#fc8d59\")\n"
     << "set cbtics (\"1\" 1, \"2\" 2, \"3\" 3, \"4\" 4)\n"
     << "$regions << EOD\n";
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) os << num(g.E1(i)) << ' ' << num(g.Hv2(j)) << ' ' << g.at(i, j).label << '\n';
    os << '\n';
  }
  os << "EOD\n"
     << "plot $regions using 1:2:3 with image notitle\n";
  return os.str();
}

}  // namespace

std::string export_grid(const RegionGrid& g, ExportFormat format) {
  if (g.points.size() != std::size_t(g.nx()) * g.ny())
    throw Error(ErrorKind::InvalidInput, "grid point count does not match its spec");
  switch (format) {
    case ExportFormat::Csv: return to_csv(g);
    case ExportFormat::Json: return to_json(g);
    case ExportFormat::PlotScript: return to_plotscript(g);
  }
  return {};
}

RegionGrid grid_from_json(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    if (doc.at("schema").get<std::string>() != "pv-scan/1")
      throw Error(ErrorKind::InvalidInput, "unsupported schema");
    RegionGrid g;
    const auto& s = doc.at("spec");
    g.spec.H3 = s.at("H3").get<double>();
    g.spec.epsilon = s.at("epsilon").get<double>();
    g.spec.e1_range = range_from(s.at("e1_range"));
    g.spec.h2_range = range_from(s.at("h2_range"));
    g.spec.psi_step = s.at("psi_step").get<double>();
    g.spec.tol.growth = s.at("tolerances").at("growth").get<double>();
    g.spec.tol.residual = s.at("tolerances").at("residual").get<double>();
    g.spec.tol.branch = s.at("tolerances").at("branch").get<double>();
    validate_scan_spec(g.spec);
    const auto& pts = doc.at("points");
    if (pts.size() != std::size_t(g.nx()) * g.ny())
      throw Error(ErrorKind::InvalidInput, "point count does not match the grid");
    for (const auto& p : pts) {
      g.points.push_back({parse_verdict(p.at("verdict").get<std::string>()), p.at("label").get<int>(),
                          p.at("max_growth_rate").get<double>()});
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, e.what());
  }
}

}  // namespace pvstab
