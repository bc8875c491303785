#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pvstab/spectral.hpp"

namespace pvstab {

struct AxisRange {
  double lo = 0.0, hi = 2.0;
  int count = 100;

  double at(int i) const { return lo + double(i) * (hi - lo) / double(count - 1); }
  bool operator==(const AxisRange&) const = default;
};

struct ScanSpec {
  double H3 = 1.0;
  double epsilon = 1e-6;
  AxisRange e1_range;
  AxisRange h2_range;
  double psi_step = 1e-2;
  RootTolerances tol;

  bool operator==(const ScanSpec& o) const {
    return H3 == o.H3 && epsilon == o.epsilon && e1_range == o.e1_range && h2_range == o.h2_range &&
           psi_step == o.psi_step && tol.growth == o.tol.growth && tol.residual == o.tol.residual &&
           tol.branch == o.tol.branch;
  }
};

// Throws InvalidInput.
void validate_scan_spec(const ScanSpec& spec);

struct GridPoint {
  VerdictKind verdict = VerdictKind::NoGrowingMode;
  int label = 0;
  double max_growth_rate = 0.0;
  bool operator==(const GridPoint&) const = default;
};

// Row-major over (Hv2, E1) with E1 fastest.
struct RegionGrid {
  ScanSpec spec;
  std::vector<GridPoint> points;

  int nx() const { return spec.e1_range.count; }
  int ny() const { return spec.h2_range.count; }
  double E1(int i) const { return spec.e1_range.at(i); }
  double Hv2(int j) const { return spec.h2_range.at(j); }
  GridPoint& at(int i, int j) { return points[std::size_t(j) * nx() + i]; }
  const GridPoint& at(int i, int j) const { return points[std::size_t(j) * nx() + i]; }
  bool operator==(const RegionGrid& o) const { return spec == o.spec && points == o.points; }
};

EquilibriumState grid_state(const ScanSpec& spec, double E1, double Hv2);

// threads = 0 uses the hardware concurrency. Labels are left at 0.
RegionGrid scan_plane(const ScanSpec& spec, unsigned threads = 0);

// Region id for one point; throws ConsistencyViolation.
int region_label(double E1, double Hv2, double H3, VerdictKind verdict, const RootTolerances& tol = {});

RegionGrid label_regions(RegionGrid grid);

enum class ExportFormat { Csv, Json, PlotScript };

ExportFormat parse_export_format(std::string_view name);

std::string export_grid(const RegionGrid& grid, ExportFormat format);

// Inverse of the JSON export; throws InvalidInput.
RegionGrid grid_from_json(const std::string& text);

}  // namespace pvstab
