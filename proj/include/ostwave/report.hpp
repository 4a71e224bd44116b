#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ostwave/bloch.hpp"
#include "ostwave/whitham.hpp"

namespace ostwave {

// One row of the stability map: everything the verification pipeline
// established about the wave at (k, P).
struct StabilityRecord {
  double k = 0.0;
  double P = 0.0;
  double c = 0.0;

  Eigen::Matrix2d whitham = Eigen::Matrix2d::Zero();
  std::array<cplx, 2> whitham_eigs{};
  Regime whitham_regime = Regime::Degenerate;

  std::array<cplx, 2> modulation_eigs{};
  Regime modulation_regime = Regime::Degenerate;

  double link_residual = 0.0;
  std::array<double, 2> link_row2{};

  std::array<cplx, 2> slopes{};  // extrapolated spectral branch slopes
  double slope_error = 0.0;      // vs modulation eigenvalues, relative
  double max_re = 0.0;           // over the xi grid, both branches
  double xi_isolated = 0.0;

  bool regimes_agree = false;
  bool pass = false;
  std::string note;  // failure detail when a record could not be completed
};

struct StabilityReport {
  ModelParams params;
  int n_modes = 0;
  double link_tol = 1e-6;
  double slope_tol = 1e-4;

  std::string config_hash;
  std::string code_version;
  int format_version = 0;

  std::vector<StabilityRecord> records;

  int count(Regime r) const;
  bool all_pass() const;
};

nlohmann::json report_to_json(const StabilityReport& r);
StabilityReport report_from_json(const nlohmann::json& j);

// CSV layouts are documented in docs/FORMATS.md; all numbers are %.17g.
void write_whitham_csv(const std::filesystem::path& path,
                       const std::vector<WhithamMatrix>& rows);
void write_bloch_csv(const std::filesystem::path& path,
                     const SpectralCurves& curves);
void write_report_csv(const std::filesystem::path& path,
                      const StabilityReport& report);

std::string render_table(const StabilityReport& report);

// Self-contained SVG charts (no external stylesheets).
void write_svg_curves(const std::filesystem::path& path,
                      const SpectralCurves& curves, const std::string& title);
void write_svg_map(const std::filesystem::path& path,
                   const StabilityReport& report);

}  // namespace ostwave
