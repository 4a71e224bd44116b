#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ostwave/io.hpp"
#include "ostwave/model.hpp"

namespace ostwave {

// Run-wide knobs shared by the command-line tools. INI format, sections
// and keys listed in docs/FORMATS.md; unknown keys are rejected so typos
// surface as ConfigError instead of silently running with defaults.
struct RunConfig {
  ModelParams model;

  int n_modes = 64;

  double newton_tol = 1e-10;
  int max_iter = 50;

  // parameter sweep of the stability map
  std::vector<double> k_values = {0.08, 0.1, 0.3, 0.6, 1.0};
  std::vector<double> p_values = {2.5e-5, 1e-4, 4e-4, 1e-3, 2.5e-3};

  // Floquet exponent grid for the spectral curves
  double xi_min = 1e-3;
  double xi_max = 1e-1;
  int xi_count = 9;           // log-spaced
  double window_radius = 0.0; // 0 = automatic

  std::filesystem::path out_dir = "out";
  bool write_svg = true;

  std::filesystem::path cache_dir = "cache";
  WaveCache::Policy cache_policy = WaveCache::Policy::Off;

  int jobs = 1;
  bool force = false;

  std::vector<double> xi_grid() const;  // the log-spaced grid

  // stable textual form; equal configs produce byte-identical strings
  std::string canonical() const;
  std::string config_hash() const;  // fnv1a64 of canonical(), hex
};

RunConfig parse_config_file(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin);

}  // namespace ostwave
