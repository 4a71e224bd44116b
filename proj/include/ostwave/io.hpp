#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "ostwave/wave.hpp"

namespace ostwave {

// JSON layout is documented in docs/FORMATS.md. All doubles round-trip
// exactly (shortest representation that parses back to the same bits).
nlohmann::json field_to_json(const SpectralField& f);
SpectralField field_from_json(const nlohmann::json& j);

nlohmann::json wave_to_json(const TravelingWave& w);
TravelingWave wave_from_json(const nlohmann::json& j);

void save_wave(const TravelingWave& w, const std::filesystem::path& path);
TravelingWave load_wave(const std::filesystem::path& path);

// Deterministic formatting helpers shared by the CSV and SVG writers.
std::string fmt_g17(double x);  // exact round trip
std::string fmt_g12(double x);  // cache keys and labels

std::uint64_t fnv1a64(std::string_view s);

// Content-addressed store of solved waves, keyed by the rounded tuple
// (gamma, beta, k, P, n_modes, newton_tol). A key mismatch inside an
// existing file is a plain miss (hash collision); unreadable or
// structurally invalid files raise CacheInvalid.
class WaveCache {
 public:
  enum class Policy { Off, Read, Write, ReadWrite };

  WaveCache(std::filesystem::path dir, Policy policy);

  static Policy parse_policy(const std::string& name);  // ConfigError on typo

  // OSTWAVE_CACHE_DIR overrides `dir` when set and nonempty.
  static WaveCache from_env(std::filesystem::path dir, Policy policy);

  static std::string key_of(const ModelParams& p, double k, double P,
                            int n_modes, double newton_tol);

  std::optional<TravelingWave> load(const ModelParams& p, double k, double P,
                                    int n_modes, double newton_tol) const;
  void store(const TravelingWave& w, double newton_tol) const;

  const std::filesystem::path& dir() const { return dir_; }
  Policy policy() const { return policy_; }

 private:
  std::filesystem::path entry_path(const std::string& key) const;

  std::filesystem::path dir_;
  Policy policy_ = Policy::Off;
};

}  // namespace ostwave
