#include "ostwave/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "ostwave/errors.hpp"
#include "ostwave/version.hpp"

namespace ostwave {

namespace {

using nlohmann::json;

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw CacheInvalid(std::string("missing numeric field '") + key + "'");
  return j.at(key).get<double>();
}

}  // namespace

json field_to_json(const SpectralField& f) {
  // +0.0, so a loaded-and-resaved field is byte-identical to the original
  const auto canon = [](double x) { return x == 0.0 ? 0.0 : x; };
  json coeffs = json::array();
  for (int n = -f.n_modes(); n <= f.n_modes(); ++n) {
    const cplx c = f.coeff(n);
    coeffs.push_back(json::array({canon(c.real()), canon(c.imag())}));
  }
  return json{{"n_modes", f.n_modes()}, {"coeffs", std::move(coeffs)}};
}

SpectralField field_from_json(const json& j) {
  if (!j.contains("n_modes") || !j.contains("coeffs"))
    throw CacheInvalid("field entry lacks n_modes/coeffs");
  const int n = j.at("n_modes").get<int>();
  const auto& coeffs = j.at("coeffs");
  if (!coeffs.is_array() || static_cast<int>(coeffs.size()) != 2 * n + 1)
    throw CacheInvalid("field coefficient table has the wrong length");
  std::vector<cplx> c;
  c.reserve(coeffs.size());
  for (const auto& e : coeffs) {
    if (!e.is_array() || e.size() != 2)
      throw CacheInvalid("field coefficient is not a [re, im] pair");
    c.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return SpectralField::from_coeffs(PeriodicGrid(n), c);
}

json wave_to_json(const TravelingWave& w) {
  return json{{"format_version", kFormatVersion},
              {"gamma", w.params.gamma},
              {"beta", w.params.beta},
              {"k", w.k},
              {"P", w.P},
              {"c", w.c},
              {"residual_norm", w.residual_norm},
              {"phi", field_to_json(w.phi)}};
}

TravelingWave wave_from_json(const json& j) {
  const int version = j.contains("format_version")
                          ? j.at("format_version").get<int>()
                          : -1;
  if (version != kFormatVersion)
    throw CacheInvalid("unsupported format_version " + std::to_string(version));
  if (!j.contains("phi")) throw CacheInvalid("wave entry lacks phi");
  return TravelingWave{
      ModelParams{require_number(j, "gamma"), require_number(j, "beta")},
      require_number(j, "k"),
      require_number(j, "P"),
      require_number(j, "c"),
      field_from_json(j.at("phi")),
      require_number(j, "residual_norm")};
}

void save_wave(const TravelingWave& w, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << wave_to_json(w).dump(2) << '\n';
  if (!out) throw Error("short write to " + path.string());
}

TravelingWave load_wave(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw CacheInvalid(path.string() + ": " + e.what());
  }
  return wave_from_json(j);
}

std::string fmt_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_g12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

WaveCache::WaveCache(std::filesystem::path dir, Policy policy)
    : dir_(std::move(dir)), policy_(policy) {}

WaveCache::Policy WaveCache::parse_policy(const std::string& name) {
  if (name == "off") return Policy::Off;
  if (name == "read") return Policy::Read;
  if (name == "write") return Policy::Write;
  if (name == "readwrite" || name == "read-write") return Policy::ReadWrite;
  throw ConfigError("unknown cache policy '" + name +
                    "' (off|read|write|readwrite)");
}

WaveCache WaveCache::from_env(std::filesystem::path dir, Policy policy) {
  if (const char* env = std::getenv("OSTWAVE_CACHE_DIR"); env && *env)
    dir = env;
  return WaveCache(std::move(dir), policy);
}

std::string WaveCache::key_of(const ModelParams& p, double k, double P,
                              int n_modes, double newton_tol) {
  return "gamma=" + fmt_g12(p.gamma) + ";beta=" + fmt_g12(p.beta) +
         ";k=" + fmt_g12(k) + ";P=" + fmt_g12(P) +
         ";n=" + std::to_string(n_modes) + ";tol=" + fmt_g12(newton_tol);
}

std::filesystem::path WaveCache::entry_path(const std::string& key) const {
  char name[32];
  std::snprintf(name, sizeof name, "wave-%016llx.json",
                static_cast<unsigned long long>(fnv1a64(key)));
  return dir_ / name;
}

std::optional<TravelingWave> WaveCache::load(const ModelParams& p, double k,
                                             double P, int n_modes,
                                             double newton_tol) const {
  if (policy_ != Policy::Read && policy_ != Policy::ReadWrite) return {};
  const std::string key = key_of(p, k, P, n_modes, newton_tol);
  const std::filesystem::path path = entry_path(key);
  if (!std::filesystem::exists(path)) return {};

  std::ifstream in(path);
  if (!in) throw CacheInvalid("cache entry unreadable: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw CacheInvalid(path.string() + ": " + e.what());
  }
  if (!j.contains("cache_key") || !j.at("cache_key").is_string())
    throw CacheInvalid(path.string() + ": entry lacks its cache_key");
  if (j.at("cache_key").get<std::string>() != key) return {};  // collision
  return wave_from_json(j);
}

void WaveCache::store(const TravelingWave& w, double newton_tol) const {
  if (policy_ != Policy::Write && policy_ != Policy::ReadWrite) return;
  const std::string key =
      key_of(w.params, w.k, w.P, w.phi.n_modes(), newton_tol);
  std::filesystem::create_directories(dir_);
  nlohmann::json j = wave_to_json(w);
  j["cache_key"] = key;
  const std::filesystem::path path = entry_path(key);
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw Error("short write to " + path.string());
}

}  // namespace ostwave
