#include "ostwave/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ostwave/errors.hpp"

namespace ostwave {

namespace {

std::string trim(std::string_view s) {
  const auto* ws = " \t\r";
  const size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const size_t e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& v, const std::string& where) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(where + ": cannot parse '" + v + "' as a number");
  }
}

int parse_int(const std::string& v, const std::string& where) {
  int x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError(where + ": cannot parse '" + v + "' as an integer");
  return x;
}

bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(where + ": cannot parse '" + v + "' as a boolean");
}

std::vector<double> parse_list(const std::string& v, const std::string& where) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(item, where));
  }
  if (out.empty()) throw ConfigError(where + ": empty list");
  return out;
}

}  // namespace

std::vector<double> RunConfig::xi_grid() const {
  if (!(xi_min > 0.0) || !(xi_max >= xi_min) || xi_count < 1)
    throw ConfigError("xi grid: need 0 < xi_min <= xi_max and xi_count >= 1");
  std::vector<double> grid;
  grid.reserve(static_cast<size_t>(xi_count));
  if (xi_count == 1) {
    grid.push_back(xi_min);
    return grid;
  }
  const double step = std::log(xi_max / xi_min) / (xi_count - 1);
  for (int i = 0; i < xi_count; ++i)
    grid.push_back(xi_min * std::exp(step * i));
  grid.back() = xi_max;
  return grid;
}

std::string RunConfig::canonical() const {
  std::string s;
  auto put = [&s](const char* key, const std::string& v) {
    s += key;
    s += '=';
    s += v;
    s += '\n';
  };
  auto put_list = [&](const char* key, const std::vector<double>& vs) {
    std::string joined;
    for (size_t i = 0; i < vs.size(); ++i) {
      if (i) joined += ',';
      joined += fmt_g17(vs[i]);
    }
    put(key, joined);
  };
  put("model.gamma", fmt_g17(model.gamma));
  put("model.beta", fmt_g17(model.beta));
  put("grid.n_modes", std::to_string(n_modes));
  put("solver.newton_tol", fmt_g17(newton_tol));
  put("solver.max_iter", std::to_string(max_iter));
  put_list("sweep.k_values", k_values);
  put_list("sweep.p_values", p_values);
  put("xi.min", fmt_g17(xi_min));
  put("xi.max", fmt_g17(xi_max));
  put("xi.count", std::to_string(xi_count));
  put("xi.window_radius", fmt_g17(window_radius));
  put("output.dir", out_dir.string());
  put("output.svg", write_svg ? "true" : "false");
  put("cache.dir", cache_dir.string());
  put("cache.policy", [this] {
    switch (cache_policy) {
      case WaveCache::Policy::Off: return "off";
      case WaveCache::Policy::Read: return "read";
      case WaveCache::Policy::Write: return "write";
      case WaveCache::Policy::ReadWrite: return "readwrite";
    }
    return "off";
  }());
  put("run.jobs", std::to_string(jobs));
  put("run.force", force ? "true" : "false");
  return s;
}

std::string RunConfig::config_hash() const {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical())));
  return buf;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;

  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = origin + ":" + std::to_string(lineno);

    const size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      std::transform(section.begin(), section.end(), section.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected key = value");
    std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    const std::string full = section + "." + key;

    if (full == "model.gamma") cfg.model.gamma = parse_double(value, where);
    else if (full == "model.beta") cfg.model.beta = parse_double(value, where);
    else if (full == "grid.n_modes") cfg.n_modes = parse_int(value, where);
    else if (full == "solver.newton_tol") cfg.newton_tol = parse_double(value, where);
    else if (full == "solver.max_iter") cfg.max_iter = parse_int(value, where);
    else if (full == "sweep.k_values") cfg.k_values = parse_list(value, where);
    else if (full == "sweep.p_values") cfg.p_values = parse_list(value, where);
    else if (full == "xi.min") cfg.xi_min = parse_double(value, where);
    else if (full == "xi.max") cfg.xi_max = parse_double(value, where);
    else if (full == "xi.count") cfg.xi_count = parse_int(value, where);
    else if (full == "xi.window_radius") cfg.window_radius = parse_double(value, where);
    else if (full == "output.dir") cfg.out_dir = value;
    else if (full == "output.svg") cfg.write_svg = parse_bool(value, where);
    else if (full == "cache.dir") cfg.cache_dir = value;
    else if (full == "cache.policy") cfg.cache_policy = WaveCache::parse_policy(value);
    else if (full == "run.jobs") cfg.jobs = parse_int(value, where);
    else if (full == "run.force") cfg.force = parse_bool(value, where);
    else throw ConfigError(where + ": unknown key '" + full + "'");
  }

  cfg.model.validate();
  if (cfg.n_modes < 4) throw ConfigError(origin + ": n_modes must be at least 4");
  if (cfg.jobs < 1) throw ConfigError(origin + ": jobs must be positive");
  if (!(cfg.newton_tol > 0.0)) throw ConfigError(origin + ": newton_tol must be positive");
  return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.filename().string());
}

}  // namespace ostwave
