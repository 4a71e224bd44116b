// Command-line front end. Exit codes: 0 all checks pass, 1 numeric check
// failure, 2 configuration or IO error.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ostwave/bloch.hpp"
#include "ostwave/config.hpp"
#include "ostwave/errors.hpp"
#include "ostwave/io.hpp"
#include "ostwave/report.hpp"
#include "ostwave/version.hpp"
#include "ostwave/whitham.hpp"

namespace ow = ostwave;

namespace {

struct FlagOverrides {
  std::optional<std::string> config_path;
  std::optional<double> gamma, beta;
  std::optional<int> modes, jobs;
  std::optional<std::string> out_dir, cache_dir, cache_policy;
  std::optional<double> newton_tol;
  bool force = false;
  bool no_svg = false;
};

ow::RunConfig effective_config(const FlagOverrides& f) {
  ow::RunConfig cfg;
  if (f.config_path) cfg = ow::parse_config_file(*f.config_path);
  if (f.gamma) cfg.model.gamma = *f.gamma;
  if (f.beta) cfg.model.beta = *f.beta;
  if (f.modes) cfg.n_modes = *f.modes;
  if (f.jobs) cfg.jobs = *f.jobs;
  if (f.out_dir) cfg.out_dir = *f.out_dir;
  if (f.cache_dir) cfg.cache_dir = *f.cache_dir;
  if (f.cache_policy) cfg.cache_policy = ow::WaveCache::parse_policy(*f.cache_policy);
  if (f.newton_tol) cfg.newton_tol = *f.newton_tol;
  if (f.force) cfg.force = true;
  if (f.no_svg) cfg.write_svg = false;
  cfg.model.validate();
  if (cfg.n_modes < 4) throw ow::ConfigError("n_modes must be at least 4");
  if (cfg.jobs < 1) throw ow::ConfigError("jobs must be at least 1");
  return cfg;
}

ow::SolverOptions solver_options(const ow::RunConfig& cfg) {
  return {cfg.newton_tol, cfg.max_iter};
}

ow::TravelingWave solve_cached(const ow::RunConfig& cfg, const ow::WaveCache& cache,
                               double k, double P) {
  const bool may_read = !cfg.force && (cache.policy() == ow::WaveCache::Policy::Read ||
                                       cache.policy() == ow::WaveCache::Policy::ReadWrite);
  if (may_read) {
    if (auto hit = cache.load(cfg.model, k, P, cfg.n_modes, cfg.newton_tol)) {
      std::fprintf(stderr, "[cache] hit  k=%s P=%s\n", ow::fmt_g12(k).c_str(),
                   ow::fmt_g12(P).c_str());
      return *hit;
    }
  }
  ow::TravelingWave w = ow::solve_wave(cfg.model, k, P,
                                       ow::PeriodicGrid(cfg.n_modes),
                                       solver_options(cfg));
  std::fprintf(stderr, "[solve] done k=%s P=%s residual=%.3e\n",
               ow::fmt_g12(k).c_str(), ow::fmt_g12(P).c_str(), w.residual_norm);
  if (cache.policy() == ow::WaveCache::Policy::Write ||
      cache.policy() == ow::WaveCache::Policy::ReadWrite)
    cache.store(w, cfg.newton_tol);
  return w;
}

std::string point_tag(double k, double P) {
  std::string tag = "k" + ow::fmt_g12(k) + "_P" + ow::fmt_g12(P);
  for (char& ch : tag)
    if (ch == '+' || ch == '.') ch = ch == '+' ? 'p' : '_';
  return tag;
}

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::filesystem::create_directories(path.parent_path());
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw ow::ConfigError("cannot open '" + path.string() + "' for writing");
  std::fwrite(body.data(), 1, body.size(), f);
  std::fclose(f);
}

nlohmann::json pair_json(const std::array<ow::cplx, 2>& a) {
  return {{a[0].real(), a[0].imag()}, {a[1].real(), a[1].imag()}};
}

// ---- subcommands -----------------------------------------------------------

int cmd_stokes_criterion(const ow::RunConfig& cfg, double k_min, double k_max,
                         int samples) {
  if (!(k_min > 0.0) || !(k_max > k_min) || samples < 2)
    throw ow::ConfigError("stokes-criterion needs 0 < k-min < k-max and samples >= 2");
  std::string csv = "k,lighthill_product,regime,crossing\n";
  double prev = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double k = k_min + (k_max - k_min) * i / (samples - 1);
    const double li = ow::stokes_lighthill(cfg.model, k);
    const bool crossing = i > 0 && std::signbit(li) != std::signbit(prev);
    csv += ow::fmt_g17(k) + ',' + ow::fmt_g17(li) + ',';
    csv += li > 0 ? "StrictlyHyperbolic" : (li < 0 ? "Elliptic" : "Degenerate");
    csv += crossing ? ",1\n" : ",0\n";
    prev = li;
  }
  write_text(cfg.out_dir / "stokes_criterion.csv", csv);
  std::cout << csv;
  if (cfg.model.beta > 0.0) {
    const double kc = ow::critical_frequency(cfg.model);
    std::cerr << "# sign change of omega0'' * omega2 at k_c = " << ow::fmt_g17(kc)
              << '\n';
  }
  return 0;
}

int cmd_solve(const ow::RunConfig& cfg, const ow::WaveCache& cache, double k,
              double P) {
  const ow::TravelingWave w = solve_cached(cfg, cache, k, P);
  const std::filesystem::path path = cfg.out_dir / ("wave_" + point_tag(k, P) + ".json");
  ow::save_wave(w, path);
  nlohmann::json summary = {
      {"format_version", ow::kFormatVersion},
      {"k", w.k},
      {"P", w.P},
      {"c", w.c},
      {"residual_norm", w.residual_norm},
      {"n_modes", w.phi.grid().n_modes()},
      {"file", path.string()},
  };
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int cmd_family(const ow::RunConfig& cfg, const ow::WaveCache& cache, double k,
               double P, int steps) {
  if (steps < 1) throw ow::ConfigError("family needs steps >= 1");
  std::string csv = "step,k,P,c,a1,residual_norm\n";
  ow::TravelingWave w = solve_cached(cfg, cache, k, P / steps);
  for (int i = 1; i <= steps; ++i) {
    const double target = P * i / steps;
    if (i > 1) w = ow::continue_family(w, k, target, 1, solver_options(cfg));
    csv += std::to_string(i) + ',' + ow::fmt_g17(w.k) + ',' + ow::fmt_g17(w.P) +
           ',' + ow::fmt_g17(w.c) + ',' + ow::fmt_g17(w.phi.cosine_coeff(1)) +
           ',' + ow::fmt_g17(w.residual_norm) + '\n';
  }
  write_text(cfg.out_dir / ("family_" + point_tag(k, P) + ".csv"), csv);
  std::cout << csv;
  return 0;
}

int cmd_whitham(const ow::RunConfig& cfg, const ow::WaveCache& cache,
                std::optional<double> k, std::optional<double> P) {
  if (k.has_value() != P.has_value())
    throw ow::ConfigError("whitham needs both --k and --P, or neither for a sweep");
  std::vector<ow::WhithamMatrix> rows;
  if (k) {
    rows.push_back(ow::whitham_matrix(solve_cached(cfg, cache, *k, *P)));
  } else {
    for (double kv : cfg.k_values)
      for (double pv : cfg.p_values)
        rows.push_back(ow::whitham_matrix(solve_cached(cfg, cache, kv, pv)));
  }
  ow::write_whitham_csv(cfg.out_dir / "whitham_map.csv", rows);
  if (k) {
    const ow::WhithamMatrix& m = rows.front();
    nlohmann::json j = {
        {"format_version", ow::kFormatVersion},
        {"k", m.wave.k},
        {"P", m.wave.P},
        {"c", m.wave.c},
        {"W", {{m.entries(0, 0), m.entries(0, 1)}, {m.entries(1, 0), m.entries(1, 1)}}},
        {"eigenvalues", pair_json(m.eigenvalues)},
        {"classification", ow::to_string(m.classification.regime)},
    };
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << rows.size() << " waves written to "
              << (cfg.out_dir / "whitham_map.csv").string() << '\n';
  }
  return 0;
}

int cmd_bloch(const ow::RunConfig& cfg, const ow::WaveCache& cache, double k,
              double P) {
  const ow::TravelingWave w = solve_cached(cfg, cache, k, P);
  const ow::WaveJet jet = ow::parameter_jet(w, solver_options(cfg));
  const ow::ModulationMatrix m0 = ow::modulation_matrix(w, jet);
  const ow::SpectralCurves curves =
      ow::spectral_curves(w, cfg.xi_grid(), cfg.window_radius);
  const std::string tag = point_tag(k, P);
  ow::write_bloch_csv(cfg.out_dir / ("bloch_" + tag + ".csv"), curves);
  if (cfg.write_svg)
    ow::write_svg_curves(cfg.out_dir / ("bloch_" + tag + ".svg"), curves,
                         "spectral branches at " + tag);
  nlohmann::json j = {
      {"format_version", ow::kFormatVersion},
      {"mu1", {curves.slopes[0].real(), curves.slopes[0].imag()}},
      {"mu2", {curves.slopes[1].real(), curves.slopes[1].imag()}},
      {"max_re_in_window", curves.max_re},
      {"xi_isolated", curves.xi_isolated},
      {"classification", ow::to_string(m0.classification.regime)},
  };
  write_text(cfg.out_dir / ("bloch_" + tag + ".json"), j.dump(2) + "\n");
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_verify(const ow::RunConfig& cfg, const ow::WaveCache& cache, double k,
               double P, double link_tol) {
  const ow::TravelingWave w = solve_cached(cfg, cache, k, P);
  const ow::WaveJet jet = ow::parameter_jet(w, solver_options(cfg));
  const ow::WhithamMatrix W = ow::whitham_matrix(w, jet);
  const ow::ModulationMatrix m0 = ow::modulation_matrix(w, jet);
  const ow::LinkReport link = ow::verify_whitham_link(W, m0, w, link_tol);
  nlohmann::json j = {
      {"format_version", ow::kFormatVersion},
      {"k", k},
      {"P", P},
      {"residual", link.residual},
      {"row2_residuals", {link.row2_residuals[0], link.row2_residuals[1]}},
      {"pass", link.pass},
  };
  write_text(cfg.out_dir / ("verify_" + point_tag(k, P) + ".json"), j.dump(2) + "\n");
  std::cout << j.dump(2) << '\n';
  return link.pass ? 0 : 1;
}

struct RecordSlot {
  ow::StabilityRecord record;
  std::optional<ow::WhithamMatrix> whitham;
  std::optional<ow::SpectralCurves> curves;
};

RecordSlot build_record(const ow::RunConfig& cfg, const ow::WaveCache& cache,
                        double k, double P, double link_tol, double slope_tol) {
  RecordSlot slot;
  ow::StabilityRecord& r = slot.record;
  r.k = k;
  r.P = P;
  const ow::TravelingWave w = solve_cached(cfg, cache, k, P);
  r.c = w.c;
  const ow::WaveJet jet = ow::parameter_jet(w, solver_options(cfg));
  const ow::WhithamMatrix W = ow::whitham_matrix(w, jet);
  const ow::ModulationMatrix m0 = ow::modulation_matrix(w, jet);
  const ow::LinkReport link = ow::verify_whitham_link(W, m0, w, link_tol);
  r.whitham = W.entries;
  r.whitham_eigs = W.eigenvalues;
  r.whitham_regime = W.classification.regime;
  r.modulation_eigs = m0.eigenvalues;
  r.modulation_regime = m0.classification.regime;
  r.link_residual = link.residual;
  r.link_row2 = link.row2_residuals;
  r.slopes = ow::richardson_slopes(w);
  double scale = std::max(
      {1.0, std::abs(m0.eigenvalues[0]), std::abs(m0.eigenvalues[1])});
  const double direct = std::max(std::abs(r.slopes[0] - m0.eigenvalues[0]),
                                 std::abs(r.slopes[1] - m0.eigenvalues[1]));
  const double swapped = std::max(std::abs(r.slopes[0] - m0.eigenvalues[1]),
                                  std::abs(r.slopes[1] - m0.eigenvalues[0]));
  r.slope_error = std::min(direct, swapped) / scale;
  const ow::SpectralCurves curves =
      ow::spectral_curves(w, cfg.xi_grid(), cfg.window_radius);
  r.max_re = curves.max_re;
  r.xi_isolated = curves.xi_isolated;
  r.regimes_agree = W.classification.regime == m0.classification.regime;
  r.pass = link.pass && r.slope_error <= slope_tol && r.regimes_agree;
  slot.whitham = W;
  slot.curves = curves;
  return slot;
}

int cmd_report(const ow::RunConfig& cfg, const ow::WaveCache& cache,
               double link_tol, double slope_tol) {
  struct Task {
    double k, P;
  };
  std::vector<Task> tasks;
  for (double k : cfg.k_values)
    for (double P : cfg.p_values) tasks.push_back({k, P});

  std::vector<RecordSlot> slots(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        slots[i] = build_record(cfg, cache, tasks[i].k, tasks[i].P, link_tol,
                                slope_tol);
      } catch (const std::exception& e) {
        slots[i].record.k = tasks[i].k;
        slots[i].record.P = tasks[i].P;
        slots[i].record.pass = false;
        slots[i].record.note = e.what();
      }
    }
  };
  const int n_workers = std::min<int>(cfg.jobs, static_cast<int>(tasks.size()));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  ow::StabilityReport report;
  report.params = cfg.model;
  report.n_modes = cfg.n_modes;
  report.link_tol = link_tol;
  report.slope_tol = slope_tol;
  report.config_hash = cfg.config_hash();
  report.code_version = ow::kCodeVersion;
  report.format_version = ow::kFormatVersion;
  std::vector<ow::WhithamMatrix> map_rows;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    report.records.push_back(slots[i].record);
    if (slots[i].whitham) map_rows.push_back(*slots[i].whitham);
    if (slots[i].curves && cfg.write_svg) {
      const std::string tag = point_tag(tasks[i].k, tasks[i].P);
      ow::write_svg_curves(cfg.out_dir / "curves" / ("bloch_" + tag + ".svg"),
                           *slots[i].curves, "spectral branches at " + tag);
    }
  }
  write_text(cfg.out_dir / "report.json", ow::report_to_json(report).dump(2) + "\n");
  ow::write_report_csv(cfg.out_dir / "report.csv", report);
  ow::write_whitham_csv(cfg.out_dir / "whitham_map.csv", map_rows);
  if (cfg.write_svg) ow::write_svg_map(cfg.out_dir / "classification_map.svg", report);
  std::cout << ow::render_table(report);
  return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"periodic traveling waves of a rotating shallow-water model: "
               "solver, modulation matrices, Floquet-Bloch spectrum"};
  app.require_subcommand(1);

  FlagOverrides flags;
  app.add_option("--config", flags.config_path, "INI config file")
      ->check(CLI::ExistingFile);
  app.add_option("--out", flags.out_dir, "output directory");
  app.add_option("--modes", flags.modes, "Fourier modes N");
  app.add_option("--jobs", flags.jobs, "worker threads for sweeps");
  app.add_option("--gamma", flags.gamma, "rotation coefficient");
  app.add_option("--beta", flags.beta, "dispersion coefficient");
  app.add_option("--newton-tol", flags.newton_tol, "solver residual tolerance");
  app.add_option("--cache-dir", flags.cache_dir, "wave cache directory");
  app.add_option("--cache-policy", flags.cache_policy,
                 "off | read | write | read-write");
  app.add_flag("--force", flags.force, "ignore cache hits, re-solve");
  app.add_flag("--no-svg", flags.no_svg, "skip SVG chart emission");

  double k = 0.0, P = 0.0;
  double k_min = 0.05, k_max = 0.3;
  int samples = 51, steps = 8;
  double link_tol = 1e-6, slope_tol = 1e-4;

  CLI::App* sc = app.add_subcommand(
      "stokes-criterion", "small-amplitude regime test over a k range");
  sc->add_option("--k-min", k_min, "left end of the k range");
  sc->add_option("--k-max", k_max, "right end of the k range");
  sc->add_option("--samples", samples, "number of k samples");

  CLI::App* solve = app.add_subcommand("solve", "solve one wave at (k, P)");
  solve->add_option("--k", k, "frequency parameter")->required();
  solve->add_option("--P", P, "momentum")->required();

  CLI::App* family = app.add_subcommand(
      "family", "continuation family at fixed k up to momentum P");
  family->add_option("--k", k, "frequency parameter")->required();
  family->add_option("--P", P, "final momentum")->required();
  family->add_option("--steps", steps, "continuation rows");

  CLI::App* whitham = app.add_subcommand(
      "whitham", "modulation matrix at (k, P), or CSV sweep without flags");
  std::optional<double> wk, wP;
  whitham->add_option("--k", wk, "frequency parameter");
  whitham->add_option("--P", wP, "momentum");

  CLI::App* bloch = app.add_subcommand(
      "bloch", "spectral branches near the origin at (k, P)");
  bloch->add_option("--k", k, "frequency parameter")->required();
  bloch->add_option("--P", P, "momentum")->required();

  CLI::App* verify = app.add_subcommand(
      "verify", "check W = M0 - cI at (k, P); exit 1 on failure");
  verify->add_option("--k", k, "frequency parameter")->required();
  verify->add_option("--P", P, "momentum")->required();
  verify->add_option("--tol", link_tol, "relative residual tolerance");

  CLI::App* report = app.add_subcommand(
      "report", "stability map over the configured (k, P) sweep");
  report->add_option("--link-tol", link_tol, "identity residual tolerance");
  report->add_option("--slope-tol", slope_tol, "branch slope tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const ow::RunConfig cfg = effective_config(flags);
    const ow::WaveCache cache =
        ow::WaveCache::from_env(cfg.cache_dir, cfg.cache_policy);
    if (sc->parsed()) return cmd_stokes_criterion(cfg, k_min, k_max, samples);
    if (solve->parsed()) return cmd_solve(cfg, cache, k, P);
    if (family->parsed()) return cmd_family(cfg, cache, k, P, steps);
    if (whitham->parsed()) return cmd_whitham(cfg, cache, wk, wP);
    if (bloch->parsed()) return cmd_bloch(cfg, cache, k, P);
    if (verify->parsed()) return cmd_verify(cfg, cache, k, P, link_tol);
    if (report->parsed()) return cmd_report(cfg, cache, link_tol, slope_tol);
  } catch (const ow::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const ow::CacheInvalid& e) {
    std::cerr << "cache error: " << e.what() << '\n';
    return 2;
  } catch (const ow::Error& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
