#include "ostwave/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ostwave/errors.hpp"
#include "ostwave/io.hpp"
#include "ostwave/version.hpp"

namespace ostwave {

namespace {

Regime regime_from_string(const std::string& s) {
  if (s == "StrictlyHyperbolic") return Regime::StrictlyHyperbolic;
  if (s == "Elliptic") return Regime::Elliptic;
  if (s == "Degenerate") return Regime::Degenerate;
  throw ConfigError("unknown regime label '" + s + "'");
}

nlohmann::json cplx_to_json(const cplx& z) {
  return nlohmann::json::array({z.real(), z.imag()});
}

cplx cplx_from_json(const nlohmann::json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

nlohmann::json pair_to_json(const std::array<cplx, 2>& a) {
  return nlohmann::json::array({cplx_to_json(a[0]), cplx_to_json(a[1])});
}

std::array<cplx, 2> pair_from_json(const nlohmann::json& j) {
  return {cplx_from_json(j.at(0)), cplx_from_json(j.at(1))};
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

int StabilityReport::count(Regime r) const {
  return static_cast<int>(std::count_if(
      records.begin(), records.end(),
      [r](const StabilityRecord& rec) { return rec.whitham_regime == r; }));
}

bool StabilityReport::all_pass() const {
  return std::all_of(records.begin(), records.end(),
                     [](const StabilityRecord& r) { return r.pass; });
}

nlohmann::json report_to_json(const StabilityReport& r) {
  nlohmann::json recs = nlohmann::json::array();
  for (const StabilityRecord& rec : r.records) {
    recs.push_back({
        {"k", rec.k},
        {"P", rec.P},
        {"c", rec.c},
        {"whitham", {{rec.whitham(0, 0), rec.whitham(0, 1)},
                     {rec.whitham(1, 0), rec.whitham(1, 1)}}},
        {"whitham_eigs", pair_to_json(rec.whitham_eigs)},
        {"whitham_regime", to_string(rec.whitham_regime)},
        {"modulation_eigs", pair_to_json(rec.modulation_eigs)},
        {"modulation_regime", to_string(rec.modulation_regime)},
        {"link_residual", rec.link_residual},
        {"link_row2", {rec.link_row2[0], rec.link_row2[1]}},
        {"slopes", pair_to_json(rec.slopes)},
        {"slope_error", rec.slope_error},
        {"max_re", rec.max_re},
        {"xi_isolated", rec.xi_isolated},
        {"regimes_agree", rec.regimes_agree},
        {"pass", rec.pass},
        {"note", rec.note},
    });
  }
  return {
      {"format_version", kFormatVersion},
      {"code_version", r.code_version.empty() ? kCodeVersion : r.code_version},
      {"config_hash", r.config_hash},
      {"model", {{"gamma", r.params.gamma}, {"beta", r.params.beta}}},
      {"n_modes", r.n_modes},
      {"link_tol", r.link_tol},
      {"slope_tol", r.slope_tol},
      {"records", std::move(recs)},
  };
}

StabilityReport report_from_json(const nlohmann::json& j) {
  const int version = j.at("format_version").get<int>();
  if (version != kFormatVersion)
    throw ConfigError("report format_version " + std::to_string(version) +
                      " not supported (expected " + std::to_string(kFormatVersion) + ")");
  StabilityReport r;
  r.format_version = version;
  r.code_version = j.at("code_version").get<std::string>();
  r.config_hash = j.at("config_hash").get<std::string>();
  r.params.gamma = j.at("model").at("gamma").get<double>();
  r.params.beta = j.at("model").at("beta").get<double>();
  r.n_modes = j.at("n_modes").get<int>();
  r.link_tol = j.at("link_tol").get<double>();
  r.slope_tol = j.at("slope_tol").get<double>();
  for (const nlohmann::json& rec : j.at("records")) {
    StabilityRecord s;
    s.k = rec.at("k").get<double>();
    s.P = rec.at("P").get<double>();
    s.c = rec.at("c").get<double>();
    const nlohmann::json& w = rec.at("whitham");
    s.whitham << w.at(0).at(0).get<double>(), w.at(0).at(1).get<double>(),
        w.at(1).at(0).get<double>(), w.at(1).at(1).get<double>();
    s.whitham_eigs = pair_from_json(rec.at("whitham_eigs"));
    s.whitham_regime = regime_from_string(rec.at("whitham_regime").get<std::string>());
    s.modulation_eigs = pair_from_json(rec.at("modulation_eigs"));
    s.modulation_regime =
        regime_from_string(rec.at("modulation_regime").get<std::string>());
    s.link_residual = rec.at("link_residual").get<double>();
    s.link_row2 = {rec.at("link_row2").at(0).get<double>(),
                   rec.at("link_row2").at(1).get<double>()};
    s.slopes = pair_from_json(rec.at("slopes"));
    s.slope_error = rec.at("slope_error").get<double>();
    s.max_re = rec.at("max_re").get<double>();
    s.xi_isolated = rec.at("xi_isolated").get<double>();
    s.regimes_agree = rec.at("regimes_agree").get<bool>();
    s.pass = rec.at("pass").get<bool>();
    s.note = rec.at("note").get<std::string>();
    r.records.push_back(std::move(s));
  }
  return r;
}

void write_whitham_csv(const std::filesystem::path& path,
                       const std::vector<WhithamMatrix>& rows) {
  std::ofstream out = open_for_write(path);
  out << "gamma,beta,k,P,c,W11,W12,W21,W22,re_l1,im_l1,re_l2,im_l2,classification\n";
  for (const WhithamMatrix& m : rows) {
    out << fmt_g17(m.wave.params.gamma) << ',' << fmt_g17(m.wave.params.beta) << ','
        << fmt_g17(m.wave.k) << ',' << fmt_g17(m.wave.P) << ',' << fmt_g17(m.wave.c)
        << ',' << fmt_g17(m.entries(0, 0)) << ',' << fmt_g17(m.entries(0, 1)) << ','
        << fmt_g17(m.entries(1, 0)) << ',' << fmt_g17(m.entries(1, 1)) << ','
        << fmt_g17(m.eigenvalues[0].real()) << ',' << fmt_g17(m.eigenvalues[0].imag())
        << ',' << fmt_g17(m.eigenvalues[1].real()) << ','
        << fmt_g17(m.eigenvalues[1].imag()) << ','
        << to_string(m.classification.regime) << '\n';
  }
}

void write_bloch_csv(const std::filesystem::path& path,
                     const SpectralCurves& curves) {
  std::ofstream out = open_for_write(path);
  out << "xi,re_l1,im_l1,re_l2,im_l2\n";
  for (std::size_t i = 0; i < curves.xi.size(); ++i) {
    out << fmt_g17(curves.xi[i]) << ',' << fmt_g17(curves.lambda[0][i].real()) << ','
        << fmt_g17(curves.lambda[0][i].imag()) << ','
        << fmt_g17(curves.lambda[1][i].real()) << ','
        << fmt_g17(curves.lambda[1][i].imag()) << '\n';
  }
}

void write_report_csv(const std::filesystem::path& path,
                      const StabilityReport& report) {
  std::ofstream out = open_for_write(path);
  out << "k,P,c,whitham_regime,modulation_regime,link_residual,"
         "slope_error,max_re,xi_isolated,pass\n";
  for (const StabilityRecord& r : report.records) {
    out << fmt_g17(r.k) << ',' << fmt_g17(r.P) << ',' << fmt_g17(r.c) << ','
        << to_string(r.whitham_regime) << ',' << to_string(r.modulation_regime) << ','
        << fmt_g17(r.link_residual) << ',' << fmt_g17(r.slope_error) << ','
        << fmt_g17(r.max_re) << ',' << fmt_g17(r.xi_isolated) << ','
        << (r.pass ? "1" : "0") << '\n';
  }
}

std::string render_table(const StabilityReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line,
                "%-8s %-10s %-12s %-20s %-10s %-10s %-5s\n", "k", "P", "c",
                "regime", "link", "slope_err", "ok");
  out << line;
  for (const StabilityRecord& r : report.records) {
    std::snprintf(line, sizeof line,
                  "%-8.4g %-10.4g %-12.6g %-20s %-10.2e %-10.2e %-5s\n", r.k,
                  r.P, r.c, to_string(r.whitham_regime), r.link_residual,
                  r.slope_error, r.pass ? "yes" : "NO");
    out << line;
    if (!r.note.empty()) out << "    note: " << r.note << '\n';
  }
  std::snprintf(line, sizeof line,
                "%d waves: %d hyperbolic, %d elliptic, %d degenerate; %s\n",
                static_cast<int>(report.records.size()),
                report.count(Regime::StrictlyHyperbolic),
                report.count(Regime::Elliptic), report.count(Regime::Degenerate),
                report.all_pass() ? "all checks pass" : "CHECK FAILURES");
  out << line;
  return out.str();
}

namespace {

constexpr int kSvgW = 720;
constexpr int kSvgH = 480;
constexpr int kMargin = 56;

// maps [lo, hi] onto the drawable band, y flipped
struct AxisMap {
  double lo, hi;
  double pixel(double v, bool vertical) const {
    const double span = hi > lo ? hi - lo : 1.0;
    const double t = (v - lo) / span;
    if (vertical) return kSvgH - kMargin - t * (kSvgH - 2 * kMargin);
    return kMargin + t * (kSvgW - 2 * kMargin);
  }
};

std::string polyline(const std::vector<double>& x, const std::vector<double>& y,
                     const AxisMap& ax, const AxisMap& ay, const char* color) {
  std::ostringstream s;
  s << "<polyline fill=\"none\" stroke=\"" << color
    << "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s << ' ';
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f,%.2f", ax.pixel(x[i], false),
                  ay.pixel(y[i], true));
    s << buf;
  }
  s << "\"/>\n";
  return s.str();
}

void svg_header(std::ostream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSvgW
      << "\" height=\"" << kSvgH << "\" viewBox=\"0 0 " << kSvgW << ' ' << kSvgH
      << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kSvgW / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"monospace\" font-size=\"14\">" << title << "</text>\n";
}

void svg_axes(std::ostream& out, const AxisMap& ax, const AxisMap& ay,
              const std::string& xlabel, const std::string& ylabel) {
  out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
      << kSvgW - 2 * kMargin << "\" height=\"" << kSvgH - 2 * kMargin
      << "\" fill=\"none\" stroke=\"#888\"/>\n";
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<text x=\"%d\" y=\"%d\" text-anchor=\"middle\" "
                "font-family=\"monospace\" font-size=\"12\">%s</text>\n",
                kSvgW / 2, kSvgH - 12, xlabel.c_str());
  out << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"14\" y=\"%d\" text-anchor=\"middle\" "
                "font-family=\"monospace\" font-size=\"12\" "
                "transform=\"rotate(-90 14 %d)\">%s</text>\n",
                kSvgH / 2, kSvgH / 2, ylabel.c_str());
  out << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%d\" y=\"%d\" font-family=\"monospace\" "
                "font-size=\"10\">[%.3g, %.3g] x [%.3g, %.3g]</text>\n",
                kMargin, kMargin - 8, ax.lo, ax.hi, ay.lo, ay.hi);
  out << buf;
}

AxisMap fit(const std::vector<double>& v) {
  double lo = v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
  double hi = v.empty() ? 1.0 : *std::max_element(v.begin(), v.end());
  if (hi - lo < 1e-300) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

}  // namespace

void write_svg_curves(const std::filesystem::path& path,
                      const SpectralCurves& curves, const std::string& title) {
  std::ofstream out = open_for_write(path);
  std::vector<double> re0, im0, re1, im1;
  for (std::size_t i = 0; i < curves.xi.size(); ++i) {
    re0.push_back(curves.lambda[0][i].real());
    im0.push_back(curves.lambda[0][i].imag());
    re1.push_back(curves.lambda[1][i].real());
    im1.push_back(curves.lambda[1][i].imag());
  }
  std::vector<double> all = re0;
  all.insert(all.end(), im0.begin(), im0.end());
  all.insert(all.end(), re1.begin(), re1.end());
  all.insert(all.end(), im1.begin(), im1.end());
  const AxisMap ax = fit(curves.xi);
  const AxisMap ay = fit(all);
  svg_header(out, title);
  svg_axes(out, ax, ay, "xi", "lambda");
  if (ay.lo < 0.0 && ay.hi > 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%d\" y1=\"%.2f\" x2=\"%d\" y2=\"%.2f\" "
                  "stroke=\"#ccc\" stroke-dasharray=\"4 3\"/>\n",
                  kMargin, ay.pixel(0.0, true), kSvgW - kMargin,
                  ay.pixel(0.0, true));
    out << buf;
  }
  out << polyline(curves.xi, re0, ax, ay, "#c0392b")
      << polyline(curves.xi, re1, ax, ay, "#e67e22")
      << polyline(curves.xi, im0, ax, ay, "#2980b9")
      << polyline(curves.xi, im1, ax, ay, "#27ae60");
  out << "<text x=\"" << kSvgW - kMargin << "\" y=\"" << kMargin + 14
      << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">"
      << "re: red/orange, im: blue/green</text>\n";
  out << "</svg>\n";
}

void write_svg_map(const std::filesystem::path& path,
                   const StabilityReport& report) {
  std::ofstream out = open_for_write(path);
  std::vector<double> ks, logps;
  for (const StabilityRecord& r : report.records) {
    ks.push_back(r.k);
    logps.push_back(std::log10(r.P));
  }
  const AxisMap ax = fit(ks);
  const AxisMap ay = fit(logps);
  svg_header(out, "modulation regime over (k, log10 P)");
  svg_axes(out, ax, ay, "k", "log10 P");
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const StabilityRecord& r = report.records[i];
    const char* fill = r.whitham_regime == Regime::StrictlyHyperbolic ? "#2980b9"
                       : r.whitham_regime == Regime::Elliptic         ? "#c0392b"
                                                                      : "#7f8c8d";
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"6\" fill=\"%s\" "
                  "stroke=\"%s\" stroke-width=\"2\"/>\n",
                  ax.pixel(ks[i], false), ay.pixel(logps[i], true), fill,
                  r.pass ? "#2c3e50" : "#f1c40f");
    out << buf;
  }
  out << "<text x=\"" << kSvgW - kMargin << "\" y=\"" << kMargin + 14
      << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">"
      << "blue: hyperbolic, red: elliptic; yellow ring: failed check</text>\n";
  out << "</svg>\n";
}

}  // namespace ostwave
