#include "blpc/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "blpc/errors.hpp"
#include "blpc/fileutil.hpp"

namespace blpc {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError("expected a number, got '" + v + "'");
  }
  return out;
}

int to_int(const std::string& v) {
  int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError("expected an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("expected true or false, got '" + v + "'");
}

std::optional<double> to_auto_double(const std::string& v) {
  if (v == "auto") return std::nullopt;
  return to_double(v);
}

// Shortest representation that parses back to the same double.
std::string num(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, p) : std::to_string(v);
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : "auto"; }
const char* flag(bool b) { return b ? "true" : "false"; }

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"method", [](RunConfig& c, const std::string& v) { c.method = parse_dense_method(v); }},
      {"mode", [](RunConfig& c, const std::string& v) { c.mode = parse_run_mode(v); }},
      {"window_size", [](RunConfig& c, const std::string& v) { c.window_size = to_int(v); }},
      {"alpha", [](RunConfig& c, const std::string& v) { c.alpha = to_double(v); }},
      {"s_u", [](RunConfig& c, const std::string& v) { c.s_u = to_int(v); }},
      {"t_p", [](RunConfig& c, const std::string& v) { c.t_p = to_int(v); }},
      {"min_width", [](RunConfig& c, const std::string& v) { c.min_width = to_int(v); }},
      {"min_height", [](RunConfig& c, const std::string& v) { c.min_height = to_int(v); }},
      {"sigma_s1", [](RunConfig& c, const std::string& v) { c.sigma_s1 = to_auto_double(v); }},
      {"sigma_s2", [](RunConfig& c, const std::string& v) { c.sigma_s2 = to_auto_double(v); }},
      {"sigma_r", [](RunConfig& c, const std::string& v) { c.sigma_r = to_double(v); }},
      {"sigma_r2", [](RunConfig& c, const std::string& v) { c.sigma_r2 = to_auto_double(v); }},
      {"slice_m", [](RunConfig& c, const std::string& v) { c.slice_m = to_int(v); }},
      {"ratio_threshold", [](RunConfig& c, const std::string& v) { c.ratio_threshold = to_auto_double(v); }},
      {"lk_window", [](RunConfig& c, const std::string& v) { c.lk_window = to_int(v); }},
      {"lk_min_eigenvalue", [](RunConfig& c, const std::string& v) { c.lk_min_eigenvalue = to_double(v); }},
      {"densify_sigma_spatial",
       [](RunConfig& c, const std::string& v) { c.densify_sigma_spatial = to_auto_double(v); }},
      {"densify_sigma_range", [](RunConfig& c, const std::string& v) { c.densify_sigma_range = to_double(v); }},
      {"densify_neighbours", [](RunConfig& c, const std::string& v) { c.densify_neighbours = to_int(v); }},
      {"degraded_weight", [](RunConfig& c, const std::string& v) { c.degraded_weight = to_double(v); }},
      {"taper", [](RunConfig& c, const std::string& v) { c.taper = to_bool(v); }},
      {"wide_frame2_region", [](RunConfig& c, const std::string& v) { c.wide_frame2_region = to_bool(v); }},
      {"threads", [](RunConfig& c, const std::string& v) { c.threads = to_int(v); }},
      {"nrms_epsilon", [](RunConfig& c, const std::string& v) { c.nrms_epsilon = to_double(v); }},
      {"psnr_per_image_max", [](RunConfig& c, const std::string& v) { c.psnr_per_image_max = to_bool(v); }},
      {"output", [](RunConfig& c, const std::string& v) { c.output = v; }},
      {"viz", [](RunConfig& c, const std::string& v) { c.viz = v; }},
      {"ratio_map", [](RunConfig& c, const std::string& v) { c.ratio_map = v; }},
      {"report_format", [](RunConfig& c, const std::string& v) { c.report_format = v; }},
  };
  return table;
}

}  // namespace

RunMode parse_run_mode(const std::string& name) {
  if (name == "framework") return RunMode::Framework;
  if (name == "dense") return RunMode::Dense;
  throw ConfigError("unknown mode '" + name + "' (expected framework or dense)");
}

const char* to_string(RunMode m) { return m == RunMode::Dense ? "dense" : "framework"; }

BilateralParams RunConfig::bilateral() const {
  BilateralParams p = BilateralParams::defaults_for(window_size);
  if (sigma_s1) p.sigma_s1 = *sigma_s1;
  if (sigma_s2) p.sigma_s2 = *sigma_s2;
  p.sigma_r = sigma_r;
  p.sigma_r2 = sigma_r2;
  p.slice_m = slice_m;
  return p;
}

TriggerPolicy RunConfig::trigger() const {
  TriggerPolicy t;
  t.threshold = ratio_threshold;
  switch (method) {
    case DenseMethod::PC:
      t.mode = TriggerPolicy::Mode::Never;
      break;
    case DenseMethod::BLPC:
      t.mode = TriggerPolicy::Mode::Always;
      break;
    case DenseMethod::Auto:
      t.mode = TriggerPolicy::Mode::Auto;
      break;
  }
  return t;
}

EstimatorOptions RunConfig::estimator() const {
  EstimatorOptions o;
  o.spectral.taper = taper;
  o.wide_frame2_region = wide_frame2_region;
  return o;
}

FrameworkConfig RunConfig::framework() const {
  FrameworkConfig f;
  f.alpha = alpha;
  f.s_u = s_u;
  f.t_p = t_p;
  f.window_size = window_size;
  f.min_width = min_width;
  f.min_height = min_height;
  f.bilateral = bilateral();
  f.trigger = trigger();
  f.estimator = estimator();
  f.lk_window = lk_window;
  f.lk_min_eigenvalue = lk_min_eigenvalue;
  f.densify_sigma_spatial = densify_sigma_spatial.value_or(0.0);
  f.densify_sigma_range = densify_sigma_range;
  f.densify_neighbours = densify_neighbours;
  f.degraded_weight = degraded_weight;
  f.threads = threads;
  return f;
}

void RunConfig::validate() const {
  if (densify_sigma_spatial && !(*densify_sigma_spatial > 0.0)) {
    throw ConfigError("framework config: densify_sigma_spatial must be positive");
  }
  if (threads < 0) throw ConfigError("threads must be >= 0");
  if (!(nrms_epsilon > 0.0)) throw ConfigError("nrms_epsilon must be positive");
  if (report_format != "csv") throw ConfigError("report_format must be csv");
  framework().validate();
}

std::string RunConfig::to_text() const {
  std::ostringstream o;
  o << "# blpcflow run configuration\n"
    << "method = " << to_string(method) << "\n"
    << "mode = " << to_string(mode) << "\n"
    << "window_size = " << window_size << "\n"
    << "\n# keypoints and pyramid\n"
    << "alpha = " << num(alpha) << "\n"
    << "s_u = " << s_u << "\n"
    << "t_p = " << t_p << "\n"
    << "min_width = " << min_width << "\n"
    << "min_height = " << min_height << "\n"
    << "\n# bilateral prefilter\n"
    << "sigma_s1 = " << num(sigma_s1) << "\n"
    << "sigma_s2 = " << num(sigma_s2) << "\n"
    << "sigma_r = " << num(sigma_r) << "\n"
    << "sigma_r2 = " << num(sigma_r2) << "\n"
    << "slice_m = " << slice_m << "\n"
    << "ratio_threshold = " << num(ratio_threshold) << "\n"
    << "taper = " << flag(taper) << "\n"
    << "wide_frame2_region = " << flag(wide_frame2_region) << "\n"
    << "\n# fallback and densification\n"
    << "lk_window = " << lk_window << "\n"
    << "lk_min_eigenvalue = " << num(lk_min_eigenvalue) << "\n"
    << "densify_sigma_spatial = " << num(densify_sigma_spatial) << "\n"
    << "densify_sigma_range = " << num(densify_sigma_range) << "\n"
    << "densify_neighbours = " << densify_neighbours << "\n"
    << "degraded_weight = " << num(degraded_weight) << "\n"
    << "\n# evaluation\n"
    << "nrms_epsilon = " << num(nrms_epsilon) << "\n"
    << "psnr_per_image_max = " << flag(psnr_per_image_max) << "\n"
    << "\n# runtime and outputs\n"
    << "threads = " << threads << "\n"
    << "output = " << output << "\n"
    << "viz = " << viz << "\n"
    << "ratio_map = " << ratio_map << "\n"
    << "report_format = " << report_format << "\n";
  return o.str();
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string content = trim(line);
    if (content.empty()) continue;

    const std::string where = "config line " + std::to_string(line_no) + ": ";
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(where + "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");
    try {
      it->second(base, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + key + ": " + e.what());
    }
  }
  base.validate();
  return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  return parse_config(read_file(path), std::move(base));
}

}  // namespace blpc
