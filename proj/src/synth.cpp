#include "groundroll/synth.hpp"

#include "groundroll/error.hpp"
#include "groundroll/evalmetrics.hpp"
#include "groundroll/maskgen.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace grl {

namespace {

using std::numbers::pi;

double ricker_at(double f, double t)
{
  double const a = pi * pi * f * f * t * t;
  return (1.0 - 2.0 * a) * std::exp(-a);
}

std::string trim(std::string_view s)
{
  auto const b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    return {};
  }
  auto const e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double number(std::string const &v, std::size_t line, std::string const &key)
{
  try {
    std::size_t used = 0;
    double const d = std::stod(v, &used);
    if (used != v.size()) {
      throw std::invalid_argument(v);
    }
    return d;
  } catch (std::exception const &) {
    throw FormatError("line " + std::to_string(line) + ": " + key + " expects a number, got '" + v + "'");
  }
}

double field(nlohmann::json const &obj, char const *name, std::size_t line, std::string const &key)
{
  if (!obj.contains(name) || !obj[name].is_number()) {
    throw FormatError("line " + std::to_string(line) + ": each " + key + " entry needs numeric '" + name + "'");
  }
  return obj[name].get<double>();
}

double field_or(nlohmann::json const &obj, char const *name, double fallback, std::size_t line,
                std::string const &key)
{
  return obj.contains(name) ? field(obj, name, line, key) : fallback;
}

nlohmann::json json_array(std::string const &v, std::size_t line, std::string const &key)
{
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(v);
  } catch (nlohmann::json::parse_error const &e) {
    throw FormatError("line " + std::to_string(line) + ": " + key + " is not valid JSON (" + e.what() + ")");
  }
  if (!arr.is_array()) {
    throw FormatError("line " + std::to_string(line) + ": " + key + " must be a JSON array");
  }
  for (auto const &item : arr) {
    if (!item.is_object()) {
      throw FormatError("line " + std::to_string(line) + ": " + key + " entries must be JSON objects");
    }
  }
  return arr;
}

// Type-7 (linear interpolation) sample quantile.
double quantile(std::vector<double> values, double q)
{
  std::sort(values.begin(), values.end());
  double const h = q * static_cast<double>(values.size() - 1);
  auto const lo = static_cast<std::size_t>(std::floor(h));
  auto const hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double standard_normal(std::mt19937_64 &rng)
{
  // Box-Muller on 53-bit uniforms; std::normal_distribution is not portable.
  auto uniform = [&rng] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
  double const u1 = uniform();
  double const u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
}

} // namespace

void SynthConfig::validate() const
{
  if (nt < 2 || nx < 2) {
    throw ArgumentError("nt and nx must be at least 2");
  }
  if (!(dt > 0.0) || !(dx > 0.0)) {
    throw ArgumentError("dt and dx must be positive");
  }
  double const nyquist = 0.5 / dt;
  double const duration = static_cast<double>(nt) * dt;
  for (std::size_t i = 0; i < reflections.size(); ++i) {
    auto const &r = reflections[i];
    auto const tag = "reflection " + std::to_string(i) + ": ";
    if (!(r.velocity > 0.0)) {
      throw ArgumentError(tag + "velocity must be positive");
    }
    if (!(r.t0 >= 0.0 && r.t0 < duration)) {
      throw ArgumentError(tag + "t0 must lie in [0, nt*dt)");
    }
    if (!(r.f_peak > 0.0 && r.f_peak < nyquist)) {
      throw ArgumentError(tag + "f_peak must lie in (0, Nyquist)");
    }
    if (!std::isfinite(r.amplitude)) {
      throw ArgumentError(tag + "amplitude must be finite");
    }
  }
  for (std::size_t i = 0; i < groundroll.size(); ++i) {
    auto const &m = groundroll[i];
    auto const tag = "groundroll mode " + std::to_string(i) + ": ";
    if (!(m.v_app > 0.0)) {
      throw ArgumentError(tag + "v_app must be positive");
    }
    if (!(m.f_low > 0.0 && m.f_low < m.f_high && m.f_high < nyquist)) {
      throw ArgumentError(tag + "need 0 < f_low < f_high < Nyquist");
    }
    if (!std::isfinite(m.amplitude) || !std::isfinite(m.origin_trace)) {
      throw ArgumentError(tag + "amplitude and origin_trace must be finite");
    }
    if (!(m.cycles > 0.0) || !(m.spread >= 0.0)) {
      throw ArgumentError(tag + "cycles must be positive and spread non-negative");
    }
  }
  if (!(noise_level >= 0.0)) {
    throw ArgumentError("noise_level must be non-negative");
  }
  if (!std::isfinite(target_snr_db)) {
    throw ArgumentError("target_snr_db must be finite");
  }
  if (!(mask_quantile > 0.0 && mask_quantile < 1.0)) {
    throw ArgumentError("mask_quantile must lie in (0, 1)");
  }
  if (!std::isfinite(source_trace)) {
    throw ArgumentError("source_trace must be finite");
  }
}

SynthConfig parse_synth_config(std::string_view text)
{
  SynthConfig cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto const hash = raw.find('#'); hash != std::string::npos) {
      raw.erase(hash);
    }
    auto const content = trim(raw);
    if (content.empty()) {
      continue;
    }
    auto const eq = content.find('=');
    if (eq == std::string::npos) {
      throw FormatError("line " + std::to_string(line) + ": expected key = value");
    }
    auto const key = trim(std::string_view(content).substr(0, eq));
    auto const value = trim(std::string_view(content).substr(eq + 1));
    if (value.empty()) {
      throw FormatError("line " + std::to_string(line) + ": missing value for " + key);
    }

    auto integer = [&](double d) {
      if (d != std::floor(d) || d < 0) {
        throw FormatError("line " + std::to_string(line) + ": " + key + " must be a non-negative integer");
      }
      return d;
    };

    if (key == "nt") {
      cfg.nt = static_cast<Index>(integer(number(value, line, key)));
    } else if (key == "nx") {
      cfg.nx = static_cast<Index>(integer(number(value, line, key)));
    } else if (key == "dt") {
      cfg.dt = number(value, line, key);
    } else if (key == "dx") {
      cfg.dx = number(value, line, key);
    } else if (key == "source_trace") {
      cfg.source_trace = number(value, line, key);
    } else if (key == "noise_level") {
      cfg.noise_level = number(value, line, key);
    } else if (key == "target_snr_db") {
      cfg.target_snr_db = number(value, line, key);
    } else if (key == "mask_quantile") {
      cfg.mask_quantile = number(value, line, key);
    } else if (key == "seed") {
      try {
        std::size_t used = 0;
        cfg.seed = std::stoull(value, &used);
        if (used != value.size()) {
          throw std::invalid_argument(value);
        }
      } catch (std::exception const &) {
        throw FormatError("line " + std::to_string(line) + ": seed must be an unsigned integer");
      }
    } else if (key == "reflections") {
      cfg.reflections.clear();
      for (auto const &item : json_array(value, line, key)) {
        cfg.reflections.push_back({field(item, "t0", line, key), field(item, "v", line, key),
                                   field(item, "amplitude", line, key), field(item, "f_peak", line, key)});
      }
    } else if (key == "groundroll") {
      cfg.groundroll.clear();
      for (auto const &item : json_array(value, line, key)) {
        GroundRollMode m{field(item, "v_app", line, key),
                         field(item, "f_low", line, key),
                         field(item, "f_high", line, key),
                         field(item, "amplitude", line, key),
                         field_or(item, "origin_trace", 0.0, line, key)};
        m.cycles = field_or(item, "cycles", m.cycles, line, key);
        m.spread = field_or(item, "spread", m.spread, line, key);
        cfg.groundroll.push_back(m);
      }
    } else {
      throw FormatError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }
  try {
    cfg.validate();
  } catch (ArgumentError const &e) {
    throw FormatError(std::string("invalid config: ") + e.what());
  }
  return cfg;
}

SynthConfig load_synth_config(std::filesystem::path const &path)
{
  std::ifstream in(path);
  if (!in) {
    throw FileError("cannot open " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_synth_config(ss.str());
  } catch (FormatError const &e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<double> ricker(double f_peak, double dt, Index half_len)
{
  if (!(dt > 0.0)) {
    throw ArgumentError("ricker: dt must be positive");
  }
  if (!(f_peak > 0.0 && f_peak < 0.5 / dt)) {
    throw ArgumentError("ricker: f_peak must lie in (0, Nyquist)");
  }
  if (half_len < 0) {
    throw ArgumentError("ricker: half_len must be non-negative");
  }
  std::vector<double> w(static_cast<std::size_t>(2 * half_len + 1));
  for (Index i = 0; i <= 2 * half_len; ++i) {
    w[static_cast<std::size_t>(i)] = ricker_at(f_peak, static_cast<double>(i - half_len) * dt);
  }
  return w;
}

Gather make_reflections(SynthConfig const &cfg, std::vector<std::string> *warnings)
{
  cfg.validate();
  Grid out = Grid::Zero(cfg.nt, cfg.nx);
  double const t_last = static_cast<double>(cfg.nt - 1) * cfg.dt;
  for (std::size_t e = 0; e < cfg.reflections.size(); ++e) {
    auto const &r = cfg.reflections[e];
    // The wavelet is negligible (< 1e-9) beyond 1.5 periods from its centre.
    double const reach = 1.5 / r.f_peak;
    double earliest = INFINITY;
    for (Index j = 0; j < cfg.nx; ++j) {
      double const x = (static_cast<double>(j) - cfg.source_trace) * cfg.dx;
      earliest = std::min(earliest, std::hypot(r.t0, x / r.velocity));
    }
    if (earliest - reach > t_last) {
      if (warnings != nullptr) {
        warnings->push_back("reflection " + std::to_string(e) + " lies entirely below the time window; skipped");
      }
      continue;
    }
    for (Index j = 0; j < cfg.nx; ++j) {
      double const x = (static_cast<double>(j) - cfg.source_trace) * cfg.dx;
      double const tx = std::hypot(r.t0, x / r.velocity);
      for (Index i = 0; i < cfg.nt; ++i) {
        out(i, j) += r.amplitude * ricker_at(r.f_peak, static_cast<double>(i) * cfg.dt - tx);
      }
    }
  }
  return Gather(std::move(out), cfg.dt, cfg.dx);
}

Gather make_groundroll(SynthConfig const &cfg)
{
  cfg.validate();
  Grid out = Grid::Zero(cfg.nt, cfg.nx);
  for (auto const &m : cfg.groundroll) {
    double const reach = std::max(m.origin_trace, static_cast<double>(cfg.nx - 1) - m.origin_trace);
    double const d_max = std::max(reach, 1.0) * cfg.dx;
    for (Index j = 0; j < cfg.nx; ++j) {
      double const d = std::abs(static_cast<double>(j) - m.origin_trace) * cfg.dx;
      double const onset = d / m.v_app;
      double const length = m.cycles / m.f_low + m.spread * onset;
      // Start frequency falls with offset; each train then sweeps down to f_low.
      double const f_start = m.f_high - (m.f_high - m.f_low) * 0.5 * std::min(d / d_max, 1.0);
      for (Index i = 0; i < cfg.nt; ++i) {
        double const s = static_cast<double>(i) * cfg.dt - onset;
        if (s < 0.0 || s >= length) {
          continue;
        }
        double const env = std::pow(std::sin(pi * s / length), 2);
        double const phase = 2.0 * pi * (f_start * s + (m.f_low - f_start) * s * s / (2.0 * length));
        out(i, j) += m.amplitude * env * std::sin(phase);
      }
    }
  }
  return Gather(std::move(out), cfg.dt, cfg.dx);
}

Gather make_noise(SynthConfig const &cfg, double peak_clean)
{
  cfg.validate();
  Grid out = Grid::Zero(cfg.nt, cfg.nx);
  double const sigma = cfg.noise_level * peak_clean;
  if (sigma > 0.0) {
    std::mt19937_64 rng(cfg.seed);
    double *p = out.data();
    for (Index i = 0; i < out.size(); ++i) {
      p[i] = sigma * standard_normal(rng);
    }
  }
  return Gather(std::move(out), cfg.dt, cfg.dx);
}

namespace {

double snr_scale(Gather const &clean, Gather const &contaminant, double target_snr_db)
{
  if (clean.nt() != contaminant.nt() || clean.nx() != contaminant.nx()) {
    throw ArgumentError("mix_to_snr: shape mismatch");
  }
  if (!std::isfinite(target_snr_db)) {
    throw ArgumentError("mix_to_snr: target SNR must be finite");
  }
  double const c = contaminant.samples().norm();
  if (c == 0.0) {
    throw DegenerateInputError("mix_to_snr: contaminant is all zero");
  }
  return clean.samples().norm() / (c * std::pow(10.0, target_snr_db / 20.0));
}

} // namespace

Mixture mix_to_snr(Gather const &clean, Gather const &contaminant, double target_snr_db)
{
  double const scale = snr_scale(clean, contaminant, target_snr_db);
  return {clean.with_samples(clean.samples() + scale * contaminant.samples()), scale};
}

Mask ground_truth_mask(Gather const &groundroll, double energy_quantile)
{
  if (!(energy_quantile > 0.0 && energy_quantile < 1.0)) {
    throw ArgumentError("energy quantile must lie in (0, 1)");
  }
  Grid const energy = window_sum(groundroll.samples().array().square().matrix(), 5, 5);
  std::vector<double> values(energy.data(), energy.data() + energy.size());
  double const threshold = quantile(std::move(values), energy_quantile);
  return Mask((energy.array() > threshold).cast<std::uint8_t>());
}

SynthScene synthesize(SynthConfig const &cfg)
{
  cfg.validate();
  std::vector<std::string> warnings;
  Gather clean = make_reflections(cfg, &warnings);
  if (clean.samples().cwiseAbs().maxCoeff() == 0.0) {
    throw DegenerateInputError("no signal content: the configuration produces an all-zero clean section");
  }
  Gather const gr = make_groundroll(cfg);
  Gather const noise = make_noise(cfg, clean.samples().cwiseAbs().maxCoeff());
  Gather const contaminant = gr.with_samples(gr.samples() + noise.samples());
  double const scale = snr_scale(clean, contaminant, cfg.target_snr_db);

  Gather scaled_gr = gr.with_samples(scale * gr.samples());
  Gather scaled_noise = noise.with_samples(scale * noise.samples());
  Gather noisy = clean.with_samples(clean.samples() + scaled_gr.samples() + scaled_noise.samples());
  double const achieved = snr_db(clean, noisy);
  Mask mask = ground_truth_mask(scaled_gr, cfg.mask_quantile);
  return {std::move(clean), std::move(scaled_gr), std::move(scaled_noise), std::move(noisy),
          std::move(mask),  scale,                achieved,                std::move(warnings)};
}

} // namespace grl
