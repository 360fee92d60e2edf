#pragma once

#include "groundroll/seisdata.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace grl {

struct Reflection
{
  double t0;        // zero-offset time, s
  double velocity;  // stacking velocity, m/s
  double amplitude;
  double f_peak;    // Ricker peak frequency, Hz
};

struct GroundRollMode
{
  double v_app;  // apparent velocity, m/s
  double f_low;  // Hz
  double f_high; // Hz
  double amplitude;
  double origin_trace;
  double cycles = 1.5; // base wavetrain length in periods of f_low
  double spread = 0.3; // extra wavetrain length per second of traveltime
};

struct SynthConfig
{
  Index nt = 128;
  Index nx = 48;
  double dt = 0.004;
  double dx = 10.0;
  double source_trace = 0.0; // reflection offsets are measured from here
  std::vector<Reflection> reflections;
  std::vector<GroundRollMode> groundroll;
  double noise_level = 0.0; // noise std relative to max |clean|
  double target_snr_db = 1.45;
  std::uint64_t seed = 0;
  double mask_quantile = 0.55;

  /// Throws ArgumentError naming the first violated constraint.
  void validate() const;
};

/// Parses `key = value` lines. `#` starts a comment; list-valued keys take a
/// JSON array on one line. Errors carry the 1-based line number.
SynthConfig parse_synth_config(std::string_view text);
SynthConfig load_synth_config(std::filesystem::path const &path);

/// Ricker wavelet sampled at t = (i - half_len) * dt for i in [0, 2*half_len].
std::vector<double> ricker(double f_peak, double dt, Index half_len);

/// Hyperbolic reflections; events that never enter the time window are
/// skipped with a message appended to `warnings`.
Gather make_reflections(SynthConfig const &cfg, std::vector<std::string> *warnings = nullptr);

/// Linear-moveout dispersive wavetrains, one fan per mode.
Gather make_groundroll(SynthConfig const &cfg);

/// White Gaussian noise with std = noise_level * peak_clean.
Gather make_noise(SynthConfig const &cfg, double peak_clean);

struct Mixture
{
  Gather gather;
  double scale;
};

/// clean + scale*contaminant with the SNR of the result against `clean`
/// equal to `target_snr_db`.
Mixture mix_to_snr(Gather const &clean, Gather const &contaminant, double target_snr_db);

/// Samples whose 11x11 boxcar-smoothed squared amplitude exceeds the given
/// quantile of that smoothed field.
Mask ground_truth_mask(Gather const &groundroll, double energy_quantile);

/// A complete synthetic experiment. `noisy` is exactly clean + groundroll +
/// noise, where groundroll and noise already carry the mixing scale.
struct SynthScene
{
  Gather clean;
  Gather groundroll;
  Gather noise;
  Gather noisy;
  Mask mask;
  double contaminant_scale;
  double input_snr_db;
  std::vector<std::string> warnings;
};

SynthScene synthesize(SynthConfig const &cfg);

} // namespace grl
