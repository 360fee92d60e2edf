#pragma once

#include "groundroll/seisdata.hpp"

#include <cstdint>
#include <filesystem>

namespace grl {

enum class Colormap
{
  gray,   // percentile window [100-gain, gain] mapped to black..white
  signed_, // symmetric about zero; zero renders mid-gray
};

struct RenderOptions
{
  double gain = 98.0; // clip percentile, in (50, 100]
  Colormap colormap = Colormap::gray;
  std::filesystem::path output;

  void validate() const;
};

using Image = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Rows are time samples (top = first), columns are traces.
Image render_gather(Gather const &g, RenderOptions const &opt);
Image render_mask(Mask const &m);
/// f-k magnitudes in dB relative to the peak, 60 dB floor. Row 0 is 0 Hz.
Image render_fk(Gather const &g);

/// Binary PGM (P5), maxval 255.
void write_pgm(Image const &img, std::filesystem::path const &path);

} // namespace grl
