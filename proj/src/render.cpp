#include "groundroll/render.hpp"

#include "groundroll/error.hpp"
#include "groundroll/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

namespace grl {

namespace {

double percentile(std::vector<double> v, double pct)
{
  std::sort(v.begin(), v.end());
  double const h = pct / 100.0 * static_cast<double>(v.size() - 1);
  auto const lo = static_cast<std::size_t>(std::floor(h));
  auto const hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::uint8_t level(double unit)
{
  return static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(unit, 0.0, 1.0)));
}

} // namespace

void RenderOptions::validate() const
{
  if (!(gain > 50.0 && gain <= 100.0)) {
    throw ArgumentError("gain must lie in (50, 100]");
  }
}

Image render_gather(Gather const &g, RenderOptions const &opt)
{
  opt.validate();
  Grid const &a = g.samples();
  Image img(a.rows(), a.cols());
  std::vector<double> values(a.data(), a.data() + a.size());
  if (opt.colormap == Colormap::gray) {
    double const lo = percentile(values, 100.0 - opt.gain);
    double const hi = percentile(std::move(values), opt.gain);
    if (!(hi - lo > 1e-12 * std::max(1.0, std::abs(hi)))) {
      img.setConstant(128);
      return img;
    }
    for (Index k = 0; k < a.size(); ++k) {
      img.data()[k] = level((a.data()[k] - lo) / (hi - lo));
    }
  } else {
    for (auto &v : values) {
      v = std::abs(v);
    }
    double const clip = percentile(std::move(values), opt.gain);
    if (!(clip > 0.0)) {
      img.setConstant(128);
      return img;
    }
    for (Index k = 0; k < a.size(); ++k) {
      img.data()[k] = level(0.5 * (1.0 + a.data()[k] / clip));
    }
  }
  return img;
}

Image render_mask(Mask const &m) { return (m.bits() * std::uint8_t{255}).eval(); }

Image render_fk(Gather const &g)
{
  auto const fk = fk_spectrum(g);
  Grid const &mag = fk.magnitudes;
  double const peak = mag.maxCoeff();
  Image img = Image::Zero(mag.rows(), mag.cols());
  if (!(peak > 0.0)) {
    return img;
  }
  for (Index k = 0; k < mag.size(); ++k) {
    double const ratio = mag.data()[k] / peak;
    double const db = ratio > 0.0 ? std::max(-60.0, 20.0 * std::log10(ratio)) : -60.0;
    img.data()[k] = level((db + 60.0) / 60.0);
  }
  return img;
}

void write_pgm(Image const &img, std::filesystem::path const &path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw FileError("cannot open " + path.string() + " for writing");
  }
  out << "P5\n" << img.cols() << ' ' << img.rows() << "\n255\n";
  // PGM is row-major; the image is column-major.
  for (Index i = 0; i < img.rows(); ++i) {
    for (Index j = 0; j < img.cols(); ++j) {
      out.put(static_cast<char>(img(i, j)));
    }
  }
  if (!out) {
    throw FileError("write failed for " + path.string());
  }
}

} // namespace grl
