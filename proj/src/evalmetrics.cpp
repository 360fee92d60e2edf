#include "groundroll/evalmetrics.hpp"

#include "groundroll/error.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace grl {

namespace {

void require_same_shape(Gather const &a, Gather const &b, char const *what)
{
  if (a.nt() != b.nt() || a.nx() != b.nx()) {
    throw ArgumentError(std::string(what) + ": shape mismatch");
  }
}

// Separable Gaussian, truncated at 3 sigma and renormalized at the edges so
// every output is a convex combination of inputs.
Grid gaussian_smooth(Grid const &a, double sigma)
{
  if (sigma <= 0.0) {
    return a;
  }
  auto const radius = static_cast<Index>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  for (Index k = -radius; k <= radius; ++k) {
    kernel[static_cast<std::size_t>(k + radius)] = std::exp(-0.5 * static_cast<double>(k * k) / (sigma * sigma));
  }
  auto pass = [&](Grid const &in, bool along_time) {
    Grid out(in.rows(), in.cols());
    Index const n = along_time ? in.rows() : in.cols();
    for (Index i = 0; i < in.rows(); ++i) {
      for (Index j = 0; j < in.cols(); ++j) {
        Index const c = along_time ? i : j;
        double acc = 0.0, wsum = 0.0;
        for (Index k = std::max<Index>(0, c - radius); k <= std::min(n - 1, c + radius); ++k) {
          double const w = kernel[static_cast<std::size_t>(k - c + radius)];
          acc += w * (along_time ? in(k, j) : in(i, k));
          wsum += w;
        }
        out(i, j) = acc / wsum;
      }
    }
    return out;
  };
  return pass(pass(a, true), false);
}

} // namespace

double snr_db(Gather const &clean, Gather const &estimate)
{
  require_same_shape(clean, estimate, "snr_db");
  double const signal = clean.samples().squaredNorm();
  if (signal == 0.0) {
    throw DegenerateInputError("snr_db: clean reference is all zero");
  }
  double const residual = (clean.samples() - estimate.samples()).squaredNorm();
  if (residual == 0.0) {
    return kSnrCapDb;
  }
  return std::min(kSnrCapDb, 10.0 * std::log10(signal / residual));
}

ResponseMap local_similarity(Gather const &a, Gather const &b, SimilarityParams const &p)
{
  require_same_shape(a, b, "local_similarity");
  if (p.win_t < 1 || p.win_x < 1) {
    throw ArgumentError("local_similarity: windows must be at least 1");
  }
  if (!(p.eps_stab > 0.0)) {
    throw ArgumentError("local_similarity: eps_stab must be positive");
  }
  Grid const ab = window_sum(a.samples().cwiseProduct(b.samples()), p.win_t, p.win_x);
  Grid const aa = window_sum(a.samples().array().square().matrix(), p.win_t, p.win_x);
  Grid const bb = window_sum(b.samples().array().square().matrix(), p.win_t, p.win_x);
  Grid corr = (ab.array().abs() / ((aa.array() + p.eps_stab) * (bb.array() + p.eps_stab)).sqrt()).matrix();
  corr = gaussian_smooth(corr, p.smooth_sigma).cwiseMax(0.0).cwiseMin(1.0);
  return ResponseMap(std::move(corr));
}

SimilarityStats similarity_stats(ResponseMap const &map)
{
  // Welford accumulation.
  double mean = 0.0, m2 = 0.0;
  Index n = 0;
  for (Index k = 0; k < map.values().size(); ++k) {
    double const v = map.values().data()[k];
    ++n;
    double const delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
  }
  return {mean, n > 0 ? m2 / static_cast<double>(n) : 0.0};
}

} // namespace grl
