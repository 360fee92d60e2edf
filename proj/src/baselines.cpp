#include "groundroll/baselines.hpp"

#include "groundroll/error.hpp"
#include "groundroll/numerics.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace grl {

namespace {

// 1 at or below the edge, raised-cosine roll-off to 0 at edge*(1+taper).
double reject_ramp(double u, double taper)
{
  if (u < 1.0) {
    return 1.0;
  }
  if (taper <= 0.0 || u >= 1.0 + taper) {
    return 0.0;
  }
  return 0.5 * (1.0 + std::cos(std::numbers::pi * (u - 1.0) / taper));
}

std::vector<Index> window_starts(Index n, Index win, Index overlap)
{
  Index const step = std::max<Index>(1, win - overlap);
  std::vector<Index> starts;
  for (Index s = 0;; s += step) {
    if (s + win >= n) {
      starts.push_back(n - win);
      break;
    }
    starts.push_back(s);
  }
  return starts;
}

// Strictly positive triangle so every covered sample has nonzero weight.
Eigen::VectorXd triangle(Index n)
{
  Eigen::VectorXd w(n);
  double const half = 0.5 * static_cast<double>(n + 1);
  for (Index i = 0; i < n; ++i) {
    w(i) = 1.0 - std::abs(static_cast<double>(i + 1) - half) / half;
  }
  return w;
}

} // namespace

void FkFilterParams::validate(double dt) const
{
  if (!(v_reject > 0.0)) {
    throw ArgumentError("v_reject must be positive");
  }
  if (!(f_max > 0.0 && f_max < 0.5 / dt)) {
    throw ArgumentError("f_max must lie in (0, Nyquist)");
  }
  if (!(taper_frac >= 0.0 && taper_frac < 1.0)) {
    throw ArgumentError("taper_frac must lie in [0, 1)");
  }
}

Grid fk_reject_weights(Index nt, Index nx, double dt, double dx, FkFilterParams const &p)
{
  auto const f = fft_frequencies(nt, dt);
  auto const k = fft_frequencies(nx, dx);
  Grid w(nt, nx);
  for (Index j = 0; j < nx; ++j) {
    double const ak = std::abs(k[static_cast<std::size_t>(j)]);
    for (Index i = 0; i < nt; ++i) {
      double const af = std::abs(f[static_cast<std::size_t>(i)]);
      // k = 0 means infinite apparent velocity: never in the fan.
      double const vel = ak > 0.0 ? reject_ramp(af / (p.v_reject * ak), p.taper_frac) : 0.0;
      w(i, j) = vel * reject_ramp(af / p.f_max, p.taper_frac);
    }
  }
  return w;
}

Decomposition fk_fan_filter(Gather const &y, FkFilterParams const &p)
{
  p.validate(y.dt());
  Grid const w = fk_reject_weights(y.nt(), y.nx(), y.dt(), y.dx(), p);
  CGrid const spec = fft2_unitary(y.samples());
  // Weights are even in f and k, so the rejected part is real up to rounding.
  Grid g = ifft2_unitary_real((spec.array() * w.array().cast<std::complex<double>>()).matrix());
  Grid x = y.samples() - g;
  return {y.with_samples(std::move(x)), y.with_samples(std::move(g))};
}

void LocalSvdParams::validate(Index nt, Index nx) const
{
  if (win_t < 2 || win_x < 2) {
    throw ArgumentError("local SVD windows must be at least 2x2");
  }
  if (win_t > nt || win_x > nx) {
    throw ArgumentError("local SVD window " + std::to_string(win_t) + "x" + std::to_string(win_x) +
                        " is larger than the gather " + std::to_string(nt) + "x" + std::to_string(nx));
  }
  if (overlap_t < 0 || overlap_x < 0 || overlap_t >= win_t || overlap_x >= win_x) {
    throw ArgumentError("overlaps must lie in [0, window)");
  }
  if (rank < 1 || rank >= std::min(win_t, win_x)) {
    throw ArgumentError("rank must lie in [1, min(win_t, win_x))");
  }
}

Decomposition local_svd_filter(Gather const &y, Mask const &m, LocalSvdParams const &p)
{
  p.validate(y.nt(), y.nx());
  if (!m.same_shape(y)) {
    throw ArgumentError("local_svd_filter: mask shape does not match the gather");
  }
  Grid const mw = m.weights();
  Grid acc = Grid::Zero(y.nt(), y.nx());
  Grid wsum = Grid::Zero(y.nt(), y.nx());
  Grid const taper = triangle(p.win_t) * triangle(p.win_x).transpose();

  for (Index t0 : window_starts(y.nt(), p.win_t, p.overlap_t)) {
    for (Index x0 : window_starts(y.nx(), p.win_x, p.overlap_x)) {
      wsum.block(t0, x0, p.win_t, p.win_x) += taper;
      double const coverage = mw.block(t0, x0, p.win_t, p.win_x).mean();
      if (coverage <= 0.5) {
        continue;
      }
      Grid const patch = y.samples().block(t0, x0, p.win_t, p.win_x);
      Eigen::BDCSVD<Grid> dec(patch, Eigen::ComputeThinU | Eigen::ComputeThinV);
      if (dec.info() != Eigen::Success) {
        throw NumericalError("local SVD failed on window at (" + std::to_string(t0) + ", " + std::to_string(x0) + ")");
      }
      Grid const coherent = dec.matrixU().leftCols(p.rank) * dec.singularValues().head(p.rank).asDiagonal() *
                            dec.matrixV().leftCols(p.rank).transpose();
      acc.block(t0, x0, p.win_t, p.win_x) += taper.cwiseProduct(coherent);
    }
  }
  Grid g = acc.cwiseQuotient(wsum);
  Grid x = y.samples() - g;
  return {y.with_samples(std::move(x)), y.with_samples(std::move(g))};
}

} // namespace grl
