#include "groundroll/maskgen.hpp"

#include "groundroll/error.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace grl {

namespace {

struct Biquad
{
  double b0, b1, b2, a1, a2;

  // Starts from the steady state for a constant input equal to x[0] (the
  // sections have unit DC gain), which removes the start-up transient.
  void run(std::vector<double> &x) const
  {
    double const x0 = x.empty() ? 0.0 : x.front();
    double z2 = (b2 - a2) * x0;
    double z1 = (b1 - a1) * x0 + z2;
    for (double &v : x) {
      double const y = b0 * v + z1;
      z1 = b1 * v - a1 * y + z2;
      z2 = b2 * v - a2 * y;
      v = y;
    }
  }
};

// Order-4 Butterworth lowpass as two bilinear-transformed sections.
std::array<Biquad, 2> butterworth4(double f_cut, double dt)
{
  double const w = std::tan(std::numbers::pi * f_cut * dt);
  std::array<Biquad, 2> out{};
  for (int k = 0; k < 2; ++k) {
    double const q = 1.0 / (2.0 * std::cos(std::numbers::pi * (2.0 * k + 1.0) / 8.0));
    double const norm = 1.0 + w / q + w * w;
    out[static_cast<std::size_t>(k)] = {w * w / norm, 2.0 * w * w / norm, w * w / norm,
                                        2.0 * (w * w - 1.0) / norm, (1.0 - w / q + w * w) / norm};
  }
  return out;
}

Grid min_or_max_filter(Grid const &a, int r, bool take_max)
{
  if (r == 0) {
    return a;
  }
  Index const nt = a.rows();
  Index const nx = a.cols();
  Grid tmp(nt, nx);
  for (Index j = 0; j < nx; ++j) {
    for (Index i = 0; i < nt; ++i) {
      Index const lo = std::max<Index>(0, i - r);
      Index const n = std::min<Index>(nt - 1, i + r) - lo + 1;
      tmp(i, j) = take_max ? a.col(j).segment(lo, n).maxCoeff() : a.col(j).segment(lo, n).minCoeff();
    }
  }
  Grid out(nt, nx);
  for (Index j = 0; j < nx; ++j) {
    Index const lo = std::max<Index>(0, j - r);
    Index const n = std::min<Index>(nx - 1, j + r) - lo + 1;
    if (take_max) {
      out.col(j) = tmp.middleCols(lo, n).rowwise().maxCoeff();
    } else {
      out.col(j) = tmp.middleCols(lo, n).rowwise().minCoeff();
    }
  }
  return out;
}

} // namespace

ResponseMap::ResponseMap(Grid values)
  : values_{std::move(values)}
{
  if (!values_.allFinite() || (values_.array() < 0.0).any() || (values_.array() > 1.0).any()) {
    throw ArgumentError("response values must lie in [0, 1]");
  }
}

void HeuristicParams::validate(double dt) const
{
  if (!(f_cut > 0.0 && f_cut < 0.5 / dt)) {
    throw ArgumentError("f_cut must lie in (0, Nyquist)");
  }
  if (win_t < 1 || win_x < 1) {
    throw ArgumentError("heuristic windows must be at least 1");
  }
  if (!(eta > 0.0 && eta < 1.0)) {
    throw ArgumentError("eta must lie in (0, 1)");
  }
}

Grid lowpass_zero_phase(Grid const &a, double f_cut, double dt)
{
  auto const sections = butterworth4(f_cut, dt);
  Index const nt = a.rows();
  // Odd reflection about the end samples; long enough for the filter
  // transient (a few periods of the cutoff) to die out.
  Index const pad = std::min<Index>(nt - 1, std::max<Index>(15, static_cast<Index>(std::ceil(3.0 / (f_cut * dt)))));
  Grid out(a.rows(), a.cols());
  std::vector<double> x(static_cast<std::size_t>(nt + 2 * pad));
  for (Index j = 0; j < a.cols(); ++j) {
    auto const col = a.col(j);
    for (Index i = 0; i < pad; ++i) {
      x[static_cast<std::size_t>(i)] = 2.0 * col(0) - col(pad - i);
      x[static_cast<std::size_t>(pad + nt + i)] = 2.0 * col(nt - 1) - col(nt - 2 - i);
    }
    for (Index i = 0; i < nt; ++i) {
      x[static_cast<std::size_t>(pad + i)] = col(i);
    }
    for (auto const &s : sections) {
      s.run(x);
    }
    std::reverse(x.begin(), x.end());
    for (auto const &s : sections) {
      s.run(x);
    }
    std::reverse(x.begin(), x.end());
    for (Index i = 0; i < nt; ++i) {
      out(i, j) = x[static_cast<std::size_t>(pad + i)];
    }
  }
  return out;
}

Grid window_sum(Grid const &a, Index half_t, Index half_x)
{
  Index const nt = a.rows();
  Index const nx = a.cols();
  // Running sums along time, then across traces.
  Grid tmp(nt, nx);
  for (Index j = 0; j < nx; ++j) {
    Eigen::VectorXd cum(nt + 1);
    cum(0) = 0.0;
    for (Index i = 0; i < nt; ++i) {
      cum(i + 1) = cum(i) + a(i, j);
    }
    for (Index i = 0; i < nt; ++i) {
      tmp(i, j) = cum(std::min(nt, i + half_t + 1)) - cum(std::max<Index>(0, i - half_t));
    }
  }
  Grid out(nt, nx);
  for (Index j = 0; j < nx; ++j) {
    Index const lo = std::max<Index>(0, j - half_x);
    Index const n = std::min<Index>(nx - 1, j + half_x) - lo + 1;
    out.col(j) = tmp.middleCols(lo, n).rowwise().sum();
  }
  return out;
}

ResponseMap heuristic_response(Gather const &g, HeuristicParams const &p)
{
  p.validate(g.dt());
  Grid const low = lowpass_zero_phase(g.samples(), p.f_cut, g.dt());
  Grid const e_low = window_sum(low.array().square().matrix(), p.win_t, p.win_x);
  Grid const e_all = window_sum(g.samples().array().square().matrix(), p.win_t, p.win_x);
  double const floor = 1e-30 * std::max(e_all.maxCoeff(), 0.0);
  Grid ratio = Grid::Zero(g.nt(), g.nx());
  for (Index k = 0; k < ratio.size(); ++k) {
    if (e_all.data()[k] > floor && e_all.data()[k] > 0.0) {
      ratio.data()[k] = std::clamp(e_low.data()[k] / e_all.data()[k], 0.0, 1.0);
    }
  }
  return ResponseMap(std::move(ratio));
}

Mask binarize(ResponseMap const &r, double eta)
{
  if (!(eta > 0.0 && eta < 1.0)) {
    throw ArgumentError("eta must lie in (0, 1)");
  }
  return Mask((r.values().array() > eta).cast<std::uint8_t>());
}

Mask morph_clean(Mask const &m, int open_r, int close_r)
{
  if (open_r < 0 || close_r < 0) {
    throw ArgumentError("morphology radii must be non-negative");
  }
  Grid a = m.weights();
  a = min_or_max_filter(min_or_max_filter(a, open_r, false), open_r, true);
  a = min_or_max_filter(min_or_max_filter(a, close_r, true), close_r, false);
  return Mask((a.array() > 0.5).cast<std::uint8_t>());
}

double mask_iou(Mask const &a, Mask const &b)
{
  if (a.nt() != b.nt() || a.nx() != b.nx()) {
    throw ArgumentError("mask_iou: shape mismatch");
  }
  Index inter = 0, uni = 0;
  for (Index k = 0; k < a.bits().size(); ++k) {
    bool const x = a.bits().data()[k] != 0;
    bool const y = b.bits().data()[k] != 0;
    inter += (x && y) ? 1 : 0;
    uni += (x || y) ? 1 : 0;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

} // namespace grl
