#pragma once

#include "groundroll/seisdata.hpp"

namespace grl {

/// Per-sample ground-roll likelihood in [0,1].
class ResponseMap
{
public:
  explicit ResponseMap(Grid values);

  Index nt() const { return values_.rows(); }
  Index nx() const { return values_.cols(); }
  Grid const &values() const { return values_; }

private:
  Grid values_;
};

struct HeuristicParams
{
  double f_cut = 15.0; // Hz, upper edge of the ground-roll band
  Index win_t = 15;    // smoothing half-sizes
  Index win_x = 5;
  double eta = 0.5;

  void validate(double dt) const;
};

/// Fraction of local energy below f_cut, from a zero-phase lowpass and
/// (2*win_t+1) x (2*win_x+1) energy smoothing.
ResponseMap heuristic_response(Gather const &g, HeuristicParams const &p = {});

/// Bit is set iff value > eta (strict).
Mask binarize(ResponseMap const &r, double eta);

/// Opening with a (2*open_r+1)^2 square, then closing with (2*close_r+1)^2.
Mask morph_clean(Mask const &m, int open_r, int close_r);

/// |a and b| / |a or b|; 1 when both are empty.
double mask_iou(Mask const &a, Mask const &b);

/// Zero-phase Butterworth lowpass (order 4) applied down each column.
Grid lowpass_zero_phase(Grid const &a, double f_cut, double dt);

/// Sum over a (2*half_t+1) x (2*half_x+1) window, truncated at the edges.
Grid window_sum(Grid const &a, Index half_t, Index half_x);

} // namespace grl
