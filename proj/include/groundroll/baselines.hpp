#pragma once

#include "groundroll/seisdata.hpp"

namespace grl {

/// A split of the input into kept signal and removed ground roll, X + G = Y.
struct Decomposition
{
  Gather x;
  Gather g;
};

struct FkFilterParams
{
  double v_reject = 800.0; // apparent velocities below this are rejected, m/s
  double f_max = 20.0;     // upper frequency of the reject fan, Hz
  double taper_frac = 0.2; // cosine taper width relative to the fan edges

  void validate(double dt) const;
};

/// Rejects the fan {|f/k| < v_reject, |f| < f_max} with cosine tapers on both
/// edges. G is the rejected part; X = Y - G.
Decomposition fk_fan_filter(Gather const &y, FkFilterParams const &p = {});

/// Reject weight in [0,1] per unitary-DFT bin, laid out like fft2_unitary.
Grid fk_reject_weights(Index nt, Index nx, double dt, double dx, FkFilterParams const &p);

struct LocalSvdParams
{
  Index win_t = 64;
  Index win_x = 16;
  Index overlap_t = 32;
  Index overlap_x = 8;
  Index rank = 2; // coherent components removed per active window

  void validate(Index nt, Index nx) const;
};

/// Sliding-window SVD: windows whose mask coverage exceeds one half give up
/// their leading `rank` components to G, blended with triangular weights
/// normalized to a partition of unity. X = Y - G.
Decomposition local_svd_filter(Gather const &y, Mask const &m, LocalSvdParams const &p = {});

} // namespace grl
