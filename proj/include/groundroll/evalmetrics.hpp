#pragma once

#include "groundroll/maskgen.hpp"
#include "groundroll/seisdata.hpp"

namespace grl {

/// Reported when the estimate matches the reference exactly.
inline constexpr double kSnrCapDb = 300.0;

/// 10*log10(||clean||^2 / ||clean - estimate||^2), capped at kSnrCapDb.
double snr_db(Gather const &clean, Gather const &estimate);

struct SimilarityParams
{
  Index win_t = 10; // correlation window half-sizes
  Index win_x = 5;
  double smooth_sigma = 3.0; // Gaussian smoothing, samples
  double eps_stab = 1e-8;
};

/// Windowed normalized cross-correlation magnitude, Gaussian-smoothed.
ResponseMap local_similarity(Gather const &a, Gather const &b, SimilarityParams const &p = {});

struct SimilarityStats
{
  double mean;
  double variance; // population
};

SimilarityStats similarity_stats(ResponseMap const &map);

} // namespace grl
