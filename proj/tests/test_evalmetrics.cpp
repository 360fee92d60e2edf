#include "groundroll/error.hpp"
#include "groundroll/evalmetrics.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace grl;
using namespace grl::test;

TEST_CASE("snr_db")
{
  std::mt19937_64 rng(31);
  Gather const clean(random_grid(20, 10, rng), 0.004, 10.0);
  CHECK(snr_db(clean, clean) == kSnrCapDb);

  Grid dir = random_grid(20, 10, rng);
  dir *= std::sqrt(clean.samples().squaredNorm() / 10.0) / dir.norm();
  CHECK(snr_db(clean, clean.with_samples(clean.samples() + dir)) == doctest::Approx(10.0).epsilon(1e-12));

  CHECK_THROWS_AS(snr_db(clean, Gather(Grid::Zero(20, 9), 0.004, 10.0)), ArgumentError);
  CHECK_THROWS_AS(snr_db(Gather(Grid::Zero(20, 10), 0.004, 10.0), clean), DegenerateInputError);
}

TEST_CASE("snr_db decreases as the error grows along a fixed direction")
{
  std::mt19937_64 rng(32);
  Gather const clean(random_grid(16, 8, rng), 0.004, 10.0);
  Grid const n = random_grid(16, 8, rng);
  double prev = kSnrCapDb;
  for (double a = 1e-3; a < 10.0; a *= 1.7) {
    double const s = snr_db(clean, clean.with_samples(clean.samples() + a * n));
    CHECK(s < prev);
    prev = s;
  }
}

TEST_CASE("local similarity of a section with itself")
{
  std::mt19937_64 rng(33);
  Grid a = random_grid(60, 20, rng);
  a.block(30, 0, 30, 20).setZero();
  Gather const g(a, 0.004, 10.0);
  SimilarityParams p;
  auto const s = local_similarity(g, g, p);
  Grid const energy = window_sum(a.array().square().matrix(), p.win_t, p.win_x);
  // Samples far enough from the zero region that smoothing cannot reach it.
  for (Index j = 0; j < 20; ++j) {
    for (Index i = 0; i < 30; ++i) {
      if (energy(i, j) > 100.0 * p.eps_stab && i + p.win_t + 3 * p.smooth_sigma < 30) {
        CHECK(s.values()(i, j) >= 0.99);
      }
    }
  }
}

TEST_CASE("local similarity of disjoint supports")
{
  std::mt19937_64 rng(34);
  Grid a = random_grid(80, 20, rng);
  Grid b = random_grid(80, 20, rng);
  a.bottomRows(40).setZero();
  b.topRows(40).setZero();
  SimilarityParams p;
  p.smooth_sigma = 1.0;
  auto const s = local_similarity(Gather(a, 0.004, 10.0), Gather(b, 0.004, 10.0), p);
  CHECK(s.values().topRows(25).maxCoeff() < 1e-6);
}

TEST_CASE("local similarity is symmetric and scale invariant")
{
  std::mt19937_64 rng(35);
  Gather const a(random_grid(40, 16, rng), 0.004, 10.0);
  Gather const b(random_grid(40, 16, rng), 0.004, 10.0);
  SimilarityParams p;
  p.eps_stab = 1e-12;
  auto const ab = local_similarity(a, b, p);
  auto const ba = local_similarity(b, a, p);
  CHECK((ab.values() - ba.values()).cwiseAbs().maxCoeff() < 1e-12);
  for (double c : {0.5, 0.8, 1.3, 2.0}) {
    auto const scaled = local_similarity(a.with_samples(c * a.samples()), b.with_samples(c * b.samples()), p);
    CHECK((scaled.values() - ab.values()).cwiseAbs().maxCoeff() < 1e-6);
  }
  CHECK_THROWS_AS(local_similarity(a, Gather(Grid::Zero(40, 15), 0.004, 10.0)), ArgumentError);
}

TEST_CASE("similarity statistics")
{
  auto const c = similarity_stats(ResponseMap(Grid::Constant(5, 7, 0.3)));
  CHECK(c.mean == doctest::Approx(0.3));
  CHECK(std::abs(c.variance) < 1e-15);

  Grid half = Grid::Zero(4, 6);
  half.leftCols(3).setOnes();
  auto const h = similarity_stats(ResponseMap(half));
  CHECK(h.mean == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(h.variance == doctest::Approx(0.25).epsilon(1e-15));

  // Two-pass recomputation on a fixture-sized map.
  std::mt19937_64 rng(36);
  Grid const v = random_grid(128, 48, rng, 0.0, 1.0);
  auto const st = similarity_stats(ResponseMap(v));
  double const mean = v.sum() / v.size();
  double const var = (v.array() - mean).square().sum() / v.size();
  CHECK(std::abs(st.mean - mean) < 1e-12);
  CHECK(std::abs(st.variance - var) < 1e-12);
}
