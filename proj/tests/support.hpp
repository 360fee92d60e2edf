#pragma once

// Shared helpers for the unit and acceptance tests. The oracles here are
// deliberately naive and independent of FFTW and BDCSVD.

#include "groundroll/seisdata.hpp"
#include "groundroll/synth.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <string>

namespace grl::test {

using cd = std::complex<double>;

inline Grid random_grid(Index nt, Index nx, std::mt19937_64 &rng, double lo = -1.0, double hi = 1.0)
{
  std::uniform_real_distribution<double> u(lo, hi);
  Grid a(nt, nx);
  for (Index j = 0; j < nx; ++j) {
    for (Index i = 0; i < nt; ++i) {
      a(i, j) = u(rng);
    }
  }
  return a;
}

inline CGrid random_cgrid(Index nt, Index nx, std::mt19937_64 &rng, double scale = 1.0)
{
  std::normal_distribution<double> n(0.0, scale);
  CGrid a(nt, nx);
  for (Index j = 0; j < nx; ++j) {
    for (Index i = 0; i < nt; ++i) {
      a(i, j) = cd(n(rng), n(rng));
    }
  }
  return a;
}

/// Unitary DFT matrix W with W(p, q) = exp(-+2 pi i p q / n) / sqrt(n).
inline CGrid dft_matrix(Index n, bool inverse = false)
{
  CGrid w(n, n);
  double const sign = inverse ? 1.0 : -1.0;
  for (Index p = 0; p < n; ++p) {
    for (Index q = 0; q < n; ++q) {
      double const ang = sign * 2.0 * std::numbers::pi * static_cast<double>((p * q) % n) / static_cast<double>(n);
      w(p, q) = std::polar(1.0 / std::sqrt(static_cast<double>(n)), ang);
    }
  }
  return w;
}

/// Direct double sum, O(N^2 M^2).
inline CGrid naive_dft2(CGrid const &a, bool inverse = false)
{
  Index const n = a.rows();
  Index const m = a.cols();
  double const sign = inverse ? 1.0 : -1.0;
  CGrid out = CGrid::Zero(n, m);
  for (Index p = 0; p < n; ++p) {
    for (Index q = 0; q < m; ++q) {
      cd acc = 0.0;
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < m; ++j) {
          double const ang = sign * 2.0 * std::numbers::pi *
                             (static_cast<double>(p * i) / static_cast<double>(n) +
                              static_cast<double>(q * j) / static_cast<double>(m));
          acc += a(i, j) * std::polar(1.0, ang);
        }
      }
      out(p, q) = acc / std::sqrt(static_cast<double>(n * m));
    }
  }
  return out;
}

/// 2-D unitary DFT through precomputed DFT matrices, for repeated use.
struct MatrixDft
{
  CGrid wt, wx, wti, wxi;
  MatrixDft(Index nt, Index nx)
    : wt{dft_matrix(nt)}, wx{dft_matrix(nx)}, wti{dft_matrix(nt, true)}, wxi{dft_matrix(nx, true)}
  {
  }
  CGrid forward(CGrid const &a) const { return wt * a * wx.transpose(); }
  CGrid inverse(CGrid const &a) const { return wti * a * wxi.transpose(); }
};

/// Singular values (descending) from the eigenvalues of the smaller Gram
/// matrix.
inline Eigen::VectorXd gram_singular_values(CGrid const &a)
{
  CGrid const gram = a.rows() >= a.cols() ? CGrid(a.adjoint() * a) : CGrid(a * a.adjoint());
  Eigen::SelfAdjointEigenSolver<CGrid> es(gram);
  Eigen::VectorXd ev = es.eigenvalues().reverse();
  return ev.cwiseMax(0.0).cwiseSqrt();
}

/// Soft-thresholded matrix built from the Gram eigendecomposition:
/// A V diag(max(s - tau, 0) / s) V^H (or the left-sided variant).
inline CGrid gram_shrink(CGrid const &a, double tau)
{
  bool const tall = a.rows() >= a.cols();
  CGrid const gram = tall ? CGrid(a.adjoint() * a) : CGrid(a * a.adjoint());
  Eigen::SelfAdjointEigenSolver<CGrid> es(gram);
  Eigen::VectorXd factor(es.eigenvalues().size());
  for (Index i = 0; i < factor.size(); ++i) {
    double const s = std::sqrt(std::max(es.eigenvalues()(i), 0.0));
    factor(i) = s > tau ? (s - tau) / s : 0.0;
  }
  CGrid const p = es.eigenvectors() * factor.asDiagonal() * es.eigenvectors().adjoint();
  return tall ? CGrid(a * p) : CGrid(p * a);
}

/// trace(sqrt(A^H A)) through the Gram eigenvalues.
inline double gram_nuclear_norm(CGrid const &a) { return gram_singular_values(a).sum(); }

inline std::filesystem::path data_dir() { return GRL_DATA_DIR; }

inline SynthConfig fixture_config() { return load_synth_config(data_dir() / "synthetic.cfg"); }

/// Fresh, empty scratch directory under the system temp directory.
inline std::filesystem::path scratch_dir(std::string const &name)
{
  auto const dir = std::filesystem::temp_directory_path() / ("groundroll_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(std::filesystem::path const &path)
{
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(std::filesystem::path const &path, std::string const &bytes)
{
  std::ofstream out(path, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

} // namespace grl::test
