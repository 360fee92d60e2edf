#include "groundroll/numerics.hpp"

#include "groundroll/error.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace grl {

namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (shape, direction) and reused.
class PlanCache
{
public:
  ~PlanCache()
  {
    for (auto &[key, plan] : plans_) {
      fftw_destroy_plan(plan);
    }
  }

  fftw_plan get(Index nt, Index nx, int sign)
  {
    std::lock_guard lock(mutex_);
    auto const key = std::make_tuple(nt, nx, sign);
    if (auto it = plans_.find(key); it != plans_.end()) {
      return it->second;
    }
    CGrid scratch_in(nt, nx), scratch_out(nt, nx);
    // Column-major nt x nx is row-major nx x nt; the 2-D DFT is separable so
    // the swapped dimension order gives the same transform.
    fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(nx), static_cast<int>(nt),
                                      reinterpret_cast<fftw_complex *>(scratch_in.data()),
                                      reinterpret_cast<fftw_complex *>(scratch_out.data()), sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) {
      throw NumericalError("FFTW could not plan a " + std::to_string(nt) + "x" + std::to_string(nx) +
                           " transform");
    }
    plans_.emplace(key, plan);
    return plan;
  }

private:
  std::mutex mutex_;
  std::map<std::tuple<Index, Index, int>, fftw_plan> plans_;
};

PlanCache &plan_cache()
{
  static PlanCache cache;
  return cache;
}

CGrid transform(CGrid const &in, int sign)
{
  CGrid src = in;
  CGrid out(in.rows(), in.cols());
  fftw_plan plan = plan_cache().get(in.rows(), in.cols(), sign);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex *>(src.data()),
                   reinterpret_cast<fftw_complex *>(out.data()));
  out /= std::sqrt(static_cast<double>(in.size()));
  return out;
}

} // namespace

CGrid fft2_unitary(CGrid const &a) { return transform(a, FFTW_FORWARD); }

CGrid fft2_unitary(Grid const &a) { return transform(a.cast<std::complex<double>>(), FFTW_FORWARD); }

Spectrum fft2_unitary(Gather const &g) { return Spectrum(fft2_unitary(g.samples())); }

CGrid ifft2_unitary(CGrid const &s) { return transform(s, FFTW_BACKWARD); }

Grid ifft2_unitary_real(CGrid const &s, double *imag_ratio)
{
  CGrid const full = ifft2_unitary(s);
  Grid re = full.real();
  if (imag_ratio != nullptr) {
    double const total = full.norm();
    *imag_ratio = total > 0.0 ? full.imag().norm() / total : 0.0;
  }
  return re;
}

Grid ifft2_unitary(Spectrum const &s, double max_imag_ratio)
{
  double ratio = 0.0;
  Grid re = ifft2_unitary_real(s.values(), &ratio);
  if (ratio > max_imag_ratio) {
    throw ConsistencyError("inverse transform has imaginary residue " + std::to_string(ratio) +
                           " of its norm; spectrum is not conjugate-symmetric");
  }
  return re;
}

std::vector<double> fft_frequencies(Index n, double spacing)
{
  std::vector<double> f(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    Index const signed_i = i <= (n - 1) / 2 ? i : i - n;
    f[static_cast<std::size_t>(i)] = static_cast<double>(signed_i) / (static_cast<double>(n) * spacing);
  }
  return f;
}

CGrid SvdResult::reconstruct() const
{
  return left_vectors * singular_values.cast<std::complex<double>>().asDiagonal() * right_vectors.adjoint();
}

SvdResult svd(CGrid const &a, std::optional<Index> rank_cap)
{
  if (!a.allFinite()) {
    throw ArgumentError("svd input has non-finite entries");
  }
  Eigen::BDCSVD<CGrid> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) {
    throw NumericalError("SVD did not converge on a " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " matrix");
  }
  Index r = dec.singularValues().size();
  if (rank_cap) {
    if (*rank_cap < 0) {
      throw ArgumentError("rank cap must be non-negative");
    }
    r = std::min(r, *rank_cap);
  }
  return {dec.matrixU().leftCols(r), dec.singularValues().head(r), dec.matrixV().leftCols(r)};
}

CGrid svt(CGrid const &a, double tau, std::optional<Index> rank_cap)
{
  if (!(tau >= 0.0)) {
    throw ArgumentError("svt threshold must be non-negative");
  }
  auto const d = svd(a, rank_cap);
  Eigen::VectorXd const shrunk = (d.singular_values.array() - tau).max(0.0).matrix();
  return d.left_vectors * shrunk.cast<std::complex<double>>().asDiagonal() * d.right_vectors.adjoint();
}

double nuclear_norm(CGrid const &a) { return svd(a).singular_values.sum(); }

FkSpectrum fk_spectrum(Gather const &g)
{
  CGrid const s = fft2_unitary(g.samples());
  Index const nt = g.nt();
  Index const nx = g.nx();
  Index const nf = nt / 2 + 1;
  Index const shift = nx / 2; // column of k = 0 after shifting

  FkSpectrum out;
  out.magnitudes.resize(nf, nx);
  for (Index j = 0; j < nx; ++j) {
    Index const src = (j - shift + nx) % nx;
    out.magnitudes.col(j) = s.col(src).head(nf).cwiseAbs();
  }
  out.freq_axis.resize(static_cast<std::size_t>(nf));
  for (Index i = 0; i < nf; ++i) {
    out.freq_axis[static_cast<std::size_t>(i)] = static_cast<double>(i) / (static_cast<double>(nt) * g.dt());
  }
  out.wavenumber_axis.resize(static_cast<std::size_t>(nx));
  for (Index j = 0; j < nx; ++j) {
    out.wavenumber_axis[static_cast<std::size_t>(j)] =
      static_cast<double>(j - shift) / (static_cast<double>(nx) * g.dx());
  }
  return out;
}

} // namespace grl
