#pragma once

#include "groundroll/seisdata.hpp"

#include <optional>
#include <vector>

namespace grl {

// Unitary 2-D DFT: forward and inverse both scale by 1/sqrt(nt*nx).
Spectrum fft2_unitary(Gather const &g);
CGrid fft2_unitary(Grid const &a);
CGrid fft2_unitary(CGrid const &a);
CGrid ifft2_unitary(CGrid const &s);

/// Real part of the inverse transform. `imag_ratio`, when given, receives
/// ||Im||_F / ||result||_F (0 for an all-zero input).
Grid ifft2_unitary_real(CGrid const &s, double *imag_ratio = nullptr);

/// Inverse transform of a spectrum that must originate from real data. Throws
/// ConsistencyError when the discarded imaginary part exceeds
/// `max_imag_ratio` times the Frobenius norm of the result.
Grid ifft2_unitary(Spectrum const &s, double max_imag_ratio = 1e-6);

/// DFT sample frequencies in cycles per unit, ordered like the transform
/// output (0, 1, ..., then negatives).
std::vector<double> fft_frequencies(Index n, double spacing);

struct SvdResult
{
  CGrid left_vectors;
  Eigen::VectorXd singular_values; // non-increasing
  CGrid right_vectors;

  CGrid reconstruct() const;
};

/// Thin SVD. `rank_cap` keeps only the leading components.
SvdResult svd(CGrid const &a, std::optional<Index> rank_cap = std::nullopt);

/// Singular value soft-thresholding: the prox of tau*||.||_*.
CGrid svt(CGrid const &a, double tau, std::optional<Index> rank_cap = std::nullopt);

double nuclear_norm(CGrid const &a);

struct FkSpectrum
{
  Grid magnitudes;                     // rows: frequency >= 0, cols: wavenumber
  std::vector<double> freq_axis;       // Hz
  std::vector<double> wavenumber_axis; // cycles/m, ascending
};

/// Magnitude of the unitary 2-D DFT restricted to non-negative frequencies,
/// with wavenumbers shifted so zero sits in the middle.
FkSpectrum fk_spectrum(Gather const &g);

} // namespace grl
