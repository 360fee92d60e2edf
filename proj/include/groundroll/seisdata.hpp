#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>

namespace grl {

using Index = Eigen::Index;
// Rows are time samples, columns are traces. Column-major storage keeps each
// trace contiguous, which is also the on-disk order.
using Grid = Eigen::MatrixXd;
using CGrid = Eigen::MatrixXcd;

/// A time–offset seismic record with its sampling intervals.
class Gather
{
public:
  Gather(Grid samples, double dt, double dx);

  Index nt() const { return samples_.rows(); }
  Index nx() const { return samples_.cols(); }
  double dt() const { return dt_; }
  double dx() const { return dx_; }
  Grid const &samples() const { return samples_; }

  /// Same sampling metadata, new amplitudes.
  Gather with_samples(Grid samples) const { return Gather(std::move(samples), dt_, dx_); }

private:
  Grid samples_;
  double dt_;
  double dx_;
};

/// Binary annotation aligned sample-for-sample with a Gather.
class Mask
{
public:
  using Bits = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

  explicit Mask(Bits bits);
  static Mask zeros(Index nt, Index nx);
  static Mask ones(Index nt, Index nx);

  Index nt() const { return bits_.rows(); }
  Index nx() const { return bits_.cols(); }
  Bits const &bits() const { return bits_; }
  Index count() const;
  /// The mask as 0.0/1.0 weights.
  Grid weights() const;
  bool same_shape(Gather const &g) const { return nt() == g.nt() && nx() == g.nx(); }

  friend bool operator==(Mask const &a, Mask const &b)
  {
    return a.nt() == b.nt() && a.nx() == b.nx() && (a.bits_ == b.bits_).all();
  }

private:
  Bits bits_;
};

/// Complex grid with the shape of the gather it was transformed from.
class Spectrum
{
public:
  explicit Spectrum(CGrid values);

  Index nt() const { return values_.rows(); }
  Index nx() const { return values_.cols(); }
  CGrid const &values() const { return values_; }

private:
  CGrid values_;
};

void write_gather(Gather const &g, std::filesystem::path const &path);
Gather read_gather(std::filesystem::path const &path);

void write_mask(Mask const &m, std::filesystem::path const &path);
Mask read_mask(std::filesystem::path const &path);

struct Normalized
{
  Gather gather;
  double scale;
};

/// Divides by the global peak absolute amplitude.
Normalized normalize(Gather const &g);

} // namespace grl
