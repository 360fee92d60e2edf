#include "groundroll/seisdata.hpp"

#include "groundroll/error.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string_view>
#include <vector>

namespace grl {

namespace {

constexpr std::string_view kGatherMagic = "GRL1";
constexpr std::string_view kMaskMagic = "GRM1";
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kGatherHeader = 32;
constexpr std::size_t kMaskHeader = 16;

void put_u32(std::vector<char> &buf, std::uint32_t v)
{
  for (int i = 0; i < 4; ++i) {
    buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
  }
}

void put_u64(std::vector<char> &buf, std::uint64_t v)
{
  for (int i = 0; i < 8; ++i) {
    buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
  }
}

std::uint32_t get_u32(std::vector<char> const &buf, std::size_t at)
{
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[at + i])) << (8 * i);
  }
  return v;
}

std::uint64_t get_u64(std::vector<char> const &buf, std::size_t at)
{
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[at + i])) << (8 * i);
  }
  return v;
}

std::vector<char> slurp(std::filesystem::path const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FileError("cannot open " + path.string() + " for reading");
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spill(std::vector<char> const &buf, std::filesystem::path const &path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw FileError("cannot open " + path.string() + " for writing");
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  out.flush();
  if (!out) {
    throw FileError("write failed for " + path.string());
  }
}

struct Dims
{
  std::uint32_t nt;
  std::uint32_t nx;
};

Dims check_header(std::vector<char> const &buf, std::string_view magic, std::size_t header,
                  std::filesystem::path const &path)
{
  if (buf.size() < header) {
    throw FormatError(path.string() + ": truncated header");
  }
  if (std::string_view(buf.data(), 4) != magic) {
    throw FormatError(path.string() + ": bad magic");
  }
  if (auto const version = get_u32(buf, 4); version != kVersion) {
    throw FormatError(path.string() + ": unsupported version " + std::to_string(version));
  }
  Dims const d{get_u32(buf, 8), get_u32(buf, 12)};
  if (d.nt < 2 || d.nx < 2) {
    throw FormatError(path.string() + ": nt and nx must be at least 2");
  }
  return d;
}

void check_payload(std::size_t have, std::size_t want, std::filesystem::path const &path)
{
  if (have < want) {
    throw FormatError(path.string() + ": truncated payload (" + std::to_string(have) + " of " +
                      std::to_string(want) + " bytes)");
  }
  if (have > want) {
    throw FormatError(path.string() + ": trailing bytes after payload");
  }
}

} // namespace

Gather::Gather(Grid samples, double dt, double dx)
  : samples_{std::move(samples)}
  , dt_{dt}
  , dx_{dx}
{
  if (samples_.rows() < 2 || samples_.cols() < 2) {
    throw ArgumentError("gather needs nt >= 2 and nx >= 2");
  }
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) {
    throw ArgumentError("gather dt must be positive");
  }
  if (!(dx_ > 0.0) || !std::isfinite(dx_)) {
    throw ArgumentError("gather dx must be positive");
  }
  if (!samples_.allFinite()) {
    throw ArgumentError("gather samples must be finite");
  }
}

Mask::Mask(Bits bits)
  : bits_{std::move(bits)}
{
  if ((bits_ > 1).any()) {
    throw ArgumentError("mask entries must be 0 or 1");
  }
}

Mask Mask::zeros(Index nt, Index nx) { return Mask(Bits::Zero(nt, nx)); }

Mask Mask::ones(Index nt, Index nx) { return Mask(Bits::Ones(nt, nx)); }

Index Mask::count() const { return bits_.cast<Index>().sum(); }

Grid Mask::weights() const { return bits_.cast<double>().matrix(); }

Spectrum::Spectrum(CGrid values)
  : values_{std::move(values)}
{
  if (!values_.allFinite()) {
    throw ArgumentError("spectrum entries must be finite");
  }
}

void write_gather(Gather const &g, std::filesystem::path const &path)
{
  std::vector<char> buf;
  auto const n = static_cast<std::size_t>(g.nt() * g.nx());
  buf.reserve(kGatherHeader + 4 * n);
  buf.insert(buf.end(), kGatherMagic.begin(), kGatherMagic.end());
  put_u32(buf, kVersion);
  put_u32(buf, static_cast<std::uint32_t>(g.nt()));
  put_u32(buf, static_cast<std::uint32_t>(g.nx()));
  put_u64(buf, std::bit_cast<std::uint64_t>(g.dt()));
  put_u64(buf, std::bit_cast<std::uint64_t>(g.dx()));
  double const *p = g.samples().data();
  for (std::size_t i = 0; i < n; ++i) {
    put_u32(buf, std::bit_cast<std::uint32_t>(static_cast<float>(p[i])));
  }
  spill(buf, path);
}

Gather read_gather(std::filesystem::path const &path)
{
  auto const buf = slurp(path);
  auto const d = check_header(buf, kGatherMagic, kGatherHeader, path);
  double const dt = std::bit_cast<double>(get_u64(buf, 16));
  double const dx = std::bit_cast<double>(get_u64(buf, 24));
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw FormatError(path.string() + ": dt must be positive and finite");
  }
  if (!(dx > 0.0) || !std::isfinite(dx)) {
    throw FormatError(path.string() + ": dx must be positive and finite");
  }
  auto const n = static_cast<std::size_t>(d.nt) * d.nx;
  check_payload(buf.size() - kGatherHeader, 4 * n, path);
  Grid samples(d.nt, d.nx);
  double *p = samples.data();
  for (std::size_t i = 0; i < n; ++i) {
    float const v = std::bit_cast<float>(get_u32(buf, kGatherHeader + 4 * i));
    if (!std::isfinite(v)) {
      throw FormatError(path.string() + ": non-finite sample at trace " + std::to_string(i / d.nt) +
                        ", time index " + std::to_string(i % d.nt));
    }
    p[i] = v;
  }
  return Gather(std::move(samples), dt, dx);
}

void write_mask(Mask const &m, std::filesystem::path const &path)
{
  std::vector<char> buf;
  auto const n = static_cast<std::size_t>(m.nt() * m.nx());
  buf.reserve(kMaskHeader + n);
  buf.insert(buf.end(), kMaskMagic.begin(), kMaskMagic.end());
  put_u32(buf, kVersion);
  put_u32(buf, static_cast<std::uint32_t>(m.nt()));
  put_u32(buf, static_cast<std::uint32_t>(m.nx()));
  std::uint8_t const *p = m.bits().data();
  buf.insert(buf.end(), p, p + n);
  spill(buf, path);
}

Mask read_mask(std::filesystem::path const &path)
{
  auto const buf = slurp(path);
  auto const d = check_header(buf, kMaskMagic, kMaskHeader, path);
  auto const n = static_cast<std::size_t>(d.nt) * d.nx;
  check_payload(buf.size() - kMaskHeader, n, path);
  Mask::Bits bits(d.nt, d.nx);
  for (std::size_t i = 0; i < n; ++i) {
    auto const b = static_cast<std::uint8_t>(buf[kMaskHeader + i]);
    if (b > 1) {
      throw FormatError(path.string() + ": mask byte " + std::to_string(b) + " at offset " +
                        std::to_string(kMaskHeader + i) + " is not 0 or 1");
    }
    bits.data()[i] = b;
  }
  return Mask(std::move(bits));
}

Normalized normalize(Gather const &g)
{
  double const peak = g.samples().cwiseAbs().maxCoeff();
  if (peak == 0.0) {
    throw DegenerateInputError("cannot normalize an all-zero gather");
  }
  return {g.with_samples(g.samples() / peak), peak};
}

} // namespace grl
