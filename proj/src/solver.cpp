#include "groundroll/solver.hpp"

#include "groundroll/error.hpp"
#include "groundroll/numerics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace grl {

namespace {

constexpr double kImagGuard = 1e-6;

void require_mask_shape(SolverState const &s, Mask const &m)
{
  if (m.nt() != s.x.rows() || m.nx() != s.x.cols()) {
    throw ArgumentError("mask shape " + std::to_string(m.nt()) + "x" + std::to_string(m.nx()) +
                        " does not match the gather " + std::to_string(s.x.rows()) + "x" +
                        std::to_string(s.x.cols()));
  }
}

} // namespace

void SolverConfig::validate() const
{
  if (!(lambda_s > 0.0) || !(lambda_g > 0.0) || !std::isfinite(lambda_s) || !std::isfinite(lambda_g)) {
    throw ArgumentError("lambda_s and lambda_g must be positive");
  }
  if (!(rho1 > 0.0) || !(rho2 > 0.0) || !(rho3 > 0.0) || !std::isfinite(rho1 + rho2 + rho3)) {
    throw ArgumentError("rho1, rho2, rho3 must be positive");
  }
  if (max_iter < 1) {
    throw ArgumentError("max_iter must be at least 1");
  }
  if (!(eps > 0.0)) {
    throw ArgumentError("eps must be positive");
  }
  if (rank_cap && *rank_cap < 1) {
    throw ArgumentError("rank cap must be at least 1");
  }
}

bool SolverState::all_finite() const
{
  return x.allFinite() && g.allFinite() && z.allFinite() && u.allFinite() && v.allFinite() && d1.allFinite() &&
         d2.allFinite() && d3.allFinite();
}

SolverState init_state(Index nt, Index nx)
{
  SolverState s;
  s.x = s.g = s.z = s.d2 = Grid::Zero(nt, nx);
  s.u = s.v = s.d1 = s.d3 = CGrid::Zero(nt, nx);
  s.k = 0;
  return s;
}

SolverState init_state(Gather const &y) { return init_state(y.nt(), y.nx()); }

Grid update_x(SolverState const &s, Grid const &y, SolverConfig const &cfg, double *imag_ratio)
{
  Grid const back = ifft2_unitary_real(s.u + s.d1, imag_ratio);
  return ((y - s.g) + cfg.rho1 * back) / (1.0 + cfg.rho1);
}

Grid update_g(SolverState const &s, Grid const &y, Mask const &m, SolverConfig const &cfg)
{
  require_mask_shape(s, m);
  Grid const w = m.weights();
  return ((y - s.x).array() + cfg.rho2 * w.array() * (s.z + s.d2).array()) / (1.0 + cfg.rho2 * w.array());
}

Grid update_z(SolverState const &s, Mask const &m, SolverConfig const &cfg, double *imag_ratio)
{
  require_mask_shape(s, m);
  Grid const back = ifft2_unitary_real(s.v + s.d3, imag_ratio);
  Grid const masked = m.weights().cwiseProduct(s.g);
  return (cfg.rho2 * (masked - s.d2) + cfg.rho3 * back) / (cfg.rho2 + cfg.rho3);
}

CGrid update_u(SolverState const &s, SolverConfig const &cfg)
{
  return svt(fft2_unitary(s.x) - s.d1, cfg.lambda_s / cfg.rho1, cfg.rank_cap);
}

CGrid update_v(SolverState const &s, SolverConfig const &cfg)
{
  return svt(fft2_unitary(s.z) - s.d3, cfg.lambda_g / cfg.rho3, cfg.rank_cap);
}

Duals update_duals(SolverState const &s, Mask const &m)
{
  require_mask_shape(s, m);
  return {s.d1 + s.u - fft2_unitary(s.x), s.d2 + s.z - m.weights().cwiseProduct(s.g),
          s.d3 + s.v - fft2_unitary(s.z)};
}

Residuals residuals(SolverState const &s, Mask const &m)
{
  require_mask_shape(s, m);
  return {(s.u - fft2_unitary(s.x)).norm(), (s.z - m.weights().cwiseProduct(s.g)).norm(),
          (s.v - fft2_unitary(s.z)).norm()};
}

double objective(SolverState const &s, Grid const &y, Mask const &m, SolverConfig const &cfg)
{
  require_mask_shape(s, m);
  return 0.5 * (y - s.x - s.g).squaredNorm() + cfg.lambda_s * nuclear_norm(fft2_unitary(s.x)) +
         cfg.lambda_g * nuclear_norm(fft2_unitary(s.z));
}

std::string to_string(Termination t) { return t == Termination::converged ? "converged" : "max_iter"; }

std::string RunReport::to_csv() const
{
  std::ostringstream out;
  out.precision(17);
  out << "iteration,r1,r2,r3,objective\n";
  for (auto const &h : history) {
    out << h.iteration << ',' << h.res.r1 << ',' << h.res.r2 << ',' << h.res.r3 << ',' << h.objective << '\n';
  }
  return out.str();
}

void RunReport::write_csv(std::filesystem::path const &path) const
{
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw FileError("cannot open " + path.string() + " for writing");
  }
  out << to_csv();
  if (!out) {
    throw FileError("write failed for " + path.string());
  }
}

Separation separate(Gather const &y, Mask const &m, SolverConfig const &cfg)
{
  cfg.validate();
  if (!m.same_shape(y)) {
    throw ArgumentError("mask shape " + std::to_string(m.nt()) + "x" + std::to_string(m.nx()) +
                        " does not match the gather " + std::to_string(y.nt()) + "x" + std::to_string(y.nx()));
  }
  if (y.samples().cwiseAbs().maxCoeff() > 1.0 + 1e-9) {
    throw ArgumentError("separate expects a normalized gather (max |y| <= 1)");
  }

  Grid const &yv = y.samples();
  Grid const w = m.weights();
  SolverState s = init_state(y);
  RunReport report;

  auto guard = [](double ratio, char const *which, int k) {
    if (ratio > kImagGuard) {
      throw ConsistencyError(std::string(which) + "-update at iteration " + std::to_string(k) +
                             " left imaginary residue " + std::to_string(ratio) + " of its norm");
    }
  };

  while (s.k < cfg.max_iter) {
    int const k = s.k + 1;
    double ratio = 0.0;
    s.x = update_x(s, yv, cfg, &ratio);
    guard(ratio, "X", k);
    s.g = update_g(s, yv, m, cfg);
    s.z = update_z(s, m, cfg, &ratio);
    guard(ratio, "Z", k);

    CGrid const fx = fft2_unitary(s.x);
    CGrid const fz = fft2_unitary(s.z);
    s.u = svt(fx - s.d1, cfg.lambda_s / cfg.rho1, cfg.rank_cap);
    s.v = svt(fz - s.d3, cfg.lambda_g / cfg.rho3, cfg.rank_cap);

    // The dual increments are exactly the primal residuals.
    CGrid const e1 = s.u - fx;
    Grid const e2 = s.z - w.cwiseProduct(s.g);
    CGrid const e3 = s.v - fz;
    s.d1 += e1;
    s.d2 += e2;
    s.d3 += e3;
    s.k = k;

    if (!s.all_finite()) {
      throw DivergenceError("non-finite iterate at iteration " + std::to_string(k), k);
    }

    Residuals const r{e1.norm(), e2.norm(), e3.norm()};
    report.final_residuals = r;
    report.iterations = k;
    if (cfg.record_history) {
      report.history.push_back({k, r, objective(s, yv, m, cfg)});
    }
    if (r.max() <= cfg.eps) {
      report.reason = Termination::converged;
      break;
    }
  }

  return {y.with_samples(s.x), y.with_samples(s.g), std::move(report)};
}

Separation separate_normalized(Gather const &y, Mask const &m, SolverConfig const &cfg)
{
  if (y.samples().cwiseAbs().maxCoeff() == 0.0) {
    return separate(y, m, cfg);
  }
  auto const [yn, scale] = normalize(y);
  auto out = separate(yn, m, cfg);
  return {y.with_samples(out.x.samples() * scale), y.with_samples(out.g.samples() * scale), std::move(out.report)};
}

} // namespace grl
