#pragma once

#include "groundroll/seisdata.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace grl {

/// Weights and ADMM settings. Defaults are tuned for
/// gathers normalized to unit peak amplitude.
struct SolverConfig
{
  double lambda_s = 5.0e-3; // nuclear-norm weight on F(X)
  double lambda_g = 1.0e-2; // nuclear-norm weight on F(Z)
  double rho1 = 3.0;        // penalty for U = F(X)
  double rho2 = 3.0;        // penalty for Z = M o G
  double rho3 = 3.0;        // penalty for V = F(Z)
  int max_iter = 200;
  double eps = 1e-4;
  bool record_history = true;
  std::optional<Index> rank_cap; // truncate the SVT SVDs; full when unset

  void validate() const;
};

/// All ADMM iterates. Z is the mask-supported ground roll; U and V live in
/// the Fourier domain; D1..D3 are the scaled duals.
struct SolverState
{
  Grid x, g, z;
  CGrid u, v;
  CGrid d1;
  Grid d2;
  CGrid d3;
  int k = 0;

  bool all_finite() const;
};

SolverState init_state(Index nt, Index nx);
SolverState init_state(Gather const &y);

// Closed-form subproblem solutions, each using the iterates currently held
// in `state`. The inverse transforms keep only the real part; when
// `imag_ratio` is given it receives the discarded fraction.
Grid update_x(SolverState const &state, Grid const &y, SolverConfig const &cfg, double *imag_ratio = nullptr);
Grid update_g(SolverState const &state, Grid const &y, Mask const &m, SolverConfig const &cfg);
Grid update_z(SolverState const &state, Mask const &m, SolverConfig const &cfg, double *imag_ratio = nullptr);
CGrid update_u(SolverState const &state, SolverConfig const &cfg);
CGrid update_v(SolverState const &state, SolverConfig const &cfg);

struct Duals
{
  CGrid d1;
  Grid d2;
  CGrid d3;
};

Duals update_duals(SolverState const &state, Mask const &m);

struct Residuals
{
  double r1 = 0.0; // ||U - F(X)||_F
  double r2 = 0.0; // ||Z - M o G||_F
  double r3 = 0.0; // ||V - F(Z)||_F

  double max() const { return std::max({r1, r2, r3}); }
};

Residuals residuals(SolverState const &state, Mask const &m);

/// 1/2 ||Y - X - G||^2 + lambda_s ||F(X)||_* + lambda_g ||F(Z)||_*.
double objective(SolverState const &state, Grid const &y, Mask const &m, SolverConfig const &cfg);

enum class Termination
{
  converged,
  max_iter,
};

std::string to_string(Termination t);

struct IterationRecord
{
  int iteration; // 1-based
  Residuals res;
  double objective;
};

struct RunReport
{
  std::vector<IterationRecord> history;
  Termination reason = Termination::max_iter;
  int iterations = 0;
  Residuals final_residuals;

  /// `iteration,r1,r2,r3,objective` with one row per recorded iteration.
  std::string to_csv() const;
  void write_csv(std::filesystem::path const &path) const;
};

struct Separation
{
  Gather x; // useful signal
  Gather g; // removed ground roll
  RunReport report;
};

/// Runs the ADMM iteration in the order X, G, Z, U, V, duals until all three
/// primal residuals are <= eps or max_iter is reached. `y` must already be
/// normalized (max |y| <= 1).
Separation separate(Gather const &y, Mask const &m, SolverConfig const &cfg = {});

/// normalize -> separate -> rescale outputs to the input's amplitude.
Separation separate_normalized(Gather const &y, Mask const &m, SolverConfig const &cfg = {});

} // namespace grl
