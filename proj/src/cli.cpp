#include "groundroll/cli.hpp"

#include "groundroll/baselines.hpp"
#include "groundroll/error.hpp"
#include "groundroll/evalmetrics.hpp"
#include "groundroll/maskgen.hpp"
#include "groundroll/render.hpp"
#include "groundroll/solver.hpp"
#include "groundroll/synth.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <optional>
#include <sstream>
#include <thread>

namespace grl::cli {

namespace fs = std::filesystem;

namespace {

struct SynthArgs
{
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

struct MaskArgs
{
  std::string input;
  std::string out;
  HeuristicParams heuristic;
  int open_r = 1;
  int close_r = 2;
};

struct SeparateArgs
{
  std::string input;
  std::string mask;
  std::string out;
  SolverConfig solver;
  std::optional<double> rho;
  std::optional<Index> rank_cap;
};

struct BaselineArgs
{
  std::string kind;
  std::string input;
  std::string mask;
  std::string out;
  FkFilterParams fk;
  LocalSvdParams lsvd;
};

struct MetricsArgs
{
  std::string clean;
  std::string x;
  std::string g;
  std::string method = "method";
  bool header = false;
  SimilarityParams sim;
};

struct RenderArgs
{
  std::string input;
  std::string out;
  double gain = 98.0;
  std::string colormap = "gray";
  bool fk = false;
};

bool is_mask_file(fs::path const &path)
{
  std::ifstream in(path, std::ios::binary);
  char magic[4] = {};
  in.read(magic, 4);
  return in && std::string_view(magic, 4) == "GRM1";
}

int cmd_synth(SynthArgs const &a, std::ostream &out, std::ostream &err)
{
  auto cfg = load_synth_config(a.config);
  if (a.seed) {
    cfg.seed = *a.seed;
  }
  auto const scene = synthesize(cfg);
  for (auto const &w : scene.warnings) {
    err << "warning: " << w << '\n';
  }
  write_gather(scene.clean, a.out + "_clean.grl");
  write_gather(scene.groundroll, a.out + "_groundroll.grl");
  write_gather(scene.noisy, a.out + "_noisy.grl");
  write_mask(scene.mask, a.out + "_mask.grm");
  out << std::fixed << std::setprecision(4) << "input SNR: " << scene.input_snr_db << " dB\n";
  return kOk;
}

int cmd_mask(MaskArgs const &a, std::ostream &out)
{
  auto const g = read_gather(a.input);
  auto const response = heuristic_response(g, a.heuristic);
  auto const mask = morph_clean(binarize(response, a.heuristic.eta), a.open_r, a.close_r);
  write_mask(mask, a.out);
  out << "mask coverage: " << std::fixed << std::setprecision(4)
      << static_cast<double>(mask.count()) / static_cast<double>(mask.nt() * mask.nx()) << '\n';
  return kOk;
}

struct SeparateOutcome
{
  std::string name;
  RunReport report;
};

SeparateOutcome separate_one(fs::path const &input, fs::path const &mask_path, std::string const &prefix,
                             SolverConfig const &cfg)
{
  auto const y = read_gather(input);
  auto const m = read_mask(mask_path);
  if (!m.same_shape(y)) {
    throw ArgumentError("mask " + mask_path.string() + " is " + std::to_string(m.nt()) + "x" +
                        std::to_string(m.nx()) + " but gather " + input.string() + " is " +
                        std::to_string(y.nt()) + "x" + std::to_string(y.nx()));
  }
  auto res = separate_normalized(y, m, cfg);
  write_gather(res.x, prefix + "_x.grl");
  write_gather(res.g, prefix + "_g.grl");
  res.report.write_csv(prefix + "_report.csv");
  return {input.filename().string(), std::move(res.report)};
}

void print_outcome(SeparateOutcome const &o, std::ostream &out)
{
  out << o.name << ": " << to_string(o.report.reason) << " after " << o.report.iterations
      << " iterations, max residual " << std::scientific << std::setprecision(3) << o.report.final_residuals.max()
      << std::defaultfloat << '\n';
}

int cmd_separate(SeparateArgs const &a, std::ostream &out)
{
  SolverConfig cfg = a.solver;
  if (a.rho) {
    cfg.rho1 = cfg.rho2 = cfg.rho3 = *a.rho;
  }
  cfg.rank_cap = a.rank_cap;
  cfg.record_history = true;
  cfg.validate();

  if (!fs::is_directory(a.input)) {
    auto const o = separate_one(a.input, a.mask, a.out, cfg);
    print_outcome(o, out);
    return o.report.reason == Termination::converged ? kOk : kNotConverged;
  }

  // Directory mode: <in>/<stem>.grl pairs with <mask>/<stem>.grm, outputs go
  // to <out>/<stem>_*.
  if (!fs::is_directory(a.mask)) {
    throw ArgumentError("directory input needs a mask directory");
  }
  std::vector<fs::path> inputs;
  for (auto const &entry : fs::directory_iterator(a.input)) {
    if (entry.is_regular_file() && entry.path().extension() == ".grl") {
      inputs.push_back(entry.path());
    }
  }
  std::sort(inputs.begin(), inputs.end());
  fs::create_directories(a.out);

  unsigned const workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<SeparateOutcome> outcomes;
  for (std::size_t begin = 0; begin < inputs.size(); begin += workers) {
    std::vector<std::future<SeparateOutcome>> batch;
    for (std::size_t i = begin; i < std::min(inputs.size(), begin + workers); ++i) {
      auto const stem = inputs[i].stem().string();
      batch.push_back(std::async(std::launch::async, separate_one, inputs[i], fs::path(a.mask) / (stem + ".grm"),
                                 (fs::path(a.out) / stem).string(), cfg));
    }
    for (auto &f : batch) {
      outcomes.push_back(f.get());
    }
  }
  bool all_converged = true;
  for (auto const &o : outcomes) {
    print_outcome(o, out);
    all_converged = all_converged && o.report.reason == Termination::converged;
  }
  return all_converged ? kOk : kNotConverged;
}

int cmd_baseline(BaselineArgs const &a, std::ostream &out, std::ostream &err)
{
  if (a.kind != "fk" && a.kind != "lsvd") {
    err << "unknown baseline kind '" << a.kind << "'; valid kinds: fk, lsvd\n";
    return kUsageOrFormat;
  }
  auto const y = read_gather(a.input);
  Decomposition d = [&] {
    if (a.kind == "fk") {
      return fk_fan_filter(y, a.fk);
    }
    if (a.mask.empty()) {
      throw ArgumentError("baseline lsvd needs a mask file");
    }
    return local_svd_filter(y, read_mask(a.mask), a.lsvd);
  }();
  write_gather(d.x, a.out + "_x.grl");
  write_gather(d.g, a.out + "_g.grl");
  out << a.kind << ": wrote " << a.out << "_x.grl and " << a.out << "_g.grl\n";
  return kOk;
}

int cmd_metrics(MetricsArgs const &a, std::ostream &out)
{
  auto const clean = read_gather(a.clean);
  auto const x = read_gather(a.x);
  auto const g = read_gather(a.g);
  double const snr = snr_db(clean, x);
  auto const stats = similarity_stats(local_similarity(x, g, a.sim));
  if (a.header) {
    out << "method,snr_db,sim_mean,sim_var\n";
  }
  out << a.method << ',' << std::setprecision(8) << snr << ',' << stats.mean << ',' << stats.variance << '\n';
  return kOk;
}

int cmd_render(RenderArgs const &a, std::ostream &out)
{
  RenderOptions opt;
  opt.gain = a.gain;
  opt.output = a.out;
  if (a.colormap == "gray") {
    opt.colormap = Colormap::gray;
  } else if (a.colormap == "signed") {
    opt.colormap = Colormap::signed_;
  } else {
    throw ArgumentError("colormap must be gray or signed");
  }
  opt.validate();
  Image img;
  if (is_mask_file(a.input)) {
    if (a.fk) {
      throw ArgumentError("--fk needs a gather, not a mask");
    }
    img = render_mask(read_mask(a.input));
  } else if (a.fk) {
    img = render_fk(read_gather(a.input));
  } else {
    img = render_gather(read_gather(a.input), opt);
  }
  write_pgm(img, opt.output);
  out << "wrote " << opt.output.string() << " (" << img.cols() << "x" << img.rows() << ")\n";
  return kOk;
}

void add_render_options(CLI::App *sub, RenderArgs &a)
{
  sub->add_option("input", a.input, "GRL1 gather or GRM1 mask")->required();
  sub->add_option("--out", a.out, "output PGM file")->required();
  sub->add_option("--gain", a.gain, "clip percentile in (50, 100]");
  sub->add_option("--colormap", a.colormap, "gray or signed");
}

} // namespace

int run(int argc, char **argv, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Mask-guided low-rank ground-roll separation"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  auto *synth = app.add_subcommand("synth", "generate a synthetic gather, its components and mask");
  synth->add_option("config", synth_args.config, "key=value synthetic configuration")->required();
  synth->add_option("--out", synth_args.out, "output prefix")->required();
  synth->add_option("--seed", synth_args.seed, "override the noise seed");

  MaskArgs mask_args;
  auto *mask = app.add_subcommand("mask", "estimate a ground-roll mask heuristically");
  mask->add_option("input", mask_args.input, "GRL1 gather")->required();
  mask->add_option("--out", mask_args.out, "output GRM1 mask")->required();
  mask->add_option("--eta", mask_args.heuristic.eta, "binarization threshold");
  mask->add_option("--f-cut", mask_args.heuristic.f_cut, "low-band edge, Hz");
  mask->add_option("--win-t", mask_args.heuristic.win_t, "energy window half-size in samples");
  mask->add_option("--win-x", mask_args.heuristic.win_x, "energy window half-size in traces");
  mask->add_option("--open-r", mask_args.open_r, "opening radius");
  mask->add_option("--close-r", mask_args.close_r, "closing radius");

  SeparateArgs sep_args;
  auto *sep = app.add_subcommand("separate", "split a gather into signal X and ground roll G");
  sep->add_option("input", sep_args.input, "GRL1 gather, or a directory of them")->required();
  sep->add_option("mask", sep_args.mask, "GRM1 mask, or a directory of <stem>.grm")->required();
  sep->add_option("--out", sep_args.out, "output prefix (directory in directory mode)")->required();
  sep->add_option("--lambda-s", sep_args.solver.lambda_s, "signal nuclear-norm weight");
  sep->add_option("--lambda-g", sep_args.solver.lambda_g, "ground-roll nuclear-norm weight");
  sep->add_option("--rho", sep_args.rho, "common ADMM penalty");
  sep->add_option("--rho1", sep_args.solver.rho1);
  sep->add_option("--rho2", sep_args.solver.rho2);
  sep->add_option("--rho3", sep_args.solver.rho3);
  sep->add_option("--max-iter", sep_args.solver.max_iter, "iteration cap");
  sep->add_option("--eps", sep_args.solver.eps, "primal residual tolerance");
  sep->add_option("--rank-cap", sep_args.rank_cap, "truncate SVT to this rank");

  BaselineArgs base_args;
  auto *base = app.add_subcommand("baseline", "run a reference method (fk or lsvd)");
  base->add_option("kind", base_args.kind, "fk or lsvd")->required();
  base->add_option("input", base_args.input, "GRL1 gather")->required();
  base->add_option("mask", base_args.mask, "GRM1 mask (lsvd)");
  base->add_option("--out", base_args.out, "output prefix")->required();
  base->add_option("--v-reject", base_args.fk.v_reject, "fk: reject apparent velocities below, m/s");
  base->add_option("--f-max", base_args.fk.f_max, "fk: fan upper frequency, Hz");
  base->add_option("--taper", base_args.fk.taper_frac, "fk: taper fraction");
  base->add_option("--win-t", base_args.lsvd.win_t, "lsvd: window samples");
  base->add_option("--win-x", base_args.lsvd.win_x, "lsvd: window traces");
  base->add_option("--overlap-t", base_args.lsvd.overlap_t, "lsvd: overlap samples");
  base->add_option("--overlap-x", base_args.lsvd.overlap_x, "lsvd: overlap traces");
  base->add_option("--rank", base_args.lsvd.rank, "lsvd: components removed per window");

  MetricsArgs met_args;
  auto *met = app.add_subcommand("metrics", "SNR and local similarity as a CSV row");
  met->add_option("clean", met_args.clean, "reference GRL1")->required();
  met->add_option("x", met_args.x, "denoised GRL1")->required();
  met->add_option("g", met_args.g, "removed-component GRL1")->required();
  met->add_option("--method", met_args.method, "label for the method column");
  met->add_flag("--header", met_args.header, "print the CSV header first");
  met->add_option("--sim-win-t", met_args.sim.win_t);
  met->add_option("--sim-win-x", met_args.sim.win_x);
  met->add_option("--sim-sigma", met_args.sim.smooth_sigma);

  RenderArgs render_args;
  auto *render = app.add_subcommand("render", "write a PGM image of a gather, mask or f-k spectrum");
  add_render_options(render, render_args);
  render->add_flag("--fk", render_args.fk, "render the f-k magnitude spectrum in dB");

  RenderArgs spectrum_args;
  spectrum_args.fk = true;
  auto *spectrum = app.add_subcommand("spectrum", "alias for render --fk");
  add_render_options(spectrum, spectrum_args);

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const &e) {
    int const code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageOrFormat;
  }

  try {
    if (*synth) {
      return cmd_synth(synth_args, out, err);
    }
    if (*mask) {
      return cmd_mask(mask_args, out);
    }
    if (*sep) {
      return cmd_separate(sep_args, out);
    }
    if (*base) {
      return cmd_baseline(base_args, out, err);
    }
    if (*met) {
      return cmd_metrics(met_args, out);
    }
    if (*render) {
      return cmd_render(render_args, out);
    }
    if (*spectrum) {
      return cmd_render(spectrum_args, out);
    }
  } catch (DivergenceError const &e) {
    err << "error: " << e.what() << '\n';
    return kNotConverged;
  } catch (Error const &e) {
    err << "error: " << e.what() << '\n';
    return kUsageOrFormat;
  } catch (std::exception const &e) {
    err << "error: " << e.what() << '\n';
    return kUsageOrFormat;
  }
  return kUsageOrFormat;
}

int run(std::vector<std::string> const &args, std::ostream &out, std::ostream &err)
{
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("groundroll");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char *> argv;
  for (auto &s : storage) {
    argv.push_back(s.data());
  }
  argv.push_back(nullptr);
  return run(static_cast<int>(storage.size()), argv.data(), out, err);
}

} // namespace grl::cli
