#include "groundroll/baselines.hpp"
#include "groundroll/cli.hpp"
#include "groundroll/maskgen.hpp"
#include "groundroll/render.hpp"
#include "support.hpp"

#include <doctest.h>

#include <sstream>

using namespace grl;
using namespace grl::test;
namespace fs = std::filesystem;

namespace {

struct Result
{
  int code;
  std::string out;
  std::string err;
};

Result groundroll(std::vector<std::string> const &args)
{
  std::ostringstream out;
  std::ostringstream err;
  int const code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct Pgm
{
  int width = 0;
  int height = 0;
  std::string pixels; // row-major
  unsigned char at(int row, int col) const { return static_cast<unsigned char>(pixels[row * width + col]); }
};

Pgm read_pgm(fs::path const &path)
{
  std::istringstream in(slurp(path));
  std::string magic;
  int maxval = 0;
  Pgm p;
  in >> magic >> p.width >> p.height >> maxval;
  in.get();
  REQUIRE(magic == "P5");
  REQUIRE(maxval == 255);
  p.pixels.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  REQUIRE(p.pixels.size() == static_cast<std::size_t>(p.width * p.height));
  return p;
}

/// Synthesizes the fixture once into a shared directory.
fs::path fixture_dir()
{
  static fs::path const dir = [] {
    auto d = scratch_dir("cli_fixture");
    auto const r = groundroll({"synth", (data_dir() / "synthetic.cfg").string(), "--out", (d / "f").string()});
    REQUIRE(r.code == 0);
    return d;
  }();
  return dir;
}

std::string last_line(std::string const &text)
{
  auto end = text.find_last_not_of('\n');
  auto start = text.rfind('\n', end);
  return text.substr(start == std::string::npos ? 0 : start + 1, end - (start == std::string::npos ? 0 : start + 1) + 1);
}

} // namespace

TEST_CASE("usage errors")
{
  CHECK(groundroll({}).code == 1);
  CHECK(groundroll({"frobnicate"}).code == 1);
  CHECK(groundroll({"--help"}).code == 0);
  CHECK(groundroll({"mask"}).code == 1);
}

TEST_CASE("synth writes the four files and reports the input SNR")
{
  auto const dir = fixture_dir();
  for (auto const *suffix : {"_clean.grl", "_groundroll.grl", "_noisy.grl", "_mask.grm"}) {
    CHECK(fs::exists(dir / (std::string("f") + suffix)));
  }
  auto const again = scratch_dir("cli_synth_again");
  auto const r = groundroll({"synth", (data_dir() / "synthetic.cfg").string(), "--out", (again / "f").string()});
  REQUIRE(r.code == 0);
  auto const pos = r.out.find("input SNR: ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::abs(std::stod(r.out.substr(pos + 11)) - 1.45) <= 0.01);
  for (auto const *suffix : {"_clean.grl", "_groundroll.grl", "_noisy.grl", "_mask.grm"}) {
    auto const name = std::string("f") + suffix;
    CHECK(slurp(dir / name) == slurp(again / name));
  }
}

TEST_CASE("synth seed override changes only the noise")
{
  auto const dir = scratch_dir("cli_seed");
  auto const cfg = (data_dir() / "synthetic.cfg").string();
  REQUIRE(groundroll({"synth", cfg, "--out", (dir / "a").string(), "--seed", "99"}).code == 0);
  CHECK(slurp(dir / "a_clean.grl") == slurp(fixture_dir() / "f_clean.grl"));
  CHECK(slurp(dir / "a_noisy.grl") != slurp(fixture_dir() / "f_noisy.grl"));
}

TEST_CASE("synth errors")
{
  auto const dir = scratch_dir("cli_synth_err");
  spit(dir / "empty.cfg", "nt = 64\nnx = 16\ngroundroll = [{\"v_app\": 400, \"f_low\": 5, \"f_high\": 12, \"amplitude\": 1}]\n");
  auto const r = groundroll({"synth", (dir / "empty.cfg").string(), "--out", (dir / "e").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("no signal content") != std::string::npos);

  spit(dir / "bad.cfg", "nt = 64\nnx = sixteen\n");
  auto const b = groundroll({"synth", (dir / "bad.cfg").string(), "--out", (dir / "b").string()});
  CHECK(b.code == 1);
  CHECK(b.err.find("line 2") != std::string::npos);
}

TEST_CASE("mask on the fixture")
{
  auto const dir = fixture_dir();
  auto const noisy = (dir / "f_noisy.grl").string();
  REQUIRE(groundroll({"mask", noisy, "--out", (dir / "h.grm").string()}).code == 0);
  auto const truth = read_mask(dir / "f_mask.grm");
  CHECK(mask_iou(read_mask(dir / "h.grm"), truth) >= 0.6);

  REQUIRE(groundroll({"mask", noisy, "--out", (dir / "hi.grm").string(), "--eta", "0.999"}).code == 0);
  CHECK(read_mask(dir / "hi.grm").count() <= truth.nt() * truth.nx() / 50);
  REQUIRE(groundroll({"mask", noisy, "--out", (dir / "lo.grm").string(), "--eta", "0.001"}).code == 0);
  CHECK(read_mask(dir / "lo.grm").count() >= truth.nt() * truth.nx() * 95 / 100);

  CHECK(groundroll({"mask", noisy, "--out", (dir / "x.grm").string(), "--eta", "1.5"}).code == 1);
  CHECK(groundroll({"mask", (dir / "missing.grl").string(), "--out", (dir / "x.grm").string()}).code == 1);
}

TEST_CASE("separate exit codes and outputs")
{
  auto const dir = fixture_dir();
  auto const noisy = (dir / "f_noisy.grl").string();
  auto const mask = (dir / "f_mask.grm").string();
  auto const r = groundroll({"separate", noisy, mask, "--out", (dir / "s").string()});
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "s_x.grl"));
  CHECK(fs::exists(dir / "s_g.grl"));
  auto const csv = slurp(dir / "s_report.csv");
  CHECK(csv.rfind("iteration,r1,r2,r3,objective\n", 0) == 0);
  std::istringstream row(last_line(csv));
  std::string cell;
  std::vector<double> v;
  while (std::getline(row, cell, ',')) {
    v.push_back(std::stod(cell));
  }
  REQUIRE(v.size() == 5);
  CHECK(std::max({v[1], v[2], v[3]}) <= 1e-4);

  CHECK(groundroll({"separate", noisy, mask, "--out", (dir / "one").string(), "--max-iter", "1"}).code == 2);

  write_mask(Mask::ones(128, 47), dir / "wrong.grm");
  auto const w = groundroll({"separate", noisy, (dir / "wrong.grm").string(), "--out", (dir / "w").string()});
  CHECK(w.code == 1);
  CHECK(w.err.find("128x47") != std::string::npos);

  CHECK(groundroll({"separate", noisy, mask, "--out", (dir / "n").string(), "--rho", "-1"}).code == 1);
}

TEST_CASE("separate directory mode matches single-file runs")
{
  auto const dir = scratch_dir("cli_dir");
  auto const fx = fixture_dir();
  fs::create_directories(dir / "in");
  fs::create_directories(dir / "masks");
  for (auto const *stem : {"a", "b"}) {
    fs::copy_file(fx / "f_noisy.grl", dir / "in" / (std::string(stem) + ".grl"));
    fs::copy_file(fx / "f_mask.grm", dir / "masks" / (std::string(stem) + ".grm"));
  }
  std::vector<std::string> const flags{"--max-iter", "5"};
  auto args = std::vector<std::string>{"separate", (dir / "in").string(), (dir / "masks").string(), "--out",
                                       (dir / "out").string()};
  args.insert(args.end(), flags.begin(), flags.end());
  CHECK(groundroll(args).code == 2);

  args = {"separate", (fx / "f_noisy.grl").string(), (fx / "f_mask.grm").string(), "--out", (dir / "single").string()};
  args.insert(args.end(), flags.begin(), flags.end());
  CHECK(groundroll(args).code == 2);
  for (auto const *stem : {"a", "b"}) {
    CHECK(slurp(dir / "out" / (std::string(stem) + "_x.grl")) == slurp(dir / "single_x.grl"));
    CHECK(slurp(dir / "out" / (std::string(stem) + "_report.csv")) == slurp(dir / "single_report.csv"));
  }
}

TEST_CASE("baseline subcommand")
{
  auto const dir = fixture_dir();
  auto const noisy = (dir / "f_noisy.grl").string();
  REQUIRE(groundroll({"baseline", "fk", noisy, "--out", (dir / "fk").string()}).code == 0);
  auto const y = read_gather(noisy);
  auto const x = read_gather(dir / "fk_x.grl");
  auto const g = read_gather(dir / "fk_g.grl");
  // Files hold 32-bit floats; the in-memory split is exact to 1e-10.
  double const peak = y.samples().cwiseAbs().maxCoeff();
  CHECK((x.samples() + g.samples() - y.samples()).cwiseAbs().maxCoeff() <= 1e-6 * peak);
  auto const mem = fk_fan_filter(y);
  CHECK((mem.x.samples() + mem.g.samples() - y.samples()).cwiseAbs().maxCoeff() < 1e-10);

  write_mask(Mask::zeros(y.nt(), y.nx()), dir / "empty.grm");
  REQUIRE(groundroll({"baseline", "lsvd", noisy, (dir / "empty.grm").string(), "--out", (dir / "ls").string()})
            .code == 0);
  CHECK(slurp(dir / "ls_x.grl") == slurp(noisy));

  auto const r = groundroll({"baseline", "inr", noisy, "--out", (dir / "inr").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("fk, lsvd") != std::string::npos);

  CHECK(groundroll({"baseline", "lsvd", noisy, "--out", (dir / "nomask").string()}).code == 1);
}

TEST_CASE("metrics subcommand")
{
  auto const dir = fixture_dir();
  auto const clean = (dir / "f_clean.grl").string();
  auto const y = read_gather(clean);
  write_gather(y.with_samples(Grid::Zero(y.nt(), y.nx())), dir / "zero.grl");
  auto const r = groundroll({"metrics", clean, clean, (dir / "zero.grl").string(), "--method", "oracle"});
  REQUIRE(r.code == 0);
  std::istringstream row(r.out);
  std::string method;
  std::string snr;
  std::string mean;
  std::getline(row, method, ',');
  std::getline(row, snr, ',');
  std::getline(row, mean, ',');
  CHECK(method == "oracle");
  CHECK(std::stod(snr) == 300.0);
  CHECK(std::stod(mean) < 1e-3);

  auto const h = groundroll({"metrics", clean, clean, (dir / "zero.grl").string(), "--header"});
  CHECK(h.out.rfind("method,snr_db,sim_mean,sim_var\n", 0) == 0);

  write_gather(Gather(Grid::Zero(8, 8), 0.004, 10.0), dir / "small.grl");
  CHECK(groundroll({"metrics", clean, (dir / "small.grl").string(), (dir / "zero.grl").string()}).code == 1);
}

TEST_CASE("render subcommand")
{
  auto const dir = scratch_dir("cli_render");
  write_gather(Gather(Grid::Constant(20, 10, 0.7), 0.004, 10.0), dir / "c.grl");
  REQUIRE(groundroll({"render", (dir / "c.grl").string(), "--out", (dir / "c.pgm").string()}).code == 0);
  auto const c = read_pgm(dir / "c.pgm");
  CHECK(c.width == 10);
  CHECK(c.height == 20);
  CHECK(c.pixels == std::string(200, static_cast<char>(128)));

  REQUIRE(groundroll({"render", (dir / "c.grl").string(), "--out", (dir / "cs.pgm").string(), "--colormap", "signed"})
            .code == 0);
  CHECK(groundroll({"render", (dir / "c.grl").string(), "--out", (dir / "x.pgm").string(), "--gain", "40"}).code == 1);
  CHECK(groundroll({"render", (dir / "c.grl").string(), "--out", (dir / "x.pgm").string(), "--colormap", "jet"})
          .code == 1);

  auto const fx = fixture_dir();
  REQUIRE(groundroll({"render", (fx / "f_mask.grm").string(), "--out", (dir / "m.pgm").string()}).code == 0);
  auto const m = read_pgm(dir / "m.pgm");
  bool binary = true;
  for (char px : m.pixels) {
    binary = binary && (px == 0 || static_cast<unsigned char>(px) == 255);
  }
  CHECK(binary);

  REQUIRE(groundroll({"render", (fx / "f_noisy.grl").string(), "--out", (dir / "n.pgm").string()}).code == 0);
  auto const n = read_pgm(dir / "n.pgm");
  CHECK(n.width == 48);
  CHECK(n.height == 128);
}

TEST_CASE("gray rendering clips at the gain percentile")
{
  Grid a(100, 2);
  for (Index i = 0; i < 100; ++i) {
    a(i, 0) = static_cast<double>(i);
    a(i, 1) = static_cast<double>(i);
  }
  RenderOptions opt;
  opt.gain = 90.0;
  auto const img = render_gather(Gather(a, 0.004, 10.0), opt);
  CHECK(img(0, 0) == 0);
  CHECK(img(99, 1) == 255);
  CHECK(img(95, 0) == 255);
  CHECK(img(50, 0) > 100);
  CHECK(img(50, 0) < 156);

  opt.colormap = Colormap::signed_;
  Grid s = Grid::Zero(3, 3);
  s(0, 0) = 1.0;
  s(1, 1) = -1.0;
  auto const si = render_gather(Gather(s, 0.004, 10.0), opt);
  CHECK(si(2, 2) == 128);
  CHECK(si(0, 0) == 255);
  CHECK(si(1, 1) == 0);
}

TEST_CASE("fk rendering peaks on a ground-roll velocity line")
{
  auto const fx = fixture_dir();
  auto const dir = scratch_dir("cli_fk");
  REQUIRE(groundroll({"render", (fx / "f_noisy.grl").string(), "--out", (dir / "r.pgm").string(), "--fk"}).code == 0);
  REQUIRE(groundroll({"spectrum", (fx / "f_noisy.grl").string(), "--out", (dir / "s.pgm").string()}).code == 0);
  CHECK(slurp(dir / "r.pgm") == slurp(dir / "s.pgm"));

  auto const img = read_pgm(dir / "r.pgm");
  auto const cfg = fixture_config();
  REQUIRE(img.height == static_cast<int>(cfg.nt / 2 + 1));
  REQUIRE(img.width == static_cast<int>(cfg.nx));
  int br = 0;
  int bc = 0;
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      if (img.at(r, c) > img.at(br, bc)) {
        br = r;
        bc = c;
      }
    }
  }
  CHECK(img.at(br, bc) == 255);
  double const f = br / (cfg.nt * cfg.dt);
  double const dk = 1.0 / (cfg.nx * cfg.dx);
  double const k = (bc - cfg.nx / 2) * dk;
  bool on_line = false;
  for (auto const &mode : cfg.groundroll) {
    on_line = on_line || std::abs(std::abs(k) - f / mode.v_app) <= 1.5 * dk;
  }
  CHECK(on_line);
  CHECK(k != 0.0);
}
