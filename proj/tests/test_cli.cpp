#include <doctest.h>

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "wavepack/filterbank.hpp"
#include "wavepack/image.hpp"
#include "wavepack/packets.hpp"
#include "wavepack/rng.hpp"

using namespace wavepack;
using testsupport::CommandResult;
using testsupport::TempDir;
using testsupport::cli_path;
using testsupport::quoted;
using testsupport::read_file;
using testsupport::run_command;

namespace {

#ifndef WAVEPACK_GOLDEN_DIR
#define WAVEPACK_GOLDEN_DIR "tests/golden"
#endif

std::string golden(const std::string& name) {
  return read_file(std::filesystem::path(WAVEPACK_GOLDEN_DIR) / name);
}

std::size_t line_count(const std::string& s) {
  std::size_t n = 0;
  for (const char c : s)
    if (c == '\n') ++n;
  return n;
}

// Exact 8-bit samples so the CLI and the in-process oracle decode the same
// doubles from the file.
Image quantized_image(std::int64_t h, std::int64_t w, std::uint64_t salt) {
  Image img(1, h, w);
  for (std::size_t i = 0; i < img.data.size(); ++i)
    img.data[i] = static_cast<double>((i * 31 + salt * 17 + 5) % 256) / 255.0;
  return img;
}

}  // namespace

#define REQUIRE_CLI() \
  const std::string cli = cli_path(); \
  if (cli.empty()) { \
    MESSAGE("WAVEPACK_CLI not set; skipping"); \
    return; \
  }

TEST_CASE("cli labels: flat and grid output match the golden files") {
  REQUIRE_CLI();
  CommandResult flat = run_command(quoted(cli) + " labels --level 3 2>/dev/null");
  CHECK(flat.exit_code == 0);
  CHECK(flat.out == golden("labels_q3.txt"));

  CommandResult grid =
      run_command(quoted(cli) + " labels --level 3 --ordering frequency --grid 2>/dev/null");
  CHECK(grid.exit_code == 0);
  CHECK(grid.out == golden("freq_grid_q3.txt"));

  CommandResult one = run_command(quoted(cli) + " labels --level 1 2>/dev/null");
  CHECK(one.exit_code == 0);
  CHECK(one.out == "a\nh\nv\nd\n");
}

TEST_CASE("cli verify: clean filters pass, truncated boundaries fail with code 1") {
  REQUIRE_CLI();
  CommandResult ok = run_command(quoted(cli) + " verify --filter db4 --size 16 2>/dev/null");
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("verify: OK") != std::string::npos);

  // one level on a long signal: truncated mode runs but S*A != I → exit 1
  // (deeper levels would hit the filter-longer-than-signal rejection, exit 2)
  CommandResult bad = run_command(
      quoted(cli) +
      " verify --filter db4 --size 32 --levels 1 --boundary truncated 2>/dev/null");
  CHECK(bad.exit_code == 1);
}

TEST_CASE("cli exit codes: usage errors are 2, io errors are 3") {
  REQUIRE_CLI();
  CHECK(run_command(quoted(cli) + " frobnicate 2>/dev/null").exit_code == 2);
  CHECK(run_command(quoted(cli) + " verify --filter db17 2>/dev/null").exit_code == 2);
  CHECK(run_command(quoted(cli) + " transform 2>/dev/null").exit_code == 2);  // --input missing
  CHECK(run_command(quoted(cli) + " packets --input /no/such/image.pgm 2>/dev/null").exit_code ==
        2);  // rejected by the existing-file check

  TempDir tmp("cli-io");
  const std::string img = (tmp.path() / "img.pgm").string();
  write_pgm(quantized_image(16, 16, 1), img);
  CommandResult io = run_command(quoted(cli) + " packets --input " + quoted(img) +
                                 " --output /nonexistent-wavepack-dir/out.wpk 2>/dev/null");
  CHECK(io.exit_code == 3);

  CHECK(run_command(quoted(cli) + " --help >/dev/null 2>&1").exit_code == 0);
}

TEST_CASE("cli packets: WPK1 file is bit-exact and reruns are byte-identical") {
  REQUIRE_CLI();
  TempDir tmp("cli-wpk");
  const std::string img = (tmp.path() / "img.pgm").string();
  write_pgm(quantized_image(16, 16, 9), img);

  const std::string out_a = (tmp.path() / "a.wpk").string();
  const std::string out_b = (tmp.path() / "b.wpk").string();
  const std::string base = quoted(cli) + " packets --input " + quoted(img) +
                           " --wavelet db2 --level 2 --output ";
  CommandResult first = run_command(base + quoted(out_a) + " 2>/dev/null");
  CHECK(first.exit_code == 0);
  CHECK(first.out.find("16 packets of 4x4") != std::string::npos);
  CHECK(run_command(base + quoted(out_b) + " 2>/dev/null").exit_code == 0);
  CHECK(read_file(out_a) == read_file(out_b));

  // oracle: same transform in-process, serialized through the same writer
  const PacketTensor t = wpt_2d(load_image(img), builtin_filter("db2"), 2,
                                BoundaryMode::gram_schmidt, PacketOrdering::natural);
  std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
  write_wpk1(t, buf);
  CHECK(read_file(out_a) == buf.str());
}

TEST_CASE("cli config file fills options, command line overrides it") {
  REQUIRE_CLI();
  TempDir tmp("cli-config");
  const std::string cfg = (tmp.path() / "wavepack.ini").string();
  {
    std::ofstream os(cfg);
    os << "[labels]\nlevel=2\n";
  }
  CommandResult from_cfg =
      run_command(quoted(cli) + " --config " + quoted(cfg) + " labels 2>/dev/null");
  CHECK(from_cfg.exit_code == 0);
  CHECK(line_count(from_cfg.out) == 16);

  CommandResult overridden = run_command(quoted(cli) + " --config " + quoted(cfg) +
                                         " labels --level 1 2>/dev/null");
  CHECK(overridden.exit_code == 0);
  CHECK(line_count(overridden.out) == 4);
}

TEST_CASE("cli train / evaluate / stats smoke test on a tiny synthetic dataset") {
  REQUIRE_CLI();
  TempDir tmp("cli-train");
  Rng rng(3);
  for (const std::string cls : {"flat", "rough"}) {
    std::filesystem::create_directories(tmp.path() / cls);
    for (int i = 0; i < 30; ++i) {
      Image img = cls == "flat" ? testsupport::smooth_field(16, rng)
                                : testsupport::random_image(1, 16, 16, rng);
      char name[32];
      std::snprintf(name, sizeof name, "%03d.pgm", i);
      write_pgm(img, tmp.path() / cls / name);
    }
  }

  const std::string model = (tmp.path() / "model.wlm").string();
  const std::string history = (tmp.path() / "history.csv").string();
  CommandResult tr = run_command(quoted(cli) + " train --data " + quoted(tmp.path().string()) +
                                 " --epochs 2 --batch 16 --seed 0 --model " + quoted(model) +
                                 " --history " + quoted(history) + " 2>/dev/null");
  CHECK(tr.exit_code == 0);
  CHECK(tr.out.find("seed 0: test accuracy") != std::string::npos);
  CHECK(tr.out.find("accuracy:") != std::string::npos);
  CHECK(std::filesystem::exists(model));

  std::istringstream hist(read_file(history));
  std::string line;
  std::getline(hist, line);
  CHECK(line == "epoch,split,accuracy,loss");
  CHECK(line_count(read_file(history)) == 5);  // header + 2 epochs x {train,val}

  CommandResult ev = run_command(quoted(cli) + " evaluate --model " + quoted(model) +
                                 " --data " + quoted(tmp.path().string()) + " 2>/dev/null");
  CHECK(ev.exit_code == 0);
  CHECK(ev.out.find("test accuracy:") != std::string::npos);
  CHECK(ev.out.find("flat:") != std::string::npos);

  const std::string curve = (tmp.path() / "curve.csv").string();
  CommandResult st = run_command(quoted(cli) + " stats --dir " +
                                 quoted((tmp.path() / "rough").string()) + " --curve " +
                                 quoted(curve) + " 2>/dev/null");
  CHECK(st.exit_code == 0);
  std::istringstream cv(read_file(curve));
  std::getline(cv, line);
  CHECK(line == "packet_index,label,mean,std");
  CHECK(line_count(read_file(curve)) == 65);  // header + 64 packets
}
