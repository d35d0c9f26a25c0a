// Acceptance harness: one criterion per invocation, one PASS/FAIL line on
// stdout, exit 0/1. Run `wavepack_acceptance --criterion N --cli <path>`;
// the ctest targets acceptance_1 … acceptance_9 wire this up.
//
// Every tolerance is pinned here, next to the check it gates.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "../support.hpp"
#include "wavepack/classify.hpp"
#include "wavepack/dataset.hpp"
#include "wavepack/errors.hpp"
#include "wavepack/filterbank.hpp"
#include "wavepack/image.hpp"
#include "wavepack/packets.hpp"
#include "wavepack/parallel.hpp"
#include "wavepack/pipeline.hpp"
#include "wavepack/rng.hpp"
#include "wavepack/sparse.hpp"
#include "wavepack/stats.hpp"
#include "wavepack/transform.hpp"

using namespace wavepack;
using testsupport::CommandResult;
using testsupport::TempDir;
using testsupport::quoted;
using testsupport::read_file;
using testsupport::run_command;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  std::string cur;
  for (const char c : s) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream is(line);
  std::string t;
  while (is >> t) tokens.push_back(t);
  return tokens;
}

// --- criterion 1: multi-level operator inverses ------------------------------

bool criterion1(std::string& detail, const std::string&) {
  const double tol = 1e-8;
  double worst = 0.0;
  for (const std::string& name : builtin_filter_names()) {
    const WaveletFilter f = builtin_filter(name);
    for (int level = 1; level <= 3; ++level) {
      const SparseOperator a1 = analysis_matrix_1d(f, 32, level, BoundaryMode::gram_schmidt);
      const SparseOperator s1 = synthesis_matrix_1d(f, 32, level, BoundaryMode::gram_schmidt);
      worst = std::max(worst, max_deviation_from_identity(s1.matmul(a1)));
      const SparseOperator a2 =
          analysis_matrix_2d(f, 32, 32, level, BoundaryMode::gram_schmidt);
      const SparseOperator s2 =
          synthesis_matrix_2d(f, 32, 32, level, BoundaryMode::gram_schmidt);
      worst = std::max(worst, max_deviation_from_identity(s2.matmul(a2)));
    }
  }
  detail = "max ||S*A - I|| = " + fmt(worst) + " over all filters, 1D n=32 and 2D 32x32, "
           "levels 1-3 (tol 1e-8)";
  return worst < tol;
}

// --- criterion 2: perfect-reconstruction residuals ----------------------------

bool criterion2(std::string& detail, const std::string&) {
  const double tol = 1e-10;
  double worst = 0.0;
  bool all_pass = true;
  for (const std::string& name : builtin_filter_names()) {
    const WaveletFilter f = builtin_filter(name);
    const PrCheck pr = verify_pr(f, tol);
    const double alias = verify_alias(f, tol);
    worst = std::max({worst, pr.max_residual, alias});
    all_pass = all_pass && pr.pass;
  }
  detail = "worst pr/alias residual = " + fmt(worst) + " across all builtin banks (tol 1e-10)";
  return all_pass && worst < tol;
}

// --- criterion 3: packet round-trips at scale ---------------------------------

bool criterion3(std::string& detail, const std::string&) {
  const double tol = 1e-6;
  const double time_budget = 60.0;
  const auto t0 = std::chrono::steady_clock::now();

  struct Job {
    std::string filter;
    std::int64_t size;
    int level;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const std::string& name : builtin_filter_names())
    for (const std::int64_t size : {32, 64, 128, 256})
      for (int level = 1; level <= 3; ++level)
        for (int rep = 0; rep < 20; ++rep)
          jobs.push_back({name, size, level,
                          static_cast<std::uint64_t>(jobs.size() * 7919 + 13)});

  std::vector<double> errors(jobs.size(), 0.0);
  parallel_for(static_cast<std::int64_t>(jobs.size()), [&](std::int64_t j) {
    const Job& job = jobs[static_cast<std::size_t>(j)];
    const WaveletFilter f = builtin_filter(job.filter);
    Rng rng(job.seed);
    const Image img = testsupport::random_image(1, job.size, job.size, rng);
    const PacketTensor t =
        wpt_2d(img, f, job.level, BoundaryMode::gram_schmidt, PacketOrdering::natural);
    const Image back = iwpt_2d(t, f, BoundaryMode::gram_schmidt);
    double err = 0.0;
    for (std::size_t i = 0; i < img.data.size(); ++i)
      err = std::max(err, std::abs(img.data[i] - back.data[i]));
    errors[static_cast<std::size_t>(j)] = err;
  });
  const double worst = *std::max_element(errors.begin(), errors.end());
  const double elapsed = seconds_since(t0);

  detail = "max round-trip error = " + fmt(worst) + " over " + std::to_string(jobs.size()) +
           " transforms (sizes 32-256, Q 1-3, all filters; tol 1e-6), " + fmt(elapsed) +
           " s (budget 60 s)";
  return worst < tol && elapsed < time_budget;
}

// --- criterion 4: direct recursion vs sparse operator -------------------------

bool criterion4(std::string& detail, const std::string&) {
  const double tol = 1e-8;
  double worst = 0.0;
  Rng rng(404);
  for (const std::string& name : builtin_filter_names()) {
    const WaveletFilter f = builtin_filter(name);
    for (int level = 1; level <= 2; ++level) {
      const SparseOperator op =
          wpt_operator_2d(f, 32, 32, level, BoundaryMode::gram_schmidt);
      for (int rep = 0; rep < 3; ++rep) {
        const Image img = testsupport::random_image(1, 32, 32, rng);
        const PacketTensor direct =
            wpt_2d(img, f, level, BoundaryMode::gram_schmidt, PacketOrdering::natural);
        const std::vector<double> via_op = op.apply(img.data);
        worst = std::max(worst, testsupport::max_abs_diff(direct.data, via_op));
      }
    }
  }
  detail = "max |direct - operator| = " + fmt(worst) +
           " on 32x32, all filters, Q 1-2 (tol 1e-8)";
  return worst < tol;
}

// --- criterion 5: count and energy conservation -------------------------------

bool criterion5(std::string& detail, const std::string&) {
  bool counts_ok = true;
  for (int level = 1; level <= 3; ++level)
    for (const auto [h, w] : std::vector<std::pair<std::int64_t, std::int64_t>>{
             {32, 32}, {64, 32}, {48, 48}, {16, 64}}) {
      const std::int64_t packets = std::int64_t{1} << (2 * level);
      counts_ok = counts_ok && packets * (h >> level) * (w >> level) == h * w;
    }

  const double tol = 1e-6;
  double worst = 0.0;
  Rng rng(505);
  for (const std::string& name : builtin_filter_names()) {
    const WaveletFilter f = builtin_filter(name);
    const Image img = testsupport::random_image(3, 32, 32, rng);
    const PacketTensor t =
        wpt_2d(img, f, 2, BoundaryMode::gram_schmidt, PacketOrdering::natural);
    double in_e = 0.0, out_e = 0.0;
    for (const double v : img.data) in_e += v * v;
    for (const double v : t.data) out_e += v * v;
    worst = std::max(worst, std::abs(out_e - in_e) / in_e);
  }
  detail = std::string(counts_ok ? "coefficient counts exact" : "coefficient count MISMATCH") +
           ", worst relative energy deviation = " + fmt(worst) + " (tol 1e-6, gram_schmidt)";
  return counts_ok && worst < tol;
}

// --- criterion 6: label listing and frequency-grid corners --------------------

bool criterion6(std::string& detail, const std::string& cli) {
  if (cli.empty()) {
    detail = "needs --cli";
    return false;
  }
  // Independent expectation: level-3 natural labels are base-4 counting over
  // the digit alphabet a,h,v,d — aaa, aah, aav, aad, aha, … ddd.
  std::vector<std::string> expected;
  for (int i = 0; i < 64; ++i) {
    std::string s(3, 'a');
    int v = i;
    for (int d = 2; d >= 0; --d) {
      s[static_cast<std::size_t>(d)] = "ahvd"[v & 3];
      v >>= 2;
    }
    expected.push_back(s);
  }

  const CommandResult flat = run_command(quoted(cli) + " labels --level 3 2>/dev/null");
  const std::vector<std::string> got = split_lines(flat.out);
  const bool labels_ok =
      flat.exit_code == 0 && got.size() == 64 && std::equal(got.begin(), got.end(),
                                                            expected.begin());

  const CommandResult grid_run =
      run_command(quoted(cli) + " labels --level 3 --ordering frequency --grid 2>/dev/null");
  const std::vector<std::string> rows = split_lines(grid_run.out);
  std::string top_left, bottom_right;
  if (grid_run.exit_code == 0 && rows.size() == 8) {
    const std::vector<std::string> first = split_tokens(rows.front());
    const std::vector<std::string> last = split_tokens(rows.back());
    if (first.size() == 8 && last.size() == 8) {
      top_left = first.front();
      bottom_right = last.back();
    }
  }
  const bool top_ok = top_left == "aaa";
  const bool bottom_ok = bottom_right == "ddd";

  std::ostringstream d;
  d << "64 natural labels " << (labels_ok ? "match" : "MISMATCH") << "; grid top-left '"
    << top_left << "'" << (top_ok ? "" : " != 'aaa'") << ", bottom-right '" << bottom_right
    << "'" << (bottom_ok ? "" : " != 'ddd'");
  if (!bottom_ok)
    d << " (Gray-code sequency places the all-d packet at the grid interior, not the corner)";
  detail = d.str();
  return labels_ok && top_ok && bottom_ok;
}

// --- criterion 7: analytic gradients vs finite differences --------------------

bool criterion7(std::string& detail, const std::string&) {
  const double tol = 1e-5;
  Rng rng(707);
  double worst = 0.0;
  for (int inst = 0; inst < 10; ++inst) {
    const std::int64_t classes = 2 + static_cast<std::int64_t>(rng.below(3));
    const std::int64_t dim = 3 + static_cast<std::int64_t>(rng.below(8));
    LinearModel model = init_model(classes, dim, rng);

    const std::int64_t samples = 6;
    std::vector<double> x(static_cast<std::size_t>(samples * dim));
    std::vector<int> y(static_cast<std::size_t>(samples));
    for (double& v : x) v = rng.normal();
    for (int& label : y) label = static_cast<int>(rng.below(static_cast<std::uint64_t>(classes)));

    const LossGrad grad = loss_grad(model, x.data(), y.data(), samples);
    const double h = 1e-6;
    const std::size_t params = model.weights.size() + model.bias.size();
    for (std::size_t j = 0; j < params; ++j) {
      const auto perturbed = [&](double delta) {
        LinearModel m = model;
        if (j < m.weights.size())
          m.weights[j] += delta;
        else
          m.bias[j - m.weights.size()] += delta;
        return loss_grad(m, x.data(), y.data(), samples).loss;
      };
      const double numeric = (perturbed(h) - perturbed(-h)) / (2.0 * h);
      const double analytic =
          j < model.weights.size() ? grad.d_weights[j] : grad.d_bias[j - model.weights.size()];
      const double rel = std::abs(analytic - numeric) /
                         std::max({std::abs(analytic), std::abs(numeric), 1e-8});
      worst = std::max(worst, rel);
    }
  }
  detail = "worst relative gradient error = " + fmt(worst) +
           " over 10 random instances (tol 1e-5)";
  return worst < tol;
}

// --- criterion 8: packets vs pixels on a synthetic high-frequency task --------

struct SeedStats {
  double test_accuracy = 0.0;
  double epoch1_val = 0.0;
};

SeedStats run_classifier(const FeatureMatrix& train_fm, const FeatureMatrix& val_fm,
                         const FeatureMatrix& test_fm, std::uint64_t seed) {
  TrainConfig cfg;
  cfg.epochs = 15;
  cfg.batch_size = 64;
  cfg.seed = seed;
  const TrainResult result = train(train_fm, val_fm, cfg);
  SeedStats s;
  s.test_accuracy = evaluate(result.model, test_fm).accuracy;
  for (const HistoryEntry& e : result.history)
    if (e.epoch == 1 && e.split == "val") s.epoch1_val = e.accuracy;
  return s;
}

bool criterion8(std::string& detail, const std::string&) {
  const auto t0 = std::chrono::steady_clock::now();
  const double time_budget = 300.0;
  const std::int64_t size = 64;
  const int per_class = 300;

  // Two classes that differ only in their high-frequency content: smooth
  // random fields, and the same fields plus band-limited noise (std 0.05,
  // both axis frequencies >= 0.75 x Nyquist).
  TempDir tmp("acceptance-c8");
  std::filesystem::create_directories(tmp.path() / "natural");
  std::filesystem::create_directories(tmp.path() / "noisy");
  Rng gen(8008);
  std::vector<std::string> paths_a, paths_b;
  double smooth_high = 0.0, noisy_high = 1.0;  // worst-case fractions
  for (int i = 0; i < per_class; ++i) {
    const Image base = testsupport::smooth_field(size, gen);
    const Image noise = testsupport::highfreq_noise(size, 0.05, gen);
    Image noisy = base;
    for (std::size_t k = 0; k < noisy.data.size(); ++k) noisy.data[k] += noise.data[k];

    if (i < 5) {  // generator oracle: spectral split measured directly
      smooth_high = std::max(smooth_high,
                             testsupport::highband_energy_fraction(base, 0.75));
      noisy_high = std::min(noisy_high,
                            testsupport::highband_energy_fraction(noisy, 0.75));
    }
    char name[32];
    std::snprintf(name, sizeof name, "%04d.pgm", i);
    write_pgm(base, tmp.path() / "natural" / name);
    write_pgm(noisy, tmp.path() / "noisy" / name);
    paths_a.push_back((tmp.path() / "natural" / name).string());
    paths_b.push_back((tmp.path() / "noisy" / name).string());
  }
  const bool oracle_ok = smooth_high < 1e-6 && noisy_high > 0.02;

  const DatasetManifest manifest = scan_dataset(tmp.path().string(), {".pgm"}, 0);

  const auto run_feature_kind = [&](const std::string& kind, double& mean_test,
                                    double& mean_epoch1) {
    FeatureSpec spec;
    spec.kind = kind;  // packet defaults: haar, level 3, gram_schmidt
    FeatureMatrix train_fm = extract_features(manifest.split_entries(Split::train), spec);
    FeatureMatrix val_fm = extract_features(manifest.split_entries(Split::val), spec);
    FeatureMatrix test_fm = extract_features(manifest.split_entries(Split::test), spec);
    const NormStats norm = fit_norm(train_fm);
    apply_norm(train_fm, norm);
    apply_norm(val_fm, norm);
    apply_norm(test_fm, norm);
    mean_test = 0.0;
    mean_epoch1 = 0.0;
    for (std::uint64_t seed = 0; seed <= 4; ++seed) {
      const SeedStats s = run_classifier(train_fm, val_fm, test_fm, seed);
      mean_test += s.test_accuracy;
      mean_epoch1 += s.epoch1_val;
    }
    mean_test /= 5.0;
    mean_epoch1 /= 5.0;
  };

  double packet_test = 0.0, packet_epoch1 = 0.0, pixel_test = 0.0, pixel_epoch1 = 0.0;
  run_feature_kind("packet", packet_test, packet_epoch1);
  run_feature_kind("pixel", pixel_test, pixel_epoch1);

  // Mean-curve difference must live in the top-frequency quartile of the
  // sequency grid (both axis bands >= half Nyquist: rows >= 4 and cols >= 4).
  FeatureSpec sspec;
  const StatsAccumulator stats_a = directory_stats(paths_a, sspec, PacketOrdering::natural);
  const StatsAccumulator stats_b = directory_stats(paths_b, sspec, PacketOrdering::natural);
  const std::vector<CurvePoint> curve_a = packet_curve(stats_a, PacketOrdering::frequency);
  const std::vector<CurvePoint> curve_b = packet_curve(stats_b, PacketOrdering::frequency);
  double total = 0.0, top_quartile = 0.0;
  for (std::size_t slot = 0; slot < curve_a.size(); ++slot) {
    const double d = std::abs(curve_a[slot].mean - curve_b[slot].mean);
    total += d;
    if (slot / 8 >= 4 && slot % 8 >= 4) top_quartile += d;
  }
  const double share = total > 0.0 ? top_quartile / total : 0.0;

  const double elapsed = seconds_since(t0);
  const bool acc_ok = packet_test >= 0.99;
  const bool epoch1_ok = packet_epoch1 > pixel_epoch1;
  const bool conc_ok = share > 0.5;

  std::ostringstream d;
  d << "packet test " << fmt(packet_test * 100.0) << "% (need >= 99), epoch-1 val packet "
    << fmt(packet_epoch1 * 100.0) << "% vs pixel " << fmt(pixel_epoch1 * 100.0)
    << "% (need strict >), top-quartile curve share " << fmt(share * 100.0)
    << "% (need > 50), generator high-band fractions smooth " << fmt(smooth_high) << " / noisy "
    << fmt(noisy_high) << ", " << fmt(elapsed) << " s (budget 300 s)"
    << "; pixel test " << fmt(pixel_test * 100.0) << "% for reference";
  detail = d.str();
  return oracle_ok && acc_ok && epoch1_ok && conc_ok && elapsed < time_budget;
}

// --- criterion 9: byte-identical CLI reruns -----------------------------------

bool criterion9(std::string& detail, const std::string& cli) {
  if (cli.empty()) {
    detail = "needs --cli";
    return false;
  }
  TempDir tmp("acceptance-c9");

  // shared inputs
  Rng rng(909);
  const std::string img = (tmp.path() / "img.pgm").string();
  write_pgm(testsupport::random_image(1, 16, 16, rng), img);
  const std::filesystem::path stats_dir = tmp.path() / "statsdir";
  std::filesystem::create_directories(stats_dir);
  for (int i = 0; i < 12; ++i)
    write_pgm(testsupport::random_image(1, 16, 16, rng),
              stats_dir / ("s" + std::to_string(i) + ".pgm"));
  const std::filesystem::path data_root = tmp.path() / "data";
  for (const std::string cls : {"a", "b"}) {
    std::filesystem::create_directories(data_root / cls);
    for (int i = 0; i < 15; ++i)
      write_pgm(testsupport::random_image(1, 16, 16, rng),
                data_root / cls / ("i" + std::to_string(i) + ".pgm"));
  }

  // Each entry: command template with OUT placeholder for the run directory,
  // plus the files the command writes there.
  struct Step {
    std::string args;
    std::vector<std::string> outputs;
  };
  const std::vector<Step> steps = {
      {" packets --input " + quoted(img) + " --wavelet db2 --level 2 --output OUT/t.wpk"
       " --csv OUT/t.csv",
       {"t.wpk", "t.csv"}},
      {" transform --input " + quoted(img) + " --wavelet db2 --levels 2 --output OUT/c.csv"
       " --reconstruct OUT/r.pgm",
       {"c.csv", "r.pgm"}},
      {" stats --dir " + quoted(stats_dir.string()) +
       " --curve OUT/curve.csv --mean-map OUT/mean.csv --std-map OUT/std.csv",
       {"curve.csv", "mean.csv", "std.csv"}},
      {" train --data " + quoted(data_root.string()) +
       " --epochs 2 --batch 8 --seed 3 --model OUT/m.wlm --history OUT/h.csv"
       " --weight-map OUT/w.csv",
       {"m.wlm", "h.csv", "w.csv"}},
  };

  int files_checked = 0;
  for (const Step& step : steps) {
    std::vector<std::string> stdouts;
    for (const std::string run : {"run1", "run2"}) {
      const std::filesystem::path out_dir = tmp.path() / run;
      std::filesystem::create_directories(out_dir);
      std::string args = step.args;
      std::string::size_type pos;
      while ((pos = args.find("OUT")) != std::string::npos)
        args.replace(pos, 3, out_dir.string());
      const CommandResult r =
          run_command("WAVEPACK_THREADS=2 " + quoted(cli) + args + " 2>/dev/null");
      if (r.exit_code != 0) {
        detail = "command failed (exit " + std::to_string(r.exit_code) + "):" + step.args;
        return false;
      }
      stdouts.push_back(r.out);
    }
    if (stdouts[0] != stdouts[1]) {
      detail = "stdout differs between reruns of:" + step.args;
      return false;
    }
    for (const std::string& name : step.outputs) {
      if (read_file(tmp.path() / "run1" / name) != read_file(tmp.path() / "run2" / name)) {
        detail = "output " + name + " differs between reruns of:" + step.args;
        return false;
      }
      ++files_checked;
    }
  }
  detail = std::to_string(files_checked) +
           " output files plus stdout byte-identical across reruns (packets, transform, "
           "stats, train; WAVEPACK_THREADS=2)";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  int criterion = 0;
  std::string cli;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
      criterion = std::atoi(argv[++i]);
    else if (std::strcmp(argv[i], "--cli") == 0 && i + 1 < argc)
      cli = argv[++i];
  }
  if (criterion < 1 || criterion > 9) {
    std::fprintf(stderr, "usage: wavepack_acceptance --criterion <1-9> [--cli <path>]\n");
    return 2;
  }

  using Fn = bool (*)(std::string&, const std::string&);
  const Fn table[9] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                       criterion6, criterion7, criterion8, criterion9};
  std::string detail;
  bool pass = false;
  try {
    pass = table[criterion - 1](detail, cli);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
    pass = false;
  }
  std::printf("criterion %d: %s - %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
  return pass ? 0 : 1;
}
