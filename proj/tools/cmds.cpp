#include "cmds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "wavepack/classify.hpp"
#include "wavepack/dataset.hpp"
#include "wavepack/errors.hpp"
#include "wavepack/filterbank.hpp"
#include "wavepack/image.hpp"
#include "wavepack/packets.hpp"
#include "wavepack/pipeline.hpp"
#include "wavepack/sparse.hpp"
#include "wavepack/stats.hpp"
#include "wavepack/transform.hpp"
#include "wavepack/util.hpp"

namespace fs = std::filesystem;

namespace wavepack::cli {

namespace {

// Every run echoes its fully resolved options (defaults included) so a log
// line is enough to reproduce it.
void echo_config(const CLI::App* sub) {
  std::cerr << "# " << sub->get_name() << " config\n";
  std::string cfg = sub->config_to_str(true, false);
  std::cerr << cfg;
  if (!cfg.empty() && cfg.back() != '\n') std::cerr << '\n';
}

BoundaryMode boundary_from(const std::string& s) {
  if (s == "gram_schmidt") return BoundaryMode::gram_schmidt;
  if (s == "truncated") return BoundaryMode::truncated;
  throw std::invalid_argument("unknown boundary mode '" + s +
                              "' (expected gram_schmidt or truncated)");
}

PacketOrdering ordering_from(const std::string& s) {
  if (s == "natural") return PacketOrdering::natural;
  if (s == "frequency") return PacketOrdering::frequency;
  throw std::invalid_argument("unknown ordering '" + s + "' (expected natural or frequency)");
}

// Accepts "3", "0,1,4", or "0..4" (inclusive range).
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  const auto parse_one = [](const std::string& tok) {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("bad seed token '" + tok + "'");
    return static_cast<std::uint64_t>(v);
  };
  const std::size_t dots = text.find("..");
  if (dots != std::string::npos) {
    const std::uint64_t lo = parse_one(text.substr(0, dots));
    const std::uint64_t hi = parse_one(text.substr(dots + 2));
    if (hi < lo || hi - lo > 999) throw std::invalid_argument("bad seed range '" + text + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string tok =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (tok.empty()) throw std::invalid_argument("empty seed token in '" + text + "'");
    seeds.push_back(parse_one(tok));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (seeds.empty()) throw std::invalid_argument("no seeds given");
  return seeds;
}

std::ofstream open_text(const std::string& path) {
  std::ofstream os(path, std::ios::binary);  // binary: keep \n on every platform
  if (!os) throw io_error("cannot open for writing: " + path);
  return os;
}

std::ofstream open_binary(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw io_error("cannot open for writing: " + path);
  return os;
}

// "model.wlm" + seed 3 of {0..4} → "model-seed3.wlm"; single seed keeps the
// path unchanged.
std::string seed_suffixed(const std::string& path, std::uint64_t seed, bool multi) {
  if (!multi) return path;
  const fs::path p(path);
  fs::path out = p.parent_path() / p.stem();
  return out.string() + "-seed" + std::to_string(seed) + p.extension().string();
}

const std::vector<std::string> kImageExtensions = {".png", ".pgm", ".ppm", ".pnm", ".pgm5",
                                                   ".pbm"};

std::vector<std::string> list_images(const std::string& dir) {
  if (!fs::is_directory(dir)) throw io_error("not a directory: " + dir);
  std::vector<std::string> paths;
  for (const fs::directory_entry& f : fs::directory_iterator(dir)) {
    if (!f.is_regular_file()) continue;
    const std::string ext = f.path().extension().string();
    if (std::find(kImageExtensions.begin(), kImageExtensions.end(), ext) !=
        kImageExtensions.end())
      paths.push_back(f.path().string());
  }
  if (paths.empty()) throw io_error("no images found under " + dir);
  std::sort(paths.begin(), paths.end());
  return paths;
}

struct VerifyOpts {
  std::string filter;  // empty = all builtins
  std::int64_t size = 32;
  int levels = 3;
  std::string boundary = "gram_schmidt";
  double tolerance = 1e-8;
};

void run_verify(const VerifyOpts& o) {
  const BoundaryMode mode = boundary_from(o.boundary);
  std::vector<std::string> names;
  if (o.filter.empty())
    names = builtin_filter_names();
  else
    names.push_back(o.filter);

  double worst = 0.0;
  std::string worst_case;
  bool pr_ok = true;

  for (const std::string& name : names) {
    const WaveletFilter f = builtin_filter(name);
    const PrCheck pr = verify_pr(f, 1e-10);
    const double alias = verify_alias(f, 1e-10);
    std::cout << name << ": pr residual = " << format_g17(pr.max_residual)
              << ", alias residual = " << format_g17(alias) << "\n";
    if (pr.max_residual > 1e-10 || alias > 1e-10 || !pr.pass) pr_ok = false;

    for (int level = 1; level <= o.levels; ++level) {
      if (o.size % (std::int64_t{1} << level) != 0) continue;
      const SparseOperator a1 = analysis_matrix_1d(f, o.size, level, mode);
      const SparseOperator s1 = synthesis_matrix_1d(f, o.size, level, mode);
      const double dev1 = max_deviation_from_identity(s1.matmul(a1));
      const SparseOperator a2 = analysis_matrix_2d(f, o.size, o.size, level, mode);
      const SparseOperator s2 = synthesis_matrix_2d(f, o.size, o.size, level, mode);
      const double dev2 = max_deviation_from_identity(s2.matmul(a2));
      std::cout << name << " level " << level << ": 1D ||S*A - I|| = " << format_g17(dev1)
                << ", 2D ||S*A - I|| = " << format_g17(dev2) << "\n";
      for (const auto& [dev, tag] : {std::pair{dev1, "1D"}, std::pair{dev2, "2D"}}) {
        if (dev > worst) {
          worst = dev;
          worst_case = name + " level " + std::to_string(level) + " " + tag;
        }
      }
    }
  }
  std::cout << "max ||S*A - I|| = " << format_g17(worst) << "\n";
  if (!pr_ok)
    throw invariant_error("perfect-reconstruction residual above 1e-10");
  if (worst >= o.tolerance)
    throw invariant_error("operator identity deviation " + format_g17(worst) + " at " +
                          worst_case + " exceeds tolerance " + format_g17(o.tolerance));
  std::cout << "verify: OK\n";
}

struct TransformOpts {
  std::string input;
  std::string wavelet = "haar";
  int levels = 1;
  std::string boundary = "gram_schmidt";
  std::string output;       // coefficient CSV
  std::string reconstruct;  // image path (.pgm / .ppm)
};

void run_transform(const TransformOpts& o) {
  const BoundaryMode mode = boundary_from(o.boundary);
  const WaveletFilter f = builtin_filter(o.wavelet);
  const Image img = load_image(o.input);
  const FwtCoeffs coeffs = fwt_2d(img, f, o.levels, mode);
  std::cout << "fwt " << o.wavelet << " levels=" << o.levels << " image=" << img.channels << "x"
            << img.height << "x" << img.width << "\n";

  if (!o.output.empty()) {
    std::ofstream os = open_text(o.output);
    os << "scale,band,channel,row,col,value\n";
    for (std::int64_t c = 0; c < coeffs.channels; ++c)
      for (std::int64_t y = 0; y < coeffs.approx_height; ++y)
        for (std::int64_t x = 0; x < coeffs.approx_width; ++x)
          os << 0 << ",a," << c << ',' << y << ',' << x << ','
             << format_g17(
                    coeffs.approx[static_cast<std::size_t>(
                        (c * coeffs.approx_height + y) * coeffs.approx_width + x)])
             << '\n';
    for (std::size_t s = 0; s < coeffs.details.size(); ++s) {
      const FwtDetail& det = coeffs.details[s];
      const auto dump = [&](const std::vector<double>& plane, char band) {
        for (std::int64_t c = 0; c < coeffs.channels; ++c)
          for (std::int64_t y = 0; y < det.height; ++y)
            for (std::int64_t x = 0; x < det.width; ++x)
              os << (s + 1) << ',' << band << ',' << c << ',' << y << ',' << x << ','
                 << format_g17(
                        plane[static_cast<std::size_t>((c * det.height + y) * det.width + x)])
                 << '\n';
      };
      dump(det.h, 'h');
      dump(det.v, 'v');
      dump(det.d, 'd');
    }
  }

  const bool invertible = mode == BoundaryMode::gram_schmidt || f.length() == 2;
  if (invertible) {
    const Image back = ifwt_2d(coeffs, f, mode);
    double err = 0.0;
    for (std::size_t i = 0; i < img.data.size(); ++i)
      err = std::max(err, std::abs(img.data[i] - back.data[i]));
    std::cout << "roundtrip max error = " << format_g17(err) << "\n";
    if (!o.reconstruct.empty()) {
      if (back.channels == 1)
        write_pgm(back, o.reconstruct);
      else
        write_ppm(back, o.reconstruct);
    }
  } else if (!o.reconstruct.empty()) {
    throw std::invalid_argument("truncated boundaries cannot be inverted; reconstruction "
                                "requires gram_schmidt");
  }
}

struct PacketsOpts {
  std::string input;
  std::string wavelet = "haar";
  int level = 3;
  std::string boundary = "gram_schmidt";
  std::string ordering = "natural";
  std::string output;  // WPK1
  std::string csv;
};

void run_packets(const PacketsOpts& o) {
  const WaveletFilter f = builtin_filter(o.wavelet);
  const Image img = load_image(o.input);
  const PacketTensor t =
      wpt_2d(img, f, o.level, boundary_from(o.boundary), ordering_from(o.ordering));
  std::cout << "packets: " << t.packet_count() << " packets of " << t.packet_height << "x"
            << t.packet_width << ", " << t.channels << " channel(s), " << o.ordering
            << " order\n";
  if (!o.output.empty()) {
    std::ofstream os = open_binary(o.output);
    write_wpk1(t, os);
  }
  if (!o.csv.empty()) {
    std::ofstream os = open_text(o.csv);
    write_packet_csv(t, os);
  }
}

struct StatsOpts {
  std::string dir;
  std::string dir_b;
  std::string wavelet = "haar";
  int level = 3;
  std::string boundary = "gram_schmidt";
  std::string ordering = "frequency";  // display order for the curve
  std::string curve;
  std::string curve_b;
  std::string mean_map;
  std::string std_map;
  std::string diff_mean_map;
  std::string diff_std_map;
};

void run_stats(const StatsOpts& o) {
  FeatureSpec spec;
  spec.kind = "packet";
  spec.wavelet = o.wavelet;
  spec.level = o.level;
  spec.boundary = boundary_from(o.boundary);
  const PacketOrdering display = ordering_from(o.ordering);

  const std::vector<std::string> paths = list_images(o.dir);
  const StatsAccumulator stats = directory_stats(paths, spec, PacketOrdering::natural);
  std::cout << "stats: " << stats.sample_count() << " images, level " << o.level << ", "
            << o.wavelet << "\n";

  if (!o.curve.empty()) {
    std::ofstream os = open_text(o.curve);
    write_curve_csv(packet_curve(stats, display), os);
  }
  if (!o.mean_map.empty()) {
    std::ofstream os = open_text(o.mean_map);
    write_heatmap_csv(stats, stats.mean(), os);
  }
  if (!o.std_map.empty()) {
    std::ofstream os = open_text(o.std_map);
    write_heatmap_csv(stats, stats.std(), os);
  }

  if (o.dir_b.empty()) return;
  const std::vector<std::string> paths_b = list_images(o.dir_b);
  const StatsAccumulator stats_b = directory_stats(paths_b, spec, PacketOrdering::natural);
  std::cout << "stats: " << stats_b.sample_count() << " images (second set)\n";
  if (!o.curve_b.empty()) {
    std::ofstream os = open_text(o.curve_b);
    write_curve_csv(packet_curve(stats_b, display), os);
  }
  const StatsDifference diff = stats_difference(stats, stats_b);
  if (!o.diff_mean_map.empty()) {
    std::ofstream os = open_text(o.diff_mean_map);
    write_heatmap_csv(stats, diff.mean_abs_diff, os);
  }
  if (!o.diff_std_map.empty()) {
    std::ofstream os = open_text(o.diff_std_map);
    write_heatmap_csv(stats, diff.std_abs_diff, os);
  }
}

struct TrainOpts {
  std::string data;
  std::string features = "packet";
  std::string wavelet = "haar";
  int level = 3;
  std::string boundary = "gram_schmidt";
  int epochs = 10;
  std::int64_t batch = 512;
  double lr = 0.001;
  std::string seeds = "0";
  std::uint64_t split_seed = 0;
  std::string model;
  std::string history;
  std::string weight_map;
};

void run_train(const TrainOpts& o) {
  const std::vector<std::uint64_t> seeds = parse_seeds(o.seeds);
  const DatasetManifest manifest = scan_dataset(o.data, kImageExtensions, o.split_seed);

  FeatureSpec spec;
  spec.kind = o.features;
  spec.wavelet = o.wavelet;
  spec.level = o.level;
  spec.boundary = boundary_from(o.boundary);

  FeatureMatrix train_fm = extract_features(manifest.split_entries(Split::train), spec);
  FeatureMatrix val_fm = extract_features(manifest.split_entries(Split::val), spec);
  FeatureMatrix test_fm = extract_features(manifest.split_entries(Split::test), spec);
  const NormStats norm = fit_norm(train_fm);
  apply_norm(train_fm, norm);
  apply_norm(val_fm, norm);
  apply_norm(test_fm, norm);

  const Image first = load_image(manifest.split_entries(Split::train)[0]->path);
  ModelMeta meta;
  meta.feature_kind = o.features;
  meta.wavelet = o.features == "packet" ? o.wavelet : "";
  meta.level = o.features == "packet" ? o.level : 0;
  meta.image_height = first.height;
  meta.image_width = first.width;
  meta.channels = first.channels;

  const bool multi = seeds.size() > 1;
  std::vector<double> accuracies;
  for (const std::uint64_t seed : seeds) {
    TrainConfig cfg;
    cfg.epochs = o.epochs;
    cfg.batch_size = o.batch;
    cfg.learning_rate = o.lr;
    cfg.seed = seed;
    const TrainResult result = train(train_fm, val_fm, cfg);
    const Evaluation ev = evaluate(result.model, test_fm);
    accuracies.push_back(ev.accuracy * 100.0);
    std::printf("seed %llu: test accuracy %.2f %% (best val %.2f %% at epoch %d)\n",
                static_cast<unsigned long long>(seed), ev.accuracy * 100.0,
                result.best_val_accuracy * 100.0, result.best_epoch);

    if (!o.model.empty()) {
      std::ofstream os = open_binary(seed_suffixed(o.model, seed, multi));
      write_wlm1(result.model, norm, meta, os);
    }
    if (!o.history.empty()) {
      std::ofstream os = open_text(seed_suffixed(o.history, seed, multi));
      write_history_csv(result.history, os);
    }
    if (!o.weight_map.empty()) {
      if (o.features != "packet")
        throw std::invalid_argument("--weight-map needs packet features");
      const std::int64_t ph = first.height >> o.level;
      const std::int64_t pw = first.width >> o.level;
      std::ofstream os = open_text(seed_suffixed(o.weight_map, seed, multi));
      os << "class,packet,row,col,value\n";
      for (std::int64_t k = 0; k < result.model.classes; ++k) {
        const std::vector<double> map = export_weight_map(
            result.model, static_cast<int>(k), o.level, ph, pw, first.channels);
        for (std::int64_t p = 0; p < (std::int64_t{1} << (2 * o.level)); ++p)
          for (std::int64_t y = 0; y < ph; ++y)
            for (std::int64_t x = 0; x < pw; ++x)
              os << k << ',' << p << ',' << y << ',' << x << ','
                 << format_g17(map[static_cast<std::size_t>((p * ph + y) * pw + x)]) << '\n';
      }
    }
  }

  double mean = 0.0;
  for (const double a : accuracies) mean += a;
  mean /= static_cast<double>(accuracies.size());
  double sd = 0.0;
  if (accuracies.size() > 1) {
    for (const double a : accuracies) sd += (a - mean) * (a - mean);
    sd = std::sqrt(sd / static_cast<double>(accuracies.size() - 1));
  }
  std::printf("accuracy: %.2f ± %.2f %%\n", mean, sd);
}

struct EvaluateOpts {
  std::string model;
  std::string data;
  std::string split = "test";
  std::string boundary = "gram_schmidt";
  std::uint64_t split_seed = 0;
  std::string confusion;
};

void run_evaluate(const EvaluateOpts& o) {
  std::ifstream is(o.model, std::ios::binary);
  if (!is) throw io_error("cannot open model: " + o.model);
  const LoadedModel loaded = read_wlm1(is);

  const DatasetManifest manifest = scan_dataset(o.data, kImageExtensions, o.split_seed);
  Split split = Split::test;
  if (o.split == "train")
    split = Split::train;
  else if (o.split == "val")
    split = Split::val;
  else if (o.split != "test")
    throw std::invalid_argument("unknown split '" + o.split + "'");

  FeatureSpec spec;
  spec.kind = loaded.meta.feature_kind;
  spec.wavelet = loaded.meta.wavelet.empty() ? "haar" : loaded.meta.wavelet;
  spec.level = loaded.meta.level == 0 ? 1 : loaded.meta.level;
  spec.boundary = boundary_from(o.boundary);
  FeatureMatrix fm = extract_features(manifest.split_entries(split), spec);
  apply_norm(fm, loaded.norm);

  const Evaluation ev = evaluate(loaded.model, fm);
  std::printf("%s accuracy: %.2f %% over %lld samples\n", o.split.c_str(), ev.accuracy * 100.0,
              static_cast<long long>(fm.samples));
  std::cout << "confusion (rows = true class):\n";
  for (std::int64_t t = 0; t < ev.classes; ++t) {
    std::cout << "  " << manifest.class_names[static_cast<std::size_t>(t)] << ":";
    for (std::int64_t p = 0; p < ev.classes; ++p)
      std::cout << ' ' << ev.confusion[static_cast<std::size_t>(t * ev.classes + p)];
    std::cout << "\n";
  }
  if (!o.confusion.empty()) {
    std::ofstream os = open_text(o.confusion);
    os << "true_class,predicted_class,count\n";
    for (std::int64_t t = 0; t < ev.classes; ++t)
      for (std::int64_t p = 0; p < ev.classes; ++p)
        os << t << ',' << p << ',' << ev.confusion[static_cast<std::size_t>(t * ev.classes + p)]
           << '\n';
  }
}

struct LabelsOpts {
  int level = 3;
  std::string ordering = "natural";
  bool grid = false;
};

void run_labels(const LabelsOpts& o) {
  if (o.level < 1 || o.level > 8)
    throw std::invalid_argument("labels: level must be between 1 and 8");
  const PacketOrdering ordering = ordering_from(o.ordering);
  const std::int64_t count = std::int64_t{1} << (2 * o.level);
  if (!o.grid) {
    for (std::int64_t i = 0; i < count; ++i)
      std::cout << packet_label(i, o.level, ordering) << "\n";
    return;
  }
  const std::int64_t side = std::int64_t{1} << o.level;
  for (std::int64_t r = 0; r < side; ++r) {
    for (std::int64_t c = 0; c < side; ++c) {
      if (c) std::cout << ' ';
      std::cout << packet_label(r * side + c, o.level, ordering);
    }
    std::cout << "\n";
  }
}

}  // namespace

void register_verify(CLI::App& app) {
  auto opts = std::make_shared<VerifyOpts>();
  CLI::App* sub = app.add_subcommand(
      "verify", "Check filter-bank residuals and operator inverse identities");
  sub->add_option("--filter", opts->filter, "Builtin filter name (default: all)")
      ->capture_default_str();
  sub->add_option("--size", opts->size, "1D signal length / 2D side length")
      ->capture_default_str();
  sub->add_option("--levels", opts->levels, "Deepest level to check")->capture_default_str();
  sub->add_option("--boundary", opts->boundary, "gram_schmidt or truncated")
      ->capture_default_str();
  sub->add_option("--tolerance", opts->tolerance, "Maximum allowed ||S*A - I||")
      ->capture_default_str();
  sub->callback([sub, opts] {
    echo_config(sub);
    run_verify(*opts);
  });
}

void register_transform(CLI::App& app) {
  auto opts = std::make_shared<TransformOpts>();
  CLI::App* sub =
      app.add_subcommand("transform", "Fast wavelet transform of one image");
  sub->add_option("--input", opts->input, "Input image (PNG or NetPBM)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--wavelet", opts->wavelet, "Builtin filter name")->capture_default_str();
  sub->add_option("--levels", opts->levels, "Number of scales")->capture_default_str();
  sub->add_option("--boundary", opts->boundary, "gram_schmidt or truncated")
      ->capture_default_str();
  sub->add_option("--output", opts->output, "Coefficient CSV path");
  sub->add_option("--reconstruct", opts->reconstruct, "Write the reconstruction here");
  sub->callback([sub, opts] {
    echo_config(sub);
    run_transform(*opts);
  });
}

void register_packets(CLI::App& app) {
  auto opts = std::make_shared<PacketsOpts>();
  CLI::App* sub =
      app.add_subcommand("packets", "Wavelet packet transform of one image (WPK1 output)");
  sub->add_option("--input", opts->input, "Input image (PNG or NetPBM)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--wavelet", opts->wavelet, "Builtin filter name")->capture_default_str();
  sub->add_option("--level", opts->level, "Packet depth Q")->capture_default_str();
  sub->add_option("--boundary", opts->boundary, "gram_schmidt or truncated")
      ->capture_default_str();
  sub->add_option("--ordering", opts->ordering, "natural or frequency")->capture_default_str();
  sub->add_option("--output", opts->output, "WPK1 output path");
  sub->add_option("--csv", opts->csv, "Long-form CSV output path");
  sub->callback([sub, opts] {
    echo_config(sub);
    run_packets(*opts);
  });
}

void register_stats(CLI::App& app) {
  auto opts = std::make_shared<StatsOpts>();
  CLI::App* sub = app.add_subcommand(
      "stats", "ln-scaled packet statistics over image directories");
  sub->add_option("--dir", opts->dir, "Directory of images")
      ->required()
      ->check(CLI::ExistingDirectory);
  sub->add_option("--dir-b", opts->dir_b, "Second directory for difference maps")
      ->check(CLI::ExistingDirectory);
  sub->add_option("--wavelet", opts->wavelet, "Builtin filter name")->capture_default_str();
  sub->add_option("--level", opts->level, "Packet depth Q")->capture_default_str();
  sub->add_option("--boundary", opts->boundary, "gram_schmidt or truncated")
      ->capture_default_str();
  sub->add_option("--ordering", opts->ordering, "Curve display order: natural or frequency")
      ->capture_default_str();
  sub->add_option("--curve", opts->curve, "Per-packet mean/std curve CSV");
  sub->add_option("--curve-b", opts->curve_b, "Curve CSV for the second directory");
  sub->add_option("--mean-map", opts->mean_map, "Per-coefficient mean heat-map CSV");
  sub->add_option("--std-map", opts->std_map, "Per-coefficient std heat-map CSV");
  sub->add_option("--diff-mean-map", opts->diff_mean_map, "|mean A - mean B| heat-map CSV");
  sub->add_option("--diff-std-map", opts->diff_std_map, "|std A - std B| heat-map CSV");
  sub->callback([sub, opts] {
    echo_config(sub);
    run_stats(*opts);
  });
}

void register_train(CLI::App& app) {
  auto opts = std::make_shared<TrainOpts>();
  CLI::App* sub = app.add_subcommand(
      "train", "Train the linear classifier on packet or pixel features");
  sub->add_option("--data", opts->data, "Dataset root (one subdirectory per class)")
      ->required()
      ->check(CLI::ExistingDirectory);
  sub->add_option("--features", opts->features, "packet or pixel")->capture_default_str();
  sub->add_option("--wavelet", opts->wavelet, "Builtin filter name")->capture_default_str();
  sub->add_option("--level", opts->level, "Packet depth Q")->capture_default_str();
  sub->add_option("--boundary", opts->boundary, "gram_schmidt or truncated")
      ->capture_default_str();
  sub->add_option("--epochs", opts->epochs, "Training epochs")->capture_default_str();
  sub->add_option("--batch", opts->batch, "Mini-batch size")->capture_default_str();
  sub->add_option("--lr", opts->lr, "Adam step size")->capture_default_str();
  sub->add_option("--seed", opts->seeds, "Seed, list (0,1,2), or range (0..4)")
      ->capture_default_str();
  sub->add_option("--split-seed", opts->split_seed, "Seed for the dataset split shuffle")
      ->capture_default_str();
  sub->add_option("--model", opts->model, "WLM1 model output path");
  sub->add_option("--history", opts->history, "Training history CSV path");
  sub->add_option("--weight-map", opts->weight_map, "Per-class weight heat-map CSV path");
  sub->callback([sub, opts] {
    echo_config(sub);
    run_train(*opts);
  });
}

void register_evaluate(CLI::App& app) {
  auto opts = std::make_shared<EvaluateOpts>();
  CLI::App* sub = app.add_subcommand("evaluate", "Evaluate a trained model on a dataset split");
  sub->add_option("--model", opts->model, "WLM1 model path")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--data", opts->data, "Dataset root (one subdirectory per class)")
      ->required()
      ->check(CLI::ExistingDirectory);
  sub->add_option("--split", opts->split, "train, val, or test")->capture_default_str();
  sub->add_option("--boundary", opts->boundary, "gram_schmidt or truncated")
      ->capture_default_str();
  sub->add_option("--split-seed", opts->split_seed, "Seed for the dataset split shuffle")
      ->capture_default_str();
  sub->add_option("--confusion", opts->confusion, "Confusion matrix CSV path");
  sub->callback([sub, opts] {
    echo_config(sub);
    run_evaluate(*opts);
  });
}

void register_labels(CLI::App& app) {
  auto opts = std::make_shared<LabelsOpts>();
  CLI::App* sub = app.add_subcommand("labels", "Print packet path labels");
  sub->add_option("--level", opts->level, "Packet depth Q")->capture_default_str();
  sub->add_option("--ordering", opts->ordering, "natural or frequency")->capture_default_str();
  sub->add_flag("--grid", opts->grid, "Print as a 2^Q x 2^Q grid");
  sub->callback([sub, opts] {
    echo_config(sub);
    run_labels(*opts);
  });
}

}  // namespace wavepack::cli
