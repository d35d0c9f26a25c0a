#pragma once

// Shared helpers for the unit and acceptance suites: dense reference math,
// independent statistics oracles, synthetic image generators, temp
// directories, and a small subprocess harness for CLI checks.

#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavepack/image.hpp"
#include "wavepack/rng.hpp"
#include "wavepack/sparse.hpp"

namespace testsupport {

inline std::vector<double> to_dense(const wavepack::SparseOperator& op) {
  std::vector<double> m(static_cast<std::size_t>(op.rows() * op.cols()), 0.0);
  for (const wavepack::SparseEntry& e : op.entries())
    m[static_cast<std::size_t>(e.row * op.cols() + e.col)] = e.value;
  return m;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::runtime_error("max_abs_diff: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline wavepack::Image random_image(std::int64_t channels, std::int64_t height,
                                    std::int64_t width, wavepack::Rng& rng) {
  wavepack::Image img(channels, height, width);
  for (double& v : img.data) v = rng.uniform01();
  return img;
}

// Smooth random field: a few low-frequency cosine modes, rescaled into
// [0.2, 0.8] so additive noise at amplitude 0.05 stays inside [0, 1].
inline wavepack::Image smooth_field(std::int64_t size, wavepack::Rng& rng) {
  wavepack::Image img(1, size, size);
  const int modes = 6;
  std::vector<std::array<double, 5>> params;  // fy, fx, phase_y, phase_x, amp
  for (int m = 0; m < modes; ++m)
    params.push_back({static_cast<double>(rng.below(3)), static_cast<double>(rng.below(3)),
                      rng.uniform01() * 6.283185307179586,
                      rng.uniform01() * 6.283185307179586, 0.5 + rng.uniform01()});
  double lo = 1e300, hi = -1e300;
  for (std::int64_t y = 0; y < size; ++y)
    for (std::int64_t x = 0; x < size; ++x) {
      double v = 0.0;
      for (const auto& p : params)
        v += p[4] * std::cos(6.283185307179586 * p[0] * static_cast<double>(y) /
                                 static_cast<double>(size) +
                             p[2]) *
             std::cos(6.283185307179586 * p[1] * static_cast<double>(x) /
                          static_cast<double>(size) +
                      p[3]);
      img.at(0, y, x) = v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  const double scale = hi > lo ? 0.6 / (hi - lo) : 0.0;
  for (double& v : img.data) v = 0.2 + (v - lo) * scale;
  return img;
}

// Band-limited high-frequency noise: cosine modes whose frequencies sit in
// the top quarter of the spectrum along BOTH axes, normalized to the target
// standard deviation. Zero mean by construction.
inline wavepack::Image highfreq_noise(std::int64_t size, double target_std,
                                      wavepack::Rng& rng) {
  wavepack::Image img(1, size, size);
  const std::int64_t nyquist = size / 2;
  const std::int64_t band_lo = (3 * nyquist) / 4;  // ≥ 0.75·Nyquist
  const int modes = 24;
  for (int m = 0; m < modes; ++m) {
    const double fy = static_cast<double>(band_lo + rng.below(nyquist - band_lo));
    const double fx = static_cast<double>(band_lo + rng.below(nyquist - band_lo));
    const double py = rng.uniform01() * 6.283185307179586;
    const double px = rng.uniform01() * 6.283185307179586;
    for (std::int64_t y = 0; y < size; ++y)
      for (std::int64_t x = 0; x < size; ++x)
        img.at(0, y, x) +=
            std::cos(6.283185307179586 * fy * static_cast<double>(y) /
                         static_cast<double>(size) +
                     py) *
            std::cos(6.283185307179586 * fx * static_cast<double>(x) /
                         static_cast<double>(size) +
                     px);
  }
  double mean = 0.0;
  for (const double v : img.data) mean += v;
  mean /= static_cast<double>(img.data.size());
  double var = 0.0;
  for (double& v : img.data) {
    v -= mean;
    var += v * v;
  }
  var /= static_cast<double>(img.data.size());
  const double scale = var > 0.0 ? target_std / std::sqrt(var) : 0.0;
  for (double& v : img.data) v *= scale;
  return img;
}

// Fraction of 2D spectral energy (DC excluded) whose per-axis frequency is
// at least `cutoff` × Nyquist on both axes. Plain O(n³) DFT — fine at 64².
inline double highband_energy_fraction(const wavepack::Image& img, double cutoff) {
  const std::int64_t n = img.height;
  std::vector<double> re(static_cast<std::size_t>(n * n), 0.0);
  std::vector<double> im(static_cast<std::size_t>(n * n), 0.0);
  // rows then columns
  std::vector<double> row_re(static_cast<std::size_t>(n * n)), row_im(
      static_cast<std::size_t>(n * n));
  for (std::int64_t y = 0; y < n; ++y)
    for (std::int64_t k = 0; k < n; ++k) {
      double sr = 0.0, si = 0.0;
      for (std::int64_t x = 0; x < n; ++x) {
        const double ang = -6.283185307179586 * static_cast<double>(k * x) /
                           static_cast<double>(n);
        const double v = img.at(0, y, x);
        sr += v * std::cos(ang);
        si += v * std::sin(ang);
      }
      row_re[static_cast<std::size_t>(y * n + k)] = sr;
      row_im[static_cast<std::size_t>(y * n + k)] = si;
    }
  for (std::int64_t k = 0; k < n; ++k)
    for (std::int64_t l = 0; l < n; ++l) {
      double sr = 0.0, si = 0.0;
      for (std::int64_t y = 0; y < n; ++y) {
        const double ang = -6.283185307179586 * static_cast<double>(l * y) /
                           static_cast<double>(n);
        const double rr = row_re[static_cast<std::size_t>(y * n + k)];
        const double ri = row_im[static_cast<std::size_t>(y * n + k)];
        sr += rr * std::cos(ang) - ri * std::sin(ang);
        si += rr * std::sin(ang) + ri * std::cos(ang);
      }
      re[static_cast<std::size_t>(l * n + k)] = sr;
      im[static_cast<std::size_t>(l * n + k)] = si;
    }
  const std::int64_t nyq = n / 2;
  const double band = cutoff * static_cast<double>(nyq);
  double total = 0.0, high = 0.0;
  for (std::int64_t l = 0; l < n; ++l)
    for (std::int64_t k = 0; k < n; ++k) {
      if (l == 0 && k == 0) continue;  // DC carries the mean, not texture
      const double fl = static_cast<double>(l <= nyq ? l : n - l);
      const double fk = static_cast<double>(k <= nyq ? k : n - k);
      const double e = re[static_cast<std::size_t>(l * n + k)] *
                           re[static_cast<std::size_t>(l * n + k)] +
                       im[static_cast<std::size_t>(l * n + k)] *
                           im[static_cast<std::size_t>(l * n + k)];
      total += e;
      if (fl >= band && fk >= band) high += e;
    }
  return total > 0.0 ? high / total : 0.0;
}

// Self-deleting scratch directory.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("wavepack-" + tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct CommandResult {
  int exit_code = -1;
  std::string out;
};

// Runs a shell command, capturing stdout. stderr passes through to the test
// log unless the caller silences it in the command string.
inline CommandResult run_command(const std::string& cmd) {
  CommandResult result;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed for: " + cmd);
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) result.out.append(buf, n);
  const int status = ::pclose(pipe);
  result.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  return result;
}

// Path of the wavepack CLI under test; empty when the environment does not
// provide one (the ctest harness always does).
inline std::string cli_path() {
  const char* p = std::getenv("WAVEPACK_CLI");
  return p ? std::string(p) : std::string();
}

inline std::string quoted(const std::string& s) { return "\"" + s + "\""; }

}  // namespace testsupport
