#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace wavepack {

// Orthogonal two-channel filter bank. dec_lo/dec_hi analyze, rec_lo/rec_hi
// synthesize; all four vectors share length N = 2·degree. Conventions:
//   sum(dec_lo) = sqrt(2), sum(dec_hi) = 0, ||dec_lo|| = 1,
//   stride-2 shifts of dec_lo are orthonormal.
struct WaveletFilter {
  std::string name;
  int degree = 0;  // N / 2
  std::vector<double> dec_lo;
  std::vector<double> dec_hi;
  std::vector<double> rec_lo;
  std::vector<double> rec_hi;

  std::size_t length() const { return dec_lo.size(); }
};

struct PrCheck {
  double max_residual = 0.0;  // max |coefficient − target| over the product polynomial
  int center_power = 0;       // detected power c whose coefficient must equal 2
  bool pass = false;          // max_residual ≤ tol
};

// Names accepted by builtin_filter, in canonical order:
// haar, db1, db2, db3, db4, db5, sym4, sym5 (haar ≡ db1).
const std::vector<std::string>& builtin_filter_names();

// Returns a verified bank. Unknown names raise std::invalid_argument listing
// the supported set. Every returned bank is re-checked at load against
// verify_pr/verify_alias at 1e-10.
WaveletFilter builtin_filter(const std::string& name);

// Completes an analysis low-pass into a full bank via the quadrature-mirror
// relations  dec_hi[n] = (−1)^n · dec_lo[N−1−n],  rec_lo = reverse(dec_lo),
// rec_hi = reverse(dec_hi) — the sign pattern that solves the
// alias-cancellation equations F_L(z) = H_H(−z), F_H(z) = −H_L(−z).
// Preconditions: even length ≥ 2 and sum(dec_lo) = sqrt(2) within 1e-8.
WaveletFilter qmf_complete(std::vector<double> dec_lo, std::string name = "custom");

// Coefficient sequence of H_L(z)·F_L(z) + H_H(z)·F_H(z) by polynomial
// multiplication. The center coefficient (detected as the largest magnitude,
// not assumed — it moves with filter length) must be 2, all others 0.
PrCheck verify_pr(const WaveletFilter& f, double tol);

// Max |coefficient| of H_L(−z)·F_L(z) + H_H(−z)·F_H(z); every coefficient of
// an alias-free bank vanishes, so a return value ≤ tol passes.
double verify_alias(const WaveletFilter& f, double tol);

}  // namespace wavepack
