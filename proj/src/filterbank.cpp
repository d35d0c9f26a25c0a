#include "wavepack/filterbank.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "wavepack/errors.hpp"

namespace wavepack {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880168872420969808;

// Analysis low-pass coefficients, natural (causal) order, standard published
// orientation. Values were produced once by spectral factorization of the
// maximally-flat half-band polynomial in 60-digit arithmetic (Daubechies:
// minimum-phase root selection; symlets: the near-linear-phase selection) and
// are re-verified below on every load. Note the published tables stop at
// sym4; db-N and sym-N coincide for N ≤ 3, which is why no separate sym2/sym3
// entries exist.
struct LowpassTable {
  const char* name;
  std::vector<double> dec_lo;
};

const std::vector<LowpassTable>& lowpass_tables() {
  static const std::vector<LowpassTable> tables = {
      {"db1", {0.7071067811865476, 0.7071067811865476}},
      {"db2",
       {0.48296291314453416, 0.8365163037378079, 0.2241438680420134, -0.12940952255126037}},
      {"db3",
       {0.33267055295008263, 0.8068915093110925, 0.45987750211849154, -0.13501102001025458,
        -0.08544127388202666, 0.03522629188570953}},
      {"db4",
       {0.2303778133088965, 0.7148465705529157, 0.6308807679298589, -0.027983769416859854,
        -0.18703481171909309, 0.030841381835560764, 0.0328830116668852,
        -0.010597401785069032}},
      {"db5",
       {0.16010239797419293, 0.6038292697971896, 0.7243085284377729, 0.13842814590132074,
        -0.24229488706638203, -0.032244869584638375, 0.07757149384004572,
        -0.006241490212798274, -0.012580751999081999, 0.0033357252854737712}},
      {"sym4",
       {-0.07576571478950221, -0.029635527646002493, 0.497618667632775, 0.8037387518051321,
        0.29785779560530606, -0.09921954357663353, -0.012603967262031304,
        0.032223100604051466}},
      {"sym5",
       {0.027333068344998768, 0.02951949092570626, -0.039134249302313844, 0.19939753397685558,
        0.7234076904040407, 0.633978963456792, 0.01660210576451085, -0.17532808990805623,
        -0.021101834024689042, 0.019538882735249827}},
  };
  return tables;
}

// Full (acyclic) convolution of two coefficient sequences.
std::vector<double> conv(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// h(z) → h(−z): negate odd powers.
std::vector<double> alternate_signs(std::vector<double> h) {
  for (std::size_t n = 1; n < h.size(); n += 2) h[n] = -h[n];
  return h;
}

}  // namespace

const std::vector<std::string>& builtin_filter_names() {
  static const std::vector<std::string> names = {"haar", "db1", "db2", "db3",
                                                 "db4",  "db5", "sym4", "sym5"};
  return names;
}

WaveletFilter qmf_complete(std::vector<double> dec_lo, std::string name) {
  const std::size_t n = dec_lo.size();
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("qmf_complete: filter length must be even and >= 2, got " +
                                std::to_string(n));
  double sum = 0.0;
  for (const double v : dec_lo) sum += v;
  if (std::abs(sum - kSqrt2) > 1e-8)
    throw std::invalid_argument("qmf_complete: sum(dec_lo) = " + std::to_string(sum) +
                                ", expected sqrt(2)");

  WaveletFilter f;
  f.name = std::move(name);
  f.degree = static_cast<int>(n / 2);
  f.dec_lo = std::move(dec_lo);
  f.dec_hi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    f.dec_hi[i] = sign * f.dec_lo[n - 1 - i];
  }
  f.rec_lo.assign(f.dec_lo.rbegin(), f.dec_lo.rend());
  f.rec_hi.assign(f.dec_hi.rbegin(), f.dec_hi.rend());
  return f;
}

WaveletFilter builtin_filter(const std::string& name) {
  const std::string key = (name == "haar") ? "db1" : name;
  for (const LowpassTable& t : lowpass_tables()) {
    if (key == t.name) {
      WaveletFilter f = qmf_complete(t.dec_lo, name);
      const PrCheck pr = verify_pr(f, 1e-10);
      const double alias = verify_alias(f, 1e-10);
      if (!pr.pass || alias > 1e-10)
        throw invariant_error("builtin_filter: bank '" + name +
                              "' failed verification (pr residual " +
                              std::to_string(pr.max_residual) + ", alias residual " +
                              std::to_string(alias) + ")");
      return f;
    }
  }
  std::string supported;
  for (const std::string& s : builtin_filter_names()) {
    if (!supported.empty()) supported += ", ";
    supported += s;
  }
  throw std::invalid_argument("builtin_filter: unknown filter '" + name +
                              "'; supported: " + supported);
}

PrCheck verify_pr(const WaveletFilter& f, double tol) {
  const std::vector<double> lo = conv(f.dec_lo, f.rec_lo);
  const std::vector<double> hi = conv(f.dec_hi, f.rec_hi);
  std::vector<double> sum(lo.size());
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = lo[i] + hi[i];

  std::size_t center = 0;
  for (std::size_t i = 1; i < sum.size(); ++i)
    if (std::abs(sum[i]) > std::abs(sum[center])) center = i;

  PrCheck out;
  out.center_power = static_cast<int>(center);
  for (std::size_t i = 0; i < sum.size(); ++i) {
    const double target = (i == center) ? 2.0 : 0.0;
    out.max_residual = std::max(out.max_residual, std::abs(sum[i] - target));
  }
  out.pass = out.max_residual <= tol;
  return out;
}

double verify_alias(const WaveletFilter& f, double tol) {
  (void)tol;  // the caller compares; kept for interface symmetry with verify_pr
  const std::vector<double> lo = conv(alternate_signs(f.dec_lo), f.rec_lo);
  const std::vector<double> hi = conv(alternate_signs(f.dec_hi), f.rec_hi);
  double worst = 0.0;
  for (std::size_t i = 0; i < lo.size(); ++i)
    worst = std::max(worst, std::abs(lo[i] + hi[i]));
  return worst;
}

}  // namespace wavepack
