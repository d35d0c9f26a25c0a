#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "support.hpp"
#include "wavepack/filterbank.hpp"

using namespace wavepack;

TEST_CASE("builtin filter table: names, lengths, haar aliases db1") {
  const std::vector<std::string> names = builtin_filter_names();
  CHECK(names.size() == 8);
  for (const std::string& name : names) {
    const WaveletFilter f = builtin_filter(name);
    CHECK(f.name == name);
    CHECK(f.length() == static_cast<std::size_t>(2 * f.degree));
    CHECK(f.dec_hi.size() == f.length());
    CHECK(f.rec_lo.size() == f.length());
    CHECK(f.rec_hi.size() == f.length());
  }
  const WaveletFilter haar = builtin_filter("haar");
  const WaveletFilter db1 = builtin_filter("db1");
  CHECK(haar.dec_lo == db1.dec_lo);
  CHECK(haar.degree == 1);
  CHECK_THROWS_AS(builtin_filter("db17"), std::invalid_argument);
}

TEST_CASE("every builtin bank satisfies orthogonal filter identities") {
  for (const std::string& name : builtin_filter_names()) {
    CAPTURE(name);
    const WaveletFilter f = builtin_filter(name);
    const std::size_t n = f.length();

    // unit energy and √2 sum of the scaling filter
    double sum = 0.0, energy = 0.0;
    for (const double v : f.dec_lo) {
      sum += v;
      energy += v * v;
    }
    CHECK(std::abs(sum - std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(energy - 1.0) < 1e-12);

    // orthogonality under even shifts
    for (std::size_t shift = 2; shift < n; shift += 2) {
      double acc = 0.0;
      for (std::size_t i = 0; i + shift < n; ++i) acc += f.dec_lo[i] * f.dec_lo[i + shift];
      CHECK(std::abs(acc) < 1e-12);
    }

    // QMF relations tie the four filters together
    for (std::size_t i = 0; i < n; ++i) {
      const double sign = (i % 2 == 0) ? 1.0 : -1.0;
      CHECK(f.dec_hi[i] == doctest::Approx(sign * f.dec_lo[n - 1 - i]).epsilon(1e-15));
      CHECK(f.rec_lo[i] == doctest::Approx(f.dec_lo[n - 1 - i]).epsilon(1e-15));
      CHECK(f.rec_hi[i] == doctest::Approx(f.dec_hi[n - 1 - i]).epsilon(1e-15));
    }
  }
}

TEST_CASE("dbN/symN high-pass filters annihilate polynomials up to their degree") {
  // N vanishing moments pin the published coefficient values far more
  // tightly than perfect reconstruction alone.
  for (const std::string& name : builtin_filter_names()) {
    CAPTURE(name);
    const WaveletFilter f = builtin_filter(name);
    for (int p = 0; p < f.degree; ++p) {
      double moment = 0.0;
      for (std::size_t i = 0; i < f.length(); ++i)
        moment += f.dec_hi[i] * std::pow(static_cast<double>(i), static_cast<double>(p));
      CHECK(std::abs(moment) < 1e-8);
    }
  }
}

TEST_CASE("verify_pr and verify_alias residuals are tiny for all builtins") {
  for (const std::string& name : builtin_filter_names()) {
    CAPTURE(name);
    const WaveletFilter f = builtin_filter(name);
    const PrCheck pr = verify_pr(f, 1e-10);
    CHECK(pr.pass);
    CHECK(pr.max_residual < 1e-10);
    // the doubling delay of an N-tap orthogonal bank sits at power N−1
    CHECK(pr.center_power == static_cast<int>(f.length()) - 1);
    CHECK(verify_alias(f, 1e-10) < 1e-10);
  }
}

TEST_CASE("haar residual is at the double-precision floor, not exactly zero") {
  // 0.7071067811865476² = 0.5000000000000001 in binary64: no representable
  // double squares to exactly 0.5, so the best possible residual is one ulp
  // of 2, not 0.
  const PrCheck pr = verify_pr(builtin_filter("haar"), 1e-10);
  CHECK(pr.max_residual > 0.0);
  CHECK(pr.max_residual <= 5e-16);
}

TEST_CASE("verify_pr flags broken reconstruction banks") {
  WaveletFilter f = builtin_filter("haar");
  for (double& v : f.rec_lo) v = -v;
  for (double& v : f.rec_hi) v = -v;
  // both synthesis filters negated: the response is the negated delta, so
  // the center coefficient is −2 and the residual |−2 − 2| is exactly 4
  const PrCheck pr = verify_pr(f, 1e-10);
  CHECK_FALSE(pr.pass);
  CHECK(pr.center_power == 1);
  CHECK(pr.max_residual == doctest::Approx(4.0));

  // negating only rec_lo breaks reconstruction less symmetrically but is
  // still far outside tolerance
  WaveletFilter g = builtin_filter("db3");
  for (double& v : g.rec_lo) v = -v;
  CHECK_FALSE(verify_pr(g, 1e-10).pass);
  CHECK(verify_pr(g, 1e-10).max_residual >= 1.0);
}

TEST_CASE("qmf_complete rebuilds the db2 bank from its scaling filter") {
  const WaveletFilter ref = builtin_filter("db2");
  const WaveletFilter made = qmf_complete(ref.dec_lo, "db2-made");
  CHECK(made.degree == 2);
  CHECK(made.dec_hi == ref.dec_hi);
  CHECK(made.rec_lo == ref.rec_lo);
  CHECK(made.rec_hi == ref.rec_hi);
  CHECK(verify_pr(made, 1e-10).pass);
}

TEST_CASE("qmf_complete validates its input") {
  CHECK_THROWS_AS(qmf_complete({0.5, 0.5, 0.5}), std::invalid_argument);   // odd length
  CHECK_THROWS_AS(qmf_complete({1.4142135623730951}), std::invalid_argument);  // too short
  CHECK_THROWS_AS(qmf_complete({0.9, 0.9}), std::invalid_argument);  // sum far from √2
}
