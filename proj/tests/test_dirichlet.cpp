#include "priornet/dirichlet.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "helpers.hpp"

using namespace priornet;

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(DirichletParams({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(DirichletParams({1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(DirichletParams({1.0, -2.0}), std::invalid_argument);
  CHECK_THROWS_AS(Categorical({0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(Categorical({1.2, -0.2}), std::invalid_argument);
  CHECK_NOTHROW(Categorical({0.5, 0.25, 0.25}));
}

TEST_CASE("log_pdf basics") {
  const Categorical interior({0.2, 0.5, 0.3});
  // Flat Dirichlet has constant density (K-1)! on the simplex.
  CHECK(log_pdf(DirichletParams({1, 1, 1}), interior) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(log_pdf(DirichletParams({1, 1, 1}), Categorical({1.0 / 3, 1.0 / 3, 1.0 / 3})) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-14));

  CHECK(log_pdf(DirichletParams({2, 2, 2}), Categorical({1.0 / 3, 1.0 / 3, 1.0 / 3})) ==
        doctest::Approx(1.491654876777717).epsilon(1e-12));
}

TEST_CASE("log_pdf boundary conventions") {
  const Categorical corner({1.0, 0.0, 0.0});
  // alpha_c = 1 at a zero coordinate: the factor drops out.
  CHECK(log_pdf(DirichletParams({2, 1, 1}), corner) ==
        doctest::Approx(std::log(6.0)).epsilon(1e-12));
  // alpha_c > 1 at a zero coordinate: density vanishes.
  CHECK(log_pdf(DirichletParams({2, 2, 1}), corner) ==
        -std::numeric_limits<double>::infinity());
  // alpha_c < 1 at a zero coordinate: density diverges.
  CHECK_THROWS_AS(log_pdf(DirichletParams({2, 0.5, 1}), corner), std::domain_error);
  CHECK_THROWS_AS(log_pdf(DirichletParams({1, 1}), Categorical({1.0, 1.0})),
                  std::invalid_argument);
}

TEST_CASE("log_pdf integrates to one (MC over the flat Dirichlet)") {
  const DirichletParams d({2.0, 1.5, 2.5});
  const DirichletParams flat({1.0, 1.0, 1.0});
  std::mt19937_64 rng(42);
  const std::size_t n = 200000;
  std::vector<double> values;
  values.reserve(n);
  const double simplex_volume = 0.5;  // 1/(K-1)! for K = 3
  for (std::size_t i = 0; i < n; ++i) {
    const Categorical mu = sample(flat, rng);
    values.push_back(std::exp(log_pdf(d, mu)) * simplex_volume);
  }
  const auto stats = testutil::mean_and_error(values);
  CHECK(stats.mean == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("mean") {
  const Categorical m1 = mean(DirichletParams({1, 1, 1}));
  for (double p : m1.mu) CHECK(p == doctest::Approx(1.0 / 3).epsilon(1e-15));

  const Categorical m2 = mean(DirichletParams({2, 6, 2}));
  CHECK(m2.mu[0] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(m2.mu[1] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(m2.mu[2] == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("mean of exp(z) equals softmax(z)") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> z(4);
    for (double& v : z) v = u(rng);
    std::vector<double> alpha(4);
    double denom = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
      alpha[c] = std::exp(z[c]);
      denom += alpha[c];
    }
    const Categorical m = mean(DirichletParams(alpha));
    for (std::size_t c = 0; c < 4; ++c) {
      CHECK(std::abs(m.mu[c] - alpha[c] / denom) <= 1e-15);
    }
  }
}

TEST_CASE("differential entropy closed form") {
  CHECK(differential_entropy(DirichletParams({1, 1, 1})) ==
        doctest::Approx(-std::log(2.0)).epsilon(1e-14));
  // -ln Gamma(6) + 3 (psi(2) - psi(6)) = -ln 120 - 3 (1/2 + 1/3 + 1/4 + 1/5)
  const double expected = -std::log(120.0) + 3.0 * (-(0.5 + 1.0 / 3 + 0.25 + 0.2));
  CHECK(differential_entropy(DirichletParams({2, 2, 2})) ==
        doctest::Approx(expected).epsilon(1e-13));
  // Sharper along a ray has lower differential entropy.
  CHECK(differential_entropy(DirichletParams({1000, 1, 1})) <
        differential_entropy(DirichletParams({10, 1, 1})));
}

TEST_CASE("expected data entropy closed form and limits") {
  CHECK(expected_data_entropy(DirichletParams({1, 1, 1})) ==
        doctest::Approx(0.5 + 1.0 / 3).epsilon(1e-14));
  // Concentration limit: alpha = 1e6 * m approaches H[Cat(m)].
  const Categorical m({0.2, 0.5, 0.3});
  std::vector<double> big(3);
  for (std::size_t c = 0; c < 3; ++c) big[c] = 1e6 * m.mu[c];
  CHECK(expected_data_entropy(DirichletParams(big)) ==
        doctest::Approx(categorical_entropy(m)).epsilon(1e-3));
  CHECK(expected_data_entropy(DirichletParams({1000, 1000})) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-3));
}

TEST_CASE("mutual information closed form and bounds") {
  CHECK(mutual_information(DirichletParams({1, 1, 1})) ==
        doctest::Approx(std::log(3.0) - 5.0 / 6.0).epsilon(1e-13));
  CHECK(std::abs(mutual_information(DirichletParams({1e6, 1e6, 1e6}))) <= 1e-5);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const DirichletParams d(testutil::random_alpha(3, rng));
    const double mi = mutual_information(d);
    CHECK(mi >= -1e-12);
    CHECK(mi <= categorical_entropy(mean(d)) + 1e-12);
  }
}

TEST_CASE("mutual information identity") {
  std::mt19937_64 rng(23);
  for (std::size_t k : {2ul, 3ul, 10ul}) {
    for (int trial = 0; trial < 300; ++trial) {
      const DirichletParams d(testutil::random_alpha(k, rng));
      const double direct = mutual_information(d);
      const double via_identity = categorical_entropy(mean(d)) - expected_data_entropy(d);
      CHECK(std::abs(direct - via_identity) <= 1e-9);
    }
  }
}

TEST_CASE("kl divergence") {
  const DirichletParams p({1, 1, 1});
  const DirichletParams q({2, 2, 2});
  CHECK(kl_divergence(p, p) == doctest::Approx(0.0).epsilon(0).scale(1e-14));
  CHECK(kl_divergence(q, q) == doctest::Approx(0.0).epsilon(0).scale(1e-14));
  // ln 2 - ln 120 + 3 * 1.5 (since psi(1) - psi(3) = -3/2)
  CHECK(kl_divergence(p, q) ==
        doctest::Approx(std::log(2.0) - std::log(120.0) + 4.5).epsilon(1e-13));
  CHECK_THROWS_AS(kl_divergence(p, DirichletParams({1, 1})), std::invalid_argument);

  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    const DirichletParams a(testutil::random_alpha(4, rng));
    const DirichletParams b(testutil::random_alpha(4, rng));
    CHECK(kl_divergence(a, b) >= -1e-10);
  }
  // Asymmetry on a fixed pair.
  const DirichletParams a({5, 1, 1});
  const DirichletParams b({1, 1, 5});
  CHECK(kl_divergence(a, b) != kl_divergence(b, a));
}

TEST_CASE("categorical entropy") {
  CHECK(categorical_entropy(Categorical({1.0, 0.0, 0.0})) == 0.0);
  CHECK(categorical_entropy(Categorical({1.0 / 3, 1.0 / 3, 1.0 / 3})) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-15));
  CHECK(categorical_entropy(Categorical({0.5, 0.25, 0.25})) ==
        doctest::Approx(1.5 * std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("scaling properties") {
  const DirichletParams base({0.7, 2.0, 5.3});
  const Categorical base_mean = mean(base);
  double previous = differential_entropy(base);
  for (double c : {2.0, 10.0, 100.0, 1e4}) {
    std::vector<double> scaled(base.alpha);
    for (double& a : scaled) a *= c;
    const DirichletParams d(scaled);
    const Categorical m = mean(d);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(m.mu[i] == doctest::Approx(base_mean.mu[i]).epsilon(1e-12));
    }
    const double h = differential_entropy(d);
    CHECK(h < previous);
    previous = h;
  }
}

TEST_CASE("closed forms match Monte-Carlo (reduced-size smoke)") {
  // The acceptance suite runs the 1e6-sample version; this is a fast guard.
  std::mt19937_64 rng(31);
  for (std::size_t k : {2ul, 3ul}) {
    const DirichletParams d(testutil::random_alpha(k, rng, std::log(0.3), std::log(50.0)));
    const DirichletParams q(testutil::random_alpha(k, rng, std::log(0.3), std::log(50.0)));
    const std::size_t n = 100000;
    std::vector<double> h_samples, e_samples, kl_samples;
    h_samples.reserve(n);
    e_samples.reserve(n);
    kl_samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Categorical mu = sample(d, rng);
      const double lp = log_pdf(d, mu);
      h_samples.push_back(-lp);
      e_samples.push_back(categorical_entropy(mu));
      kl_samples.push_back(lp - log_pdf(q, mu));
    }
    const auto h = testutil::mean_and_error(h_samples);
    const auto e = testutil::mean_and_error(e_samples);
    const auto kl = testutil::mean_and_error(kl_samples);
    CHECK(std::abs(differential_entropy(d) - h.mean) <= 4.0 * h.std_error + 1e-9);
    CHECK(std::abs(expected_data_entropy(d) - e.mean) <= 4.0 * e.std_error + 1e-9);
    CHECK(std::abs(kl_divergence(d, q) - kl.mean) <= 4.0 * kl.std_error + 1e-9);
  }
}

TEST_CASE("sampler produces valid categoricals with the right mean") {
  std::mt19937_64 rng(37);
  const DirichletParams d({2.0, 5.0, 3.0});
  const Categorical m = mean(d);
  std::vector<double> acc(3, 0.0);
  const std::size_t n = 50000;
  for (std::size_t i = 0; i < n; ++i) {
    const Categorical s = sample(d, rng);
    for (std::size_t c = 0; c < 3; ++c) acc[c] += s.mu[c];
  }
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(acc[c] / n == doctest::Approx(m.mu[c]).epsilon(0.02));
  }
}
