#include <doctest.h>

#include "oracles.hpp"
#include "sorlayout/regression.hpp"
#include "test_util.hpp"

using namespace sorlayout;

TEST_CASE("exact line") {
  std::vector<SamplePoint> p;
  for (double c : {1.0, 2.0, 3.0, 4.0, 5.0}) p.push_back({c, 2.0 + 3.0 * c});
  const RegressionFit f = fit_cubic(p);
  CHECK(f.beta[0] == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(f.beta[1] == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(std::abs(f.beta[2]) < 1e-8);
  CHECK(std::abs(f.beta[3]) < 1e-8);
  CHECK(f.r_squared == doctest::Approx(1.0));
}

TEST_CASE("quadratic with noise") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.1);
  std::vector<SamplePoint> p;
  for (int i = 0; i <= 100; ++i) {
    const double c = i;
    p.push_back({c, 1.0 + 0.5 * c * c + noise(rng)});
  }
  const RegressionFit f = fit_cubic(p);
  CHECK(f.beta[2] == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(std::abs(f.beta[3]) < 1e-4);
  CHECK(f.r_squared > 0.999);
}

TEST_CASE("cubic fits agree with an independent QR solve") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> c_dist(4, 2000), coef(-1, 1), noise(-1e4, 1e4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<SamplePoint> p;
    std::vector<double> cs, ts;
    const double b0 = coef(rng) * 1e5, b1 = coef(rng) * 1e3, b2 = coef(rng), b3 = coef(rng) * 1e-3;
    for (int i = 0; i < 60; ++i) {
      const double c = c_dist(rng);
      const double t = b0 + c * (b1 + c * (b2 + c * b3)) + noise(rng);
      p.push_back({c, t});
      cs.push_back(c);
      ts.push_back(t);
    }
    const RegressionFit f = fit_cubic(p);
    const auto ref = oracle::cubic_lstsq(cs, ts);
    // Compare predictions over the sampled range, which is what the fit is
    // used for.
    for (double c : cs) {
      const double expect = ref[0] + c * (ref[1] + c * (ref[2] + c * ref[3]));
      CHECK(f.predict(c) == doctest::Approx(expect).epsilon(1e-6).scale(1e5));
    }
  }
}

TEST_CASE("R squared is invariant under scaling the response") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 100);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<SamplePoint> p, scaled;
    const double k = std::uniform_real_distribution<double>(1e-3, 1e6)(rng);
    for (int i = 0; i < 20; ++i) {
      const double c = u(rng), t = u(rng);
      p.push_back({c, t});
      scaled.push_back({c, k * t});
    }
    const double r = fit_cubic(p).r_squared;
    CHECK(fit_cubic(scaled).r_squared == doctest::Approx(r).epsilon(1e-8));
    CHECK(r >= 0.0);
    CHECK(r <= 1.0 + 1e-12);
  }
}

TEST_CASE("lower degrees") {
  std::vector<SamplePoint> p{{1, 5}, {2, 5}, {3, 5}};
  const RegressionFit f = fit_polynomial(p, 0);
  CHECK(f.beta[0] == doctest::Approx(5.0));
  CHECK(f.beta[1] == 0.0);
  CHECK(f.r_squared == 1.0);
  std::vector<SamplePoint> q{{1, 1}, {2, 2}, {3, 1}};
  CHECK(fit_polynomial(q, 0).r_squared == doctest::Approx(0.0));
}

TEST_CASE("singular designs are rejected") {
  std::vector<SamplePoint> same{{5, 1}, {5, 2}, {5, 3}, {5, 4}, {5, 5}};
  CHECK(code_of([&] { fit_cubic(same); }) == ErrorCode::kSingularDesign);
  std::vector<SamplePoint> three{{1, 1}, {2, 2}, {3, 3}};
  CHECK(code_of([&] { fit_cubic(three); }) == ErrorCode::kSingularDesign);
  CHECK(code_of([&] { fit_polynomial(three, 4); }) == ErrorCode::kInvalidArgument);
}
