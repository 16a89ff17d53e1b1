#include <doctest.h>

#include <cmath>
#include <random>

#include "ngev/bpr.hpp"
#include "ngev/errors.hpp"
#include "support/oracles.hpp"

using namespace ngev;
using namespace ngev::testing;

namespace {

BprModel single_link(double cbar, double kappa) {
  return BprModel({cbar}, {kappa});
}

}  // namespace

TEST_CASE("BPR cost at the anchor flows") {
  const auto m = single_link(3.0, 7.0);
  CHECK(m.cost(std::vector<double>{0.0})[0] == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(m.cost(std::vector<double>{7.0})[0] == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(m.cost(std::vector<double>{14.0})[0] == doctest::Approx(51.0).epsilon(1e-15));
  CHECK_THROWS_AS((void)m.cost(std::vector<double>{-1.0}), Error);
}

TEST_CASE("inverse cost at the anchor costs and on random round trips") {
  const auto m = single_link(3.0, 7.0);
  CHECK(m.inverse_cost(std::vector<double>{3.0})[0] == doctest::Approx(0.0));
  CHECK(m.inverse_cost(std::vector<double>{6.0})[0] == doctest::Approx(7.0).epsilon(1e-15));
  CHECK_THROWS_AS((void)m.inverse_cost(std::vector<double>{2.9}), Error);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> excess(0.0, 30.0);
  for (int rep = 0; rep < 200; ++rep) {
    const double c = 3.0 + excess(rng);
    const double x = m.inverse_cost(std::vector<double>{c})[0];
    CHECK(m.cost(std::vector<double>{x})[0] == doctest::Approx(c).epsilon(1e-12));
  }
}

TEST_CASE("cost integral matches its closed form and a quadrature oracle") {
  const auto m = single_link(3.0, 7.0);
  CHECK(m.cost_integral(std::vector<double>{0.0}) == 0.0);
  CHECK(m.cost_integral(std::vector<double>{7.0}) ==
        doctest::Approx(3.0 * 7.0 * 6.0 / 5.0).epsilon(1e-15));

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> flow(0.0, 20.0);
  for (int rep = 0; rep < 20; ++rep) {
    const double x = flow(rng);
    const double numeric =
        simpson([&](double t) { return m.cost(std::vector<double>{t})[0]; }, 0.0, x);
    CHECK(m.cost_integral(std::vector<double>{x}) ==
          doctest::Approx(numeric).epsilon(1e-9));
  }
}

TEST_CASE("conjugate integral anchors and the Fenchel identity") {
  const auto m = single_link(3.0, 7.0);
  CHECK(m.conjugate_integral(std::vector<double>{3.0}) == 0.0);
  CHECK(m.conjugate_integral(std::vector<double>{6.0}) ==
        doctest::Approx(0.8 * 7.0 * 3.0).epsilon(1e-15));

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> flow(0.0, 20.0);
  for (int rep = 0; rep < 50; ++rep) {
    const double x = flow(rng);
    const double c = m.cost(std::vector<double>{x})[0];
    const double lhs = c * x - m.cost_integral(std::vector<double>{x});
    CHECK(lhs == doctest::Approx(m.conjugate_integral(std::vector<double>{c}))
                     .epsilon(1e-9));
  }
}

TEST_CASE("Fenchel-Young inequality with equality only at matched pairs") {
  const auto m = single_link(2.0, 5.0);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> flow(0.0, 12.0);
  std::uniform_real_distribution<double> excess(0.0, 40.0);
  for (int rep = 0; rep < 300; ++rep) {
    const double x = flow(rng);
    const double c = 2.0 + excess(rng);
    const double slack =
        m.cost_integral(std::vector<double>{x}) + m.conjugate_integral(std::vector<double>{c}) -
        c * x;
    CHECK(slack >= -1e-9 * std::max(1.0, std::abs(c * x)));
    if (std::abs(c - m.cost(std::vector<double>{x})[0]) > 1e-3) {
      CHECK(slack > 0.0);
    }
  }
}

TEST_CASE("strict monotonicity of the separable cost map") {
  const auto m = BprModel({2.0, 3.0, 1.0}, {5.0, 2.0, 4.0});
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> flow(0.0, 10.0);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> x = {flow(rng), flow(rng), flow(rng)};
    std::vector<double> y = {flow(rng), flow(rng), flow(rng)};
    if (x == y) continue;
    const auto cx = m.cost(x);
    const auto cy = m.cost(y);
    double inner = 0.0;
    for (int l = 0; l < 3; ++l) inner += (cx[l] - cy[l]) * (x[l] - y[l]);
    CHECK(inner > 0.0);
  }
}

TEST_CASE("derivative of the conjugate is the inverse cost") {
  const auto m = single_link(3.0, 7.0);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> excess(0.5, 30.0);
  for (int rep = 0; rep < 30; ++rep) {
    const double c = 3.0 + excess(rng);
    const double h = 1e-5 * c;
    const double fd = (m.conjugate_integral(std::vector<double>{c + h}) -
                       m.conjugate_integral(std::vector<double>{c - h})) /
                      (2.0 * h);
    CHECK(fd == doctest::Approx(m.inverse_cost(std::vector<double>{c})[0]).epsilon(1e-6));
  }
}
