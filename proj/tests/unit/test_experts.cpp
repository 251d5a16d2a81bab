#include <cmath>

#include "doctest.h"
#include "regretlab/error.hpp"
#include "regretlab/experts.hpp"

using namespace regretlab;

TEST_CASE("validate accepts and rejects") {
  auto e = ExpertPair::validate({0.5, 0.3}, {-0.5, -0.3});
  CHECK(e.depth() == 1);
  CHECK_THROWS_AS(ExpertPair::validate({1.0, 0.3}, {-0.5, -0.3}), BoundViolation);
  CHECK_THROWS_AS(ExpertPair::validate({0.5, 0.3}, {-0.5, -1.2}), BoundViolation);
  CHECK_THROWS_AS(ExpertPair::validate({0.5, 0.3}, {0.5, 0.3}), IdenticalExperts);
  CHECK_THROWS_AS(ExpertPair::validate({0.5, 0.3, 0.1}, {0, 0, 0}), ValidationError);
  CHECK_THROWS_AS(ExpertPair::validate({0.5}, {0.1}), ValidationError);
  try {
    ExpertPair::validate({0.5, 1.5}, {0, 0});
  } catch (const BoundViolation& ex) {
    CHECK(std::string(ex.what()).find("|q(m)| < 1") != std::string::npos);
  }
}

TEST_CASE("gamma is the squared difference") {
  auto e = ExpertPair::validate({0.5, 0.3}, {-0.5, -0.3});
  auto g = gamma(e);
  CHECK(g[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g[1] == doctest::Approx(0.36).epsilon(1e-15));
  auto e2 = ExpertPair::validate({0.5, 0.2}, {0.5, -0.3});
  CHECK(gamma(e2)[0] == 0.0);
  CHECK(gamma(e2.swapped()).values() == gamma(e2).values());
}

TEST_CASE("random pairs are deterministic and bounded") {
  auto a = random_pair(3, 99, 0.9);
  auto b = random_pair(3, 99, 0.9);
  CHECK(a.q() == b.q());
  CHECK(a.r() == b.r());
  CHECK(random_pair(3, 100, 0.9).q() != a.q());
  for (std::uint64_t s = 0; s < 1000; ++s) {
    auto e = random_pair(1 + static_cast<int>(s % 4), s, 0.9);
    for (std::size_t m = 0; m < e.state_count(); ++m) {
      CHECK(std::abs(e.q(m)) <= 0.9);
      CHECK(std::abs(e.r(m)) <= 0.9);
      CHECK(gamma(e)[static_cast<State>(m)] < 4.0);
    }
    CHECK(gamma(e).sum() > 0);
    CHECK_NOTHROW(ExpertPair::validate(e.q(), e.r()));
  }
  CHECK_THROWS_AS(random_pair(2, 1, 1.0), BoundViolation);
}
