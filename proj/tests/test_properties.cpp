#include <catch_amalgamated.hpp>

#include "qlit/checks.hpp"

using namespace qlit;

TEST_CASE("every property suite passes on a few seeds") {
  for (const Suite &s : suites())
    for (std::uint64_t seed : {1u, 2u}) {
      CAPTURE(s.name, seed);
      const SuiteResult r = s.run({6, 300, seed});
      INFO(r.first_failure);
      CHECK(r.trials == 300);
      CHECK(r.ok());
    }
}

TEST_CASE("suites are deterministic in the seed") {
  const Suite *s = find_suite("selection");
  REQUIRE(s);
  const SuiteResult a = s->run({5, 50, 9}), b = s->run({5, 50, 9});
  CHECK(a.summary() == b.summary());
  CHECK(a.summary() == "50/50 pass");
  CHECK(find_suite("no such suite") == nullptr);
}
