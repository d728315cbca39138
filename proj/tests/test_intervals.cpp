#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "certmc/intervals.hpp"
#include "certmc/specfun.hpp"

using namespace certmc::intervals;

TEST_SUITE("intervals") {
  TEST_CASE("method names") {
    CHECK(method_name(IntervalMethod::hoeffding) == "hoeffding");
    CHECK(method_name(IntervalMethod::clopper_pearson) == "clopper_pearson");
    CHECK(method_name(IntervalMethod::jeffreys) == "jeffreys");
  }

  TEST_CASE("hoeffding interval closed forms") {
    const auto mid = hoeffding_interval(5, 10, 0.1);
    CHECK(mid.lower == doctest::Approx(0.11297724397950506).epsilon(1e-12));
    CHECK(mid.upper == doctest::Approx(0.88702275602049494).epsilon(1e-12));
    CHECK(mid.successes == 5);
    CHECK(mid.trials == 10);
    CHECK(mid.alpha == 0.1);
    CHECK(mid.method == IntervalMethod::hoeffding);

    const auto low = hoeffding_interval(0, 10, 0.1);
    CHECK(low.lower == 0.0);
    CHECK(low.upper == doctest::Approx(0.38702275602049494).epsilon(1e-12));
    const auto high = hoeffding_interval(10, 10, 0.1);
    CHECK(high.upper == 1.0);
    CHECK(high.lower == doctest::Approx(1.0 - 0.38702275602049494).epsilon(1e-12));
  }

  TEST_CASE("hoeffding width approaches the alpha-free floor") {
    // As alpha -> 1 the halfwidth tends to sqrt(log 2 / (2k)).
    const auto snug = hoeffding_interval(5, 10, 0.999999999);
    CHECK(snug.width() == doctest::Approx(2.0 * std::sqrt(std::log(2.0) / 20.0)).epsilon(1e-4));
  }

  TEST_CASE("clopper-pearson closed forms") {
    const auto zero = clopper_pearson(0, 10, 0.05);
    CHECK(zero.lower == 0.0);
    // 1 - (alpha/2)^(1/10)
    CHECK(zero.upper == doctest::Approx(0.30849710781876082).epsilon(1e-10));
    const auto full = clopper_pearson(10, 10, 0.05);
    CHECK(full.upper == 1.0);
    CHECK(full.lower == doctest::Approx(1.0 - 0.30849710781876082).epsilon(1e-10));

    const auto mid = clopper_pearson(5, 10, 0.1);
    CHECK(mid.lower == doctest::Approx(0.2224411010081294).epsilon(1e-10));
    CHECK(mid.upper == doctest::Approx(0.7775588989918706).epsilon(1e-10));
    CHECK(mid.lower + mid.upper == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("jeffreys closed forms and edge behavior") {
    const auto mid = jeffreys_interval(5, 10, 0.1);
    CHECK(mid.lower == doctest::Approx(0.2619220040464193).epsilon(1e-10));
    CHECK(mid.upper == doctest::Approx(0.7380779959535806).epsilon(1e-10));

    // Plain posterior quantiles: at x = 0 the lower end stays strictly
    // positive instead of being pinned to zero, which is what later drags
    // this method's coverage below nominal near the edges.
    const auto zero = jeffreys_interval(0, 10, 0.05);
    CHECK(zero.lower == doctest::Approx(4.7890433157581876e-05).epsilon(1e-9));
    CHECK(zero.lower > 0.0);
    CHECK(zero.upper == doctest::Approx(0.21719626750921053).epsilon(1e-10));
  }

  TEST_CASE("jeffreys is narrower than clopper-pearson away from the edges") {
    const auto j = jeffreys_interval(50, 100, 0.05);
    const auto cp = clopper_pearson(50, 100, 0.05);
    CHECK(j.width() == doctest::Approx(0.19365209820716411).epsilon(1e-10));
    CHECK(cp.width() == doctest::Approx(0.20335774099339782).epsilon(1e-10));
    CHECK(j.width() < cp.width());
  }

  TEST_CASE("intervals stay in the unit interval and cover the point estimate") {
    for (std::uint64_t k : {1ull, 10ull, 37ull}) {
      for (std::uint64_t x = 0; x <= k; ++x) {
        for (double alpha : {0.2, 0.05, 0.001}) {
          const BinomialInterval ivs[] = {
              hoeffding_interval(x, k, alpha),
              clopper_pearson(x, k, alpha),
              jeffreys_interval(x, k, alpha),
          };
          const double hat = static_cast<double>(x) / static_cast<double>(k);
          for (const auto& iv : ivs) {
            CHECK(iv.lower >= 0.0);
            CHECK(iv.upper <= 1.0);
            CHECK(iv.lower <= iv.upper);
          }
          CHECK(ivs[0].contains(hat));
          CHECK(ivs[1].contains(hat));
          if (x > 0 && x < k) CHECK(ivs[2].contains(hat));
        }
      }
    }
  }

  TEST_CASE("all methods are equivariant under success-failure mirroring") {
    for (std::uint64_t x = 0; x <= 10; ++x) {
      for (auto method : {IntervalMethod::hoeffding, IntervalMethod::clopper_pearson,
                          IntervalMethod::jeffreys}) {
        const auto table = interval_table(method, 10, 0.1);
        const auto& iv = table[x];
        const auto& mirror = table[10 - x];
        CHECK(iv.lower == doctest::Approx(1.0 - mirror.upper).epsilon(1e-10));
        CHECK(iv.upper == doctest::Approx(1.0 - mirror.lower).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("widths shrink as trials grow") {
    for (auto method : {IntervalMethod::hoeffding, IntervalMethod::clopper_pearson,
                        IntervalMethod::jeffreys}) {
      double previous = 2.0;
      for (std::uint64_t k : {10ull, 100ull, 1000ull}) {
        const auto iv = interval_table(method, k, 0.05)[k / 2];
        CHECK(iv.width() < previous);
        previous = iv.width();
      }
    }
  }

  TEST_CASE("domain violations throw") {
    CHECK_THROWS_AS(hoeffding_interval(5, 0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(hoeffding_interval(11, 10, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(hoeffding_interval(5, 10, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(clopper_pearson(5, 10, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(jeffreys_interval(5, 10, -0.1), std::invalid_argument);
  }

  TEST_CASE("interval tables match the direct constructors") {
    const auto table = interval_table(IntervalMethod::clopper_pearson, 25, 0.05);
    REQUIRE(table.size() == 26);
    for (std::uint64_t x = 0; x <= 25; ++x) {
      const auto direct = clopper_pearson(x, 25, 0.05);
      CHECK(table[x].lower == direct.lower);
      CHECK(table[x].upper == direct.upper);
      CHECK(table[x].successes == x);
    }
  }

  TEST_CASE("exact coverage agrees with a hand-computed small case") {
    // k = 2, alpha = 0.1, hoeffding halfwidth sqrt(log 20 / 4) > 1/2, so every
    // interval covers p = 0.5 and coverage there is the full pmf mass.
    CHECK(exact_coverage(IntervalMethod::hoeffding, 2, 0.1, 0.5) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // Clopper-Pearson at k = 1, p = 0.3: both x = 0 and x = 1 intervals
    // contain 0.3 iff the quantile edges allow; sum the pmf by hand.
    const auto table = interval_table(IntervalMethod::clopper_pearson, 1, 0.05);
    double expected = 0.0;
    if (table[0].contains(0.3)) expected += 0.7;
    if (table[1].contains(0.3)) expected += 0.3;
    CHECK(exact_coverage(table, 0.3) == doctest::Approx(expected).epsilon(1e-12));
  }

  TEST_CASE("exact coverage of clopper-pearson stays at or above nominal") {
    for (std::uint64_t k : {10ull, 100ull}) {
      for (double alpha : {0.1, 0.05}) {
        const auto table = interval_table(IntervalMethod::clopper_pearson, k, alpha);
        for (int i = 1; i <= 99; ++i) {
          const double p = static_cast<double>(i) / 100.0;
          CHECK(exact_coverage(table, p) >= 1.0 - alpha - 1e-12);
        }
      }
    }
  }

  TEST_CASE("exact coverage of hoeffding stays at or above nominal") {
    for (std::uint64_t k : {10ull, 100ull}) {
      for (double alpha : {0.1, 0.05}) {
        const auto table = interval_table(IntervalMethod::hoeffding, k, alpha);
        for (int i = 1; i <= 99; ++i) {
          const double p = static_cast<double>(i) / 100.0;
          CHECK(exact_coverage(table, p) >= 1.0 - alpha);
        }
      }
    }
  }

  TEST_CASE("jeffreys dips below nominal near the edges") {
    const auto table = interval_table(IntervalMethod::jeffreys, 10, 0.1);
    double min_coverage = 1.0;
    for (int i = 1; i <= 99; ++i) {
      const double p = static_cast<double>(i) / 100.0;
      min_coverage = std::min(min_coverage, exact_coverage(table, p));
    }
    CHECK(min_coverage < 0.9);
  }

  TEST_CASE("exact coverage handles the degenerate truths") {
    for (std::uint64_t k : {5ull, 20ull}) {
      // At p = 0 only x = 0 occurs; hoeffding and clopper-pearson intervals
      // start at zero there, jeffreys does not.
      CHECK(exact_coverage(IntervalMethod::hoeffding, k, 0.1, 0.0) == 1.0);
      CHECK(exact_coverage(IntervalMethod::clopper_pearson, k, 0.1, 0.0) == 1.0);
      CHECK(exact_coverage(IntervalMethod::jeffreys, k, 0.1, 0.0) == 0.0);
      CHECK(exact_coverage(IntervalMethod::hoeffding, k, 0.1, 1.0) == 1.0);
      CHECK(exact_coverage(IntervalMethod::clopper_pearson, k, 0.1, 1.0) == 1.0);
      CHECK(exact_coverage(IntervalMethod::jeffreys, k, 0.1, 1.0) == 0.0);
    }
  }

  TEST_CASE("the two exact_coverage overloads agree") {
    const auto table = interval_table(IntervalMethod::jeffreys, 17, 0.05);
    for (double p : {0.05, 0.3, 0.77}) {
      CHECK(exact_coverage(table, p) ==
            exact_coverage(IntervalMethod::jeffreys, 17, 0.05, p));
    }
  }

  TEST_CASE("exact coverage rejects out-of-range truths") {
    const auto table = interval_table(IntervalMethod::hoeffding, 5, 0.1);
    CHECK_THROWS_AS(exact_coverage(table, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(exact_coverage(table, 1.5), std::invalid_argument);
  }
}
