#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "certmc/bounds.hpp"
#include "certmc/errors.hpp"
#include "certmc/estimators.hpp"
#include "certmc/matrix.hpp"
#include "certmc/moments.hpp"
#include "certmc/rng.hpp"

using certmc::EvaluationError;
using certmc::Matrix;
using certmc::RngStream;
using certmc::SpecMismatch;
using certmc::StreamingMoments;
using namespace certmc::estimators;
namespace bounds = certmc::bounds;

namespace {

bool in_unit_disc(std::span<const double> x) {
  return x[0] * x[0] + x[1] * x[1] <= 1.0;
}

Integrand coordinate_mean_integrand(std::size_t p) {
  return {
      .dim = p,
      .evaluate =
          [p](std::span<const double> x) {
            double s = 0.0;
            for (double v : x) s += v;
            return s / static_cast<double>(p);
          },
      .lipschitz = 1.0 / std::sqrt(static_cast<double>(p)),
      .convexity = Convexity::convex,
      .mean_lower_bound = 0.5,
      .domain = Domain::unit_cube,
      .name = "coordinate_mean",
  };
}

}  // namespace

TEST_SUITE("estimators") {
  TEST_CASE("sampler factories expose their geometry") {
    const auto cube = Sampler::unit_cube(3);
    CHECK(cube.dim() == 3);
    CHECK(cube.domain() == Domain::unit_cube);
    CHECK(cube.id() == "unit_cube");
    CHECK_FALSE(cube.gaussian());

    const auto sym = Sampler::symmetric_cube(2);
    CHECK(sym.domain() == Domain::symmetric_cube);
    CHECK(sym.id() == "symmetric_cube");

    const auto gauss = Sampler::mvn(certmc::sampling::cholesky(Matrix::identity(4)));
    CHECK(gauss.dim() == 4);
    CHECK(gauss.domain() == Domain::real_line);
    CHECK(gauss.gaussian());
    CHECK(gauss.gamma() == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS(Sampler::unit_cube(0), std::invalid_argument);
  }

  TEST_CASE("volume of the whole envelope is exact") {
    const auto envelope = Sampler::symmetric_cube(3);
    const auto result = estimate_volume(
        5, [](std::span<const double>) { return true; }, 8.0, envelope, 5000);
    CHECK(result.estimate == 8.0);
    CHECK(result.hits == 5000);
    CHECK(result.n == 5000);
    CHECK(result.ci_upper == 8.0 + result.halfwidth);
    CHECK(result.ci_lower == 8.0 - result.halfwidth);
    CHECK_FALSE(result.relative_halfwidth.has_value());
  }

  TEST_CASE("disc area estimate lands inside its certificate") {
    const auto envelope = Sampler::symmetric_cube(2);
    const auto result = estimate_volume(1, in_unit_disc, 4.0, envelope, 100000);
    const double expected_hw = std::sqrt(8.0 * std::log(40.0) / 100000.0);
    CHECK(result.halfwidth == doctest::Approx(expected_hw).epsilon(1e-12));
    CHECK(result.alpha == 0.05);
    CHECK(result.bound_kind == bounds::BoundKind::bounded_sub_gaussian);
    CHECK(std::fabs(result.estimate - std::numbers::pi) <= result.halfwidth);
    CHECK(result.estimate == 4.0 * static_cast<double>(result.hits) / 100000.0);
  }

  TEST_CASE("volume estimates replay from the per-chunk streams") {
    const auto envelope = Sampler::symmetric_cube(2);
    const auto result = estimate_volume(42, in_unit_disc, 4.0, envelope, 1000);

    RngStream stream(42, 0);
    std::vector<double> point(2);
    std::vector<double> scratch;
    std::uint64_t hits = 0;
    for (int i = 0; i < 1000; ++i) {
      envelope.fill(stream, point, scratch);
      if (in_unit_disc(point)) ++hits;
    }
    CHECK(result.hits == hits);
    CHECK(result.estimate == 4.0 * static_cast<double>(hits) / 1000.0);
  }

  TEST_CASE("serial and parallel execution agree bit for bit") {
    const auto envelope = Sampler::symmetric_cube(2);
    EstimateOptions serial;
    serial.execution = Execution::serial;
    EstimateOptions parallel;
    parallel.execution = Execution::parallel;

    // 200001 draws spans four chunks, including a ragged tail.
    const auto a = estimate_volume(7, in_unit_disc, 4.0, envelope, 200001, serial);
    const auto b = estimate_volume(7, in_unit_disc, 4.0, envelope, 200001, parallel);
    CHECK(a.estimate == b.estimate);
    CHECK(a.hits == b.hits);
    CHECK(a.halfwidth == b.halfwidth);

    const auto integrand = coordinate_mean_integrand(4);
    const auto spec =
        bounds::BoundSpec::convex_lipschitz(*integrand.lipschitz).with_mean_lower_bound(0.5);
    const auto sampler = Sampler::unit_cube(4);
    const auto c = estimate_expectation(9, integrand, sampler, 150000, spec, serial);
    const auto d = estimate_expectation(9, integrand, sampler, 150000, spec, parallel);
    CHECK(c.estimate == d.estimate);
    CHECK(c.halfwidth == d.halfwidth);
  }

  TEST_CASE("expectation estimates replay from the per-chunk streams") {
    const auto integrand = coordinate_mean_integrand(3);
    const auto spec =
        bounds::BoundSpec::convex_lipschitz(*integrand.lipschitz).with_mean_lower_bound(0.5);
    const auto sampler = Sampler::unit_cube(3);
    const auto result = estimate_expectation(11, integrand, sampler, 2000, spec);

    RngStream stream(11, 0);
    std::vector<double> point(3);
    std::vector<double> scratch;
    StreamingMoments acc;
    for (int i = 0; i < 2000; ++i) {
      sampler.fill(stream, point, scratch);
      acc.push(integrand.evaluate(point));
    }
    CHECK(result.estimate == acc.mean);
  }

  TEST_CASE("constant integrands are estimated exactly") {
    Integrand constant{
        .dim = 2,
        .evaluate = [](std::span<const double>) { return 2.5; },
        .lipschitz = std::nullopt,
        .convexity = Convexity::neither,
        .mean_lower_bound = std::nullopt,
        .domain = Domain::unit_cube,
        .name = "constant",
    };
    const auto result = estimate_expectation(3, constant, Sampler::unit_cube(2), 100000,
                                             bounds::BoundSpec::bounded(1.0));
    CHECK(result.estimate == 2.5);
    CHECK(result.ci_lower <= 2.5);
    CHECK(result.ci_upper >= 2.5);
  }

  TEST_CASE("convex lipschitz certificate covers a cube expectation") {
    const auto integrand = coordinate_mean_integrand(4);
    const auto spec =
        bounds::BoundSpec::convex_lipschitz(*integrand.lipschitz).with_mean_lower_bound(0.5);
    const auto result =
        estimate_expectation(21, integrand, Sampler::unit_cube(4), 10000, spec);
    const double expected_hw = std::sqrt(2.0 * 0.25 * std::log(40.0) / 10000.0);
    CHECK(result.halfwidth == doctest::Approx(expected_hw).epsilon(1e-12));
    CHECK(std::fabs(result.estimate - 0.5) <= result.halfwidth);
    REQUIRE(result.relative_halfwidth.has_value());
    CHECK(*result.relative_halfwidth == doctest::Approx(result.halfwidth / 0.5).epsilon(1e-15));
  }

  TEST_CASE("log-concave certificate covers a gaussian expectation") {
    Integrand abs_first{
        .dim = 2,
        .evaluate = [](std::span<const double> x) { return std::fabs(x[0]); },
        .lipschitz = 1.0,
        .convexity = Convexity::convex,
        .mean_lower_bound = std::nullopt,
        .domain = Domain::real_line,
        .name = "abs_first",
    };
    const auto sampler = Sampler::mvn(certmc::sampling::cholesky(Matrix::identity(2)));
    const auto spec = bounds::BoundSpec::log_concave_lipschitz(1.0, sampler.gamma());
    const auto result = estimate_expectation(33, abs_first, sampler, 10000, spec);
    const double truth = std::sqrt(2.0 / std::numbers::pi);
    const double expected_hw = std::sqrt(4.0 * std::log(40.0) / 10000.0);
    CHECK(result.halfwidth == doctest::Approx(expected_hw).epsilon(1e-12));
    CHECK(std::fabs(result.estimate - truth) <= result.halfwidth);
  }

  TEST_CASE("certificates hold across two hundred replications") {
    const auto envelope = Sampler::symmetric_cube(2);
    int covered = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto result = estimate_volume(seed, in_unit_disc, 4.0, envelope, 10000);
      if (std::fabs(result.estimate - std::numbers::pi) <= result.halfwidth) ++covered;
    }
    CHECK(covered >= 196);
  }

  TEST_CASE("spec mismatches are rejected before sampling") {
    const auto cube = Sampler::unit_cube(2);
    const auto gauss = Sampler::mvn(certmc::sampling::cholesky(Matrix::identity(2)));
    Integrand f{
        .dim = 2,
        .evaluate = [](std::span<const double> x) { return x[0]; },
        .lipschitz = 1.0,
        .convexity = Convexity::convex,
        .mean_lower_bound = std::nullopt,
        .domain = Domain::unit_cube,
        .name = "first_coordinate",
    };

    // Dimension mismatch.
    CHECK_THROWS_AS(estimate_expectation(1, f, Sampler::unit_cube(3), 100,
                                         bounds::BoundSpec::bounded(1.0)),
                    SpecMismatch);
    // Domain mismatch.
    CHECK_THROWS_AS(
        estimate_expectation(1, f, Sampler::symmetric_cube(2), 100,
                             bounds::BoundSpec::bounded(1.0)),
        SpecMismatch);

    // Convexity kind without a declared shape.
    Integrand shapeless = f;
    shapeless.convexity = Convexity::neither;
    CHECK_THROWS_AS(
        estimate_expectation(1, shapeless, cube, 100, bounds::BoundSpec::convex_lipschitz(1.0)),
        SpecMismatch);

    // Convexity kind without a Lipschitz constant.
    Integrand unrated = f;
    unrated.lipschitz = std::nullopt;
    CHECK_THROWS_AS(
        estimate_expectation(1, unrated, cube, 100, bounds::BoundSpec::convex_lipschitz(1.0)),
        SpecMismatch);

    // Cube-only kind on an unbounded sampler.
    Integrand on_line = f;
    on_line.domain = Domain::real_line;
    CHECK_THROWS_AS(
        estimate_expectation(1, on_line, gauss, 100, bounds::BoundSpec::convex_lipschitz(1.0)),
        SpecMismatch);

    // Log-concave kind on a non-gaussian sampler.
    CHECK_THROWS_AS(
        estimate_expectation(1, f, cube, 100, bounds::BoundSpec::log_concave_lipschitz(1.0, 1.0)),
        SpecMismatch);
  }

  TEST_CASE("non-finite integrand values raise an evaluation error") {
    Integrand bad{
        .dim = 1,
        .evaluate =
            [](std::span<const double> x) {
              return x[0] < 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
            },
        .lipschitz = std::nullopt,
        .convexity = Convexity::neither,
        .mean_lower_bound = std::nullopt,
        .domain = Domain::unit_cube,
        .name = "poisoned",
    };
    CHECK_THROWS_AS(estimate_expectation(1, bad, Sampler::unit_cube(1), 1000,
                                         bounds::BoundSpec::bounded(1.0)),
                    EvaluationError);
  }

  TEST_CASE("zero samples or bad alpha are rejected") {
    const auto envelope = Sampler::symmetric_cube(2);
    CHECK_THROWS_AS(
        estimate_volume(1, in_unit_disc, 4.0, envelope, 0), std::invalid_argument);
    EstimateOptions bad;
    bad.alpha = 0.0;
    CHECK_THROWS_AS(estimate_volume(1, in_unit_disc, 4.0, envelope, 100, bad),
                    std::invalid_argument);
    CHECK_THROWS_AS(estimate_volume(1, in_unit_disc, 0.0, envelope, 100),
                    std::invalid_argument);
  }

  TEST_CASE("validate_integrand accepts honest declarations") {
    Integrand doubled{
        .dim = 1,
        .evaluate = [](std::span<const double> x) { return 2.0 * x[0]; },
        .lipschitz = 2.0,
        .convexity = Convexity::convex,
        .mean_lower_bound = std::nullopt,
        .domain = Domain::unit_cube,
        .name = "doubled",
    };
    CHECK_NOTHROW(validate_integrand(doubled, Sampler::unit_cube(1), 17));
  }

  TEST_CASE("validate_integrand catches an understated Lipschitz constant") {
    Integrand lying{
        .dim = 1,
        .evaluate = [](std::span<const double> x) { return 2.0 * x[0]; },
        .lipschitz = 1.0,
        .convexity = Convexity::convex,
        .mean_lower_bound = std::nullopt,
        .domain = Domain::unit_cube,
        .name = "understated",
    };
    CHECK_THROWS_AS(validate_integrand(lying, Sampler::unit_cube(1), 17), SpecMismatch);
  }

  TEST_CASE("validate_integrand catches non-finite output") {
    Integrand bad{
        .dim = 2,
        .evaluate = [](std::span<const double> x) { return std::log(x[0] - 2.0); },
        .lipschitz = std::nullopt,
        .convexity = Convexity::neither,
        .mean_lower_bound = std::nullopt,
        .domain = Domain::unit_cube,
        .name = "log_negative",
    };
    CHECK_THROWS_AS(validate_integrand(bad, Sampler::unit_cube(2), 1), EvaluationError);
  }

  TEST_CASE("averaging contracts the sampled Lipschitz ratio") {
    Integrand norm2{
        .dim = 3,
        .evaluate =
            [](std::span<const double> x) {
              double s = 0.0;
              for (double v : x) s += v * v;
              return std::sqrt(s);
            },
        .lipschitz = 1.0,
        .convexity = Convexity::convex,
        .mean_lower_bound = std::nullopt,
        .domain = Domain::symmetric_cube,
        .name = "euclidean_norm",
    };
    RngStream stream(71, 0);
    CHECK(empirical_lipschitz_ratio(norm2, 1, 10000, stream) <= 1.0 + 1e-9);
    RngStream stream4(72, 0);
    CHECK(empirical_lipschitz_ratio(norm2, 4, 10000, stream4) <= 0.5 + 1e-9);
  }

  TEST_CASE("affine integrands attain the contracted constant") {
    Integrand affine{
        .dim = 3,
        .evaluate =
            [](std::span<const double> x) {
              return (x[0] + 2.0 * x[1] + 2.0 * x[2]) / 3.0;
            },
        .lipschitz = 1.0,
        .convexity = Convexity::convex,
        .mean_lower_bound = std::nullopt,
        .domain = Domain::symmetric_cube,
        .name = "affine",
    };
    RngStream stream(73, 0);
    const double ratio = empirical_lipschitz_ratio(affine, 9, 10000, stream);
    CHECK(ratio <= 1.0 / 3.0 + 1e-9);
    CHECK(ratio >= 0.99 / 3.0);
  }

  TEST_CASE("empirical lipschitz ratio validates its arguments") {
    Integrand f{
        .dim = 1,
        .evaluate = [](std::span<const double> x) { return x[0]; },
        .lipschitz = 1.0,
        .convexity = Convexity::convex,
        .mean_lower_bound = std::nullopt,
        .domain = Domain::unit_cube,
        .name = "identity",
    };
    RngStream stream(1, 0);
    CHECK_THROWS_AS(empirical_lipschitz_ratio(f, 0, 10, stream), std::invalid_argument);
    CHECK_THROWS_AS(empirical_lipschitz_ratio(f, 10, 0, stream), std::invalid_argument);
  }

  TEST_CASE("log-concavity violation is zero at the segment endpoints") {
    const NegLogDensity psi = [](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += v * v;
      return 0.5 * s;
    };
    const std::vector<double> y = {1.0, 2.0};
    const std::vector<double> z = {-1.0, 0.5};
    CHECK(logconcavity_violation(psi, 1.0, 0.0, y, z) == 0.0);
    CHECK(logconcavity_violation(psi, 1.0, 1.0, y, z) == 0.0);
  }

  TEST_CASE("quadratic potentials sit exactly on the strong convexity boundary") {
    const NegLogDensity psi = [](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += v * v;
      return 0.5 * s;
    };
    const std::vector<double> y = {1.0, 2.0};
    const std::vector<double> z = {-1.0, 0.5};
    CHECK(std::fabs(logconcavity_violation(psi, 1.0, 0.3, y, z)) <= 1e-9);
    // Overstating gamma leaves (gamma - 1)/2 * lambda(1-lambda) |y-z|^2 behind.
    const double dist2 = 4.0 + 2.25;
    CHECK(logconcavity_violation(psi, 1.5, 0.3, y, z) ==
          doctest::Approx(0.25 * 0.3 * 0.7 * dist2).epsilon(1e-10));
  }

  TEST_CASE("logconcavity_violation validates its arguments") {
    const NegLogDensity psi = [](std::span<const double>) { return 0.0; };
    const std::vector<double> y = {1.0, 2.0};
    const std::vector<double> z = {0.0};
    CHECK_THROWS_AS(logconcavity_violation(psi, 1.0, 0.5, y, z), std::invalid_argument);
    const std::vector<double> z2 = {0.0, 0.0};
    CHECK_THROWS_AS(logconcavity_violation(psi, 1.0, 1.5, y, z2), std::invalid_argument);
  }

  TEST_CASE("joint standard normal potential passes the strong log-concavity probe") {
    const NegLogDensity psi = [](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += v * v;
      return 0.5 * s;
    };
    RngStream ok(81, 0);
    CHECK(strong_logconcavity_check(psi, 1.0, 5, 10000, ok) <= 1e-9);
    RngStream too_strong(82, 0);
    CHECK(strong_logconcavity_check(psi, 1.5, 5, 10000, too_strong) > 0.1);
  }
}
