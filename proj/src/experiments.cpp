#include "certmc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "certmc/errors.hpp"
#include "certmc/specfun.hpp"

namespace certmc::experiments {
namespace {

using estimators::EstimateOptions;
using estimators::Execution;
using estimators::Integrand;
using estimators::Sampler;

void fill_errors(StudyRow& row, double truth) {
  row.truth = truth;
  row.abs_error = std::fabs(row.estimate - truth);
  if (truth != 0.0) row.rel_error = *row.abs_error / std::fabs(truth);
}

double simpson_recurse(const std::function<double(double)>& f, double a, double b, double fa,
                       double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double split = left + right;
  if (depth <= 0 || std::fabs(split - whole) <= 15.0 * tol) {
    return split + (split - whole) / 15.0;
  }
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Plans the arctan/qnorm rows through the shared growth table so the studies
// and the standalone planner can never disagree.
bounds::GrowthRow plan_for(bounds::PlanFamily family, int p, double delta, double alpha, double q,
                           double gamma) {
  const int dims[1] = {p};
  auto rows = bounds::growth_exponent_table(family, dims, delta, alpha, q, gamma);
  if (!rows[0].plan.feasible) {
    throw InfeasiblePlan("study row at p = " + std::to_string(p) + " needs about " +
                         std::to_string(rows[0].plan.n_exact) +
                         " samples, beyond the planner cap");
  }
  return rows[0];
}

}  // namespace

Integrand make_qnorm_integrand(std::size_t p, double q) {
  if (p == 0) throw std::invalid_argument("make_qnorm_integrand: dimension must be positive");
  if (!(q >= 1.0)) throw std::invalid_argument("make_qnorm_integrand: q must be >= 1");
  Integrand f;
  f.dim = p;
  f.domain = estimators::Domain::unit_cube;
  f.convexity = estimators::Convexity::convex;
  f.lipschitz = std::pow(static_cast<double>(p), std::max(1.0 / q - 0.5, 0.0));
  f.mean_lower_bound = 2.0 / (2.0 + static_cast<double>(p));
  f.name = "qnorm";
  f.evaluate = [q](std::span<const double> x) {
    double norm;
    if (q == 1.0) {
      norm = 0.0;
      for (double v : x) norm += std::fabs(v);
    } else if (q == 2.0) {
      double s = 0.0;
      for (double v : x) s += v * v;
      norm = std::sqrt(s);
    } else {
      double s = 0.0;
      for (double v : x) s += std::pow(std::fabs(v), q);
      norm = std::pow(s, 1.0 / q);
    }
    return 1.0 / (1.0 + norm);
  };
  return f;
}

Integrand make_arctan_l1_integrand(std::size_t p) {
  if (p == 0) throw std::invalid_argument("make_arctan_l1_integrand: dimension must be positive");
  Integrand f;
  f.dim = p;
  f.domain = estimators::Domain::real_line;
  f.convexity = estimators::Convexity::neither;
  f.lipschitz = std::sqrt(static_cast<double>(p));
  f.mean_lower_bound = std::numbers::pi / 4.0;
  f.name = "arctan_l1";
  f.evaluate = [](std::span<const double> x) {
    double norm = 0.0;
    for (double v : x) norm += std::fabs(v);
    return std::atan(1.0 + norm);
  };
  return f;
}

bool unit_ball_contains(std::span<const double> point) {
  double s = 0.0;
  for (double v : point) s += v * v;
  return s <= 1.0;
}

double gauss_abs_expectation(const std::function<double(double)>& g, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gauss_abs_expectation: sigma must be positive");
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  auto density_weighted = [&](double z) {
    return 2.0 * g(sigma * z) * inv_sqrt_2pi * std::exp(-0.5 * z * z);
  };
  // Unit segments keep the quadrature probes inside the density's bulk; one
  // wide interval would look converged at zero.  Mass beyond z = 12 is under
  // 1e-31 of the total.
  double total = 0.0;
  for (int z = 0; z < 12; ++z) {
    total += adaptive_simpson(density_weighted, z, z + 1.0, 1e-14);
  }
  return total;
}

std::vector<double> make_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("make_grid: step must be positive");
  if (stop < start) throw std::invalid_argument("make_grid: stop must be >= start");
  const auto count = static_cast<std::size_t>(std::llround((stop - start) / step)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = start + static_cast<double>(i) * step;
  return grid;
}

std::vector<StudyRow> hypersphere_study(std::span<const int> p_list,
                                        const std::function<std::uint64_t(int)>& n_rule,
                                        double alpha, std::uint64_t seed, Execution execution) {
  std::vector<StudyRow> rows;
  rows.reserve(p_list.size());
  EstimateOptions options{alpha, execution, 65536};
  for (std::size_t i = 0; i < p_list.size(); ++i) {
    const int p = p_list[i];
    if (p < 1) throw std::invalid_argument("hypersphere_study: dimensions must be >= 1");
    const std::uint64_t n = n_rule(p);
    const auto envelope = Sampler::symmetric_cube(static_cast<std::size_t>(p));
    const auto estimate = estimators::estimate_volume(
        derive_seed(seed, i), unit_ball_contains, std::ldexp(1.0, p), envelope, n, options);
    StudyRow row;
    row.study = "hypersphere";
    row.p = p;
    row.n = n;
    row.estimate = estimate.estimate;
    row.ci_lower = estimate.ci_lower;
    row.ci_upper = estimate.ci_upper;
    row.method = std::string(bounds::bound_kind_name(estimate.bound_kind));
    row.seed = seed;
    fill_errors(row, specfun::unit_ball_volume(p));
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.p < b.p; });
  return rows;
}

std::vector<StudyRow> hypersphere_study(std::span<const int> p_list, std::uint64_t n_budget,
                                        double alpha, std::uint64_t seed, Execution execution) {
  return hypersphere_study(p_list, [n_budget](int) { return n_budget; }, alpha, seed, execution);
}

std::vector<StudyRow> qnorm_study(double q, std::span<const int> p_list, double delta,
                                  double alpha, std::uint64_t seed, Execution execution) {
  std::vector<StudyRow> rows;
  rows.reserve(p_list.size());
  EstimateOptions options{alpha, execution, 65536};
  for (std::size_t i = 0; i < p_list.size(); ++i) {
    const int p = p_list[i];
    const auto planned = plan_for(bounds::PlanFamily::qnorm, p, delta, alpha, q, 0.0);
    const auto integrand = make_qnorm_integrand(static_cast<std::size_t>(p), q);
    const auto sampler = Sampler::unit_cube(static_cast<std::size_t>(p));
    estimators::validate_integrand(integrand, sampler, derive_seed(seed, 1000 + i));
    const auto estimate = estimators::estimate_expectation(
        derive_seed(seed, i), integrand, sampler, planned.plan.n, planned.spec, options);
    StudyRow row;
    row.study = "qnorm";
    row.p = p;
    row.param = q;
    row.n = planned.plan.n;
    row.estimate = estimate.estimate;
    row.ci_lower = estimate.ci_lower;
    row.ci_upper = estimate.ci_upper;
    row.method = std::string(bounds::bound_kind_name(estimate.bound_kind));
    row.seed = seed;
    // In one dimension |x|_q = x on [0, 1] for every q, so the integral is a
    // closed form; higher dimensions carry no analytic reference.
    if (p == 1) fill_errors(row, std::numbers::ln2);
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.p < b.p; });
  return rows;
}

std::vector<StudyRow> arctan_mvn_study(std::span<const int> p_list, double gamma, double delta,
                                       double alpha, std::uint64_t seed, Execution execution) {
  if (!(gamma > 0.0)) throw std::invalid_argument("arctan_mvn_study: gamma must be positive");
  std::vector<StudyRow> rows;
  rows.reserve(p_list.size());
  EstimateOptions options{alpha, execution, 65536};
  for (std::size_t i = 0; i < p_list.size(); ++i) {
    const int p = p_list[i];
    const auto planned = plan_for(bounds::PlanFamily::arctan_mvn, p, delta, alpha, 0.0, gamma);
    const auto integrand = make_arctan_l1_integrand(static_cast<std::size_t>(p));

    // Isotropic covariance (1/gamma) I realizes log-concavity rate gamma.
    Matrix sigma = Matrix::identity(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) sigma(j, j) = 1.0 / gamma;
    auto factor = sampling::cholesky(sigma);
    if (std::fabs(factor.gamma - gamma) > 1e-9 * gamma) {
      throw std::logic_error("arctan_mvn_study: factor rate drifted from requested gamma");
    }
    const auto sampler = Sampler::mvn(std::move(factor));
    estimators::validate_integrand(integrand, sampler, derive_seed(seed, 1000 + i));
    const auto estimate = estimators::estimate_expectation(
        derive_seed(seed, i), integrand, sampler, planned.plan.n, planned.spec, options);

    StudyRow row;
    row.study = "arctan";
    row.p = p;
    row.param = gamma;
    row.n = planned.plan.n;
    row.estimate = estimate.estimate;
    row.ci_lower = estimate.ci_lower;
    row.ci_upper = estimate.ci_upper;
    row.method = std::string(bounds::bound_kind_name(estimate.bound_kind));
    row.seed = seed;
    if (p == 1) {
      const double truth = gauss_abs_expectation([](double t) { return std::atan(1.0 + t); },
                                                 1.0 / std::sqrt(gamma));
      fill_errors(row, truth);
    }
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.p < b.p; });
  return rows;
}

std::vector<CoverageRow> coverage_study(std::span<const int> k_list,
                                        std::span<const double> alpha_list,
                                        std::span<const double> p_grid,
                                        std::uint64_t replications, std::uint64_t seed,
                                        Execution execution) {
  if (replications == 0) throw std::invalid_argument("coverage_study: replications must be >= 1");
  for (int k : k_list) {
    if (k < 1) throw std::invalid_argument("coverage_study: k must be >= 1");
  }
  for (double p : p_grid) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("coverage_study: p grid must lie in [0, 1]");
    }
  }
  constexpr intervals::IntervalMethod kMethods[3] = {intervals::IntervalMethod::hoeffding,
                                                     intervals::IntervalMethod::clopper_pearson,
                                                     intervals::IntervalMethod::jeffreys};

  // One interval table per (k, alpha, method); every replication and every
  // exact-coverage integral below is then a table lookup.
  const std::size_t combo_count = k_list.size() * alpha_list.size();
  std::vector<std::vector<intervals::BinomialInterval>> tables(combo_count * 3);
  for (std::size_t ki = 0; ki < k_list.size(); ++ki) {
    for (std::size_t ai = 0; ai < alpha_list.size(); ++ai) {
      for (std::size_t mi = 0; mi < 3; ++mi) {
        tables[(ki * alpha_list.size() + ai) * 3 + mi] = intervals::interval_table(
            kMethods[mi], static_cast<std::uint64_t>(k_list[ki]), alpha_list[ai]);
      }
    }
  }

  const std::size_t cell_count = combo_count * p_grid.size();
  std::vector<CoverageRow> rows(cell_count * 3);

  const bool parallel = execution == Execution::parallel;
  const auto cells = static_cast<std::int64_t>(cell_count);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t c = 0; c < cells; ++c) {
    const std::size_t pi = static_cast<std::size_t>(c) % p_grid.size();
    const std::size_t combo = static_cast<std::size_t>(c) / p_grid.size();
    const std::size_t ai = combo % alpha_list.size();
    const std::size_t ki = combo / alpha_list.size();
    const auto k = static_cast<std::uint64_t>(k_list[ki]);
    const double alpha = alpha_list[ai];
    const double p_true = p_grid[pi];

    RngStream stream(seed, static_cast<std::uint64_t>(c));
    std::uint64_t covered[3] = {0, 0, 0};
    double width_sum[3] = {0.0, 0.0, 0.0};
    for (std::uint64_t r = 0; r < replications; ++r) {
      const std::uint64_t x = sampling::sample_binomial(stream, k, p_true);
      for (std::size_t mi = 0; mi < 3; ++mi) {
        const auto& interval = tables[combo * 3 + mi][x];
        if (interval.contains(p_true)) ++covered[mi];
        width_sum[mi] += interval.width();
      }
    }
    for (std::size_t mi = 0; mi < 3; ++mi) {
      CoverageRow row;
      row.k = k_list[ki];
      row.alpha = alpha;
      row.p_true = p_true;
      row.method = std::string(intervals::method_name(kMethods[mi]));
      row.replications = replications;
      row.coverage = static_cast<double>(covered[mi]) / static_cast<double>(replications);
      row.exact_coverage = intervals::exact_coverage(tables[combo * 3 + mi], p_true);
      row.avg_width = width_sum[mi] / static_cast<double>(replications);
      rows[static_cast<std::size_t>(c) * 3 + mi] = std::move(row);
    }
  }

  std::sort(rows.begin(), rows.end(), [](const CoverageRow& a, const CoverageRow& b) {
    if (a.k != b.k) return a.k < b.k;
    if (a.alpha != b.alpha) return a.alpha < b.alpha;
    if (a.p_true != b.p_true) return a.p_true < b.p_true;
    return a.method < b.method;
  });
  return rows;
}

std::vector<StudyRow> small_probability_study(std::span<const double> zeta_list,
                                              const std::function<std::uint64_t(double)>& n_rule,
                                              double delta, double alpha, std::uint64_t seed,
                                              Execution execution) {
  if (!(delta > 0.0)) throw std::invalid_argument("small_probability_study: delta must be > 0");
  std::vector<StudyRow> rows;
  rows.reserve(zeta_list.size());
  EstimateOptions options{alpha, execution, 65536};
  const auto envelope = Sampler::unit_cube(1);
  for (std::size_t i = 0; i < zeta_list.size(); ++i) {
    const double zeta = zeta_list[i];
    if (!(zeta > 0.0 && zeta <= 1.0)) {
      throw std::invalid_argument("small_probability_study: probabilities must lie in (0, 1]");
    }
    const std::uint64_t n = n_rule(zeta);
    auto indicator = [zeta](std::span<const double> point) { return point[0] < zeta; };
    const auto estimate =
        estimators::estimate_volume(derive_seed(seed, i), indicator, 1.0, envelope, n, options);
    StudyRow row;
    row.study = "smallprob";
    row.p = zeta;
    const auto spec = bounds::BoundSpec::bounded(1.0).with_mean_lower_bound(zeta);
    row.param = bounds::relative_tail(spec, n, delta).probability_bound;
    row.n = n;
    row.estimate = estimate.estimate;
    row.ci_lower = estimate.ci_lower;
    row.ci_upper = estimate.ci_upper;
    row.method = std::string(bounds::bound_kind_name(estimate.bound_kind));
    row.seed = seed;
    fill_errors(row, zeta);
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.p < b.p; });
  return rows;
}

std::vector<StudyRow> small_probability_study(std::span<const double> zeta_list,
                                              std::uint64_t n_budget, double delta, double alpha,
                                              std::uint64_t seed, Execution execution) {
  return small_probability_study(
      zeta_list, [n_budget](double) { return n_budget; }, delta, alpha, seed, execution);
}

}  // namespace certmc::experiments
