#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "certmc/estimators.hpp"
#include "certmc/intervals.hpp"

namespace certmc::experiments {

// One row of a sweep study.  `p` is the swept quantity: the dimension for the
// geometric families, the true probability for the small-probability sweep.
// `param` carries the family parameter (q, gamma) or, for the
// small-probability sweep, the planned relative tail bound at the row's n.
struct StudyRow {
  std::string study;
  double p = 0.0;
  std::optional<double> param;
  std::uint64_t n = 0;
  double estimate = 0.0;
  std::optional<double> truth;
  std::optional<double> abs_error;
  std::optional<double> rel_error;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  std::string method;
  std::uint64_t seed = 0;
};

// One cell of the binomial coverage comparison.
struct CoverageRow {
  int k = 0;
  double alpha = 0.0;
  double p_true = 0.0;
  std::string method;
  std::uint64_t replications = 0;
  double coverage = 0.0;
  double exact_coverage = 0.0;
  double avg_width = 0.0;
};

// 1/(1 + |x|_q) on the unit cube, declared convex with L = p^max(1/q - 1/2, 0)
// and mean lower bound 2/(2 + p).
estimators::Integrand make_qnorm_integrand(std::size_t p, double q);

// arctan(1 + |x|_1) on R^p, declared with L = sqrt(p) and mean lower bound
// pi/4 (valid under any centered Gaussian law).
estimators::Integrand make_arctan_l1_integrand(std::size_t p);

// Membership test for the unit Euclidean ball.
bool unit_ball_contains(std::span<const double> point);

// E g(sigma |Z|) for standard normal Z, by adaptive Simpson quadrature; used
// for the p = 1 reference truths.
double gauss_abs_expectation(const std::function<double(double)>& g, double sigma);

// start, start + step, ..., stop; the count is round((stop - start)/step) + 1.
std::vector<double> make_grid(double start, double stop, double step);

// Ball volume in [-1,1]^p across dimensions; exhibits the relative error
// blowing up while the absolute interval stays honest.  n_rule maps each
// dimension to its budget; the fixed-budget overload is the common case.
std::vector<StudyRow> hypersphere_study(std::span<const int> p_list,
                                        const std::function<std::uint64_t(int)>& n_rule,
                                        double alpha, std::uint64_t seed,
                                        estimators::Execution execution);
std::vector<StudyRow> hypersphere_study(std::span<const int> p_list, std::uint64_t n_budget,
                                        double alpha, std::uint64_t seed,
                                        estimators::Execution execution);

// Cube integrals of 1/(1 + |x|_q) at the planned sample size n(p) for a
// relative target delta; throws InfeasiblePlan when a dimension needs more
// than the planner's cap.
std::vector<StudyRow> qnorm_study(double q, std::span<const int> p_list, double delta,
                                  double alpha, std::uint64_t seed,
                                  estimators::Execution execution);

// Gaussian expectations of arctan(1 + |x|_1) with covariance (1/gamma) I at
// the planned n(p).
std::vector<StudyRow> arctan_mvn_study(std::span<const int> p_list, double gamma, double delta,
                                       double alpha, std::uint64_t seed,
                                       estimators::Execution execution);

// Empirical and exact coverage plus average width for the three binomial
// interval methods over a (k, alpha, p_true) grid.  Each grid cell draws its
// replications from the stream (seed, cell_index), so rows are reproducible
// regardless of scheduling.
std::vector<CoverageRow> coverage_study(std::span<const int> k_list,
                                        std::span<const double> alpha_list,
                                        std::span<const double> p_grid,
                                        std::uint64_t replications, std::uint64_t seed,
                                        estimators::Execution execution);

// Bernoulli means at small true probabilities; the param column records the
// relative tail bound 2 exp(-2 delta^2 zeta^2 n) at the row's budget.
std::vector<StudyRow> small_probability_study(std::span<const double> zeta_list,
                                              const std::function<std::uint64_t(double)>& n_rule,
                                              double delta, double alpha, std::uint64_t seed,
                                              estimators::Execution execution);
std::vector<StudyRow> small_probability_study(std::span<const double> zeta_list,
                                              std::uint64_t n_budget, double delta, double alpha,
                                              std::uint64_t seed,
                                              estimators::Execution execution);

}  // namespace certmc::experiments
