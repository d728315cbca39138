#pragma once

#include <stdexcept>
#include <string>

namespace certmc {

// Covariance input failed the Cholesky positivity test.
struct NotPositiveDefinite : std::runtime_error {
  explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

// A relative-error operation was asked for without a positive lower bound on the mean.
struct MissingMeanBound : std::invalid_argument {
  explicit MissingMeanBound(const std::string& what) : std::invalid_argument(what) {}
};

// Bound assumptions are inconsistent with the declared integrand/sampler metadata.
struct SpecMismatch : std::invalid_argument {
  explicit SpecMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// An integrand evaluation produced a NaN or infinity.
struct EvaluationError : std::runtime_error {
  explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
};

// A requested study row needs more samples than the planner is willing to schedule.
struct InfeasiblePlan : std::runtime_error {
  explicit InfeasiblePlan(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace certmc
