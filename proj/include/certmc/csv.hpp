#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "certmc/bounds.hpp"
#include "certmc/experiments.hpp"

namespace certmc::csv {

// 17-significant-digit rendering; always round-trips a double through strtod.
std::string format_real(double v);

// Study table, schema:
//   study,p,param,n,estimate,truth,abs_error,rel_error,ci_lower,ci_upper,method,seed
// `config` is echoed verbatim into a leading "# " comment so every file
// records the run that produced it.
void write_study_rows(const std::vector<experiments::StudyRow>& rows, const std::string& config,
                      const std::filesystem::path& path);

// Coverage table, schema:
//   k,alpha,p_true,method,replications,coverage,exact_coverage,avg_width
void write_coverage_rows(const std::vector<experiments::CoverageRow>& rows,
                         const std::string& config, const std::filesystem::path& path);

// Planner table, schema:
//   family,p,param,delta,alpha,n_exact,n_required,feasible
// n_required is empty on infeasible rows.
void write_plan_rows(const std::vector<bounds::GrowthRow>& rows, const std::string& family,
                     std::optional<double> param, double delta, double alpha,
                     const std::string& config, const std::filesystem::path& path);

// Lossless parse of the files written above (comments skipped).
std::vector<experiments::StudyRow> read_study_rows(const std::filesystem::path& path);
std::vector<experiments::CoverageRow> read_coverage_rows(const std::filesystem::path& path);

}  // namespace certmc::csv
