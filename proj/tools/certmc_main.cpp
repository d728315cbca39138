// Command-line front end: certified volume/expectation estimates, sample-size
// planning, and the sweep studies, with CSV/SVG emission.
//
// Exit codes: 0 success, 1 internal failure, 2 bad arguments, 3 infeasible
// plan without --allow-infeasible.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>

#include "certmc/bounds.hpp"
#include "certmc/csv.hpp"
#include "certmc/errors.hpp"
#include "certmc/estimators.hpp"
#include "certmc/experiments.hpp"
#include "certmc/intervals.hpp"
#include "certmc/specfun.hpp"
#include "certmc/svg.hpp"

namespace {

using certmc::bounds::BoundSpec;
using certmc::bounds::PlanFamily;
using certmc::csv::format_real;
using certmc::estimators::Execution;
using certmc::estimators::Sampler;
using certmc::experiments::CoverageRow;
using certmc::experiments::StudyRow;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

// The certificate is always the symmetric two-sided interval; when the
// estimand has a known support minimum (volumes and the built-in expectation
// families are nonnegative) a clipped lower end is shown alongside it as a
// presentation convenience.
void print_estimate(const certmc::estimators::CertifiedEstimate& e, bool with_hits,
                    std::optional<double> support_min = std::nullopt) {
  std::cout << "estimate = " << format_real(e.estimate) << "\n"
            << "n = " << e.n << "\n"
            << "alpha = " << format_real(e.alpha) << "\n"
            << "halfwidth = " << format_real(e.halfwidth) << "\n"
            << "ci_lower = " << format_real(e.ci_lower) << "\n"
            << "ci_upper = " << format_real(e.ci_upper) << "\n"
            << "method = " << certmc::bounds::bound_kind_name(e.bound_kind) << "\n";
  if (support_min && e.ci_lower < *support_min) {
    std::cout << "ci_lower_clipped = " << format_real(*support_min) << "\n";
  }
  if (e.relative_halfwidth) {
    std::cout << "relative_halfwidth = " << format_real(*e.relative_halfwidth) << "\n";
  }
  if (with_hits) std::cout << "hits = " << e.hits << "\n";
}

// One-row study table for the single-shot commands, so --out always produces
// the same schema as the sweep studies.
StudyRow single_row(std::string study, double p, std::optional<double> param,
                    const certmc::estimators::CertifiedEstimate& e, std::optional<double> truth,
                    std::uint64_t seed) {
  StudyRow row;
  row.study = std::move(study);
  row.p = p;
  row.param = param;
  row.n = e.n;
  row.estimate = e.estimate;
  row.ci_lower = e.ci_lower;
  row.ci_upper = e.ci_upper;
  row.method = std::string(certmc::bounds::bound_kind_name(e.bound_kind));
  row.seed = seed;
  if (truth) {
    row.truth = truth;
    row.abs_error = std::fabs(e.estimate - *truth);
    if (*truth != 0.0) row.rel_error = *row.abs_error / std::fabs(*truth);
  }
  return row;
}

std::vector<double> parse_grid_spec(const std::string& spec) {
  double start = 0.0, stop = 0.0, step = 0.0;
  char c1 = 0, c2 = 0;
  std::istringstream in(spec);
  in >> start >> c1 >> stop >> c2 >> step;
  require(static_cast<bool>(in) && c1 == ':' && c2 == ':',
          "--p-grid must look like START:STOP:STEP");
  require(step > 0.0 && stop >= start, "--p-grid needs step > 0 and stop >= start");
  require(start >= 0.0 && stop <= 1.0, "--p-grid must stay inside [0, 1]");
  return certmc::experiments::make_grid(start, stop, step);
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::ostringstream out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out << ',';
    if constexpr (std::is_same_v<T, double>) {
      out << format_real(values[i]);
    } else {
      out << values[i];
    }
  }
  return out.str();
}

// Series for the sweep charts: one per method label, x = the swept column.
std::vector<certmc::svg::Series> study_series(const std::vector<StudyRow>& rows, bool use_n) {
  std::vector<certmc::svg::Series> series;
  for (const auto& row : rows) {
    const double y = use_n ? static_cast<double>(row.n) : row.rel_error.value_or(0.0);
    if (!use_n && !row.rel_error) continue;
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const auto& s) { return s.label == row.method; });
    if (it == series.end()) {
      series.push_back({row.method, {}});
      it = std::prev(series.end());
    }
    it->points.emplace_back(row.p, y);
  }
  return series;
}

std::vector<certmc::svg::Series> coverage_series(const std::vector<CoverageRow>& rows) {
  // Label by method alone when the run has a single (k, alpha) combination;
  // otherwise suffix the combo so the legend stays unambiguous.  Colors key
  // off the method prefix either way.
  std::vector<std::pair<int, double>> combos;
  for (const auto& row : rows) {
    std::pair<int, double> combo{row.k, row.alpha};
    if (std::find(combos.begin(), combos.end(), combo) == combos.end()) {
      combos.push_back(combo);
    }
  }
  const bool single = combos.size() == 1;
  std::vector<certmc::svg::Series> series;
  for (const auto& row : rows) {
    std::string label = row.method;
    if (!single) {
      std::ostringstream suffix;
      suffix << " k=" << row.k << " alpha=" << row.alpha;
      label += suffix.str();
    }
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const auto& s) { return s.label == label; });
    if (it == series.end()) {
      series.push_back({label, {}});
      it = std::prev(series.end());
    }
    it->points.emplace_back(row.p_true, row.coverage);
  }
  return series;
}

int run_volume(int dim, std::uint64_t n, double alpha, std::uint64_t seed, Execution exec,
               const std::string& out) {
  const auto envelope = Sampler::symmetric_cube(static_cast<std::size_t>(dim));
  const auto estimate = certmc::estimators::estimate_volume(
      seed, certmc::experiments::unit_ball_contains, std::ldexp(1.0, dim), envelope, n,
      {alpha, exec, 65536});
  const double truth = certmc::specfun::unit_ball_volume(dim);

  std::ostringstream cfg;
  cfg << "certmc volume dim=" << dim << " n=" << n << " alpha=" << format_real(alpha)
      << " seed=" << seed << (exec == Execution::serial ? " exec=serial" : "");
  std::cout << cfg.str() << "\n";
  print_estimate(estimate, true, 0.0);
  std::cout << "truth = " << format_real(truth) << "\n"
            << "abs_error = " << format_real(std::fabs(estimate.estimate - truth)) << "\n";

  if (!out.empty()) {
    certmc::csv::write_study_rows({single_row("volume", dim, std::nullopt, estimate, truth, seed)},
                                  cfg.str(), out);
  }
  return 0;
}

int run_expect(const std::string& example, int dim, double q, double gamma, std::uint64_t n,
               double alpha, std::uint64_t seed, Execution exec, const std::string& out) {
  certmc::estimators::Integrand integrand;
  BoundSpec spec;
  std::optional<Sampler> sampler;
  std::optional<double> truth;
  std::optional<double> param;
  if (example == "qnorm") {
    integrand = certmc::experiments::make_qnorm_integrand(static_cast<std::size_t>(dim), q);
    spec = BoundSpec::convex_lipschitz(*integrand.lipschitz)
               .with_mean_lower_bound(*integrand.mean_lower_bound);
    sampler = Sampler::unit_cube(static_cast<std::size_t>(dim));
    param = q;
    if (dim == 1) truth = std::numbers::ln2;
  } else {
    integrand = certmc::experiments::make_arctan_l1_integrand(static_cast<std::size_t>(dim));
    certmc::Matrix sigma = certmc::Matrix::identity(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j) sigma(j, j) = 1.0 / gamma;
    spec = BoundSpec::log_concave_lipschitz(*integrand.lipschitz, gamma)
               .with_mean_lower_bound(*integrand.mean_lower_bound);
    sampler = Sampler::mvn(certmc::sampling::cholesky(sigma));
    param = gamma;
    if (dim == 1) {
      truth = certmc::experiments::gauss_abs_expectation(
          [](double t) { return std::atan(1.0 + t); }, 1.0 / std::sqrt(gamma));
    }
  }
  certmc::estimators::validate_integrand(integrand, *sampler, certmc::derive_seed(seed, 1));
  const auto estimate = certmc::estimators::estimate_expectation(seed, integrand, *sampler, n,
                                                                 spec, {alpha, exec, 65536});

  std::ostringstream cfg;
  cfg << "certmc expect example=" << example << " dim=" << dim;
  if (example == "qnorm") cfg << " q=" << format_real(q);
  if (example == "arctan") cfg << " gamma=" << format_real(gamma);
  cfg << " n=" << n << " alpha=" << format_real(alpha) << " seed=" << seed
      << (exec == Execution::serial ? " exec=serial" : "");
  std::cout << cfg.str() << "\n";
  print_estimate(estimate, false, 0.0);
  if (truth) {
    std::cout << "truth = " << format_real(*truth) << "\n"
              << "abs_error = " << format_real(std::fabs(estimate.estimate - *truth)) << "\n";
  }

  if (!out.empty()) {
    certmc::csv::write_study_rows(
        {single_row("expect_" + example, dim, param, estimate, truth, seed)}, cfg.str(), out);
  }
  return 0;
}

int run_plan(const std::string& example, const std::vector<int>& dims, double q, double gamma,
             double delta, double alpha, bool allow_infeasible, const std::string& out) {
  PlanFamily family = PlanFamily::hypersphere;
  std::optional<double> param;
  if (example == "qnorm") {
    family = PlanFamily::qnorm;
    param = q;
  } else if (example == "arctan") {
    family = PlanFamily::arctan_mvn;
    param = gamma;
  }
  const auto rows = certmc::bounds::growth_exponent_table(family, dims, delta, alpha, q, gamma);

  std::ostringstream cfg;
  cfg << "certmc plan example=" << example << " dims=" << join(dims);
  if (example == "qnorm") cfg << " q=" << format_real(q);
  if (example == "arctan") cfg << " gamma=" << format_real(gamma);
  cfg << " delta=" << format_real(delta) << " alpha=" << format_real(alpha);
  if (allow_infeasible) cfg << " allow_infeasible=true";
  std::cout << cfg.str() << "\n";
  std::cout << "p\tn_exact\tn_required\tfeasible\n";
  bool any_infeasible = false;
  for (const auto& row : rows) {
    std::cout << row.p << '\t' << format_real(row.plan.n_exact) << '\t';
    if (row.plan.feasible) {
      std::cout << row.plan.n;
    } else {
      std::cout << '-';
      any_infeasible = true;
    }
    std::cout << '\t' << (row.plan.feasible ? "true" : "false") << "\n";
  }

  if (any_infeasible && !allow_infeasible) {
    std::cerr << "plan: at least one dimension is infeasible at the requested target; "
                 "re-run with --allow-infeasible to emit the table anyway\n";
    return 3;
  }
  if (!out.empty()) {
    certmc::csv::write_plan_rows(rows, example, param, delta, alpha, cfg.str(), out);
  }
  return 0;
}

int run_study(const std::string& family, std::vector<int> dims, std::vector<double> zetas,
              std::uint64_t n, double q, double gamma, double delta, double alpha,
              std::uint64_t seed, Execution exec, const std::string& out,
              const std::string& svg_out) {
  std::vector<StudyRow> rows;
  std::ostringstream cfg;
  std::ostringstream extra;
  cfg << "certmc study " << family;
  bool chart_n = false;
  if (family == "hypersphere") {
    cfg << " dims=" << join(dims) << " n=" << n << " delta=" << format_real(delta)
        << " alpha=" << format_real(alpha) << " seed=" << seed;
    rows = certmc::experiments::hypersphere_study(dims, n, alpha, seed, exec);
    // The planned (usually astronomical) sample sizes, printed next to the
    // fixed budget actually used, make the exponential cost visible.
    const auto plans = certmc::bounds::growth_exponent_table(PlanFamily::hypersphere, dims,
                                                             delta, alpha);
    extra << "p\tplanned_n\tbudget\n";
    for (const auto& plan : plans) {
      extra << plan.p << '\t'
            << (plan.plan.feasible ? std::to_string(plan.plan.n) : std::string("infeasible"))
            << '\t' << n << "\n";
    }
  } else if (family == "qnorm") {
    cfg << " dims=" << join(dims) << " q=" << format_real(q) << " delta=" << format_real(delta)
        << " alpha=" << format_real(alpha) << " seed=" << seed;
    rows = certmc::experiments::qnorm_study(q, dims, delta, alpha, seed, exec);
    chart_n = true;
  } else if (family == "arctan") {
    cfg << " dims=" << join(dims) << " gamma=" << format_real(gamma)
        << " delta=" << format_real(delta) << " alpha=" << format_real(alpha)
        << " seed=" << seed;
    rows = certmc::experiments::arctan_mvn_study(dims, gamma, delta, alpha, seed, exec);
    chart_n = true;
  } else {  // smallprob
    cfg << " zetas=" << join(zetas) << " n=" << n << " delta=" << format_real(delta)
        << " alpha=" << format_real(alpha) << " seed=" << seed;
    rows = certmc::experiments::small_probability_study(zetas, n, delta, alpha, seed, exec);
  }
  if (exec == Execution::serial) cfg << " exec=serial";

  std::cout << cfg.str() << "\n" << extra.str();
  std::cout << "rows = " << rows.size() << "\n";
  certmc::csv::write_study_rows(rows, cfg.str(), out);
  if (!svg_out.empty()) {
    const auto series = study_series(rows, chart_n);
    certmc::svg::write_line_chart(series, family == "smallprob" ? "true probability" : "dimension",
                                  chart_n ? "planned sample size" : "relative error", svg_out);
  }
  return 0;
}

int run_coverage(const std::vector<int>& ks, const std::vector<double>& alphas,
                 const std::string& grid_spec, std::uint64_t reps, std::uint64_t seed,
                 Execution exec, const std::string& out, const std::string& svg_out) {
  const auto grid = parse_grid_spec(grid_spec);
  const auto rows = certmc::experiments::coverage_study(ks, alphas, grid, reps, seed, exec);

  std::ostringstream cfg;
  cfg << "certmc coverage k=" << join(ks) << " alpha=" << join(alphas) << " p_grid=" << grid_spec
      << " reps=" << reps << " seed=" << seed << (exec == Execution::serial ? " exec=serial" : "");
  std::cout << cfg.str() << "\n";
  std::cout << "rows = " << rows.size() << "\n";
  certmc::csv::write_coverage_rows(rows, cfg.str(), out);
  if (!svg_out.empty()) {
    const auto series = coverage_series(rows);
    certmc::svg::write_line_chart(series, "true probability", "empirical coverage", svg_out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo estimation with non-asymptotic confidence certificates"};
  app.require_subcommand(1);

  // volume
  int vol_dim = 2;
  std::uint64_t vol_n = 100000;
  double vol_alpha = 0.05;
  std::uint64_t vol_seed = 1;
  std::string vol_out;
  bool vol_serial = false;
  auto* volume = app.add_subcommand("volume", "Certified unit-ball volume in [-1,1]^p");
  volume->add_option("--dim", vol_dim, "dimension")->required();
  volume->add_option("--n", vol_n, "sample size")->required();
  volume->add_option("--alpha", vol_alpha, "confidence level complement");
  volume->add_option("--seed", vol_seed, "root seed");
  volume->add_option("--out", vol_out, "CSV output path");
  volume->add_flag("--serial", vol_serial, "run the serial reference path");

  // expect
  std::string exp_example;
  int exp_dim = 1;
  double exp_q = 2.0;
  double exp_gamma = 1.0;
  std::uint64_t exp_n = 10000;
  double exp_alpha = 0.05;
  std::uint64_t exp_seed = 1;
  std::string exp_out;
  bool exp_serial = false;
  auto* expect = app.add_subcommand("expect", "Certified expectation of a worked integrand");
  expect->add_option("--example", exp_example, "integrand family")
      ->required()
      ->check(CLI::IsMember({"qnorm", "arctan"}));
  expect->add_option("--dim", exp_dim, "dimension")->required();
  expect->add_option("--q", exp_q, "q-norm order (qnorm family)");
  expect->add_option("--gamma", exp_gamma, "log-concavity rate (arctan family)");
  expect->add_option("--n", exp_n, "sample size")->required();
  expect->add_option("--alpha", exp_alpha, "confidence level complement");
  expect->add_option("--seed", exp_seed, "root seed");
  expect->add_option("--out", exp_out, "CSV output path");
  expect->add_flag("--serial", exp_serial, "run the serial reference path");

  // plan
  std::string plan_example;
  std::vector<int> plan_dims;
  double plan_q = 2.0;
  double plan_gamma = 1.0;
  double plan_delta = 0.1;
  double plan_alpha = 0.05;
  bool plan_allow = false;
  std::string plan_out;
  auto* plan = app.add_subcommand("plan", "Sample sizes for a relative-error target");
  plan->add_option("--example", plan_example, "plan family")
      ->required()
      ->check(CLI::IsMember({"hypersphere", "qnorm", "arctan"}));
  plan->add_option("--dims", plan_dims, "dimension list")->required()->delimiter(',');
  plan->add_option("--q", plan_q, "q-norm order (qnorm family)");
  plan->add_option("--gamma", plan_gamma, "log-concavity rate (arctan family)");
  plan->add_option("--delta", plan_delta, "relative error target")->required();
  plan->add_option("--alpha", plan_alpha, "confidence level complement")->required();
  plan->add_flag("--allow-infeasible", plan_allow, "emit rows beyond the sample cap");
  plan->add_option("--out", plan_out, "CSV output path");

  // study
  std::string study_family;
  std::vector<int> study_dims{2, 4, 6, 8, 10};
  std::vector<double> study_zetas{0.01, 0.02, 0.05, 0.1, 0.2, 0.5};
  std::uint64_t study_n = 100000;
  double study_q = 2.0;
  double study_gamma = 1.0;
  double study_delta = 0.1;
  double study_alpha = 0.05;
  std::uint64_t study_seed = 1;
  std::string study_out;
  std::string study_svg;
  bool study_serial = false;
  auto* study = app.add_subcommand("study", "Sweep studies over dimension or probability");
  study->add_option("family", study_family, "study family")
      ->required()
      ->check(CLI::IsMember({"hypersphere", "qnorm", "arctan", "smallprob"}));
  study->add_option("--dims", study_dims, "dimension list")->delimiter(',');
  study->add_option("--zetas", study_zetas, "true probabilities (smallprob)")->delimiter(',');
  study->add_option("--n", study_n, "budget per row (hypersphere, smallprob)");
  study->add_option("--q", study_q, "q-norm order (qnorm)");
  study->add_option("--gamma", study_gamma, "log-concavity rate (arctan)");
  study->add_option("--delta", study_delta, "relative error target");
  study->add_option("--alpha", study_alpha, "confidence level complement");
  study->add_option("--seed", study_seed, "root seed");
  study->add_option("--out", study_out, "CSV output path")->required();
  study->add_option("--svg", study_svg, "SVG chart path");
  study->add_flag("--serial", study_serial, "run the serial reference path");

  // coverage
  std::vector<int> cov_k{10, 100};
  std::vector<double> cov_alpha{0.1, 0.05};
  std::string cov_grid = "0.01:0.99:0.01";
  std::uint64_t cov_reps = 1000;
  std::uint64_t cov_seed = 1;
  std::string cov_out;
  std::string cov_svg;
  bool cov_serial = false;
  auto* coverage = app.add_subcommand("coverage", "Binomial interval coverage comparison");
  coverage->add_option("--k", cov_k, "trial counts")->delimiter(',');
  coverage->add_option("--alpha", cov_alpha, "levels")->delimiter(',');
  coverage->add_option("--p-grid", cov_grid, "true probability grid START:STOP:STEP");
  coverage->add_option("--reps", cov_reps, "replications per cell");
  coverage->add_option("--seed", cov_seed, "root seed");
  coverage->add_option("--out", cov_out, "CSV output path")->required();
  coverage->add_option("--svg", cov_svg, "SVG chart path");
  coverage->add_flag("--serial", cov_serial, "run the serial reference path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 2;
  }

  try {
    // Argument sanity beyond what the parser enforces; all failures here are
    // usage errors.
    auto check_alpha = [](double a) { require(a > 0.0 && a < 1.0, "alpha must lie in (0, 1)"); };
    auto check_dims = [](const std::vector<int>& dims) {
      require(!dims.empty(), "need at least one dimension");
      for (int p : dims) require(p >= 1, "dimensions must be >= 1");
    };

    if (app.got_subcommand(volume)) {
      require(vol_dim >= 1, "--dim must be >= 1");
      require(vol_n >= 1, "--n must be >= 1");
      check_alpha(vol_alpha);
      return run_volume(vol_dim, vol_n, vol_alpha, vol_seed,
                        vol_serial ? Execution::serial : Execution::parallel, vol_out);
    }
    if (app.got_subcommand(expect)) {
      require(exp_dim >= 1, "--dim must be >= 1");
      require(exp_n >= 1, "--n must be >= 1");
      require(exp_q >= 1.0, "--q must be >= 1");
      require(exp_gamma > 0.0, "--gamma must be > 0");
      check_alpha(exp_alpha);
      return run_expect(exp_example, exp_dim, exp_q, exp_gamma, exp_n, exp_alpha, exp_seed,
                        exp_serial ? Execution::serial : Execution::parallel, exp_out);
    }
    if (app.got_subcommand(plan)) {
      check_dims(plan_dims);
      require(plan_q >= 1.0, "--q must be >= 1");
      require(plan_gamma > 0.0, "--gamma must be > 0");
      require(plan_delta > 0.0, "--delta must be > 0");
      check_alpha(plan_alpha);
      return run_plan(plan_example, plan_dims, plan_q, plan_gamma, plan_delta, plan_alpha,
                      plan_allow, plan_out);
    }
    if (app.got_subcommand(study)) {
      if (study_family == "smallprob") {
        require(!study_zetas.empty(), "need at least one probability");
        for (double z : study_zetas) require(z > 0.0 && z <= 1.0, "--zetas must lie in (0, 1]");
      } else {
        check_dims(study_dims);
      }
      require(study_n >= 1, "--n must be >= 1");
      require(study_q >= 1.0, "--q must be >= 1");
      require(study_gamma > 0.0, "--gamma must be > 0");
      require(study_delta > 0.0, "--delta must be > 0");
      check_alpha(study_alpha);
      return run_study(study_family, study_dims, study_zetas, study_n, study_q, study_gamma,
                       study_delta, study_alpha, study_seed,
                       study_serial ? Execution::serial : Execution::parallel, study_out,
                       study_svg);
    }
    if (app.got_subcommand(coverage)) {
      require(!cov_k.empty(), "need at least one k");
      for (int k : cov_k) require(k >= 1, "--k entries must be >= 1");
      require(!cov_alpha.empty(), "need at least one alpha");
      for (double a : cov_alpha) check_alpha(a);
      require(cov_reps >= 1, "--reps must be >= 1");
      return run_coverage(cov_k, cov_alpha, cov_grid, cov_reps, cov_seed,
                          cov_serial ? Execution::serial : Execution::parallel, cov_out, cov_svg);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help() << std::flush;
    return 2;
  } catch (const certmc::InfeasiblePlan& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
