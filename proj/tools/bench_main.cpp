// Timing harness for the serial reference path vs the OpenMP chunk kernels.
// Also asserts the two paths agree bit for bit, which is the whole point of
// the fixed-chunk stream layout.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "certmc/estimators.hpp"
#include "certmc/experiments.hpp"

namespace {

using certmc::estimators::Execution;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename F>
double timed(F&& run) {
  const auto start = Clock::now();
  run();
  return seconds_since(start);
}

void report(const std::string& name, double serial_s, double parallel_s, bool identical) {
  std::cout << name << ": serial " << serial_s << " s, parallel " << parallel_s << " s, speedup "
            << serial_s / parallel_s << "x, identical=" << (identical ? "yes" : "NO") << "\n";
  if (!identical) {
    std::cerr << "bench: serial and parallel paths disagree for " << name << "\n";
    std::exit(1);
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t n = 8000000;
  if (argc > 1) n = std::strtoull(argv[1], nullptr, 10);
#ifdef _OPENMP
  std::cout << "threads = " << omp_get_max_threads() << "\n";
#else
  std::cout << "threads = 1 (compiled without OpenMP)\n";
#endif
  std::cout << "samples = " << n << "\n";

  {
    const auto envelope = certmc::estimators::Sampler::symmetric_cube(10);
    certmc::estimators::CertifiedEstimate serial_est, parallel_est;
    const double ts = timed([&] {
      serial_est = certmc::estimators::estimate_volume(
          7, certmc::experiments::unit_ball_contains, 1024.0, envelope, n,
          {0.05, Execution::serial, 65536});
    });
    const double tp = timed([&] {
      parallel_est = certmc::estimators::estimate_volume(
          7, certmc::experiments::unit_ball_contains, 1024.0, envelope, n,
          {0.05, Execution::parallel, 65536});
    });
    report("volume dim=10", ts, tp,
           serial_est.estimate == parallel_est.estimate && serial_est.hits == parallel_est.hits);
  }

  {
    const auto integrand = certmc::experiments::make_arctan_l1_integrand(8);
    certmc::Matrix sigma = certmc::Matrix::identity(8);
    const auto sampler = certmc::estimators::Sampler::mvn(certmc::sampling::cholesky(sigma));
    const auto spec = certmc::bounds::BoundSpec::log_concave_lipschitz(*integrand.lipschitz, 1.0)
                          .with_mean_lower_bound(*integrand.mean_lower_bound);
    certmc::estimators::CertifiedEstimate serial_est, parallel_est;
    const std::uint64_t m = n / 4;
    const double ts = timed([&] {
      serial_est = certmc::estimators::estimate_expectation(11, integrand, sampler, m, spec,
                                                            {0.05, Execution::serial, 65536});
    });
    const double tp = timed([&] {
      parallel_est = certmc::estimators::estimate_expectation(11, integrand, sampler, m, spec,
                                                              {0.05, Execution::parallel, 65536});
    });
    report("expectation dim=8", ts, tp, serial_est.estimate == parallel_est.estimate);
  }

  {
    const int ks[1] = {100};
    const double alphas[1] = {0.1};
    const auto grid = certmc::experiments::make_grid(0.01, 0.99, 0.01);
    std::vector<certmc::experiments::CoverageRow> serial_rows, parallel_rows;
    const double ts = timed([&] {
      serial_rows =
          certmc::experiments::coverage_study(ks, alphas, grid, 2000, 3, Execution::serial);
    });
    const double tp = timed([&] {
      parallel_rows =
          certmc::experiments::coverage_study(ks, alphas, grid, 2000, 3, Execution::parallel);
    });
    bool identical = serial_rows.size() == parallel_rows.size();
    for (std::size_t i = 0; identical && i < serial_rows.size(); ++i) {
      identical = serial_rows[i].coverage == parallel_rows[i].coverage &&
                  serial_rows[i].avg_width == parallel_rows[i].avg_width &&
                  serial_rows[i].exact_coverage == parallel_rows[i].exact_coverage;
    }
    report("coverage k=100", ts, tp, identical);
  }

  return 0;
}
