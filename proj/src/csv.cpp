#include "certmc/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace certmc::csv {
namespace {

constexpr char kStudyHeader[] =
    "study,p,param,n,estimate,truth,abs_error,rel_error,ci_lower,ci_upper,method,seed";
constexpr char kCoverageHeader[] =
    "k,alpha,p_true,method,replications,coverage,exact_coverage,avg_width";
constexpr char kPlanHeader[] = "family,p,param,delta,alpha,n_exact,n_required,feasible";

std::string opt_real(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string();
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // binary: identical bytes everywhere
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string() + " for reading");
  return in;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_real(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw std::runtime_error("csv: bad real '" + s + "'");
  return v;
}

std::optional<double> parse_opt_real(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_real(s);
}

std::uint64_t parse_u64(const std::string& s) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str()) throw std::runtime_error("csv: bad integer '" + s + "'");
  return v;
}

// Returns data lines (comments stripped) after checking the header row.
std::vector<std::string> read_data_lines(const std::filesystem::path& path,
                                         const char* expected_header) {
  auto in = open_in(path);
  std::vector<std::string> lines;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != expected_header) {
        throw std::runtime_error("csv: unexpected header in " + path.string());
      }
      header_seen = true;
      continue;
    }
    lines.push_back(line);
  }
  if (!header_seen) throw std::runtime_error("csv: missing header in " + path.string());
  return lines;
}

}  // namespace

std::string format_real(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

void write_study_rows(const std::vector<experiments::StudyRow>& rows, const std::string& config,
                      const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "# " << config << "\n" << kStudyHeader << "\n";
  for (const auto& r : rows) {
    out << r.study << ',' << format_real(r.p) << ',' << opt_real(r.param) << ',' << r.n << ','
        << format_real(r.estimate) << ',' << opt_real(r.truth) << ',' << opt_real(r.abs_error)
        << ',' << opt_real(r.rel_error) << ',' << format_real(r.ci_lower) << ','
        << format_real(r.ci_upper) << ',' << r.method << ',' << r.seed << "\n";
  }
}

void write_coverage_rows(const std::vector<experiments::CoverageRow>& rows,
                         const std::string& config, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "# " << config << "\n" << kCoverageHeader << "\n";
  for (const auto& r : rows) {
    out << r.k << ',' << format_real(r.alpha) << ',' << format_real(r.p_true) << ',' << r.method
        << ',' << r.replications << ',' << format_real(r.coverage) << ','
        << format_real(r.exact_coverage) << ',' << format_real(r.avg_width) << "\n";
  }
}

void write_plan_rows(const std::vector<bounds::GrowthRow>& rows, const std::string& family,
                     std::optional<double> param, double delta, double alpha,
                     const std::string& config, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "# " << config << "\n" << kPlanHeader << "\n";
  for (const auto& r : rows) {
    out << family << ',' << r.p << ',' << (param ? format_real(*param) : std::string()) << ','
        << format_real(delta) << ',' << format_real(alpha) << ',' << format_real(r.plan.n_exact)
        << ',';
    if (r.plan.feasible) out << r.plan.n;
    out << ',' << (r.plan.feasible ? "true" : "false") << "\n";
  }
}

std::vector<experiments::StudyRow> read_study_rows(const std::filesystem::path& path) {
  std::vector<experiments::StudyRow> rows;
  for (const auto& line : read_data_lines(path, kStudyHeader)) {
    const auto f = split_fields(line);
    if (f.size() != 12) throw std::runtime_error("csv: study row needs 12 fields");
    experiments::StudyRow r;
    r.study = f[0];
    r.p = parse_real(f[1]);
    r.param = parse_opt_real(f[2]);
    r.n = parse_u64(f[3]);
    r.estimate = parse_real(f[4]);
    r.truth = parse_opt_real(f[5]);
    r.abs_error = parse_opt_real(f[6]);
    r.rel_error = parse_opt_real(f[7]);
    r.ci_lower = parse_real(f[8]);
    r.ci_upper = parse_real(f[9]);
    r.method = f[10];
    r.seed = parse_u64(f[11]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<experiments::CoverageRow> read_coverage_rows(const std::filesystem::path& path) {
  std::vector<experiments::CoverageRow> rows;
  for (const auto& line : read_data_lines(path, kCoverageHeader)) {
    const auto f = split_fields(line);
    if (f.size() != 8) throw std::runtime_error("csv: coverage row needs 8 fields");
    experiments::CoverageRow r;
    r.k = static_cast<int>(parse_u64(f[0]));
    r.alpha = parse_real(f[1]);
    r.p_true = parse_real(f[2]);
    r.method = f[3];
    r.replications = parse_u64(f[4]);
    r.coverage = parse_real(f[5]);
    r.exact_coverage = parse_real(f[6]);
    r.avg_width = parse_real(f[7]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace certmc::csv
