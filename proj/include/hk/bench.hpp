#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hk::bench {

struct BenchRow {
  std::string command;
  int d = 0;
  std::size_t N = 0;
  int n_colors = 0;
  std::uint64_t seed = 0;
  std::int64_t wall_ns = 0;
  std::string answer_digest;
};

struct SlopeFit {
  std::string command;
  int d = 0;
  std::size_t points = 0;
  double slope = 0;
  double theory = 0;      // d/2
  double end_to_end = 0;  // d
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<SlopeFit> fits;
};

std::vector<std::string> suite_names();

/// Runs a built-in size ladder. Throws InputError for unknown suites.
BenchReport run_suite(const std::string& name, int threads = 1);

/// Header: command,d,N,n_colors,seed,wall_ns,answer_digest
void write_csv(std::ostream& out, const std::vector<BenchRow>& rows);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);
std::vector<SlopeFit> fit_slopes(const std::vector<BenchRow>& rows);

/// 16 hex digits of FNV-1a over the text.
std::string digest(const std::string& text);

}  // namespace hk::bench
