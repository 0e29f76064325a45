#include "csq/csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace csq {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string report_to_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "metric,value\n";
  out << "map_at_n," << format_double(report.map_at_n) << "\n";
  out << "map_n," << report.map_n << "\n";
  out << "p_at_radius," << format_double(report.p_at_radius) << "\n";
  out << "radius," << report.radius << "\n";
  out << "num_queries," << report.num_queries << "\n";
  out << "num_database," << report.num_database << "\n";
  out << "code_bits," << report.code_bits << "\n";
  out << "\nrank,precision\n";
  for (const auto& p : report.precision_at_n) {
    out << p.rank << "," << format_double(p.precision) << "\n";
  }
  out << "\nrecall,precision\n";
  for (const auto& p : report.pr_curve) {
    out << format_double(p.recall) << "," << format_double(p.precision) << "\n";
  }
  return out.str();
}

std::string distance_matrix_to_csv(const DistanceMatrix& matrix) {
  std::ostringstream out;
  out << "center_i,center_j,mean_distance\n";
  for (std::size_t i = 0; i < matrix.m; ++i) {
    for (std::size_t j = 0; j < matrix.m; ++j) {
      out << i << "," << j << "," << format_double(matrix(i, j)) << "\n";
    }
  }
  return out.str();
}

}  // namespace csq
