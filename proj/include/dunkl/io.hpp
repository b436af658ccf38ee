#ifndef DUNKL_IO_HPP_
#define DUNKL_IO_HPP_

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dunkl/symmetry.hpp"
#include "dunkl/verify.hpp"

namespace dunkl {

using json = nlohmann::json;

/// Full double precision: 17 significant digits, so downstream tolerance
/// checks are never quantized by formatting.
inline std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Write-then-rename so readers never observe a half-written file.
inline void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("atomic_write: cannot open " + tmp.string());
    out << content;
    if (!out.flush()) throw DomainError("atomic_write: short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// Columnar dump of a tensor-grid sample: one row per grid point, node
/// coordinates then re/im, preceded by a one-line JSON metadata comment.
inline std::string grid_function_csv(const GridFunction& f, const json& metadata = json::object()) {
  std::ostringstream out;
  if (!metadata.empty()) out << "# " << metadata.dump() << "\n";
  std::size_t n = f.dim();
  for (std::size_t j = 0; j < n; ++j) out << "x" << j + 1 << ",";
  out << "re,im\n";
  auto dims = f.dims();
  std::vector<std::size_t> idx(n, 0);
  std::size_t flat = 0;
  do {
    for (std::size_t j = 0; j < n; ++j) out << format_full(f.axes[j].nodes[idx[j]]) << ",";
    out << format_full(f.values[flat].real()) << "," << format_full(f.values[flat].imag())
        << "\n";
    ++flat;
  } while (next_multi_index(idx, dims));
  return out.str();
}

/// Kernel evaluation dump: (n, lambda..., eta..., K, M..., x..., y..., t, value)
/// per row. The header is emitted even for an empty pair list.
struct KernelEvalRow {
  Vec x, y;
  double t = 1.0;
  double value = 0.0;
};

inline std::string kernel_eval_csv(const MultiplicityVector& lambda, const SignVector& eta,
                                   int K, const std::vector<int>& M,
                                   const std::vector<KernelEvalRow>& rows) {
  std::size_t n = lambda.dim();
  std::ostringstream out;
  out << "n";
  for (std::size_t j = 0; j < n; ++j) out << ",lambda" << j + 1;
  for (std::size_t j = 0; j < n; ++j) out << ",eta" << j + 1;
  out << ",K";
  for (std::size_t j = 0; j < n; ++j) out << ",M" << j + 1;
  for (std::size_t j = 0; j < n; ++j) out << ",x" << j + 1;
  for (std::size_t j = 0; j < n; ++j) out << ",y" << j + 1;
  out << ",t,value\n";
  for (const auto& row : rows) {
    out << n;
    for (std::size_t j = 0; j < n; ++j) out << "," << format_full(lambda[j]);
    for (std::size_t j = 0; j < n; ++j) out << "," << (int)eta[j];
    out << "," << K;
    for (std::size_t j = 0; j < n; ++j) out << "," << M[j];
    for (std::size_t j = 0; j < n; ++j) out << "," << format_full(row.x[j]);
    for (std::size_t j = 0; j < n; ++j) out << "," << format_full(row.y[j]);
    out << "," << format_full(row.t) << "," << format_full(row.value) << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// VerificationReport JSON
// ---------------------------------------------------------------------------

inline json report_to_json(const VerificationReport& rep) {
  json j;
  j["check_name"] = rep.check_name;
  j["sample_count"] = rep.sample_count;
  j["fitted_constant"] = rep.fitted_constant;
  j["worst_ratio"] = rep.worst_ratio;
  j["threshold"] = rep.threshold;
  if (rep.has_gamma)
    j["gamma_used"] = rep.gamma_used;
  else
    j["gamma_used"] = nullptr;
  j["pass"] = rep.pass;
  j["runtime_seconds"] = rep.runtime_seconds;
  j["seed"] = rep.seed;
  if (!rep.notes.empty()) j["notes"] = rep.notes;
  return j;
}

/// JSON array of reports, each annotated with the run's (n, lambda) so the
/// report aggregator can emit plot-ready rows without re-reading configs.
inline std::string reports_json(const std::vector<VerificationReport>& reps,
                                const MultiplicityVector& lambda) {
  json arr = json::array();
  for (const auto& rep : reps) {
    json j = report_to_json(rep);
    j["n"] = lambda.dim();
    json lam = json::array();
    for (std::size_t k = 0; k < lambda.dim(); ++k) lam.push_back(lambda[k]);
    j["lambda"] = lam;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

}  // namespace dunkl

#endif  // DUNKL_IO_HPP_
