// Per-run records and CSV export. Rows are written with 17 significant
// digits so parsed doubles round-trip bit-exactly; files carry no
// timestamps, making repeated runs byte-identical.

#pragma once

#include <cinttypes>
#include <cstdio>
#include <string>
#include <vector>

#include "coopga/errors.hpp"
#include "coopga/opt/gauss_newton.hpp"
#include "coopga/opt/mpc.hpp"

namespace coopga::sim {

struct RunLog {
  enum class Mode { kIk, kMpc };
  Mode mode = Mode::kIk;
  std::string scenario_name;
  std::string kind;
  std::uint64_t scenario_hash = 0;
  std::uint64_t seed = 0;
  int njoints = 0;
  std::vector<opt::GnRecord> ik_rows;
  std::vector<opt::MpcRecord> mpc_rows;
};

namespace detail {

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : file_(std::fopen(path.c_str(), "wb")) {
    if (file_ == nullptr) throw IoError("export_csv: cannot open '" + path + "' for writing");
  }
  ~CsvWriter() {
    if (file_ != nullptr) std::fclose(file_);
  }
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void raw(const std::string& s) { std::fputs(s.c_str(), file_); }
  void field_int(long long v, bool first = false) {
    std::fprintf(file_, first ? "%lld" : ",%lld", v);
  }
  void field(double v, bool first = false) {
    std::fprintf(file_, first ? "%.17g" : ",%.17g", v);
  }
  void end_row() { std::fputc('\n', file_); }

  bool ok() const { return file_ != nullptr && std::ferror(file_) == 0; }

 private:
  std::FILE* file_;
};

}  // namespace detail

// IK runs: iter, cost, constraint_norm, q_1..q_n, ee1_xyz, ee2_xyz.
// MPC runs: tick, time_s, cost, res_align, res_axis, res_dist, q, dq, u.
inline void export_csv(const RunLog& log, const std::string& path) {
  detail::CsvWriter out(path);
  const int n = log.njoints;
  if (log.mode == RunLog::Mode::kIk) {
    std::string header = "iter,cost,constraint_norm";
    for (int i = 1; i <= n; ++i) header += ",q_" + std::to_string(i);
    header += ",ee1_x,ee1_y,ee1_z,ee2_x,ee2_y,ee2_z\n";
    out.raw(header);
    for (const auto& r : log.ik_rows) {
      out.field_int(r.iter, true);
      out.field(r.cost);
      out.field(r.constraint_norm);
      for (int i = 0; i < n; ++i) out.field(r.q(i));
      for (int i = 0; i < 3; ++i) out.field(r.ee1[i]);
      for (int i = 0; i < 3; ++i) out.field(r.ee2[i]);
      out.end_row();
    }
  } else {
    std::string header = "tick,time_s,cost,res_align,res_axis,res_dist";
    for (int i = 1; i <= n; ++i) header += ",q_" + std::to_string(i);
    for (int i = 1; i <= n; ++i) header += ",dq_" + std::to_string(i);
    for (int i = 1; i <= n; ++i) header += ",u_" + std::to_string(i);
    header += "\n";
    out.raw(header);
    for (const auto& r : log.mpc_rows) {
      out.field_int(r.tick, true);
      out.field(r.time_s);
      out.field(r.cost);
      for (int i = 0; i < 3; ++i) {
        out.field(i < r.residual_norms.size() ? r.residual_norms(i) : 0.0);
      }
      for (int i = 0; i < n; ++i) out.field(r.q(i));
      for (int i = 0; i < n; ++i) out.field(r.dq(i));
      for (int i = 0; i < n; ++i) out.field(r.u(i));
      out.end_row();
    }
  }
  if (!out.ok()) throw IoError("export_csv: I/O error writing '" + path + "'");
}

}  // namespace coopga::sim
