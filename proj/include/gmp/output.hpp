#pragma once

#include <string>
#include <vector>

#include "gmp/fields.hpp"
#include "gmp/grid.hpp"
#include "gmp/transport.hpp"

namespace gmp {

/// Decimal form with 17 significant digits, which parses back to the same double.
std::string format_number(double x);

/// Version tag written at the top of every report.
inline constexpr const char* kReportVersion = "gmp-report 1";

/// Cell table (i, j, x, y, rho, nu, p) at `path` and face table
/// (component, i, j, x, y, value) at faces_path(path). A null state writes
/// header-only files.
void write_snapshot(const std::string& path, const StaggeredGrid& grid, const MixtureState* state,
                    const VelocityPressure* vp);
std::string faces_path(const std::string& snapshot_path);

/// (time, face, value, weight) rows.
void write_traces(const std::string& path, const TraceRecord& record);

struct SnapshotRow {
  int i = 0, j = 0;
  double x = 0.0, y = 0.0, rho = 0.0, nu = 0.0, p = 0.0;
};

struct SnapshotTable {
  int nx = 0, ny = 0;  // from the largest indices present
  std::vector<SnapshotRow> rows;
  /// Field by name (rho, nu, p) in row order.
  std::vector<double> column(const std::string& name) const;
};

/// Reads a cell table written by write_snapshot. Throws ConfigError on
/// malformed input.
SnapshotTable read_snapshot(const std::string& path);

/// Plain-text report: sections of key/value rows and tables, closed by a
/// PASS or FAIL line.
class Report {
 public:
  explicit Report(std::string title);
  void section(const std::string& name);
  void value(const std::string& key, const std::string& v);
  void value(const std::string& key, double v);
  void value(const std::string& key, long long v);
  void table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);
  /// Records a hard check; any failed check turns the final line into FAIL.
  void check(const std::string& name, bool ok, const std::string& detail = "");
  bool passed() const { return failures_ == 0; }
  int failures() const { return failures_; }
  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::string body_;
  int failures_ = 0;
};

/// Writes `text` to `path`, throwing ConfigError with the path on failure.
void write_text(const std::string& path, const std::string& text);

}  // namespace gmp
