#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mpc {

enum class BoundKind { Limit, LowerBound, UpperBoundMC, AnalyticCurve };
enum class OutputFormat { Csv, JsonLines };

std::string to_string(BoundKind kind);

/// One computed quantity. Wall time is kept off the rendered output so that
/// reruns are byte-identical; the CLI reports it on stderr in verbose mode.
struct ResultRow {
  BoundKind kind = BoundKind::Limit;
  std::optional<std::int64_t> n;
  double r = 0.0;  // in the configured units
  std::string units = "nats";
  double value = 0.0;
  std::optional<double> std_error;
  std::string status;
  std::optional<double> certificate_gap;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> theta;
  std::string constraints;
  std::string note;
  double wall_time = 0.0;
};

/// One verification check.
struct CheckRow {
  std::string id;
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
  double wall_time = 0.0;
};

/// 17 significant digits, '.' separator, independent of the global locale.
std::string format_number(double v);

void write_header(std::ostream& os, OutputFormat fmt, bool checks);
void write_row(std::ostream& os, OutputFormat fmt, const ResultRow& row);
void write_row(std::ostream& os, OutputFormat fmt, const CheckRow& row);

/// Row flagging that the run stopped early.
ResultRow failure_row(const std::string& message);
CheckRow failure_check(const std::string& message);

}  // namespace mpc
