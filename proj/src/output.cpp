#include "mpc/output.hpp"

#include <charconv>
#include <cmath>

#include <json.hpp>

namespace mpc {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

template <class T>
std::string opt_number(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>) {
    return format_number(*v);
  } else {
    return std::to_string(*v);
  }
}

template <class T>
nlohmann::ordered_json opt_json(const std::optional<T>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::Limit: return "Limit";
    case BoundKind::LowerBound: return "LowerBound";
    case BoundKind::UpperBoundMC: return "UpperBoundMC";
    case BoundKind::AnalyticCurve: return "AnalyticCurve";
  }
  return "Unknown";
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_header(std::ostream& os, OutputFormat fmt, bool checks) {
  if (fmt != OutputFormat::Csv) return;
  if (checks) {
    os << "check,name,passed,measured,threshold,detail\n";
  } else {
    os << "bound_kind,n,r,units,value,std_error,status,certificate_gap,samples,seed,theta,constraints,note\n";
  }
}

void write_row(std::ostream& os, OutputFormat fmt, const ResultRow& row) {
  if (fmt == OutputFormat::Csv) {
    os << to_string(row.kind) << ',' << opt_number(row.n) << ',' << format_number(row.r) << ','
       << row.units << ',' << format_number(row.value) << ',' << opt_number(row.std_error) << ','
       << csv_field(row.status) << ',' << opt_number(row.certificate_gap) << ',' << opt_number(row.samples)
       << ',' << opt_number(row.seed) << ',' << opt_number(row.theta) << ',' << csv_field(row.constraints)
       << ',' << csv_field(row.note) << '\n';
    return;
  }
  nlohmann::ordered_json j;
  j["bound_kind"] = to_string(row.kind);
  j["n"] = opt_json(row.n);
  j["r"] = row.r;
  j["units"] = row.units;
  j["value"] = row.value;
  j["std_error"] = opt_json(row.std_error);
  j["status"] = row.status;
  j["certificate_gap"] = opt_json(row.certificate_gap);
  j["samples"] = opt_json(row.samples);
  j["seed"] = opt_json(row.seed);
  j["theta"] = opt_json(row.theta);
  j["constraints"] = row.constraints;
  j["note"] = row.note;
  os << j.dump() << '\n';
}

void write_row(std::ostream& os, OutputFormat fmt, const CheckRow& row) {
  if (fmt == OutputFormat::Csv) {
    os << csv_field(row.id) << ',' << csv_field(row.name) << ',' << (row.passed ? "pass" : "FAIL") << ','
       << format_number(row.measured) << ',' << format_number(row.threshold) << ',' << csv_field(row.detail)
       << '\n';
    return;
  }
  nlohmann::ordered_json j;
  j["check"] = row.id;
  j["name"] = row.name;
  j["passed"] = row.passed;
  j["measured"] = row.measured;
  j["threshold"] = row.threshold;
  j["detail"] = row.detail;
  os << j.dump() << '\n';
}

ResultRow failure_row(const std::string& message) {
  ResultRow row;
  row.status = "FAILED";
  row.value = std::nan("");
  row.note = message;
  return row;
}

CheckRow failure_check(const std::string& message) {
  CheckRow row;
  row.id = "FAILED";
  row.name = "run aborted";
  row.measured = std::nan("");
  row.threshold = std::nan("");
  row.detail = message;
  return row;
}

}  // namespace mpc
