#include <doctest.h>

#include <clocale>
#include <cmath>
#include <locale>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpc/cli.hpp"
#include "mpc/errors.hpp"
#include "mpc/output.hpp"

using namespace mpc;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string error_of(const std::string& text) {
  try {
    cli::parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kChannel = R"("channel": {"noise_variance": 1, "cost_threshold": 1})";

std::string config(const std::string& body) { return std::string("{") + kChannel + ", " + body + "}"; }

int run_text(const std::string& text, std::string& out) {
  std::ostringstream os, log;
  const int code = cli::run(cli::parse_config_text(text), {}, os, log);
  out = os.str();
  return code;
}

}  // namespace

TEST_CASE("numbers use 17 significant digits and ignore the global locale") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(-1.5e-300) == "-1.5000000000000001e-300");
  CHECK(std::stod(format_number(M_PI)) == M_PI);
  try {
    std::locale::global(std::locale("de_DE.UTF-8"));
  } catch (const std::exception&) {
    // Locale not installed; the check below still guards the default.
  }
  std::setlocale(LC_ALL, "de_DE.UTF-8");
  CHECK(format_number(1234.5) == "1234.5");
  std::setlocale(LC_ALL, "C");
  std::locale::global(std::locale::classic());
}

TEST_CASE("golden result and check rows") {
  ResultRow r;
  r.kind = BoundKind::UpperBoundMC;
  r.n = 1600;
  r.r = -0.25;
  r.value = 0.5;
  r.std_error = 0.001;
  r.status = "OK";
  r.samples = 100;
  r.seed = 7;
  r.theta = 0.125;
  r.constraints = "square<=1";
  r.note = "a,b";
  r.wall_time = 3.0;
  std::ostringstream csv;
  write_header(csv, OutputFormat::Csv, false);
  write_row(csv, OutputFormat::Csv, r);
  CHECK(csv.str() ==
        "bound_kind,n,r,units,value,std_error,status,certificate_gap,samples,seed,theta,constraints,note\n"
        "UpperBoundMC,1600,-0.25,nats,0.5,0.001,OK,,100,7,0.125,square<=1,\"a,b\"\n");

  std::ostringstream jl;
  write_header(jl, OutputFormat::JsonLines, false);
  write_row(jl, OutputFormat::JsonLines, r);
  CHECK(jl.str() ==
        "{\"bound_kind\":\"UpperBoundMC\",\"n\":1600,\"r\":-0.25,\"units\":\"nats\",\"value\":0.5,\"std_error\":0.001,"
        "\"status\":\"OK\",\"certificate_gap\":null,\"samples\":100,\"seed\":7,\"theta\":0.125,"
        "\"constraints\":\"square<=1\",\"note\":\"a,b\"}\n");

  CheckRow c{"C1", "closed form", true, 1e-7, 1e-3, "ok", 0.2};
  std::ostringstream cc;
  write_header(cc, OutputFormat::Csv, true);
  write_row(cc, OutputFormat::Csv, c);
  CHECK(cc.str() == "check,name,passed,measured,threshold,detail\nC1,closed form,pass,9.9999999999999995e-08,0.001,ok\n");

  std::ostringstream f;
  write_row(f, OutputFormat::Csv, failure_row("boom"));
  CHECK(f.str() == "Limit,,0,nats,nan,,FAILED,,,,,,boom\n");
}

TEST_CASE("minimal maximal-constraint config") {
  const cli::RunConfig cfg =
      cli::parse_config_text(config(R"("constraints": [{"kind": "positive_part", "budget": 0}], "command": "limit", "r": 0)"));
  REQUIRE(cfg.cs.k() == 1);
  CHECK(cfg.cs.items()[0].function.kind() == ConstraintKind::PositivePart);
  CHECK(cfg.cs.items()[0].budget == 0.0);
  CHECK(cfg.command == cli::Command::Limit);
  CHECK(cfg.r_values == std::vector<double>{0.0});
  CHECK(cfg.format == OutputFormat::Csv);
}

TEST_CASE("config validation errors name the field") {
  CHECK(error_of(R"({"channel": {"noise_variance": -1, "cost_threshold": 1}, "constraints": [], "command": "limit", "r": 0})")
            .find("channel.noise_variance") != std::string::npos);
  const std::string budget = error_of(config(R"("constraints": [{"kind": "square", "budget": -0.1}], "command": "limit", "r": 0)"));
  CHECK(budget.find("constraints[0].budget") != std::string::npos);
  CHECK(budget.find("(0,∞) × [0,∞)^k") != std::string::npos);
  CHECK(error_of(config(R"("constraints": [], "command": "limit", "r": 0, "colour": 1)")).find("colour: unknown key") !=
        std::string::npos);
  CHECK(error_of(config(R"("constraints": [{"kind": "square", "budget": 1, "slope": 2}], "command": "limit", "r": 0)"))
            .find("constraints[0].slope") != std::string::npos);
  CHECK(error_of(config(R"("constraints": [{"kind": "square", "budget": 1}], "command": "achievability", "r": 0, "n": 100)"))
            .find("seed") == 0);
  CHECK(error_of(config(R"("constraints": [{"kind": "square", "budget": 1}], "command": "converse", "r": 0)")).find("n:") == 0);
  CHECK(error_of(config(R"("constraints": [{"kind": "step_indicator", "threshold": 1, "budget": 0.1}], "command": "limit", "r": 0)"))
            .find("smoothed_step") != std::string::npos);
  CHECK(error_of(config(R"("constraints": [], "command": "fly", "r": 0)")).find("command:") == 0);
  CHECK(error_of(config(R"("constraints": [{"kind": "square", "budget": 1}], "command": "converse", "r": 0, "n": 100, "r_prime": 0.5)"))
            .find("r_prime") == 0);
}

TEST_CASE("syntax errors report line and column") {
  const std::string e = error_of("{\n  \"channel\": {\n    \"noise_variance\": 1,,\n  }\n}");
  CHECK(e.find("line 3") != std::string::npos);
  CHECK(e.find("column") != std::string::npos);
}

TEST_CASE("units in bits convert rates at the boundary") {
  const cli::RunConfig cfg = cli::parse_config_text(
      config(R"("constraints": [{"kind": "square", "budget": 1}], "command": "limit", "r": 1, "units": "bits")"));
  CHECK(cfg.r_values[0] == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  std::string out;
  REQUIRE(run_text(config(R"("constraints": [{"kind": "square", "budget": 1}], "command": "limit", "r": 1, "units": "bits")"),
                   out) == 0);
  const auto row = split(lines(out)[1]);
  CHECK(row[2] == "1");
  CHECK(row[3] == "bits");
}

TEST_CASE("limit sweep over r gives 31 nondecreasing rows") {
  std::string out;
  const int code = run_text(
      config(R"("constraints": [{"kind": "square", "budget": 1}], "command": "sweep", "sweep_bound": "limit",
                "r_grid": {"start": -1.5, "stop": 1.5, "step": 0.1})"),
      out);
  CHECK(code == 0);
  const auto rows = lines(out);
  REQUIRE(rows.size() == 32);
  CHECK(rows[0] == "bound_kind,n,r,units,value,std_error,status,certificate_gap,samples,seed,theta,constraints,note");
  double prev = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto cells = split(rows[i]);
    REQUIRE(cells.size() == 13);
    CHECK(cells[0] == "Limit");
    CHECK(cells[6] == "Converged");
    const double v = std::stod(cells[4]);
    CHECK(v >= prev - 1e-9);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    prev = v;
  }
  CHECK(split(rows[16])[2] == "0");
}

TEST_CASE("JSON-lines output and repeated runs are identical") {
  const std::string text = config(
      R"("constraints": [{"kind": "square", "budget": 1}], "command": "achievability", "r": 0, "n": 400,
         "seed": 11, "mc_samples": 5000, "output_format": "jsonl")");
  std::string a, b;
  REQUIRE(run_text(text, a) == 0);
  REQUIRE(run_text(text, b) == 0);
  CHECK(a == b);
  const auto rows = lines(a);
  REQUIRE(rows.size() == 2);
  const auto first = nlohmann::json::parse(rows[0]);
  CHECK(first["bound_kind"] == "UpperBoundMC");
  CHECK(first["seed"] == 11);
  CHECK(first["std_error"].get<double>() > 0.0);
  CHECK(nlohmann::json::parse(rows[1])["bound_kind"] == "AnalyticCurve");
}

TEST_CASE("numeric failures end the output with a failure row and exit code 3") {
  // A per-letter cost mixture whose shells would need negative radii at n = 4.
  std::string out;
  const int code = run_text(
      config(R"("constraints": [{"kind": "square", "budget": 100}], "command": "achievability", "r": 0, "n": 4,
                "seed": 1, "mc_samples": 1000, "mixture": {"atoms": [-5, 0.5], "weights": [0.1, 0.9]})"),
      out);
  CHECK(code == 3);
  const auto rows = lines(out);
  REQUIRE(rows.size() >= 2);
  CHECK(split(rows.back())[6] == "FAILED");
}
