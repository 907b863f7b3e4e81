#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mpc/bounds.hpp"
#include "mpc/channel.hpp"
#include "mpc/constraints.hpp"
#include "mpc/optimizer.hpp"
#include "mpc/output.hpp"
#include "mpc/verify.hpp"

namespace mpc::cli {

enum class Command { Limit, Converse, Achievability, Sweep, Verify };
enum class SweepBound { Limit, Converse, Achievability, Analytic };
/// default: n^{-3/4}; auto: pilot-run selection; fixed: the configured value.
enum class ThetaMode { Default, Auto, Fixed };

/// Validated run description. Rates are stored in nats; `bits` only affects
/// how inputs were read and how r is echoed.
struct RunConfig {
  ChannelSpec ch{1.0, 1.0};
  ConstraintSet cs{1.0, {}};
  Command command = Command::Limit;
  std::vector<double> r_values;
  std::vector<std::int64_t> n_values;
  SweepBound sweep_bound = SweepBound::Limit;
  std::optional<double> r_prime;
  std::uint64_t mc_samples = 100000;
  std::optional<std::uint64_t> seed;
  ThetaMode theta_mode = ThetaMode::Default;
  double theta = 0.0;
  std::uint64_t theta_pilot_samples = 100000;
  double kappa_prime = 0.0;
  std::optional<DiscreteDistribution> mixture;
  bool bits = false;
  OutputFormat format = OutputFormat::Csv;
  std::optional<std::string> output;
  SearchOptions optimizer;
  verify::Scale verify_scale = verify::Scale::Full;
};

/// Throws ConfigError naming the line (syntax) or field (validation) at fault.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

struct RunOptions {
  int threads = 1;
  bool verbose = false;
};

/// Executes the configured command, writing rows to `out` as they complete.
/// Returns the process exit status: 0 success, 3 numeric/infeasible error or a
/// failed verification check. On error a failure marker row ends the output.
int run(const RunConfig& config, const RunOptions& opts, std::ostream& out, std::ostream& log);

/// Entry point behind `mpc-bounds`.
int main(int argc, char** argv);

}  // namespace mpc::cli
