#pragma once

#include <cstdint>
#include <vector>

#include "mpc/channel.hpp"
#include "mpc/output.hpp"

namespace mpc::verify {

/// Quick trims Monte Carlo sizes for interactive use; Full uses the sizes the
/// acceptance criteria name.
enum class Scale { Quick, Full };

struct Options {
  ChannelSpec ch{1.0, 1.0};
  Scale scale = Scale::Full;
  std::uint64_t seed = 20240601;
  int threads = 1;
};

CheckRow maximal_closed_form(const Options& o);
CheckRow excess_cost_limit(const Options& o);
CheckRow mean_variance_crosscheck(const Options& o);
CheckRow expectation_only_collapse(const Options& o);
CheckRow lipschitz(const Options& o);
CheckRow density_ratio_distribution(const Options& o);
CheckRow converse_probability_audit(const Options& o);
CheckRow qcc_normalization(const Options& o);
CheckRow log_ratio_residual(const Options& o);
CheckRow sandwich(const Options& o);
CheckRow determinism(const Options& o);

/// The eleven acceptance checks, in order.
std::vector<CheckRow> acceptance(const Options& o);
/// Further special cases and invariants beyond the acceptance list.
std::vector<CheckRow> extras(const Options& o);
/// acceptance() followed by extras().
std::vector<CheckRow> suite(const Options& o);

}  // namespace mpc::verify
