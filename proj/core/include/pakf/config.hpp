#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pakf/io.hpp"
#include "pakf/types.hpp"

namespace pakf {

/// Run configuration shared by the CLI subcommands. `std::nullopt` on q,
/// noise_window and q_grid means "auto".
struct PipelineConfig {
  std::optional<double> q;
  std::optional<std::size_t> noise_window;
  std::optional<RoiSpec> roi;
  std::optional<std::vector<double>> q_grid;
  std::size_t n_sample = 32;
  std::uint64_t seed = 0;
  std::optional<double> lp_cutoff_hz;
  std::optional<std::filesystem::path> background_path;

  /// Applies every key present in `doc`. Unknown keys are rejected. A
  /// relative background_path is resolved against `relative_to` when given.
  void apply(const KeyValueDoc& doc, const std::filesystem::path& relative_to = {});
  KeyValueDoc to_doc() const;

  /// Checks value ranges that do not depend on the input volume.
  void validate() const;
};

/// The config keys, in canonical order.
const std::vector<std::string>& pipeline_config_keys();

/// "t_lo:t_hi".
RoiSpec parse_roi(std::string_view s);
std::string format_roi(const RoiSpec& roi);

/// Comma- or semicolon-separated list of positive numbers, or "auto".
std::optional<std::vector<double>> parse_q_grid(std::string_view s);

}  // namespace pakf
