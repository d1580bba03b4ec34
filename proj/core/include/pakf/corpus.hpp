#pragma once

// Versioned benchmark corpus: synthetic scan definitions plus frozen
// statistics that the acceptance suite checks against.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pakf/io.hpp"
#include "pakf/synth.hpp"
#include "pakf/types.hpp"

namespace pakf {

inline constexpr std::string_view kCorpusVersion = "bench-v1";

/// A frozen oracle output with its accepted deviation.
struct FrozenStat {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;

  bool accepts(double observed) const noexcept;

  friend bool operator==(const FrozenStat&, const FrozenStat&) = default;
};

struct CorpusEntry {
  std::string name;
  SynthSpec spec;
  std::size_t nx = 0;
  std::size_t ny = 0;
  GridMask mask;
  RoiSpec roi;
  std::size_t n_sample = 32;
  std::vector<FrozenStat> expected;

  const FrozenStat* stat(std::string_view stat_name) const noexcept;
  SynthVolume generate() const { return synth_volume(spec, nx, ny, mask); }

  friend bool operator==(const CorpusEntry&, const CorpusEntry&) = default;
};

/// The fixed corpus for kCorpusVersion.
const std::vector<CorpusEntry>& bench_corpus();
const CorpusEntry& corpus_entry(std::string_view name);

/// Manifest text: PipelineConfig-style `key = value` lines, synth fields,
/// `mask = x,y; x,y; ...` and `stat.<name> = value +- tolerance`.
KeyValueDoc corpus_manifest(const CorpusEntry& entry);
CorpusEntry parse_corpus_manifest(const KeyValueDoc& doc);

}  // namespace pakf
