#include "pakf/corpus.hpp"

#include <cmath>

#include "pakf/config.hpp"
#include "pakf/error.hpp"

namespace pakf {

namespace {

constexpr std::size_t kNx = 16;
constexpr std::size_t kNy = 8;
constexpr std::size_t kNt = 512;
constexpr double kDt = 20e-6 / 2048.0;
constexpr double kPulseTime = 3.0e-6;
// Pulse support is +-3 half-widths (about 108 samples) around sample 307.
constexpr RoiSpec kRoi{196, 420};

SynthSpec base_spec(std::uint64_t seed) {
  SynthSpec s;
  s.nt = kNt;
  s.dt = kDt;
  s.pulse_time_s = kPulseTime;
  s.pulse_amp = 1.0;
  s.noise_sigma = 0.005;
  s.impulse_rate = 2.0;
  s.impulse_amp = 0.25;
  s.seed = seed;
  return s;
}

GridMask l_mask() {
  GridMask m;
  for (std::size_t x = 3; x <= 12; ++x) m.insert({x, 2});
  for (std::size_t y = 3; y <= 6; ++y) m.insert({12, y});
  return m;
}

GridMask two_stick_mask() {
  GridMask m;
  for (std::size_t x = 2; x <= 13; ++x) {
    m.insert({x, 1});
    m.insert({x, 6});
  }
  return m;
}

GridMask block_mask() {
  GridMask m;
  for (std::size_t x = 5; x <= 10; ++x) {
    for (std::size_t y = 2; y <= 5; ++y) m.insert({x, y});
  }
  return m;
}

std::vector<CorpusEntry> build_corpus() {
  std::vector<CorpusEntry> c;

  CorpusEntry phantom{.name = "phantom-L", .spec = base_spec(3), .nx = kNx, .ny = kNy,
                      .mask = l_mask(), .roi = kRoi, .n_sample = 32,
                      .expected = {{"log10_q_final", -5.66390, 0.05},
                                   {"forward_late_fraction", 1.0, 0.05},
                                   {"smoothed_on_time_fraction", 1.0, 0.05},
                                   {"mean_psnr_gain_db", -1.67432, 0.5}}};
  c.push_back(phantom);

  CorpusEntry sticks{.name = "two-stick", .spec = base_spec(3), .nx = kNx, .ny = kNy,
                     .mask = two_stick_mask(), .roi = kRoi, .n_sample = 32,
                     .expected = {{"log10_q_final", -5.67944, 0.05},
                                  {"forward_late_fraction", 1.0, 0.05},
                                  {"smoothed_on_time_fraction", 0.958333, 0.05},
                                  {"mean_psnr_gain_db", 0.00924, 0.5}}};
  sticks.spec.reflections = {{4.3e-6, 0.2}};
  c.push_back(sticks);

  CorpusEntry noise{.name = "noise-only", .spec = base_spec(5), .nx = kNx, .ny = kNy,
                    .mask = {}, .roi = kRoi, .n_sample = 32,
                    .expected = {{"log10_q_final", -5.70229, 0.05},
                                 {"image_peak_ratio", 1.00815, 0.1}}};
  c.push_back(noise);

  CorpusEntry heavy{.name = "impulse-heavy", .spec = base_spec(13), .nx = kNx, .ny = kNy,
                    .mask = block_mask(), .roi = kRoi, .n_sample = 32,
                    .expected = {{"log10_q_final", -5.84295, 0.05},
                                 {"forward_late_fraction", 0.666667, 0.05},
                                 {"smoothed_on_time_fraction", 0.708333, 0.05},
                                 {"mean_psnr_gain_db", -21.5977, 0.5}}};
  heavy.spec.impulse_rate = 4.0;
  heavy.spec.impulse_amp = 5.0 * heavy.spec.pulse_amp;
  c.push_back(heavy);

  return c;
}

std::string format_mask(const GridMask& mask) {
  std::string s;
  for (const GridIndex& g : mask) {
    if (!s.empty()) s += "; ";
    s += std::to_string(g.x) + "," + std::to_string(g.y);
  }
  return s;
}

GridMask parse_mask(std::string_view s) {
  GridMask mask;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ';') {
      const auto cell = s.substr(start, i - start);
      start = i + 1;
      if (cell.find_first_not_of(" \t") == std::string_view::npos) continue;
      const auto comma = cell.find(',');
      if (comma == std::string_view::npos) throw DataError("mask entry must be x,y");
      mask.insert({parse_size(cell.substr(0, comma), "mask x"),
                   parse_size(cell.substr(comma + 1), "mask y")});
    }
  }
  return mask;
}

std::string format_reflections(const std::vector<Reflection>& refl) {
  std::string s;
  for (const Reflection& r : refl) {
    if (!s.empty()) s += "; ";
    s += format_double(r.time_s) + ":" + format_double(r.amp);
  }
  return s;
}

std::vector<Reflection> parse_reflections(std::string_view s) {
  std::vector<Reflection> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ';') {
      const auto cell = s.substr(start, i - start);
      start = i + 1;
      if (cell.find_first_not_of(" \t") == std::string_view::npos) continue;
      const auto colon = cell.find(':');
      if (colon == std::string_view::npos) throw DataError("reflection entry must be time:amp");
      out.push_back({parse_double(cell.substr(0, colon), "reflection time"),
                     parse_double(cell.substr(colon + 1), "reflection amp")});
    }
  }
  return out;
}

}  // namespace

bool FrozenStat::accepts(double observed) const noexcept {
  return std::abs(observed - value) <= tolerance;
}

const FrozenStat* CorpusEntry::stat(std::string_view stat_name) const noexcept {
  for (const auto& s : expected) {
    if (s.name == stat_name) return &s;
  }
  return nullptr;
}

const std::vector<CorpusEntry>& bench_corpus() {
  static const std::vector<CorpusEntry> corpus = build_corpus();
  return corpus;
}

const CorpusEntry& corpus_entry(std::string_view name) {
  for (const auto& e : bench_corpus()) {
    if (e.name == name) return e;
  }
  throw UsageError("unknown corpus entry '" + std::string(name) + "'");
}

KeyValueDoc corpus_manifest(const CorpusEntry& e) {
  KeyValueDoc doc;
  doc.set("corpus_version", std::string(kCorpusVersion));
  doc.set("name", e.name);
  doc.set("nx", std::to_string(e.nx));
  doc.set("ny", std::to_string(e.ny));
  doc.set("nt", std::to_string(e.spec.nt));
  doc.set("dt", format_double(e.spec.dt));
  doc.set("pulse_center_hz", format_double(e.spec.pulse_center_hz));
  doc.set("pulse_time_s", format_double(e.spec.pulse_time_s));
  doc.set("pulse_amp", format_double(e.spec.pulse_amp));
  doc.set("noise_sigma", format_double(e.spec.noise_sigma));
  doc.set("impulse_rate", format_double(e.spec.impulse_rate));
  doc.set("impulse_amp", format_double(e.spec.impulse_amp));
  doc.set("reflections", format_reflections(e.spec.reflections));
  doc.set("seed", std::to_string(e.spec.seed));
  doc.set("roi", format_roi(e.roi));
  doc.set("n_sample", std::to_string(e.n_sample));
  doc.set("mask", format_mask(e.mask));
  for (const FrozenStat& s : e.expected) {
    doc.set("stat." + s.name, format_double(s.value) + " +- " + format_double(s.tolerance));
  }
  return doc;
}

CorpusEntry parse_corpus_manifest(const KeyValueDoc& doc) {
  if (doc.get("corpus_version") != kCorpusVersion) {
    throw DataError(doc.source() + ": corpus version '" + doc.get("corpus_version") +
                    "' is not " + std::string(kCorpusVersion));
  }
  const std::string& src = doc.source();
  CorpusEntry e;
  e.name = doc.get("name");
  e.nx = parse_size(doc.get("nx"), src + ": nx");
  e.ny = parse_size(doc.get("ny"), src + ": ny");
  e.spec.nt = parse_size(doc.get("nt"), src + ": nt");
  e.spec.dt = parse_double(doc.get("dt"), src + ": dt");
  e.spec.pulse_center_hz = parse_double(doc.get("pulse_center_hz"), src + ": pulse_center_hz");
  e.spec.pulse_time_s = parse_double(doc.get("pulse_time_s"), src + ": pulse_time_s");
  e.spec.pulse_amp = parse_double(doc.get("pulse_amp"), src + ": pulse_amp");
  e.spec.noise_sigma = parse_double(doc.get("noise_sigma"), src + ": noise_sigma");
  e.spec.impulse_rate = parse_double(doc.get("impulse_rate"), src + ": impulse_rate");
  e.spec.impulse_amp = parse_double(doc.get("impulse_amp"), src + ": impulse_amp");
  e.spec.reflections =
      doc.contains("reflections") ? parse_reflections(doc.get("reflections")) : std::vector<Reflection>{};
  e.spec.seed = parse_size(doc.get("seed"), src + ": seed");
  e.roi = parse_roi(doc.get("roi"));
  e.n_sample = parse_size(doc.get("n_sample"), src + ": n_sample");
  e.mask = parse_mask(doc.contains("mask") ? doc.get("mask") : std::string{});

  for (const auto& key : doc.keys()) {
    if (!key.starts_with("stat.")) continue;
    const std::string& v = doc.get(key);
    const auto pm = v.find("+-");
    if (pm == std::string::npos) throw DataError(src + ": " + key + " must be 'value +- tolerance'");
    e.expected.push_back({key.substr(5), parse_double(std::string_view(v).substr(0, pm), src + ": " + key),
                          parse_double(std::string_view(v).substr(pm + 2), src + ": " + key)});
  }
  e.spec.validate();
  return e;
}

}  // namespace pakf
