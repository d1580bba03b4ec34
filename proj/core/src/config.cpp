#include "pakf/config.hpp"

#include <algorithm>
#include <cmath>

#include "pakf/error.hpp"

namespace pakf {

namespace {

bool is_auto(std::string_view s) { return s == "auto"; }

std::uint64_t parse_seed(std::string_view s, const std::string& what) {
  return static_cast<std::uint64_t>(parse_size(s, what));
}

}  // namespace

const std::vector<std::string>& pipeline_config_keys() {
  static const std::vector<std::string> keys{"q",        "noise_window", "roi",
                                             "q_grid",   "n_sample",     "seed",
                                             "lp_cutoff_hz", "background_path"};
  return keys;
}

RoiSpec parse_roi(std::string_view s) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) {
    throw UsageError("ROI must be written t_lo:t_hi (got '" + std::string(s) + "')");
  }
  RoiSpec roi{parse_size(s.substr(0, colon), "roi t_lo"), parse_size(s.substr(colon + 1), "roi t_hi")};
  if (roi.t_lo >= roi.t_hi) throw UsageError("ROI needs t_lo < t_hi (got '" + std::string(s) + "')");
  return roi;
}

std::string format_roi(const RoiSpec& roi) {
  return std::to_string(roi.t_lo) + ":" + std::to_string(roi.t_hi);
}

std::optional<std::vector<double>> parse_q_grid(std::string_view s) {
  if (is_auto(s)) return std::nullopt;
  std::vector<double> grid;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ',' || s[i] == ';') {
      const auto cell = s.substr(start, i - start);
      if (cell.find_first_not_of(" \t") != std::string_view::npos) {
        grid.push_back(parse_double(cell, "q_grid"));
      }
      start = i + 1;
    }
  }
  if (grid.empty()) throw UsageError("q_grid is empty");
  for (double q : grid) {
    if (!(q > 0.0) || !std::isfinite(q)) throw UsageError("q_grid values must be finite and > 0");
  }
  return grid;
}

void PipelineConfig::apply(const KeyValueDoc& doc, const std::filesystem::path& relative_to) {
  const auto& known = pipeline_config_keys();
  for (const auto& key : doc.keys()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw DataError(doc.source() + ": unknown config key '" + key + "'");
    }
  }
  const std::string& src = doc.source();
  if (doc.contains("q")) {
    const auto& v = doc.get("q");
    q = is_auto(v) ? std::nullopt : std::optional<double>(parse_double(v, src + ": q"));
  }
  if (doc.contains("noise_window")) {
    const auto& v = doc.get("noise_window");
    noise_window = is_auto(v) ? std::nullopt
                              : std::optional<std::size_t>(parse_size(v, src + ": noise_window"));
  }
  if (doc.contains("roi")) roi = parse_roi(doc.get("roi"));
  if (doc.contains("q_grid")) q_grid = parse_q_grid(doc.get("q_grid"));
  if (doc.contains("n_sample")) n_sample = parse_size(doc.get("n_sample"), src + ": n_sample");
  if (doc.contains("seed")) seed = parse_seed(doc.get("seed"), src + ": seed");
  if (doc.contains("lp_cutoff_hz")) {
    lp_cutoff_hz = parse_double(doc.get("lp_cutoff_hz"), src + ": lp_cutoff_hz");
  }
  if (doc.contains("background_path")) {
    const auto& v = doc.get("background_path");
    if (v.empty()) {
      background_path.reset();
    } else {
      std::filesystem::path p(v);
      if (p.is_relative() && !relative_to.empty()) p = relative_to / p;
      background_path = p;
    }
  }
}

KeyValueDoc PipelineConfig::to_doc() const {
  KeyValueDoc doc;
  doc.set("q", q ? format_double(*q) : "auto");
  doc.set("noise_window", noise_window ? std::to_string(*noise_window) : "auto");
  if (roi) doc.set("roi", format_roi(*roi));
  if (q_grid) {
    std::string s;
    for (std::size_t i = 0; i < q_grid->size(); ++i) {
      if (i > 0) s += ",";
      s += format_double((*q_grid)[i]);
    }
    doc.set("q_grid", s);
  } else {
    doc.set("q_grid", "auto");
  }
  doc.set("n_sample", std::to_string(n_sample));
  doc.set("seed", std::to_string(seed));
  if (lp_cutoff_hz) doc.set("lp_cutoff_hz", format_double(*lp_cutoff_hz));
  if (background_path) doc.set("background_path", background_path->string());
  return doc;
}

void PipelineConfig::validate() const {
  if (q && (!(*q > 0.0) || !std::isfinite(*q))) throw UsageError("q must be finite and > 0");
  if (noise_window && *noise_window == 0) throw UsageError("noise_window must be positive");
  if (n_sample == 0) throw UsageError("n_sample must be positive");
  if (lp_cutoff_hz && (!(*lp_cutoff_hz > 0.0) || !std::isfinite(*lp_cutoff_hz))) {
    throw UsageError("lp_cutoff_hz must be finite and > 0");
  }
}

}  // namespace pakf
