#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pakf/adapt.hpp"
#include "pakf/baseline.hpp"
#include "pakf/config.hpp"
#include "pakf/corpus.hpp"
#include "pakf/error.hpp"
#include "pakf/io.hpp"
#include "pakf/recon.hpp"
#include "pakf/synth.hpp"

namespace pakf::cli {

namespace fs = std::filesystem;

namespace {

// Raw flag text. Values are parsed through PipelineConfig so that a config
// file and the command line share one grammar.
struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> input;
  std::optional<std::string> background;
  std::optional<std::string> output;
  std::optional<std::string> q;
  std::optional<std::string> q_grid;
  std::optional<std::string> n_sample;
  std::optional<std::string> seed;
  std::optional<std::string> noise_window;
  std::optional<std::string> roi;
  std::optional<std::string> lp_cutoff_hz;
  std::optional<std::string> dtype;
  std::optional<std::string> corpus;
};

enum Flag : unsigned {
  kConfig = 1u << 0,
  kInput = 1u << 1,
  kBackground = 1u << 2,
  kOutput = 1u << 3,
  kQ = 1u << 4,
  kQGrid = 1u << 5,
  kNSample = 1u << 6,
  kSeed = 1u << 7,
  kNoiseWindow = 1u << 8,
  kRoi = 1u << 9,
  kLpCutoff = 1u << 10,
  kDtype = 1u << 11,
  kCorpus = 1u << 12,
};

void add_flags(CLI::App& app, Flags& f, unsigned which) {
  if (which & kConfig) app.add_option("--config", f.config, "Key-value config file");
  if (which & kInput) app.add_option("--input", f.input, "Input volume header")->required();
  if (which & kBackground) app.add_option("--background", f.background, "Background volume header");
  if (which & kOutput) app.add_option("--output", f.output, "Output path")->required();
  if (which & kQ) app.add_option("--q", f.q, "System noise Q, or 'auto'");
  if (which & kQGrid) app.add_option("--q-grid", f.q_grid, "Comma-separated Q candidates, or 'auto'");
  if (which & kNSample) app.add_option("--n-sample", f.n_sample, "Traces sampled for Q selection");
  if (which & kSeed) app.add_option("--seed", f.seed, "Random seed");
  if (which & kNoiseWindow) app.add_option("--noise-window", f.noise_window, "Leading noise samples, or 'auto'");
  if (which & kRoi) app.add_option("--roi", f.roi, "Region of interest t_lo:t_hi (samples)");
  if (which & kLpCutoff) app.add_option("--lp-cutoff-hz", f.lp_cutoff_hz, "Baseline low-pass cutoff");
  if (which & kDtype) app.add_option("--dtype", f.dtype, "Output sample type: f32le or f64le");
  if (which & kCorpus) app.add_option("--corpus", f.corpus, "Bench corpus entry to generate");
}

PipelineConfig resolve_config(const Flags& f) {
  PipelineConfig cfg;
  if (f.config) {
    const fs::path path(*f.config);
    if (!fs::exists(path)) throw DataError(path.string() + ": no such file");
    cfg.apply(KeyValueDoc::load(path), path.parent_path());
  }
  KeyValueDoc overrides("command line");
  if (f.q) overrides.set("q", *f.q);
  if (f.q_grid) overrides.set("q_grid", *f.q_grid);
  if (f.n_sample) overrides.set("n_sample", *f.n_sample);
  if (f.seed) overrides.set("seed", *f.seed);
  if (f.noise_window) overrides.set("noise_window", *f.noise_window);
  if (f.roi) overrides.set("roi", *f.roi);
  if (f.lp_cutoff_hz) overrides.set("lp_cutoff_hz", *f.lp_cutoff_hz);
  if (f.background) overrides.set("background_path", *f.background);
  try {
    cfg.apply(overrides);
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }
  cfg.validate();
  return cfg;
}

SampleType output_dtype(const Flags& f) {
  if (!f.dtype) return SampleType::f64le;
  try {
    return parse_sample_type(*f.dtype);
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }
}

struct Inputs {
  fs::path input_path;
  Volume volume;
  std::optional<Volume> background;
};

Inputs load_inputs(const Flags& f, const PipelineConfig& cfg) {
  const fs::path in(*f.input);
  Inputs out{in, read_volume(in).volume, std::nullopt};
  if (cfg.background_path) {
    Volume bg = read_volume(*cfg.background_path).volume;
    if (!(bg.shape() == out.volume.shape()) || bg.dt() != out.volume.dt()) {
      throw DataError(cfg.background_path->string() + ": background dimensions differ from " +
                      in.string());
    }
    out.background = std::move(bg);
  }
  return out;
}

RoiSpec require_roi(const PipelineConfig& cfg, const Volume& v, std::ostream& err,
                    const char* why) {
  if (!cfg.roi) throw UsageError(std::string("--roi is required ") + why);
  cfg.roi->validate(v.nt());
  if (!cfg.roi->avoids_edges(v.nt())) {
    err << "warning: ROI " << format_roi(*cfg.roi)
        << " reaches into the outer 10% of the time axis, where envelope edge effects live\n";
  }
  return *cfg.roi;
}

std::size_t resolve_noise_window(const PipelineConfig& cfg, const Volume& v) {
  const std::size_t w = cfg.noise_window.value_or(default_noise_window(v.nt()));
  if (w == 0 || w > v.nt()) {
    throw UsageError("noise window " + std::to_string(w) + " outside [1, " + std::to_string(v.nt()) +
                     "]");
  }
  return w;
}

QSelectionReport run_qselect(const PipelineConfig& cfg, const Volume& v, const RoiSpec& roi,
                             std::size_t noise_window) {
  if (cfg.q_grid) return select_q(v, *cfg.q_grid, cfg.n_sample, cfg.seed, noise_window, roi);
  return select_q_auto(v, cfg.n_sample, cfg.seed, noise_window, roi);
}

double resolve_q(const PipelineConfig& cfg, const Volume& v, std::size_t noise_window,
                 std::ostream& log, std::ostream& err) {
  if (cfg.q) return *cfg.q;
  const RoiSpec roi = require_roi(cfg, v, err, "when q is auto");
  const QSelectionReport report = run_qselect(cfg, v, roi, noise_window);
  log << "qselect: q_final = " << format_double(report.q_final) << " from "
      << report.sampled_trace_ids.size() << " traces\n";
  return report.q_final;
}

std::string psnr_cell(const Trace& t, const RoiSpec& roi) {
  try {
    return format_double(psnr(t, roi));
  } catch (const InfinitePsnr&) {
    return "inf";
  }
}

// -- subcommands -----------------------------------------------------------

void cmd_synth(const Flags& f, std::ostream& log) {
  CorpusEntry entry = corpus_entry(f.corpus.value_or("phantom-L"));
  if (f.seed) {
    try {
      entry.spec.seed = parse_size(*f.seed, "--seed");
    } catch (const DataError& e) {
      throw UsageError(e.what());
    }
  }
  const SampleType dtype = output_dtype(f);
  const fs::path dir(*f.output);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError(dir.string() + ": cannot create directory");

  const SynthVolume sv = entry.generate();
  const std::string prov = "synth corpus=" + entry.name + " seed=" + std::to_string(entry.spec.seed);
  write_volume(sv.volume, dir / "volume.pavol", dtype, prov);
  write_volume(sv.background, dir / "background.pavol", dtype, prov + " background");
  write_volume(sv.clean, dir / "clean.pavol", dtype, prov + " clean");

  CorpusEntry truth = entry;
  truth.expected.clear();
  write_file_atomic(dir / "truth.txt", corpus_manifest(truth).render());

  PipelineConfig cfg;
  cfg.roi = entry.roi;
  cfg.n_sample = entry.n_sample;
  cfg.seed = entry.spec.seed;
  cfg.background_path = "background.pavol";
  write_file_atomic(dir / "pipeline.cfg", cfg.to_doc().render());
  log << "synth: wrote " << entry.name << " (" << entry.nx << "x" << entry.ny << "x"
      << entry.spec.nt << ") to " << dir.string() << "\n";
}

void cmd_qselect(const Flags& f, std::ostream& log, std::ostream& err) {
  const PipelineConfig cfg = resolve_config(f);
  const Inputs in = load_inputs(f, cfg);
  const RoiSpec roi = require_roi(cfg, in.volume, err, "for qselect");
  const QSelectionReport report =
      run_qselect(cfg, in.volume, roi, resolve_noise_window(cfg, in.volume));
  write_file_atomic(*f.output, render_q_report(report));
  log << "qselect: q_final = " << format_double(report.q_final) << "\n";
}

void cmd_denoise(const Flags& f, std::ostream& log, std::ostream& err) {
  const PipelineConfig cfg = resolve_config(f);
  const Inputs in = load_inputs(f, cfg);
  const std::size_t window = resolve_noise_window(cfg, in.volume);
  const double q = resolve_q(cfg, in.volume, window, log, err);
  const Volume out = pipeline_denoise(in.volume, in.background ? &*in.background : nullptr, q, window);
  write_volume(out, *f.output, output_dtype(f), "denoise q=" + format_double(q));
  log << "denoise: q = " << format_double(q) << ", noise window = " << window << "\n";
}

void cmd_baseline(const Flags& f, std::ostream& log) {
  const PipelineConfig cfg = resolve_config(f);
  const Inputs in = load_inputs(f, cfg);
  const double cutoff = cfg.lp_cutoff_hz.value_or(kDefaultLowpassCutoffHz);
  const Volume out =
      baseline_denoise(in.volume, in.background ? &*in.background : nullptr, cutoff);
  write_volume(out, *f.output, output_dtype(f), "baseline lp_cutoff_hz=" + format_double(cutoff));
  log << "baseline: cutoff = " << format_double(cutoff) << " Hz\n";
}

void cmd_reconstruct(const Flags& f, std::ostream& log) {
  const Volume v = read_volume(*f.input).volume;
  const ImageNormalization norm = write_image(reconstruct(v), *f.output);
  log << "reconstruct: range [" << format_double(norm.min) << ", " << format_double(norm.max)
      << "]" << (norm.degenerate ? " (degenerate)" : "") << "\n";
}

void cmd_metrics(const Flags& f, std::ostream& err) {
  const PipelineConfig cfg = resolve_config(f);
  const Volume v = read_volume(*f.input).volume;
  const RoiSpec roi = require_roi(cfg, v, err, "for metrics");
  std::string csv = "x,y,psnr_db\n";
  for (std::size_t i = 0; i < v.shape().traces(); ++i) {
    const GridIndex at = v.grid_index(i);
    csv += std::to_string(at.x) + "," + std::to_string(at.y) + "," + psnr_cell(v.trace(at), roi) + "\n";
  }
  write_file_atomic(*f.output, csv);
}

void cmd_compare(const Flags& f, std::ostream& log, std::ostream& err) {
  const PipelineConfig cfg = resolve_config(f);
  const Inputs in = load_inputs(f, cfg);
  const RoiSpec roi = require_roi(cfg, in.volume, err, "for compare");
  const std::size_t window = resolve_noise_window(cfg, in.volume);
  const Volume* bg = in.background ? &*in.background : nullptr;

  double q = 0.0;
  std::optional<QSelectionReport> report;
  if (cfg.q) {
    q = *cfg.q;
  } else {
    report = run_qselect(cfg, in.volume, roi, window);
    q = report->q_final;
  }
  const double cutoff = cfg.lp_cutoff_hz.value_or(kDefaultLowpassCutoffHz);
  const Volume pipeline = pipeline_denoise(in.volume, bg, q, window);
  const Volume baseline = baseline_denoise(in.volume, bg, cutoff);

  const fs::path dir(*f.output);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError(dir.string() + ": cannot create directory");

  std::string csv = "x,y,psnr_raw_db,psnr_pipeline_db,psnr_baseline_db,gain_db\n";
  double gain_sum = 0.0;
  std::size_t gain_count = 0;
  for (std::size_t i = 0; i < in.volume.shape().traces(); ++i) {
    const GridIndex at = in.volume.grid_index(i);
    const Trace p = pipeline.trace(at);
    const Trace b = baseline.trace(at);
    std::string gain = "nan";
    try {
      const double g = psnr_gain(b, p, roi);
      if (std::isfinite(g)) {
        gain_sum += g;
        ++gain_count;
      }
      gain = format_double(g);
    } catch (const InfinitePsnr&) {
    }
    csv += std::to_string(at.x) + "," + std::to_string(at.y) + "," +
           psnr_cell(in.volume.trace(at), roi) + "," + psnr_cell(p, roi) + "," + psnr_cell(b, roi) +
           "," + gain + "\n";
  }
  const double mean_gain = gain_count ? gain_sum / static_cast<double>(gain_count)
                                      : std::numeric_limits<double>::quiet_NaN();

  KeyValueDoc summary;
  summary.set("input", in.input_path.filename().string());
  summary.set("q", format_double(q));
  summary.set("q_source", report ? "qselect" : "fixed");
  summary.set("noise_window", std::to_string(window));
  summary.set("roi", format_roi(roi));
  summary.set("lp_cutoff_hz", format_double(cutoff));
  summary.set("differential", bg ? "1" : "0");
  summary.set("traces", std::to_string(in.volume.shape().traces()));
  summary.set("mean_psnr_gain_db", format_double(mean_gain));

  write_file_atomic(dir / "traces.csv", csv);
  write_file_atomic(dir / "summary.txt", summary.render());
  if (report) write_file_atomic(dir / "qselect.csv", render_q_report(*report));
  write_image(reconstruct(in.volume), dir / "raw.pgm");
  write_image(reconstruct(pipeline), dir / "pipeline.pgm");
  write_image(reconstruct(baseline), dir / "baseline.pgm");
  log << "compare: mean psnr gain (pipeline - baseline) = " << format_double(mean_gain)
      << " dB over " << gain_count << " traces\n";
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& log, std::ostream& err) {
  CLI::App app{"A-scan denoising with an adaptive Kalman filter and RTS smoother", "pakf"};
  app.require_subcommand(1);
  Flags f;

  const unsigned pipeline_flags = kConfig | kInput | kBackground | kOutput | kQGrid | kNSample |
                                  kSeed | kNoiseWindow | kRoi;
  auto* synth = app.add_subcommand("synth", "Write a synthetic bench volume with ground truth");
  add_flags(*synth, f, kOutput | kSeed | kDtype | kCorpus);
  auto* qselect = app.add_subcommand("qselect", "Select the shared system noise Q");
  add_flags(*qselect, f, pipeline_flags);
  auto* denoise = app.add_subcommand("denoise", "Kalman filter + RTS smoother (+ background subtraction)");
  add_flags(*denoise, f, pipeline_flags | kQ | kDtype);
  auto* baseline = app.add_subcommand("baseline", "Low-pass + background subtraction baseline");
  add_flags(*baseline, f, kConfig | kInput | kBackground | kOutput | kLpCutoff | kDtype);
  auto* recon = app.add_subcommand("reconstruct", "Maximum-envelope image as 16-bit PGM");
  add_flags(*recon, f, kInput | kOutput);
  auto* metrics = app.add_subcommand("metrics", "Per-trace PSNR table");
  add_flags(*metrics, f, kConfig | kInput | kOutput | kRoi);
  auto* compare = app.add_subcommand("compare", "Pipeline vs baseline report and images");
  add_flags(*compare, f, pipeline_flags | kQ | kLpCutoff);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  if (!argv.empty()) argv.pop_back();  // program name
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    log << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "pakf: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::usage);
  }

  try {
    if (*synth) cmd_synth(f, log);
    else if (*qselect) cmd_qselect(f, log, err);
    else if (*denoise) cmd_denoise(f, log, err);
    else if (*baseline) cmd_baseline(f, log);
    else if (*recon) cmd_reconstruct(f, log);
    else if (*metrics) cmd_metrics(f, err);
    else if (*compare) cmd_compare(f, log, err);
  } catch (const Error& e) {
    std::string what = e.what();
    if (f.input && what.find(*f.input) == std::string::npos) what = *f.input + ": " + what;
    err << "pakf: " << what << "\n";
    return static_cast<int>(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "pakf: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::data);
  } catch (const std::exception& e) {
    err << "pakf: internal error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::numerical);
  }
  return 0;
}

}  // namespace pakf::cli
