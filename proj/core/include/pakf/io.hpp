#pragma once

// On-disk formats.
//
// Volume: a text header plus a raw little-endian data file.
//
//     magic = PAVOL1
//     nx = 16
//     ny = 8
//     nt = 512
//     dt = 9.765625e-09
//     dtype = f64le
//     byte_order = little-endian
//     layout = x-major, y, t-fastest
//     data_file = volume.bin
//     provenance = synth seed=3
//
// `data_file` is resolved relative to the header's directory. Samples are
// promoted to 64-bit on read whatever the stored dtype.
//
// Image: 16-bit binary PGM (P5, maxval 65535, big-endian samples), min-max
// normalized, with a key-value sidecar at `<path>.txt` holding the bounds.
// The raster has nx rows and ny columns.
//
// All writers go through a temporary file and a rename.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pakf/types.hpp"

namespace pakf {

enum class SampleType { f32le, f64le };

std::string_view to_string(SampleType t) noexcept;
SampleType parse_sample_type(std::string_view s);

struct VolumeFile {
  Volume volume;
  SampleType dtype = SampleType::f64le;
  std::string provenance;
};

/// Reads and validates a volume. Header and data length are checked before
/// any sample is decoded. Errors are DataError and name the offending file.
VolumeFile read_volume(const std::filesystem::path& header_path);

/// Writes `<header_path>` and its data file (header name with ".bin"
/// appended). Throws DataError when a sample does not fit the dtype.
void write_volume(const Volume& volume, const std::filesystem::path& header_path,
                  SampleType dtype = SampleType::f64le, std::string_view provenance = {});

struct ImageNormalization {
  double min = 0.0;
  double max = 0.0;
  bool degenerate = false;
};

/// 16-bit codes for the image pixels (x-major) and the bounds used.
/// A constant image maps to mid-gray 32768 and is flagged degenerate.
std::pair<std::vector<std::uint16_t>, ImageNormalization> normalize_image(
    const EnvelopeImage& image);

ImageNormalization write_image(const EnvelopeImage& image, const std::filesystem::path& path);

/// Reads back the raw 16-bit codes of a P5 image written by write_image.
std::vector<std::uint16_t> read_pgm16(const std::filesystem::path& path, std::size_t& rows,
                                      std::size_t& cols);

/// Flat `key = value` text. Blank lines and lines starting with '#' are
/// ignored. Duplicate keys are an error.
class KeyValueDoc {
 public:
  KeyValueDoc() = default;
  explicit KeyValueDoc(std::string source) : source_(std::move(source)) {}

  static KeyValueDoc parse(std::string_view text, const std::string& source = "<text>");
  static KeyValueDoc load(const std::filesystem::path& path);

  void set(const std::string& key, std::string value);
  bool contains(const std::string& key) const { return values_.contains(key); }
  const std::string& get(const std::string& key) const;
  const std::vector<std::string>& keys() const noexcept { return order_; }
  std::string render() const;
  const std::string& source() const noexcept { return source_; }

 private:
  std::string source_ = "<text>";
  std::vector<std::string> order_;
  std::map<std::string, std::string> values_;
};

/// Shortest decimal text that reads back as the same double.
std::string format_double(double v);
double parse_double(std::string_view s, const std::string& what);
std::size_t parse_size(std::string_view s, const std::string& what);

/// Writes `content` to `path` via a temporary sibling and a rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// CSV rendering of a Q-selection report. One row per record, with a `kind`
/// column: `grid` rows list candidate values, `trace` rows give the sampled
/// position with its best Q and PSNR, and one `final` row holds q_final.
std::string render_q_report(const QSelectionReport& report);
QSelectionReport parse_q_report(std::string_view csv);

}  // namespace pakf
