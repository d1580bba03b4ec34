#include "pakf/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "pakf/error.hpp"

namespace pakf {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kMagic = "PAVOL1";
constexpr std::string_view kLayout = "x-major, y, t-fastest";
constexpr std::string_view kByteOrder = "little-endian";

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename U>
U to_little(U v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    U out = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      out = static_cast<U>((out << 8) | ((v >> (8 * i)) & 0xffu));
    }
    return out;
  }
}

std::string encode_samples(std::span<const double> data, SampleType dtype,
                           const fs::path& where) {
  std::string out;
  if (dtype == SampleType::f64le) {
    out.resize(data.size() * 8);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto bits = to_little(std::bit_cast<std::uint64_t>(data[i]));
      std::memcpy(out.data() + 8 * i, &bits, 8);
    }
  } else {
    out.resize(data.size() * 4);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto f = static_cast<float>(data[i]);
      if (!std::isfinite(f)) {
        throw DataError(where.string() + ": sample " + std::to_string(i) +
                        " does not fit in f32");
      }
      const auto bits = to_little(std::bit_cast<std::uint32_t>(f));
      std::memcpy(out.data() + 4 * i, &bits, 4);
    }
  }
  return out;
}

std::vector<double> decode_samples(std::string_view bytes, SampleType dtype) {
  const std::size_t width = dtype == SampleType::f64le ? 8 : 4;
  std::vector<double> out(bytes.size() / width);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (dtype == SampleType::f64le) {
      std::uint64_t bits = 0;
      std::memcpy(&bits, bytes.data() + 8 * i, 8);
      out[i] = std::bit_cast<double>(to_little(bits));
    } else {
      std::uint32_t bits = 0;
      std::memcpy(&bits, bytes.data() + 4 * i, 4);
      out[i] = static_cast<double>(std::bit_cast<float>(to_little(bits)));
    }
  }
  return out;
}

fs::path data_path_for(const fs::path& header_path) {
  fs::path p = header_path;
  p += ".bin";
  return p;
}

}  // namespace

std::string_view to_string(SampleType t) noexcept {
  return t == SampleType::f32le ? "f32le" : "f64le";
}

SampleType parse_sample_type(std::string_view s) {
  if (s == "f64le") return SampleType::f64le;
  if (s == "f32le") return SampleType::f32le;
  throw DataError("unknown sample dtype '" + std::string(s) + "' (expected f32le or f64le)");
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, const std::string& what) {
  s = trim(s);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DataError(what + ": expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

std::size_t parse_size(std::string_view s, const std::string& what) {
  s = trim(s);
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DataError(what + ": expected a non-negative integer, got '" + std::string(s) + "'");
  }
  return v;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw DataError(path.string() + ": read failed");
  return std::move(ss).str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(path.string() + ": cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw DataError(path.string() + ": write failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw DataError(path.string() + ": rename failed");
  }
}

// ---------------------------------------------------------------------------
// Key-value documents

KeyValueDoc KeyValueDoc::parse(std::string_view text, const std::string& source) {
  KeyValueDoc doc;
  doc.source_ = source;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw DataError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw DataError(source + ":" + std::to_string(line_no) + ": empty key");
    if (doc.contains(key)) {
      throw DataError(source + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    doc.set(key, std::string(trim(line.substr(eq + 1))));
  }
  return doc;
}

KeyValueDoc KeyValueDoc::load(const fs::path& path) {
  return parse(read_file(path), path.string());
}

void KeyValueDoc::set(const std::string& key, std::string value) {
  if (!values_.contains(key)) order_.push_back(key);
  values_[key] = std::move(value);
}

const std::string& KeyValueDoc::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw DataError(source_ + ": missing key '" + key + "'");
  return it->second;
}

std::string KeyValueDoc::render() const {
  std::string out;
  for (const auto& k : order_) out += k + " = " + values_.at(k) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Volumes

VolumeFile read_volume(const fs::path& header_path) {
  if (!fs::exists(header_path)) throw DataError(header_path.string() + ": no such file");
  const KeyValueDoc header = KeyValueDoc::load(header_path);
  const std::string where = header_path.string();

  if (header.get("magic") != kMagic) {
    throw DataError(where + ": bad magic '" + header.get("magic") + "' (expected PAVOL1)");
  }
  if (header.contains("byte_order") && header.get("byte_order") != kByteOrder) {
    throw DataError(where + ": unsupported byte order '" + header.get("byte_order") + "'");
  }
  if (header.contains("layout") && header.get("layout") != kLayout) {
    throw DataError(where + ": unsupported layout '" + header.get("layout") + "'");
  }
  const VolumeShape shape{parse_size(header.get("nx"), where + ": nx"),
                          parse_size(header.get("ny"), where + ": ny"),
                          parse_size(header.get("nt"), where + ": nt")};
  const double dt = parse_double(header.get("dt"), where + ": dt");
  const SampleType dtype = parse_sample_type(header.get("dtype"));

  const fs::path data_path = header.contains("data_file")
                                 ? header_path.parent_path() / header.get("data_file")
                                 : data_path_for(header_path);
  if (!fs::exists(data_path)) throw DataError(data_path.string() + ": no such file");
  const std::string bytes = read_file(data_path);
  const std::size_t width = dtype == SampleType::f64le ? 8 : 4;
  const std::size_t expected = shape.samples() * width;
  if (bytes.size() != expected) {
    throw DataError(data_path.string() + ": length mismatch, header " + std::to_string(shape.nx) +
                    "x" + std::to_string(shape.ny) + "x" + std::to_string(shape.nt) + " " +
                    std::string(to_string(dtype)) + " needs " + std::to_string(expected) +
                    " bytes, file has " + std::to_string(bytes.size()));
  }

  try {
    return {validate_volume(shape, dt, decode_samples(bytes, dtype)), dtype,
            header.contains("provenance") ? header.get("provenance") : std::string{}};
  } catch (const Error& e) {
    rethrow_with_context(e, where);
  }
}

void write_volume(const Volume& volume, const fs::path& header_path, SampleType dtype,
                  std::string_view provenance) {
  const fs::path data_path = data_path_for(header_path);
  const std::string bytes = encode_samples(volume.data(), dtype, header_path);

  KeyValueDoc header;
  header.set("magic", std::string(kMagic));
  header.set("nx", std::to_string(volume.nx()));
  header.set("ny", std::to_string(volume.ny()));
  header.set("nt", std::to_string(volume.nt()));
  header.set("dt", format_double(volume.dt()));
  header.set("dtype", std::string(to_string(dtype)));
  header.set("byte_order", std::string(kByteOrder));
  header.set("layout", std::string(kLayout));
  header.set("data_file", data_path.filename().string());
  if (!provenance.empty()) header.set("provenance", std::string(provenance));

  write_file_atomic(data_path, bytes);
  write_file_atomic(header_path, header.render());
}

// ---------------------------------------------------------------------------
// Images

std::pair<std::vector<std::uint16_t>, ImageNormalization> normalize_image(
    const EnvelopeImage& image) {
  const auto px = image.pixels();
  const auto [lo, hi] = std::minmax_element(px.begin(), px.end());
  ImageNormalization norm{*lo, *hi, *lo == *hi};
  std::vector<std::uint16_t> codes(px.size(), 32768);
  if (!norm.degenerate) {
    const double span = norm.max - norm.min;
    for (std::size_t i = 0; i < px.size(); ++i) {
      codes[i] = static_cast<std::uint16_t>(std::lround((px[i] - norm.min) / span * 65535.0));
    }
  }
  return {std::move(codes), norm};
}

ImageNormalization write_image(const EnvelopeImage& image, const fs::path& path) {
  auto [codes, norm] = normalize_image(image);

  std::string pgm = "P5\n" + std::to_string(image.ny()) + " " + std::to_string(image.nx()) +
                    "\n65535\n";
  pgm.reserve(pgm.size() + 2 * codes.size());
  for (std::uint16_t c : codes) {
    pgm.push_back(static_cast<char>(c >> 8));
    pgm.push_back(static_cast<char>(c & 0xffu));
  }

  KeyValueDoc sidecar;
  sidecar.set("nx", std::to_string(image.nx()));
  sidecar.set("ny", std::to_string(image.ny()));
  sidecar.set("min", format_double(norm.min));
  sidecar.set("max", format_double(norm.max));
  sidecar.set("degenerate", norm.degenerate ? "1" : "0");

  fs::path side = path;
  side += ".txt";
  write_file_atomic(path, pgm);
  write_file_atomic(side, sidecar.render());
  return norm;
}

std::vector<std::uint16_t> read_pgm16(const fs::path& path, std::size_t& rows, std::size_t& cols) {
  const std::string bytes = read_file(path);
  std::istringstream in(bytes);
  std::string magic;
  std::size_t maxval = 0;
  in >> magic >> cols >> rows >> maxval;
  if (!in || magic != "P5" || maxval != 65535) {
    throw DataError(path.string() + ": not a 16-bit P5 image");
  }
  in.get();
  const auto offset = static_cast<std::size_t>(in.tellg());
  if (bytes.size() != offset + 2 * rows * cols) throw DataError(path.string() + ": truncated image");
  std::vector<std::uint16_t> out(rows * cols);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto hi = static_cast<unsigned char>(bytes[offset + 2 * i]);
    const auto lo = static_cast<unsigned char>(bytes[offset + 2 * i + 1]);
    out[i] = static_cast<std::uint16_t>((hi << 8) | lo);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Q-selection reports

std::string render_q_report(const QSelectionReport& report) {
  std::string out = "kind,x,y,q,psnr_db\n";
  for (double q : report.grid) out += "grid,,," + format_double(q) + ",\n";
  for (std::size_t i = 0; i < report.sampled_trace_ids.size(); ++i) {
    const GridIndex at = report.sampled_trace_ids[i];
    out += "trace," + std::to_string(at.x) + "," + std::to_string(at.y) + "," +
           format_double(report.best_q_per_trace[i]) + "," +
           format_double(report.best_psnr_per_trace[i]) + "\n";
  }
  out += "final,,," + format_double(report.q_final) + ",\n";
  return out;
}

QSelectionReport parse_q_report(std::string_view csv) {
  QSelectionReport report;
  bool header = true;
  bool have_final = false;
  while (!csv.empty()) {
    const auto nl = csv.find('\n');
    const std::string_view line = trim(csv.substr(0, nl));
    csv = nl == std::string_view::npos ? std::string_view{} : csv.substr(nl + 1);
    if (line.empty()) continue;
    if (header) {
      if (line != "kind,x,y,q,psnr_db") throw DataError("Q report: unexpected header row");
      header = false;
      continue;
    }
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        cells.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    if (cells.size() != 5) throw DataError("Q report: expected 5 columns");
    if (cells[0] == "grid") {
      report.grid.push_back(parse_double(cells[3], "Q report grid"));
    } else if (cells[0] == "trace") {
      report.sampled_trace_ids.push_back(
          {parse_size(cells[1], "Q report x"), parse_size(cells[2], "Q report y")});
      report.best_q_per_trace.push_back(parse_double(cells[3], "Q report q"));
      report.best_psnr_per_trace.push_back(parse_double(cells[4], "Q report psnr"));
    } else if (cells[0] == "final") {
      report.q_final = parse_double(cells[3], "Q report q_final");
      have_final = true;
    } else {
      throw DataError("Q report: unknown row kind '" + std::string(cells[0]) + "'");
    }
  }
  if (!have_final) throw DataError("Q report: missing final row");
  return report;
}

}  // namespace pakf
