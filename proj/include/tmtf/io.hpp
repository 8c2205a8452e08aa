#pragma once

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tmtf/binning.hpp"
#include "tmtf/error.hpp"
#include "tmtf/field.hpp"

namespace tmtf::io {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    out.push_back(trim(line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

inline bool parse_double(std::string_view s, double& value) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

inline void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_error, "cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::io_error, "write to '" + path.string() + "' failed");
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

/// Parse one numeric column. A first line containing any non-numeric field
/// is taken as a header. `column` is a header name or a 0-based index;
/// empty selects column 0. Blank lines are skipped. Row numbers in error
/// messages are 1-based file line numbers.
inline TimeSeries read_csv(const std::filesystem::path& path, const std::string& column = {}) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open input file '" + path.string() + "'");

  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  std::size_t col = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split(line);

    if (first) {
      first = false;
      double probe = 0;
      const bool header = std::any_of(fields.begin(), fields.end(), [&](std::string_view f) {
        return !detail::parse_double(f, probe);
      });
      bool by_index = !column.empty() && std::all_of(column.begin(), column.end(), [](char c) {
        return c >= '0' && c <= '9';
      });
      if (header) {
        auto it = std::find(fields.begin(), fields.end(), std::string_view(column));
        if (!column.empty() && it != fields.end()) {
          col = static_cast<std::size_t>(it - fields.begin());
        } else if (column.empty()) {
          col = 0;
        } else if (by_index) {
          col = std::stoul(column);
        } else {
          throw Error(ErrorCode::invalid_params, "column '" + column + "' not found in header");
        }
        if (col >= fields.size())
          throw Error(ErrorCode::invalid_params, "column index " + column + " out of range");
        continue;
      }
      if (!column.empty()) {
        if (!by_index)
          throw Error(ErrorCode::invalid_params,
                      "column '" + column + "' requested but the file has no header");
        col = std::stoul(column);
      }
    }

    if (col >= fields.size()) {
      throw Error(ErrorCode::invalid_input,
                  "row " + std::to_string(lineno) + ": missing column " + std::to_string(col));
    }
    double v = 0;
    if (!detail::parse_double(fields[col], v)) {
      throw Error(ErrorCode::invalid_input, "row " + std::to_string(lineno) + ": non-numeric cell '" +
                                                std::string(fields[col]) + "'");
    }
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::invalid_input, "row " + std::to_string(lineno) +
                                                ": non-finite value '" + std::string(fields[col]) + "'");
    }
    values.push_back(v);
  }
  return TimeSeries(std::move(values));
}

/// Values with %.17g, one per line.
inline std::string series_csv(std::span<const double> values) {
  std::string out;
  char buf[32];
  for (double v : values) {
    const int n = std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

inline std::string image_csv(const FieldImage& img) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < img.side; ++i) {
    for (std::size_t j = 0; j < img.side; ++j) {
      const int n = std::snprintf(buf, sizeof buf, j + 1 < img.side ? "%.17g," : "%.17g\n", img(i, j));
      out.append(buf, static_cast<std::size_t>(n));
    }
  }
  return out;
}

// ---- NPY v1.0 -------------------------------------------------------------

/// Little-endian float64 payload, C order, concatenating the given images.
inline std::string npy_payload(std::span<const FieldImage> images) {
  std::size_t n = 0;
  for (const auto& img : images) n += img.entries.size();
  std::string out(n * sizeof(double), '\0');
  char* dst = out.data();
  for (const auto& img : images) {
    for (double v : img.entries) {
      std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
      for (int b = 0; b < 8; ++b) *dst++ = static_cast<char>((bits >> (8 * b)) & 0xff);
    }
  }
  return out;
}

inline std::string npy_header(std::span<const std::size_t> shape) {
  std::string dict = "{'descr': '<f8', 'fortran_order': False, 'shape': (";
  for (std::size_t d = 0; d < shape.size(); ++d) {
    dict += std::to_string(shape[d]);
    if (shape.size() == 1 || d + 1 < shape.size()) dict += ",";
    if (d + 1 < shape.size()) dict += " ";
  }
  dict += "), }";
  // magic(6) + version(2) + length(2) + dict + padding + '\n' is a multiple of 64
  const std::size_t unpadded = 10 + dict.size() + 1;
  dict.append((64 - unpadded % 64) % 64, ' ');
  dict += '\n';

  std::string out("\x93NUMPY\x01\x00", 8);
  out += static_cast<char>(dict.size() & 0xff);
  out += static_cast<char>((dict.size() >> 8) & 0xff);
  out += dict;
  return out;
}

/// Shape (T, T).
inline std::string npy_bytes(const FieldImage& img) {
  const std::size_t shape[] = {img.side, img.side};
  return npy_header(shape) + npy_payload(std::span(&img, 1));
}

/// Shape (R, T, T).
inline std::string npy_bytes(const ChannelStack& stack) {
  const std::size_t shape[] = {stack.channels.size(), stack.side(), stack.side()};
  return npy_header(shape) + npy_payload(stack.channels);
}

inline void write_npy(const FieldImage& img, const std::filesystem::path& path) {
  detail::write_file(path, npy_bytes(img));
}

inline void write_npy(const ChannelStack& stack, const std::filesystem::path& path) {
  detail::write_file(path, npy_bytes(stack));
}

struct NpyArray {
  std::vector<std::size_t> shape;
  std::vector<double> data;
};

/// Reads the little-endian float64 C-order arrays this module writes.
inline NpyArray read_npy(const std::filesystem::path& path) {
  const std::string bytes = detail::read_file(path);
  auto bad = [&](const std::string& why) {
    return Error(ErrorCode::invalid_input, "'" + path.string() + "': " + why);
  };
  if (bytes.size() < 10 || bytes.compare(0, 6, "\x93NUMPY") != 0) throw bad("not an NPY file");
  if (bytes[6] != 1) throw bad("unsupported NPY version");
  const std::size_t hlen = static_cast<unsigned char>(bytes[8]) |
                           (static_cast<std::size_t>(static_cast<unsigned char>(bytes[9])) << 8);
  if (bytes.size() < 10 + hlen) throw bad("truncated header");
  const std::string header = bytes.substr(10, hlen);
  if (header.find("'descr': '<f8'") == std::string::npos) throw bad("dtype is not <f8");
  if (header.find("'fortran_order': False") == std::string::npos) throw bad("not C order");

  NpyArray arr;
  const auto open = header.find("'shape': (");
  const auto close = header.find(')', open);
  if (open == std::string::npos || close == std::string::npos) throw bad("missing shape");
  std::string dims = header.substr(open + 10, close - open - 10);
  std::size_t count = 1;
  for (auto f : detail::split(dims)) {
    if (f.empty()) continue;
    std::size_t d = 0;
    const auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), d);
    if (ec != std::errc{}) throw bad("malformed shape");
    arr.shape.push_back(d);
    count *= d;
  }
  if (bytes.size() != 10 + hlen + count * 8) throw bad("payload size does not match shape");
  arr.data.resize(count);
  const char* src = bytes.data() + 10 + hlen;
  for (std::size_t k = 0; k < count; ++k) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b)
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(*src++)) << (8 * b);
    arr.data[k] = std::bit_cast<double>(bits);
  }
  return arr;
}

// ---- PGM ------------------------------------------------------------------

/// v -> floor(v * 255 + 0.5), so 0.5 maps to 128.
inline std::uint8_t to_gray(double v) {
  const double scaled = std::floor(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5);
  return static_cast<std::uint8_t>(scaled);
}

/// Binary P5, maxval 255.
inline std::string pgm_bytes(const FieldImage& img) {
  std::string out = "P5\n" + std::to_string(img.side) + " " + std::to_string(img.side) + "\n255\n";
  out.reserve(out.size() + img.entries.size());
  for (double v : img.entries) out += static_cast<char>(to_gray(v));
  return out;
}

inline void write_pgm(const FieldImage& img, const std::filesystem::path& path) {
  detail::write_file(path, pgm_bytes(img));
}

inline void write_image_csv(const FieldImage& img, const std::filesystem::path& path) {
  detail::write_file(path, image_csv(img));
}

inline void write_series_csv(std::span<const double> values, const std::filesystem::path& path) {
  detail::write_file(path, series_csv(values));
}

}  // namespace tmtf::io
