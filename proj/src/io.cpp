#include "hgi/io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "hgi/errors.hpp"

namespace hgi::io {

namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  out.append(buf, static_cast<std::size_t>(n));
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string to_csv(const MatrixX<double>& m) {
  std::string out;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      append_number(out, m(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_csv(const std::filesystem::path& path, const MatrixX<double>& m) {
  write_file(path, to_csv(m));
}

void write_csv(const std::filesystem::path& path, const MatrixX<Complex>& m) {
  std::string out;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      append_number(out, m(i, j).real());
      out += ',';
      append_number(out, m(i, j).imag());
    }
    out += '\n';
  }
  write_file(path, out);
}

MatrixX<double> parse_csv(const std::string& text) {
  std::vector<double> values;
  Index cols = -1;
  Index rows = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t line_end = std::min(text.find('\n', pos), text.size());
    std::size_t end = line_end;
    if (end > pos && text[end - 1] == '\r') --end;
    if (end == pos) {  // blank line
      pos = line_end + 1;
      continue;
    }
    Index in_row = 0;
    std::size_t cursor = pos;
    while (true) {
      while (cursor < end && text[cursor] == ' ') ++cursor;
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(text.data() + cursor, text.data() + end, v);
      if (ec != std::errc()) throw ParseError("expected a number in CSV", cursor);
      values.push_back(v);
      ++in_row;
      cursor = static_cast<std::size_t>(ptr - text.data());
      while (cursor < end && text[cursor] == ' ') ++cursor;
      if (cursor == end) break;
      if (text[cursor] != ',') throw ParseError("expected ',' in CSV", cursor);
      ++cursor;
    }
    if (cols < 0) {
      cols = in_row;
    } else if (in_row != cols) {
      throw ParseError("CSV row " + std::to_string(rows) + " has " + std::to_string(in_row) +
                           " fields, expected " + std::to_string(cols),
                       pos);
    }
    ++rows;
    if (static_cast<std::uint64_t>(values.size()) > kMaxFileEntries) {
      throw ResourceError("CSV holds more than " + std::to_string(kMaxFileEntries) + " entries");
    }
    pos = line_end + 1;
  }
  if (rows == 0) throw ParseError("CSV contains no rows", 0);
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), rows, cols);
}

MatrixX<double> read_csv(const std::filesystem::path& path) { return parse_csv(read_file(path)); }

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
  if (image.width < 1 || image.height < 1 ||
      static_cast<Index>(image.pixels.size()) != image.width * image.height) {
    throw ShapeError("PGM pixel buffer does not match its dimensions");
  }
  std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) +
                    "\n255\n";
  out.append(reinterpret_cast<const char*>(image.pixels.data()), image.pixels.size());
  write_file(path, out);
}

GrayImage parse_pgm(const std::string& bytes) {
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_uint = [&](const char* what) -> std::uint64_t {
    skip_space();
    const std::size_t start = pos;
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(bytes.data() + pos, bytes.data() + bytes.size(), v);
    if (ec == std::errc::result_out_of_range) {
      throw ResourceError(std::string("PGM ") + what + " is too large");
    }
    if (ec != std::errc()) throw ParseError(std::string("expected PGM ") + what, start);
    pos = static_cast<std::size_t>(ptr - bytes.data());
    return v;
  };

  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw ParseError("not a binary PGM (missing P5 magic)", 0);
  }
  pos = 2;
  const std::uint64_t width = read_uint("width");
  const std::uint64_t height = read_uint("height");
  const std::size_t maxval_at = pos;
  const std::uint64_t maxval = read_uint("maxval");
  if (width == 0 || height == 0) throw ParseError("PGM dimensions must be positive", maxval_at);
  if (maxval != 255) throw ParseError("only 8-bit PGM (maxval 255) is supported", maxval_at);
  if (width > kMaxFileEntries || height > kMaxFileEntries || width * height > kMaxFileEntries) {
    throw ResourceError("PGM dimensions " + std::to_string(width) + "x" + std::to_string(height) +
                        " exceed the supported size");
  }
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    throw ParseError("expected a single whitespace byte after maxval", pos);
  }
  ++pos;
  const std::size_t count = static_cast<std::size_t>(width * height);
  if (bytes.size() - pos < count) {
    throw ParseError("PGM raster is truncated: need " + std::to_string(count) + " bytes",
                     bytes.size());
  }
  GrayImage image;
  image.width = static_cast<Index>(width);
  image.height = static_cast<Index>(height);
  image.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                      bytes.begin() + static_cast<std::ptrdiff_t>(pos + count));
  return image;
}

GrayImage read_pgm(const std::filesystem::path& path) { return parse_pgm(read_file(path)); }

}  // namespace hgi::io
