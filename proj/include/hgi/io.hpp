#pragma once

// Plain-text and binary matrix formats: row-major CSV with 17 significant
// digits, and 8-bit binary PGM (P5, maxval 255).

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hgi/transforms.hpp"

namespace hgi::io {

// Upper bound on pixels/entries accepted from files.
inline constexpr std::uint64_t kMaxFileEntries = std::uint64_t{1} << 26;

void write_csv(const std::filesystem::path& path, const MatrixX<double>& m);
// Interleaves real and imaginary parts: re0,im0,re1,im1,...
void write_csv(const std::filesystem::path& path, const MatrixX<Complex>& m);
std::string to_csv(const MatrixX<double>& m);

MatrixX<double> read_csv(const std::filesystem::path& path);
MatrixX<double> parse_csv(const std::string& text);

struct GrayImage {
  Index width = 0;
  Index height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, height * width
};

void write_pgm(const std::filesystem::path& path, const GrayImage& image);
GrayImage read_pgm(const std::filesystem::path& path);
GrayImage parse_pgm(const std::string& bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace hgi::io
