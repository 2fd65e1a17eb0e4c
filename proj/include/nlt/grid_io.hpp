#pragma once

// File formats for grids and distributions.
//
// Grid CSV: `height` lines of `width` comma-separated values, line iy holds
// the pixels (0..width-1, iy).
//
// Flat binary grid: 16-byte header {char magic[8] = "NLTGRID1", uint32 width,
// uint32 height}, little-endian, followed by width*height float64 values,
// also little-endian, in the same y-major order as the CSV.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nlt/fft.hpp"
#include "nlt/lattice.hpp"
#include "nlt/optics.hpp"

namespace nlt {

inline constexpr char kGridMagic[8] = {'N', 'L', 'T', 'G', 'R', 'I', 'D', '1'};

/// Writes to a sibling temp file and renames it over `path`. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// Real grid stored x-major (values[ix * ny + iy]) with shape {nx, ny}.
std::string real_grid_csv(fft::Shape shape, const std::vector<double>& values);
std::string real_grid_binary(fft::Shape shape, const std::vector<double>& values);

struct RealGrid {
  fft::Shape shape;
  std::vector<double> values;
};

/// Throws ParseError on malformed content.
RealGrid parse_grid_csv(std::string_view text, const std::string& source);
RealGrid parse_grid_binary(std::string_view bytes, const std::string& source);
/// Dispatches on the extension: `.bin` is binary, anything else CSV.
RealGrid load_grid(const std::filesystem::path& path);

PixelImage image_from_grid(const RealGrid& grid, int pixels_per_mode, double period);

/// Columns: m (or m_x,m_y), probability, count, poisson_error. Count columns
/// are written only when `counts` is non-empty.
std::string distribution_csv(const Distribution& p, const std::vector<std::int64_t>& counts = {});

}  // namespace nlt
