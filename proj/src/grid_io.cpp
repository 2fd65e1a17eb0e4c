#include "nlt/grid_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "nlt/errors.hpp"
#include "nlt/mask_io.hpp"

namespace nlt {
namespace {

template <typename T>
void put_le(std::string& out, T v) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::string_view in, std::size_t offset) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, in.data() + offset, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T v;
  std::memcpy(&v, bytes, sizeof(T));
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string real_grid_csv(fft::Shape shape, const std::vector<double>& values) {
  std::string out;
  for (int iy = 0; iy < shape.cols; ++iy) {
    for (int ix = 0; ix < shape.rows; ++ix) {
      if (ix > 0) out += ',';
      out += format_double(values[static_cast<std::size_t>(ix) * shape.cols + iy]);
    }
    out += '\n';
  }
  return out;
}

std::string real_grid_binary(fft::Shape shape, const std::vector<double>& values) {
  std::string out(kGridMagic, sizeof(kGridMagic));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(shape.rows));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(shape.cols));
  for (int iy = 0; iy < shape.cols; ++iy) {
    for (int ix = 0; ix < shape.rows; ++ix) put_le<double>(out, values[static_cast<std::size_t>(ix) * shape.cols + iy]);
  }
  return out;
}

RealGrid parse_grid_csv(std::string_view text, const std::string& source) {
  std::vector<std::vector<double>> rows;
  int line = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line;
    if (raw.empty()) continue;
    std::vector<double> row;
    std::size_t p = 0;
    while (true) {
      std::size_t comma = raw.find(',', p);
      std::string_view cell = trim(raw.substr(p, comma == std::string_view::npos ? std::string_view::npos : comma - p));
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
        throw ParseError(source, line, "invalid number '" + std::string(cell) + "'");
      }
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      p = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(source, line, "ragged grid: expected " + std::to_string(rows.front().size()) + " columns");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(source, 0, "empty grid");
  const int nx = static_cast<int>(rows.front().size());
  const int ny = static_cast<int>(rows.size());
  RealGrid g{{nx, ny}, std::vector<double>(static_cast<std::size_t>(nx) * ny)};
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) g.values[static_cast<std::size_t>(ix) * ny + iy] = rows[iy][ix];
  }
  return g;
}

RealGrid parse_grid_binary(std::string_view bytes, const std::string& source) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kGridMagic, sizeof(kGridMagic)) != 0) {
    throw ParseError(source, 0, "not a flat binary grid (bad magic)");
  }
  const auto nx = get_le<std::uint32_t>(bytes, 8);
  const auto ny = get_le<std::uint32_t>(bytes, 12);
  if (nx == 0 || ny == 0) throw ParseError(source, 0, "empty grid");
  const std::size_t count = static_cast<std::size_t>(nx) * ny;
  if (bytes.size() != 16 + count * sizeof(double)) {
    throw ParseError(source, 0, "payload size does not match " + std::to_string(nx) + "x" + std::to_string(ny));
  }
  RealGrid g{{static_cast<int>(nx), static_cast<int>(ny)}, std::vector<double>(count)};
  std::size_t off = 16;
  for (std::uint32_t iy = 0; iy < ny; ++iy) {
    for (std::uint32_t ix = 0; ix < nx; ++ix) {
      g.values[static_cast<std::size_t>(ix) * ny + iy] = get_le<double>(bytes, off);
      off += sizeof(double);
    }
  }
  return g;
}

RealGrid load_grid(const std::filesystem::path& path) {
  const std::string content = read_file(path);
  if (path.extension() == ".bin") return parse_grid_binary(content, path.string());
  return parse_grid_csv(content, path.string());
}

PixelImage image_from_grid(const RealGrid& grid, int pixels_per_mode, double period) {
  return {grid.shape.rows, grid.shape.cols, grid.values, pixels_per_mode, period};
}

std::string distribution_csv(const Distribution& p, const std::vector<std::int64_t>& counts) {
  const LatticeSpec& lat = p.lattice();
  const bool with_counts = !counts.empty();
  if (with_counts && counts.size() != lat.size()) throw std::invalid_argument("distribution_csv: count size mismatch");
  const std::vector<double> err = with_counts ? poisson_errors(counts) : std::vector<double>{};
  std::string out = lat.dims() == 1 ? "m" : "m_x,m_y";
  out += with_counts ? ",probability,count,poisson_error\n" : ",probability\n";
  for (std::size_t f = 0; f < lat.size(); ++f) {
    const MomentumIndex m = lat.index(f);
    out += std::to_string(m.x);
    if (lat.dims() == 2) out += "," + std::to_string(m.y);
    out += "," + format_double(p.probabilities()[f]);
    if (with_counts) out += "," + std::to_string(counts[f]) + "," + format_double(err[f]);
    out += '\n';
  }
  return out;
}

}  // namespace nlt
