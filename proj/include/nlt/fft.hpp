#pragma once

// Thin RAII wrapper over FFTW complex DFTs. Transforms are unnormalized, as in
// FFTW: forward uses exp(-2*pi*i*jk/n), backward exp(+2*pi*i*jk/n).

#include <cstddef>
#include <span>
#include <vector>

#include "nlt/lattice.hpp"

namespace nlt::fft {

enum class Direction { Forward, Backward };

/// Row-major grid shape; a shape with either extent 1 is a 1D transform.
struct Shape {
  int rows = 1;
  int cols = 1;
  std::size_t size() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }
  friend bool operator==(const Shape&, const Shape&) = default;
};

/// Plan creation is serialized internally; `execute` may be called from many
/// threads at once on distinct buffers.
class Plan {
 public:
  Plan(Shape shape, Direction dir);
  ~Plan();
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  Plan(Plan&& other) noexcept;
  Plan& operator=(Plan&& other) noexcept;

  const Shape& shape() const { return shape_; }

  /// Out-of-place transform; `in` and `out` must not alias.
  void execute(std::span<const cplx> in, std::span<cplx> out) const;

 private:
  Shape shape_;
  void* plan_ = nullptr;
};

std::vector<cplx> transform(std::span<const cplx> in, Shape shape, Direction dir);

/// Index of frequency `k` (may be negative) in an unshifted DFT of length n.
inline int bin_of(int k, int n) {
  int r = k % n;
  return r < 0 ? r + n : r;
}

}  // namespace nlt::fft
