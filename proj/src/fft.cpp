#include "nlt/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nlt::fft {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

Plan::Plan(Shape shape, Direction dir) : shape_(shape) {
  if (shape.rows < 1 || shape.cols < 1) throw std::invalid_argument("fft: empty shape");
  std::vector<cplx> a(shape.size()), b(shape.size());
  const int sign = dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  const bool one_d = shape.rows == 1 || shape.cols == 1;
  fftw_plan p = one_d ? fftw_plan_dft_1d(static_cast<int>(shape.size()), as_fftw(a.data()), as_fftw(b.data()), sign, flags)
                      : fftw_plan_dft_2d(shape.rows, shape.cols, as_fftw(a.data()), as_fftw(b.data()), sign, flags);
  if (p == nullptr) throw std::runtime_error("fft: planner failed");
  plan_ = p;
}

Plan::~Plan() {
  if (plan_ != nullptr) {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
}

Plan::Plan(Plan&& other) noexcept : shape_(other.shape_), plan_(std::exchange(other.plan_, nullptr)) {}

Plan& Plan::operator=(Plan&& other) noexcept {
  if (this != &other) {
    std::swap(shape_, other.shape_);
    std::swap(plan_, other.plan_);
  }
  return *this;
}

void Plan::execute(std::span<const cplx> in, std::span<cplx> out) const {
  if (in.size() != shape_.size() || out.size() != shape_.size()) {
    throw std::invalid_argument("fft: buffer size does not match plan");
  }
  // Out-of-place complex DFTs leave the input untouched.
  fftw_execute_dft(static_cast<fftw_plan>(plan_), as_fftw(const_cast<cplx*>(in.data())), as_fftw(out.data()));
}

std::vector<cplx> transform(std::span<const cplx> in, Shape shape, Direction dir) {
  Plan plan(shape, dir);
  std::vector<cplx> out(shape.size());
  plan.execute(in, out);
  return out;
}

}  // namespace nlt::fft
