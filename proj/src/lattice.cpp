#include "nlt/lattice.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace nlt {

LatticeSpec::LatticeSpec(int dims, int modes_per_axis, double period)
    : dims_(dims), n_(modes_per_axis), period_(period) {
  if (dims != 1 && dims != 2) {
    throw std::invalid_argument("lattice: dims must be 1 or 2, got " + std::to_string(dims));
  }
  if (modes_per_axis < 3 || modes_per_axis % 2 == 0) {
    throw std::invalid_argument("lattice: modes per axis must be odd and >= 3, got " +
                                std::to_string(modes_per_axis));
  }
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw std::invalid_argument("lattice: period must be positive and finite");
  }
}

std::size_t LatticeSpec::size() const {
  const auto n = static_cast<std::size_t>(n_);
  return dims_ == 1 ? n : n * n;
}

bool LatticeSpec::contains(const MomentumIndex& i) const {
  const int m = max_index();
  if (i.x < -m || i.x > m) return false;
  if (dims_ == 1) return i.y == 0;
  return i.y >= -m && i.y <= m;
}

std::size_t LatticeSpec::flat(const MomentumIndex& i) const {
  if (!contains(i)) {
    throw std::out_of_range("lattice: index (" + std::to_string(i.x) + "," + std::to_string(i.y) +
                            ") outside " + describe());
  }
  const int m = max_index();
  if (dims_ == 1) return static_cast<std::size_t>(i.x + m);
  return static_cast<std::size_t>((i.x + m) * n_ + (i.y + m));
}

MomentumIndex LatticeSpec::index(std::size_t flat) const {
  if (flat >= size()) throw std::out_of_range("lattice: flat index out of range");
  const int m = max_index();
  const int f = static_cast<int>(flat);
  if (dims_ == 1) return {f - m, 0};
  return {f / n_ - m, f % n_ - m};
}

int LatticeSpec::wrap(int m) const {
  int r = (m + max_index()) % n_;
  if (r < 0) r += n_;
  return r - max_index();
}

std::string LatticeSpec::describe() const {
  std::ostringstream os;
  os << dims_ << "D lattice N=" << n_ << " period=" << period_;
  return os.str();
}

MomentumIndex negate_index(const MomentumIndex& i, const LatticeSpec& lattice) {
  if (!lattice.contains(i)) {
    throw std::out_of_range("negate_index: index outside " + lattice.describe());
  }
  return {-i.x, lattice.dims() == 1 ? 0 : -i.y};
}

StateVector::StateVector(LatticeSpec lattice, CVector amplitudes)
    : lattice_(lattice), amps_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amps_.size()) != lattice_.size()) {
    throw std::invalid_argument("state: amplitude count does not match " + lattice_.describe());
  }
}

StateVector StateVector::basis(const LatticeSpec& lattice, const MomentumIndex& i) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(lattice.size()));
  v[static_cast<Eigen::Index>(lattice.flat(i))] = 1.0;
  return {lattice, std::move(v)};
}

StateVector StateVector::normalized() const {
  const double n = amps_.norm();
  if (!(n > 0.0)) throw std::domain_error("state: cannot normalize the zero vector");
  return {lattice_, amps_ / n};
}

BiphotonState::BiphotonState(LatticeSpec lattice, CMatrix amplitudes)
    : lattice_(lattice), amps_(std::move(amplitudes)) {
  const auto n = static_cast<Eigen::Index>(lattice_.size());
  if (amps_.rows() != n || amps_.cols() != n) {
    throw std::invalid_argument("biphoton: amplitude tensor shape does not match " + lattice_.describe());
  }
}

cplx BiphotonState::amplitude(const MomentumIndex& signal, const MomentumIndex& idler) const {
  return amps_(static_cast<Eigen::Index>(lattice_.flat(signal)), static_cast<Eigen::Index>(lattice_.flat(idler)));
}

std::vector<double> BiphotonState::signal_marginal() const {
  Eigen::VectorXd p = amps_.cwiseAbs2().rowwise().sum();
  return {p.data(), p.data() + p.size()};
}

std::vector<double> BiphotonState::idler_marginal() const {
  Eigen::RowVectorXd p = amps_.cwiseAbs2().colwise().sum();
  return {p.data(), p.data() + p.size()};
}

Distribution::Distribution(LatticeSpec lattice, std::vector<double> probabilities)
    : lattice_(lattice), p_(std::move(probabilities)) {
  if (p_.size() != lattice_.size()) {
    throw std::invalid_argument("distribution: entry count does not match " + lattice_.describe());
  }
  double sum = 0.0;
  for (double v : p_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("distribution: negative or non-finite entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kFftTol) {
    throw std::invalid_argument("distribution: entries sum to " + std::to_string(sum) + ", not 1");
  }
}

Distribution Distribution::from_weights(LatticeSpec lattice, std::vector<double> weights) {
  double sum = 0.0;
  for (double v : weights) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("distribution: negative or non-finite weight");
    sum += v;
  }
  if (!(sum > 0.0)) throw std::domain_error("distribution: weights sum to zero");
  for (double& v : weights) v /= sum;
  return {lattice, std::move(weights)};
}

BiphotonState make_correlated_state(const LatticeSpec& lattice) {
  const auto n = static_cast<Eigen::Index>(lattice.size());
  const double amp = 1.0 / std::sqrt(static_cast<double>(lattice.size()));
  CMatrix psi = CMatrix::Zero(n, n);
  for (std::size_t f = 0; f < lattice.size(); ++f) {
    const MomentumIndex k = lattice.index(f);
    psi(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(lattice.flat(negate_index(k, lattice)))) = amp;
  }
  return {lattice, std::move(psi)};
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (!(a.lattice() == b.lattice())) throw std::invalid_argument("fidelity: lattice mismatch");
  const double f = std::norm(a.amplitudes().dot(b.amplitudes()));
  return std::min(1.0, f);
}

Distribution distribution_of(const StateVector& s) {
  std::vector<double> p(s.lattice().size());
  for (std::size_t f = 0; f < p.size(); ++f) p[f] = std::norm(s.amplitudes()[static_cast<Eigen::Index>(f)]);
  return Distribution::from_weights(s.lattice(), std::move(p));
}

double total_variation(const Distribution& a, const Distribution& b) {
  if (!(a.lattice() == b.lattice())) throw std::invalid_argument("total_variation: lattice mismatch");
  double tv = 0.0;
  for (std::size_t f = 0; f < a.probabilities().size(); ++f) {
    tv += std::abs(a.probabilities()[f] - b.probabilities()[f]);
  }
  return 0.5 * tv;
}

WindowedDistribution restrict_to_window(const Distribution& p, int half_width) {
  const LatticeSpec& full = p.lattice();
  if (half_width < 1 || half_width > full.max_index()) {
    throw std::invalid_argument("window: half width " + std::to_string(half_width) + " outside " + full.describe());
  }
  const LatticeSpec window(full.dims(), 2 * half_width + 1, full.period());
  std::vector<double> w(window.size());
  double inside = 0.0;
  for (std::size_t f = 0; f < w.size(); ++f) {
    w[f] = p[window.index(f)];
    inside += w[f];
  }
  const double leakage = std::max(0.0, 1.0 - inside);
  return {Distribution::from_weights(window, std::move(w)), leakage};
}

}  // namespace nlt
