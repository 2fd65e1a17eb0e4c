#include "nlt/transfer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nlt/errors.hpp"

namespace nlt {

ProjectionVector::ProjectionVector(LatticeSpec lattice, CVector coefficients)
    : lattice_(lattice), a_(std::move(coefficients)) {
  if (static_cast<std::size_t>(a_.size()) != lattice_.size()) {
    throw std::invalid_argument("projection: coefficient count does not match lattice");
  }
  if (std::abs(a_.norm() - 1.0) > kExactTol) throw std::invalid_argument("projection: vector is not normalized");
}

ProjectionVector ProjectionVector::basis(const LatticeSpec& lattice, const MomentumIndex& k0) {
  return {lattice, StateVector::basis(lattice, k0).amplitudes()};
}

ProjectionVector ProjectionVector::for_input(const StateVector& phi0) {
  return {phi0.lattice(), phi0.normalized().amplitudes().conjugate()};
}

BiphotonState apply_signal_operator(const BiphotonState& psi, const CMatrix& op) {
  const auto n = static_cast<Eigen::Index>(psi.lattice().size());
  if (op.rows() != n || op.cols() != n) throw std::invalid_argument("apply_signal: operator shape mismatch");
  return {psi.lattice(), op * psi.amplitudes()};
}

BiphotonState apply_signal_unitary(const BiphotonState& psi, const UnitaryOperator& us) {
  if (!(psi.lattice() == us.lattice())) throw std::invalid_argument("apply_signal_unitary: lattice mismatch");
  return apply_signal_operator(psi, us.matrix());
}

Projection project_signal(const BiphotonState& psi, const ProjectionVector& chi, IdlerIndexing indexing) {
  const LatticeSpec& lat = psi.lattice();
  if (!(lat == chi.lattice())) throw std::invalid_argument("project_signal: lattice mismatch");
  // idler(j) = sum_k' A^*(k') psi(k', j)
  CVector idler = psi.amplitudes().transpose() * chi.coefficients().conjugate();
  if (indexing == IdlerIndexing::Partner) {
    CVector relabelled(idler.size());
    for (std::size_t f = 0; f < lat.size(); ++f) {
      relabelled[static_cast<Eigen::Index>(f)] =
          idler[static_cast<Eigen::Index>(lat.flat(negate_index(lat.index(f), lat)))];
    }
    idler = std::move(relabelled);
  }
  const double p = idler.squaredNorm();
  if (!(p >= kMinSuccessProbability)) {
    throw PhysicsError("project_signal: success probability " + std::to_string(p) +
                       " below floor; the projection annihilates the state");
  }
  StateVector state(lat, idler / std::sqrt(p));
  return {std::move(idler), p, std::move(state)};
}

TransferResult transfer_general(const UnitaryOperator& u, const StateVector& phi0) {
  if (!(u.lattice() == phi0.lattice())) throw std::invalid_argument("transfer: lattice mismatch");
  if (std::abs(phi0.norm() - 1.0) > kExactTol) throw std::invalid_argument("transfer: input state is not normalized");
  const UnitaryOperator us = construct_transfer_unitary(u);
  const BiphotonState driven = apply_signal_unitary(make_correlated_state(u.lattice()), us);
  Projection proj = project_signal(driven, ProjectionVector::for_input(phi0));
  const StateVector direct = u.apply(phi0).normalized();
  const double f = fidelity(proj.idler_state, direct);
  return {std::move(proj.idler_state), proj.success_probability, f};
}

TransferResult transfer_localized(const UnitaryOperator& u, const MomentumIndex& k0) {
  return transfer_general(u, StateVector::basis(u.lattice(), k0));
}

KernelRoute transfer_kernel_route(const ConvolutionKernel& u, const StateVector& d) {
  if (!(u.lattice() == d.lattice())) throw std::invalid_argument("transfer_kernel_route: lattice mismatch");
  const LatticeSpec& lat = u.lattice();
  CVector v = CVector::Zero(static_cast<Eigen::Index>(lat.size()));
  for (std::size_t l = 0; l < lat.size(); ++l) {
    const cplx dl = d.amplitudes()[static_cast<Eigen::Index>(l)];
    if (dl == cplx(0.0)) continue;
    const MomentumIndex ml = lat.index(l);
    for (std::size_t m = 0; m < lat.size(); ++m) {
      const MomentumIndex mm = lat.index(m);
      const MomentumIndex diff{lat.wrap(mm.x - ml.x), lat.dims() == 1 ? 0 : lat.wrap(mm.y - ml.y)};
      v[static_cast<Eigen::Index>(m)] += dl * u[diff];
    }
  }
  const double n = v.norm();
  if (!(n > 0.0)) throw PhysicsError("transfer_kernel_route: convolution vanished");
  ConvolutionKernel raw(lat, v, u.leakage());
  ConvolutionKernel normalized(lat, v / n, u.leakage());
  return {std::move(raw), std::move(normalized)};
}

Projection kernel_route_idler(const ConvolutionKernel& v) {
  const LatticeSpec& lat = v.lattice();
  const BiphotonState driven = apply_signal_operator(make_correlated_state(lat), circulant(lat, v.coefficients()));
  return project_signal(driven, ProjectionVector::basis(lat, {}));
}

BiphotonState prepare_correlated_state_via_circuit(const LatticeSpec& lattice) {
  if (lattice.dims() != 1) throw std::invalid_argument("circuit preparation is defined for 1D lattices");
  const auto n = static_cast<Eigen::Index>(lattice.size());
  const int d = lattice.modes_per_axis();

  CMatrix reg = CMatrix::Zero(n, n);  // rows: register 1, cols: register 2
  reg(static_cast<Eigen::Index>(lattice.flat({0, 0})), static_cast<Eigen::Index>(lattice.flat({0, 0}))) = 1.0;

  CMatrix hadamard(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const int ma = lattice.index(static_cast<std::size_t>(a)).x;
      const int mb = lattice.index(static_cast<std::size_t>(b)).x;
      const long long phase_index = (static_cast<long long>(ma) * mb) % d;
      hadamard(a, b) = std::polar(scale, kTwoPi * static_cast<double>(phase_index) / d);
    }
  }
  reg = hadamard * reg;

  CMatrix shifted = CMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const int mj = lattice.index(static_cast<std::size_t>(j)).x;
    for (Eigen::Index k = 0; k < n; ++k) {
      const int mk = lattice.index(static_cast<std::size_t>(k)).x;
      shifted(j, static_cast<Eigen::Index>(lattice.flat({lattice.wrap(mj + mk), 0}))) += reg(j, k);
    }
  }
  const CMatrix anti = negation_permutation(lattice).matrix();
  BiphotonState out(lattice, shifted * anti.transpose());

  const double dev = (out.amplitudes() - make_correlated_state(lattice).amplitudes()).cwiseAbs().maxCoeff();
  if (dev > kExactTol) {
    throw PhysicsError("circuit preparation deviates from the correlated state by " + std::to_string(dev));
  }
  return out;
}

}  // namespace nlt
