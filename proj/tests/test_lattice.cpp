#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "nlt/lattice.hpp"

using namespace nlt;

TEST(LatticeSpec, RejectsEvenOrTinyLattices) {
  EXPECT_THROW(LatticeSpec(1, 4), std::invalid_argument);
  EXPECT_THROW(LatticeSpec(1, 1), std::invalid_argument);
  EXPECT_THROW(LatticeSpec(3, 5), std::invalid_argument);
  EXPECT_THROW(LatticeSpec(1, 5, 0.0), std::invalid_argument);
  EXPECT_NO_THROW(LatticeSpec(2, 3));
}

TEST(LatticeSpec, FlatIndexIsXMajorAndRoundTrips) {
  const LatticeSpec lat(2, 5);
  EXPECT_EQ(lat.size(), 25u);
  EXPECT_EQ(lat.flat({-2, -2}), 0u);
  EXPECT_EQ(lat.flat({-2, -1}), 1u);
  EXPECT_EQ(lat.flat({-1, -2}), 5u);
  for (std::size_t f = 0; f < lat.size(); ++f) EXPECT_EQ(lat.flat(lat.index(f)), f);
}

TEST(LatticeSpec, WrapReducesModuloN) {
  const LatticeSpec lat(1, 7);
  EXPECT_EQ(lat.wrap(3), 3);
  EXPECT_EQ(lat.wrap(4), -3);
  EXPECT_EQ(lat.wrap(-4), 3);
  EXPECT_EQ(lat.wrap(14), 0);
  EXPECT_EQ(lat.wrap(-22), -1);
}

TEST(LatticeSpec, NegateStaysOnLattice) {
  const LatticeSpec lat(2, 3);
  EXPECT_EQ(negate_index({1, -1}, lat), (MomentumIndex{-1, 1}));
  EXPECT_THROW(negate_index({2, 0}, lat), std::out_of_range);
}

TEST(CorrelatedState, UniformAntiDiagonal) {
  const LatticeSpec lat(1, 5);
  const BiphotonState psi = make_correlated_state(lat);
  EXPECT_NEAR(psi.norm(), 1.0, kExactTol);
  for (int k = -2; k <= 2; ++k) {
    for (int j = -2; j <= 2; ++j) {
      const double expect = j == -k ? 1.0 / std::sqrt(5.0) : 0.0;
      EXPECT_NEAR(std::abs(psi.amplitude({k, 0}, {j, 0})), expect, kExactTol);
    }
  }
  for (double p : psi.signal_marginal()) EXPECT_NEAR(p, 0.2, kExactTol);
  for (double p : psi.idler_marginal()) EXPECT_NEAR(p, 0.2, kExactTol);
}

TEST(CorrelatedState, TwoDimensionalNormalization) {
  const LatticeSpec lat(2, 3);
  const BiphotonState psi = make_correlated_state(lat);
  EXPECT_NEAR(psi.norm(), 1.0, kExactTol);
  EXPECT_NEAR(std::abs(psi.amplitude({1, -1}, {-1, 1})), 1.0 / 3.0, kExactTol);
}

TEST(Distribution, ValidatesEntries) {
  const LatticeSpec lat(1, 3);
  EXPECT_THROW(Distribution(lat, {0.5, 0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(Distribution(lat, {1.2, -0.2, 0.0}), std::invalid_argument);
  EXPECT_THROW(Distribution(lat, {1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(Distribution::from_weights(lat, {0.0, 0.0, 0.0}), std::domain_error);
  const Distribution d = Distribution::from_weights(lat, {1.0, 2.0, 1.0});
  EXPECT_DOUBLE_EQ((d[{0, 0}]), 0.5);
}

TEST(Distribution, TotalVariationAndFidelity) {
  const LatticeSpec lat(1, 3);
  const Distribution a(lat, {1.0, 0.0, 0.0});
  const Distribution b(lat, {0.0, 0.0, 1.0});
  EXPECT_DOUBLE_EQ(total_variation(a, b), 1.0);
  EXPECT_DOUBLE_EQ(total_variation(a, a), 0.0);

  const StateVector s0 = StateVector::basis(lat, {0, 0});
  CVector v(3);
  v << 0.0, std::sqrt(0.5), cplx(0.0, std::sqrt(0.5));
  const StateVector s1(lat, v);
  EXPECT_NEAR(fidelity(s0, s1), 0.5, kExactTol);
  EXPECT_NEAR(fidelity(s1, s1), 1.0, kExactTol);
  EXPECT_THROW(fidelity(s0, StateVector::basis(LatticeSpec(1, 5), {0, 0})), std::invalid_argument);
}

TEST(Distribution, WindowRestrictionReportsLeakage) {
  const LatticeSpec lat(1, 7);
  const Distribution p(lat, {0.1, 0.1, 0.2, 0.2, 0.2, 0.1, 0.1});
  const WindowedDistribution w = restrict_to_window(p, 2);
  EXPECT_EQ(w.distribution.lattice().modes_per_axis(), 5);
  EXPECT_NEAR(w.leakage, 0.2, 1e-15);
  EXPECT_NEAR((w.distribution[{0, 0}]), 0.25, 1e-15);
  EXPECT_THROW(restrict_to_window(p, 4), std::invalid_argument);
}

TEST(StateVector, NormalizeZeroThrows) {
  const LatticeSpec lat(1, 3);
  EXPECT_THROW(StateVector(lat, CVector::Zero(3)).normalized(), std::domain_error);
  EXPECT_THROW(StateVector(lat, CVector::Zero(4)), std::invalid_argument);
}
