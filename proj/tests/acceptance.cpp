// Acceptance run: one PASS/FAIL line per criterion, exit status = number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nlt/optics.hpp"
#include "nlt/retrieval.hpp"
#include "nlt/runner.hpp"
#include "nlt/transfer.hpp"
#include "oracles.hpp"

using namespace nlt;

namespace {

using Clock = std::chrono::steady_clock;

int g_failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
  std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string sci(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3e", v);
  return b;
}

std::string fix(double v, int d = 4) {
  char b[32];
  std::snprintf(b, sizeof b, "%.*f", d, v);
  return b;
}

double seconds(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Mask1D {
  const char* name;
  std::function<double(double)> phi;
  std::vector<MaskTerm> terms;
};

struct Mask2D {
  const char* name;
  std::function<double(double, double)> phi;
  std::vector<MaskTerm> terms;
};

constexpr double kPeriod = 1.0 / 7.0;
constexpr int kSamples1D = 256;
constexpr int kSamples2D = 128;
const LatticeSpec kLat1(1, 61, kPeriod);
const LatticeSpec kLat2(2, 33, kPeriod);

std::vector<Mask1D> masks_1d() {
  return {
      {"phi1", [](double t) { return 1.3 * std::sin(t) + 1.5 * std::cos(2 * t); },
       {{TermKind::Sin, TermKind::Cos, 1.3, 1, TermAxis::X}, {TermKind::Cos, TermKind::Cos, 1.5, 2, TermAxis::X}}},
      {"phi2", [](double t) { return 1.9 * std::sin(t); }, {{TermKind::Sin, TermKind::Cos, 1.9, 1, TermAxis::X}}},
      {"phi3", [](double t) { return std::cos(t); }, {{TermKind::Cos, TermKind::Cos, 1.0, 1, TermAxis::X}}},
      {"phi4", [](double t) { return std::cos(t) + t; },
       {{TermKind::Cos, TermKind::Cos, 1.0, 1, TermAxis::X}, {TermKind::Linear, TermKind::Cos, 1.0, 1, TermAxis::X}}},
  };
}

std::vector<Mask2D> masks_2d() {
  return {
      {"phi1_2d", [](double x, double y) { return 2.8 * std::sin(x) * std::cos(y); },
       {{TermKind::Sin, TermKind::Cos, 2.8, 1, TermAxis::XY}}},
      {"phi2_2d", [](double x, double y) { return 1.4 * std::sin(x) + 1.4 * std::sin(y); },
       {{TermKind::Sin, TermKind::Cos, 1.4, 1, TermAxis::X}, {TermKind::Sin, TermKind::Cos, 1.4, 1, TermAxis::Y}}},
  };
}

PhaseMask sample(const Mask1D& m) { return PhaseMask::sample({1, kPeriod, m.terms}, kLat1, kSamples1D); }
PhaseMask sample(const Mask2D& m) { return PhaseMask::sample({2, kPeriod, m.terms}, kLat2, kSamples2D); }

// |u_m|^2 from direct sums, restricted to |m| <= w and renormalized.
std::vector<double> oracle_window_1d(const std::function<double(double)>& phi, int w) {
  std::vector<double> p;
  double s = 0.0;
  for (int m = -w; m <= w; ++m) {
    p.push_back(std::norm(oracle::kernel_coefficient(phi, m, kSamples1D)));
    s += p.back();
  }
  for (double& v : p) v /= s;
  return p;
}

std::vector<double> oracle_window_2d(const std::function<double(double, double)>& phi, int w) {
  const int n = kSamples2D;
  std::vector<oracle::cplx> field(static_cast<std::size_t>(n) * n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) field[static_cast<std::size_t>(x) * n + y] = std::polar(1.0, phi(2 * oracle::pi * x / n, 2 * oracle::pi * y / n));
  }
  std::vector<double> p;
  double s = 0.0;
  for (int mx = -w; mx <= w; ++mx) {
    for (int my = -w; my <= w; ++my) {
      oracle::cplx acc = 0.0;
      for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
          acc += field[static_cast<std::size_t>(x) * n + y] * std::polar(1.0, -2 * oracle::pi * (mx * x + my * y) / n);
        }
      }
      p.push_back(std::norm(acc));
      s += p.back();
    }
  }
  for (double& v : p) v /= s;
  return p;
}

double tv(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

// Centred far-field intensity of exp(i phi) over one period, by naive DFTs.
PixelImage oracle_far_1d(const std::function<double(double)>& phi, int n) {
  std::vector<oracle::cplx> f(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) f[static_cast<std::size_t>(j)] = std::polar(1.0, phi(2 * oracle::pi * j / n));
  const auto spec = oracle::naive_dft(f);
  std::vector<double> img(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) img[static_cast<std::size_t>(i)] = std::norm(spec[static_cast<std::size_t>((i - n / 2 + n) % n)]);
  return {n, 1, img};
}

PixelImage oracle_far_2d(const std::function<double(double, double)>& phi, int n) {
  std::vector<std::vector<oracle::cplx>> rows(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    std::vector<oracle::cplx> r(static_cast<std::size_t>(n));
    for (int y = 0; y < n; ++y) r[static_cast<std::size_t>(y)] = std::polar(1.0, phi(2 * oracle::pi * x / n, 2 * oracle::pi * y / n));
    rows[static_cast<std::size_t>(x)] = oracle::naive_dft(r);
  }
  std::vector<double> img(static_cast<std::size_t>(n) * n);
  for (int ky = 0; ky < n; ++ky) {
    std::vector<oracle::cplx> col(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) col[static_cast<std::size_t>(x)] = rows[static_cast<std::size_t>(x)][static_cast<std::size_t>(ky)];
    const auto spec = oracle::naive_dft(col);
    for (int kx = 0; kx < n; ++kx) {
      const int ix = (kx + n / 2) % n;
      const int iy = (ky + n / 2) % n;
      img[static_cast<std::size_t>(ix) * n + iy] = std::norm(spec[static_cast<std::size_t>(kx)]);
    }
  }
  return {n, n, img};
}

double wrapped_rms(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::remainder(a[i] - b[i], 2 * oracle::pi);
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(a.size()));
}

double worst_step(const GsResult& r) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& t : r.error_traces) {
    for (std::size_t i = 1; i < t.size(); ++i) worst = std::max(worst, t[i] - t[i - 1]);
  }
  return worst;
}

Eigen::VectorXcd random_state(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
  for (auto& c : v) c = {g(rng), g(rng)};
  return v / v.norm();
}

// 1. Transfer theorem on the dense route.
void criterion_1() {
  const auto t0 = Clock::now();
  double worst_fid = 1.0;
  double worst_oracle = 1.0;
  double worst_p = 0.0;
  int pairs = 0;
  const std::vector<std::pair<int, int>> cases = {{1, 3}, {1, 7}, {1, 15}, {1, 31}, {2, 3}, {2, 7}};
  for (const auto& [dims, n] : cases) {
    const LatticeSpec lat(dims, n);
    std::mt19937_64 rng(1000 + 10 * n + dims);
    for (int t = 0; t < 100; ++t) {
      const UnitaryOperator u = random_unitary(lat, rng());
      const Eigen::VectorXcd phi0 = random_state(lat.size(), rng);
      const TransferResult r = transfer_general(u, StateVector(lat, phi0));
      const Eigen::VectorXcd direct = u.matrix() * phi0;
      const oracle::Herald h = oracle::herald(u.matrix(), phi0, n, dims);
      worst_fid = std::min(worst_fid, oracle::overlap_fidelity(r.idler_state.amplitudes(), direct));
      worst_oracle = std::min(worst_oracle, oracle::overlap_fidelity(r.idler_state.amplitudes(), h.idler));
      const double expect = 1.0 / std::pow(static_cast<double>(n), dims);
      worst_p = std::max({worst_p, std::abs(r.success_probability - expect), std::abs(h.probability - expect)});
      ++pairs;
    }
  }
  const double elapsed = seconds(t0);
  const bool ok = 1.0 - worst_fid <= 1e-10 && 1.0 - worst_oracle <= 1e-10 && worst_p <= 1e-10 && elapsed < 30.0;
  report(1, "transfer theorem, dense route", ok,
         std::to_string(pairs) + " pairs, min fidelity 1-" + sci(1.0 - worst_fid) + " (vs U phi0), 1-" +
             sci(1.0 - worst_oracle) + " (vs loop oracle), max |P - 1/N^d| " + sci(worst_p) + ", " +
             fix(elapsed, 2) + " s (tol 1e-10, < 30 s)");
}

// 2. Jacobi-Anger.
void criterion_2() {
  const ConvolutionKernel u = kernel_from_phase(sample(masks_1d()[1]));
  double worst = 0.0;
  double series_vs_quad = 0.0;
  for (int m = -6; m <= 6; ++m) {
    const double j = oracle::bessel_series(m, 1.9);
    series_vs_quad = std::max(series_vs_quad, std::abs(j - oracle::bessel_quadrature(m, 1.9)));
    worst = std::max(worst, std::abs((u[{m, 0}]) - j));
  }
  report(2, "Jacobi-Anger kernel of 1.9 sin", worst <= 1e-8 && series_vs_quad <= 1e-12,
         "max |u_m - J_m(1.9)| over |m|<=6 = " + sci(worst) + " (tol 1e-8); series vs quadrature " +
             sci(series_vs_quad));
}

// 3. Kernel route vs dense route for the delocalized input.
void criterion_3() {
  CVector d = CVector::Zero(static_cast<Eigen::Index>(kLat1.size()));
  d[static_cast<Eigen::Index>(kLat1.flat({0, 0}))] = 1.0 / std::sqrt(2.0);
  d[static_cast<Eigen::Index>(kLat1.flat({1, 0}))] = cplx(0.0, 1.0 / std::sqrt(2.0));
  const StateVector phi0(kLat1, d);
  double worst = 0.0;
  std::string detail;
  for (const Mask1D& m : masks_1d()) {
    const ConvolutionKernel u = kernel_from_phase(sample(m));
    const KernelRoute route = transfer_kernel_route(u, phi0);
    const TransferResult dense = transfer_general(dense_from_kernel(u), phi0);
    const double t = total_variation(distribution_of(StateVector(kLat1, route.v_normalized.coefficients())),
                                     distribution_of(dense.idler_state));
    worst = std::max(worst, t);
    detail += std::string(m.name) + " " + sci(t) + "  ";
  }
  report(3, "route equivalence, d=(1,i)/sqrt2", worst <= 1e-9, detail + "(tol 1e-9 TV)");
}

// 4. Optics vs kernel power.
void criterion_4() {
  const CameraSpec cam{5, 9, 0};
  double worst = 0.0;
  std::string detail;
  for (const Mask1D& m : masks_1d()) {
    const BinnedDistribution b = bin_to_modes(far_field(sample(m), cam.pixels_per_mode), cam);
    const double t = tv(b.distribution.probabilities(), oracle_window_1d(m.phi, cam.window));
    worst = std::max(worst, t);
    detail += std::string(m.name) + " " + sci(t) + "  ";
  }
  for (const Mask2D& m : masks_2d()) {
    const BinnedDistribution b = bin_to_modes(far_field(sample(m), cam.pixels_per_mode), cam);
    const double t = tv(b.distribution.probabilities(), oracle_window_2d(m.phi, cam.window));
    worst = std::max(worst, t);
    detail += std::string(m.name) + " " + sci(t) + "  ";
  }
  report(4, "optics binning vs |u_m|^2", worst <= 1e-3, detail + "(tol 1e-3 TV, |m|<=9, 5 px/mode)");
}

// 5. Similarity, noiseless and with shot noise.
void criterion_5() {
  const char* names[] = {"phi1_1d", "phi2_1d", "phi3_1d", "phi4_1d", "phi1_2d", "phi2_2d"};
  const double measured[] = {95.7, 93.9, 90.6, 91.2, 84.5, 93.8};
  RunOptions opt;
  opt.write_files = false;
  bool ok = true;
  std::string detail;
  for (int i = 0; i < 6; ++i) {
    Scenario sc = load_scenario(std::string(NLT_SCENARIO_DIR) + "/" + names[i] + ".scenario");
    sc.retrieval.enabled = false;
    const RunReport r = run_scenario(sc, opt);
    const double s0 = r.similarity_noiseless.value_or(-1.0);
    const double s1 = r.similarity_noisy.value_or(-1.0);
    ok = ok && std::abs(s0 - 1.0) <= 1e-12 && s1 >= 0.99 && s1 <= 1.0 && sc.counts_total == 10000;
    detail += std::string(names[i]) + " s=1-" + sci(1.0 - s0) + " noisy " + fix(100 * s1, 2) + "% (lab " +
              fix(measured[i], 1) + "%)  ";
  }
  double deloc = 0.0;
  const char* dnames[] = {"phi1_deloc", "phi2_deloc", "phi3_deloc", "phi4_deloc"};
  for (const char* n : dnames) {
    Scenario sc = load_scenario(std::string(NLT_SCENARIO_DIR) + "/delocalized/" + n + ".scenario");
    deloc += run_scenario(sc, opt).similarity_noisy.value_or(0.0) / 4.0;
  }
  detail += "delocalized mean noisy " + fix(100 * deloc, 2) + "% (lab 88.1%)";
  report(5, "similarity", ok, detail + " (noiseless |s-1|<=1e-12, noisy in [0.99, 1] at 1e4 counts)");
}

// 6. GS retrieval.
void criterion_6() {
  bool ok = true;
  std::string detail;
  double worst_increase = -1.0;
  double worst_l1_increase = -1.0;
  double wall_1d = 0.0;
  const std::uint64_t seeds[] = {201, 202, 203, 204};
  int i = 0;
  for (const Mask1D& m : masks_1d()) {
    const PixelImage far = oracle_far_1d(m.phi, kSamples1D);
    GsConfig cfg;
    cfg.n_runs = 200;
    cfg.n_iters = 200;
    cfg.seed = seeds[i++];
    const auto t0 = Clock::now();
    const GsResult r = gs_retrieve(uniform_amplitude({kSamples1D, 1}), far, cfg);
    wall_1d += seconds(t0);
    std::vector<double> ref(kSamples1D);
    for (int j = 0; j < kSamples1D; ++j) ref[static_cast<std::size_t>(j)] = m.phi(2 * oracle::pi * j / kSamples1D);
    const PhaseAlignment al = align_phase(r.shape, r.phase, ref);
    const double rms = wrapped_rms(al.aligned, ref);
    worst_increase = std::max(worst_increase, worst_step(r));
    cfg.trace_norm = DistanceNorm::L1;
    cfg.n_runs = 20;
    worst_l1_increase = std::max(worst_l1_increase, worst_step(gs_retrieve(uniform_amplitude({kSamples1D, 1}), far, cfg)));
    ok = ok && rms <= 0.1;
    detail += std::string(m.name) + " " + fix(rms, 4) + (al.twin ? " (twin)" : "") + "  ";
  }
  const std::uint64_t seeds2[] = {205, 206};
  i = 0;
  for (const Mask2D& m : masks_2d()) {
    const PixelImage far = oracle_far_2d(m.phi, kSamples2D);
    GsConfig cfg;
    cfg.n_runs = 100;
    cfg.n_iters = 100;
    cfg.seed = seeds2[i++];
    const GsResult r = gs_retrieve(uniform_amplitude({kSamples2D, kSamples2D}), far, cfg);
    std::vector<double> ref(static_cast<std::size_t>(kSamples2D) * kSamples2D);
    for (int x = 0; x < kSamples2D; ++x) {
      for (int y = 0; y < kSamples2D; ++y) {
        ref[static_cast<std::size_t>(x) * kSamples2D + y] =
            m.phi(2 * oracle::pi * x / kSamples2D, 2 * oracle::pi * y / kSamples2D);
      }
    }
    const PhaseAlignment al = align_phase(r.shape, r.phase, ref);
    const double rms = wrapped_rms(al.aligned, ref);
    worst_increase = std::max(worst_increase, worst_step(r));
    ok = ok && rms <= 0.2;
    detail += std::string(m.name) + " " + fix(rms, 4) + (al.twin ? " (twin)" : "") + "  ";
  }
  ok = ok && worst_increase <= 1e-12 && wall_1d <= 60.0;
  report(6, "GS retrieval", ok,
         "aligned RMS [rad] " + detail + "(tol 0.1 1D, 0.2 2D); max trace step " + sci(worst_increase) +
             " (tol 1e-12); 1D wall " + fix(wall_1d, 2) + " s for 4 masks (<= 60 s); L1-trace max step " +
             sci(worst_l1_increase) + " (informational)");
}

// 7. Amplitude-encoded delocalized target.
void criterion_7() {
  const CameraSpec cam{5, 9, 0};
  const int ratio = 50;
  double worst = 0.0;
  std::string detail;
  for (const Mask1D& m : masks_1d()) {
    CVector d = CVector::Zero(static_cast<Eigen::Index>(kLat1.size()));
    d[static_cast<Eigen::Index>(kLat1.flat({0, 0}))] = 1.0 / std::sqrt(2.0);
    d[static_cast<Eigen::Index>(kLat1.flat({1, 0}))] = cplx(0.0, 1.0 / std::sqrt(2.0));
    const KernelRoute route = transfer_kernel_route(kernel_from_phase(sample(m)), StateVector(kLat1, d));
    const FieldGrid target = field_from_kernel(route.v_normalized, kSamples1D);
    double peak = 0.0;
    for (const cplx& v : target.values) peak = std::max(peak, std::abs(v));
    std::vector<double> amp(target.values.size());
    std::vector<double> phase(target.values.size());
    for (std::size_t j = 0; j < amp.size(); ++j) {
      amp[j] = std::min(1.0, std::abs(target.values[j]) / peak);
      phase[j] = std::arg(target.values[j]);
    }
    const Hologram h = synthesize_hologram(
        {PhaseMask(kLat1, kSamples1D, phase), amp, kPeriod / ratio, EncodeMode::Bolduc, 16});
    const BinnedDistribution b = bin_to_modes(far_field(extract_first_order(h), cam.pixels_per_mode, kPeriod), cam);

    // v_m = (u_m + i u_{m-1}) / sqrt2 from direct sums.
    std::vector<double> expect;
    double s = 0.0;
    for (int k = -cam.window; k <= cam.window; ++k) {
      const oracle::cplx v = (oracle::kernel_coefficient(m.phi, k, kSamples1D) +
                              oracle::cplx(0.0, 1.0) * oracle::kernel_coefficient(m.phi, k - 1, kSamples1D)) /
                             std::sqrt(2.0);
      expect.push_back(std::norm(v));
      s += expect.back();
    }
    for (double& v : expect) v /= s;
    const double t = tv(b.distribution.probabilities(), expect);
    worst = std::max(worst, t);
    detail += std::string(m.name) + " " + sci(t) + "  ";
  }
  report(7, "amplitude-encoded first order", worst <= 1e-2, detail + "(tol 1e-2 TV, blaze = period/50)");
}

// 8. Circuit preparation.
void criterion_8() {
  double worst = 0.0;
  bool ok = true;
  for (int n : {3, 5, 7}) {
    const LatticeSpec lat(1, n);
    try {
      const BiphotonState c = prepare_correlated_state_via_circuit(lat);
      const BiphotonState ref = make_correlated_state(lat);
      worst = std::max(worst, (c.amplitudes() - ref.amplitudes()).cwiseAbs().maxCoeff());
      // Independent check: 1/sqrt(N) on the anti-diagonal.
      for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
          const double expect = (j == n - 1 - k) ? 1.0 / std::sqrt(static_cast<double>(n)) : 0.0;
          worst = std::max(worst, std::abs(c.amplitudes()(k, j) - expect));
        }
      }
    } catch (const std::exception& e) {
      ok = false;
    }
  }
  report(8, "circuit preparation", ok && worst <= 1e-12, "max deviation over N=3,5,7 " + sci(worst) + " (tol 1e-12)");
}

// 9. 2D mode count vs 1D mode count.
void criterion_9() {
  const double amps[] = {0.7, 1.4, 2.8};
  std::vector<double> c1;
  std::vector<double> c2;
  bool counts_match = true;
  std::string detail;
  for (double a : amps) {
    const Mask1D m1{"", nullptr, {{TermKind::Sin, TermKind::Cos, a, 1, TermAxis::X}}};
    const Mask2D m2{"", nullptr,
                    {{TermKind::Sin, TermKind::Cos, a, 1, TermAxis::X}, {TermKind::Sin, TermKind::Cos, a, 1, TermAxis::Y}}};
    const ConvolutionKernel u1 = kernel_from_phase(sample(m1));
    const ConvolutionKernel u2 = kernel_from_phase(sample(m2));
    int n1 = 0;
    int n2 = 0;
    for (std::size_t f = 0; f < kLat1.size(); ++f) n1 += std::norm(u1.coefficients()[static_cast<Eigen::Index>(f)]) > 1e-3;
    for (std::size_t f = 0; f < kLat2.size(); ++f) n2 += std::norm(u2.coefficients()[static_cast<Eigen::Index>(f)]) > 1e-3;
    int o1 = 0;
    int o2 = 0;
    for (int mx = -30; mx <= 30; ++mx) {
      const double jx = std::pow(oracle::bessel_series(mx, a), 2);
      o1 += jx > 1e-3;
      for (int my = -30; my <= 30; ++my) o2 += jx * std::pow(oracle::bessel_series(my, a), 2) > 1e-3;
    }
    counts_match = counts_match && n1 == o1 && n2 == o2;
    c1.push_back(n1);
    c2.push_back(n2);
    detail += "a=" + fix(a, 1) + ": 1D " + std::to_string(n1) + ", 2D " + std::to_string(n2) + ", 2D/1D^2 " +
              fix(n2 / (static_cast<double>(n1) * n1), 3) + "  ";
  }
  // Growth exponent from a least-squares fit of log c2 on log c1.
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < c1.size(); ++i) {
    const double x = std::log(c1[i]);
    const double y = std::log(c2[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(c1.size());
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  double mean_ratio = 0.0;
  for (std::size_t i = 0; i < c1.size(); ++i) mean_ratio += c2[i] / (c1[i] * c1[i]) / k;
  double spread = 0.0;
  for (std::size_t i = 0; i < c1.size(); ++i) {
    spread = std::max(spread, std::abs(c2[i] / (c1[i] * c1[i]) / mean_ratio - 1.0));
  }
  const bool ok = counts_match && slope >= 1.6 && slope <= 2.4 && spread <= 0.2;
  report(9, "2D mode count scales quadratically", ok,
         detail + "| growth exponent " + fix(slope, 3) + " (in [1.6, 2.4]); 2D/1D^2 within " + fix(100 * spread, 1) +
             "% of its mean " + fix(mean_ratio, 3) + " (<= 20%); counts match Bessel oracle: " +
             (counts_match ? "yes" : "no"));
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  const std::function<void()> criteria[] = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                            criterion_6, criterion_7, criterion_8, criterion_9};
  int id = 1;
  for (const auto& c : criteria) {
    try {
      c();
    } catch (const std::exception& e) {
      report(id, "criterion raised", false, e.what());
    }
    ++id;
  }
  std::printf("%d of 9 criteria failed, %.1f s\n", g_failures, seconds(t0));
  return g_failures;
}
