#include <gtest/gtest.h>

#include <filesystem>

#include "nlt/errors.hpp"
#include "nlt/grid_io.hpp"
#include "nlt/scenario.hpp"

using namespace nlt;
namespace fs = std::filesystem;

namespace {

std::vector<fs::path> bundled() {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(NLT_SCENARIO_DIR)) {
    if (e.is_regular_file()) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

const char* kMinimal =
    "name = mini\n"
    "[lattice]\n"
    "dims = 1\n"
    "modes = 31\n"
    "period = 1\n"
    "[mask]\n"
    "samples = 128\n"
    "term = sin 1.9 1 x\n";

int error_line(const std::string& text) {
  try {
    parse_scenario(text, "mem");
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(Scenario, BundledFilesRoundTrip) {
  const auto files = bundled();
  ASSERT_GE(files.size(), 11u);
  for (const auto& f : files) {
    const Scenario s = load_scenario(f);
    const std::string text = serialize_scenario(s);
    EXPECT_EQ(parse_scenario(text, "rt"), s) << f;
    EXPECT_EQ(serialize_scenario(parse_scenario(text, "rt")), text) << f;
    EXPECT_EQ(parse_scenario_json(serialize_scenario_json(s), "rt.json"), s) << f;
  }
}

TEST(Scenario, DefaultsAndDerivedValues) {
  const Scenario s = parse_scenario(kMinimal, "mem");
  EXPECT_EQ(s.output_dir, "mini");
  EXPECT_EQ(s.window, 9);
  EXPECT_EQ(s.pixels_per_mode, 5);
  EXPECT_EQ(s.counts_total, 10000);
  EXPECT_FALSE(s.noise_seed.has_value());
  EXPECT_FALSE(s.retrieval.enabled);
  EXPECT_TRUE(s.localized_input());
  EXPECT_EQ(s.input_state().amplitude({0, 0}), cplx(1.0));
}

TEST(Scenario, CoefficientsAreNormalized) {
  const Scenario s = parse_scenario(std::string(kMinimal) +
                                        "[input]\ncoefficient = 0 3 0\ncoefficient = -2 0 4\n[optics]\nencoding = bolduc\n",
                                    "mem");
  EXPECT_FALSE(s.localized_input());
  EXPECT_NEAR(std::abs(s.input_state().amplitude({-2, 0}) - cplx(0.0, 0.8)), 0.0, 1e-15);
}

TEST(Scenario, JsonAcceptsNativeScalars) {
  const Scenario s = parse_scenario_json(R"({
    "name": "j",
    "lattice": {"dims": 2, "modes": 9, "period": 0.5},
    "unitary": {"seed": 12},
    "input": {"k0": "1 -1"},
    "camera": {"window": 3, "counts_total": 0},
    "retrieval": {"enabled": false}
  })", "mem.json");
  EXPECT_EQ(s.dims, 2);
  EXPECT_EQ(*s.unitary_seed, 12u);
  EXPECT_EQ(s.k0, (MomentumIndex{1, -1}));
  EXPECT_EQ(s.counts_total, 0);
}

TEST(Scenario, LineAnchoredDiagnostics) {
  const std::string base(kMinimal);
  EXPECT_EQ(error_line(base + "[camera]\nwindow = 20\n"), 10);
  EXPECT_EQ(error_line(base + "bogus = 1\n"), 9);
  EXPECT_EQ(error_line(base + "term = tan 1 1 x\n"), 9);
  EXPECT_EQ(error_line(base + "[camera]\npixels_per_mode = five\n"), 10);
  EXPECT_EQ(error_line(base + "[mystery]\n"), 9);
  EXPECT_EQ(error_line(base + "[input]\nk0 = 40\n"), 10);
  EXPECT_EQ(error_line(base + "[input]\ncoefficient = 0 1\n"), 10);
  EXPECT_EQ(error_line(base + "[input]\ncoefficient = 0 0 0\n"), 10);
  EXPECT_EQ(error_line(base + "[unitary]\nseed = 3\n"), 9);
  EXPECT_EQ(error_line("name = x\n[lattice]\ndims = 1\nmodes = 30\nperiod = 1\n[unitary]\nseed = 1\n"), 4);
  EXPECT_EQ(error_line("name = x\n[lattice\n"), 2);
  EXPECT_EQ(error_line("name = x\njust text\n"), 2);
  EXPECT_EQ(error_line("name = x\nname = y\n"), 2);
  EXPECT_EQ(error_line(base.substr(0, base.find("samples")) + "samples = 64\nterm = sin 1 1 x\n"), 7);
}

TEST(Scenario, CrossFieldChecks) {
  const std::string base(kMinimal);
  EXPECT_THROW(parse_scenario(base + "[input]\ncoefficient = 0 1 0\ncoefficient = 1 1 0\n", "mem"), ParseError);
  EXPECT_THROW(parse_scenario("[lattice]\ndims = 1\nmodes = 5\nperiod = 1\n[unitary]\nseed = 1\n", "mem"), ParseError);
  EXPECT_THROW(parse_scenario_json("[1, 2]", "mem.json"), ParseError);
  EXPECT_THROW(parse_scenario_json("{\"name\": ", "mem.json"), ParseError);
}

TEST(Scenario, LoadReportsMissingFile) {
  EXPECT_THROW(load_scenario("/nonexistent/x.scenario"), IoError);
}
