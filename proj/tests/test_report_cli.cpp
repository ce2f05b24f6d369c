#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pcehinf/cli.hpp"
#include "pcehinf/report.hpp"
#include "test_support.hpp"

using namespace pcehinf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pcehinf_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

RunConfig analyze_config(const fs::path& dir) {
  RunConfig c;
  c.command = "analyze";
  c.plant = PCEHINF_SOURCE_DIR "/plants/benchmark.json";
  c.out = dir;
  c.gain = testsupport::gain(-0.1281, -9.4664);
  return c;
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') out.push_back(line);
  return out;
}

}  // namespace

TEST(Report, Fnv1aVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
  EXPECT_EQ(hex64(0xabcULL), "0000000000000abc");
}

TEST(Report, NumberFormatRoundTrips) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
}

TEST(Report, MatrixCsvRoundTripSkipsMetadata) {
  Metadata md;
  md.add("seed", "3").add("tol", 1e-6);
  Matrix m(2, 3);
  m << 1.5, -2, 1e-300, 0.1, 3, -7.25;
  const std::string text = matrix_csv(md, m);
  EXPECT_EQ(text.rfind("# seed: 3\n# tol: 1e-06\n", 0), 0u);
  EXPECT_EQ(parse_matrix_csv(text), m);
  EXPECT_EQ(parse_matrix_csv(" 1 , 2\r\n\n3,4\n"), (Matrix(2, 2) << 1, 2, 3, 4).finished());
}

TEST(Report, MatrixCsvErrors) {
  auto kind_of = [](const std::string& text) {
    try {
      parse_matrix_csv(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  EXPECT_EQ(kind_of("1,2\n3\n"), ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of("1,x\n"), ErrorKind::Schema);
  EXPECT_EQ(kind_of("1,,2\n"), ErrorKind::Schema);
  EXPECT_EQ(kind_of("# only\n"), ErrorKind::Schema);
}

TEST(Cli, AnalyzeWritesSummaryWithExactColumns) {
  const fs::path dir = scratch("analyze");
  std::ostringstream log;
  run(analyze_config(dir), log);
  const auto lines = data_lines(read_text(dir / "summary.csv"));
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], "worst_case_hinf,averaged_hinf,unstable_samples");
  const double worst = std::stod(lines[1].substr(0, lines[1].find(',')));
  EXPECT_NEAR(worst, 54.1316, 0.01 * 54.1316);
  for (const char* f : {"summary.csv", "norms.csv", "stability.csv"}) {
    const std::string text = read_text(dir / f);
    for (const char* key : {"# config_hash: fnv1a64:", "# seed: ", "# tolerances: ",
                            "# versions: pcehinf "})
      EXPECT_NE(text.find(key), std::string::npos) << f << " lacks " << key;
  }
}

TEST(Cli, OutputsAreByteIdentical) {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  std::ostringstream log;
  for (const fs::path& d : {a, b}) {
    RunConfig c = analyze_config(d);
    c.command = "evaluate";
    c.mc = 300;
    c.T = 1.0;
    c.dt = 1e-2;
    c.nodes = 21;
    c.seed = 11;
    run(c, log);
  }
  int files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    EXPECT_EQ(read_text(e.path()), read_text(b / e.path().filename())) << e.path();
    ++files;
  }
  EXPECT_EQ(files, 5);
}

TEST(Cli, AnalyzeUnstableGainFailsAfterWriting) {
  const fs::path dir = scratch("unstable");
  RunConfig c = analyze_config(dir);
  c.gain = Gain::Zero(1, 2);
  c.grid = 21;
  std::ostringstream log;
  try {
    run(c, log);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnstableSystem);
  }
  EXPECT_TRUE(fs::exists(dir / "summary.csv"));
}

TEST(Cli, TransformOfDeterministicPlantIsBlockDiagonal) {
  const fs::path dir = scratch("transform");
  const UncertainPlant frozen = testsupport::frozen_plant(0.5);
  write_text(dir / "plant.json", serialize_plant(frozen));
  RunConfig c;
  c.command = "transform";
  c.plant = dir / "plant.json";
  c.out = dir;
  c.degree = 2;
  std::ostringstream log;
  run(c, log);
  const Matrix A = load_matrix_csv(dir / "expanded_A.csv");
  const double xi[] = {0.5};
  EXPECT_LT((A - kron_identity(3, frozen.A.eval(xi))).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Cli, ConfigFileResolvesPathsAndRejectsUnknownKeys) {
  const fs::path dir = scratch("config");
  write_text(dir / "k.csv", "-0.1281,-9.4664\n");
  write_text(dir / "run.json",
             std::string("{\"command\": \"analyze\", \"plant\": \"") + PCEHINF_SOURCE_DIR +
                 "/plants/benchmark.json\", \"gain\": \"k.csv\", \"out\": \"res\", "
                 "\"grid\": 50}");
  const RunConfig c = load_run_config(dir / "run.json");
  EXPECT_EQ(c.gain_file, dir / "k.csv");
  EXPECT_EQ(c.out, dir / "res");
  EXPECT_EQ(c.grid, 50);
  std::ostringstream log;
  run(c, log);
  EXPECT_TRUE(fs::exists(dir / "res" / "summary.csv"));

  write_text(dir / "bad.json", "{\"grdi\": 5}");
  try {
    load_run_config(dir / "bad.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Schema);
    EXPECT_NE(std::string(e.what()).find("grdi"), std::string::npos);
  }
}

TEST(Cli, ValidationRanges) {
  RunConfig c = analyze_config(scratch("validate"));
  validate(c);
  auto rejects = [&](auto mutate, ErrorKind kind) {
    RunConfig bad = c;
    mutate(bad);
    try {
      validate(bad);
      ADD_FAILURE() << "accepted";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), kind);
    }
  };
  rejects([](RunConfig& r) { r.grid = 1; }, ErrorKind::InvalidArgument);
  rejects([](RunConfig& r) { r.degree = -1; }, ErrorKind::InvalidArgument);
  rejects([](RunConfig& r) { r.dt = 20; }, ErrorKind::InvalidArgument);
  rejects([](RunConfig& r) { r.mode = "sos"; }, ErrorKind::InvalidArgument);
  rejects([](RunConfig& r) { r.command = "plot"; }, ErrorKind::InvalidArgument);
  rejects([](RunConfig& r) { r.plant = "/nonexistent.json"; }, ErrorKind::Io);
}

TEST(Cli, ConfigHashTracksSettings) {
  RunConfig a = analyze_config("x"), b = a;
  EXPECT_EQ(canonical_config(a), canonical_config(b));
  b.seed = 2;
  EXPECT_NE(canonical_config(a), canonical_config(b));
  b = a;
  b.out = "elsewhere";
  EXPECT_EQ(canonical_config(a), canonical_config(b));
}
