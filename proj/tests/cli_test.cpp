#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "planarac/cli.hpp"
#include "planarac/io.hpp"
#include "test_util.hpp"

namespace planarac {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() /
            ("planarac_" + std::string(info->test_suite_name()) + "_" +
             info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  fs::path path_;
};

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

io::CorrespondenceFile read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return io::read_correspondences(in);
}

std::vector<io::ResultRecord> read_records(const std::string& text) {
  std::istringstream in(text);
  return io::read_results(in);
}

TEST(Io, CorrespondenceRoundTrip) {
  const SyntheticScene s = testing::make_scene({0.2, 0.9}, 0.5, 71);
  io::CorrespondenceFile f;
  f.frame = io::Frame::kPixel;
  f.intrinsics = s.intrinsics;
  f.acs = s.pixel;
  std::stringstream ss;
  io::write_correspondences(ss, f);
  const io::CorrespondenceFile g = io::read_correspondences(ss);
  EXPECT_EQ(g.frame, io::Frame::kPixel);
  ASSERT_TRUE(g.intrinsics.has_value());
  EXPECT_EQ(g.intrinsics->fx, 600.0);
  EXPECT_EQ(g.intrinsics->cy, 300.0);
  ASSERT_EQ(g.acs.size(), f.acs.size());
  for (std::size_t i = 0; i < f.acs.size(); ++i) {
    EXPECT_EQ(g.acs[i].p1, f.acs[i].p1);
    EXPECT_EQ(g.acs[i].p2, f.acs[i].p2);
    EXPECT_EQ(g.acs[i].affine, f.acs[i].affine);
  }
}

TEST(Io, NormalizedWithoutIntrinsics) {
  io::CorrespondenceFile f;
  f.acs.push_back({{0.1, 0.2}, {0.3, 0.4}, Eigen::Matrix2d::Identity()});
  std::stringstream ss;
  io::write_correspondences(ss, f);
  EXPECT_EQ(ss.str(),
            "# planarac-correspondences v1\n"
            "{\"frame\":\"normalized\"}\n"
            "p1x,p1y,p2x,p2y,a1,a2,a3,a4\n"
            "0.10000000000000001,0.20000000000000001,0.29999999999999999,"
            "0.40000000000000002,1,0,0,1\n");
  const io::CorrespondenceFile g = io::read_correspondences(ss);
  EXPECT_FALSE(g.intrinsics.has_value());
  EXPECT_EQ(g.acs.size(), 1u);
}

TEST(Io, ParseErrorsCarryLineNumbers) {
  const std::string head =
      "# planarac-correspondences v1\n{\"frame\":\"pixel\"}\n"
      "p1x,p1y,p2x,p2y,a1,a2,a3,a4\n";
  struct Case {
    std::string text;
    std::string needle;
  };
  const Case cases[] = {
      {"garbage\n", "line 1"},
      {"# planarac-correspondences v1\n{not json\n", "line 2"},
      {"# planarac-correspondences v1\n{\"frame\":\"sideways\"}\n", "line 2"},
      {head + "1,2,3,4,1,0,0,1\n1,2,3\n", "line 5"},
      {head + "1,2,3,4,1,0,0,x\n", "line 4"},
      {head + "1,2,3,4,1,0,0,nan\n", "line 4"},
  };
  for (const Case& c : cases) {
    std::istringstream in(c.text);
    try {
      io::read_correspondences(in);
      ADD_FAILURE() << "accepted: " << c.text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParseError);
      EXPECT_NE(std::string(e.what()).find(c.needle), std::string::npos)
          << e.what();
    }
  }
}

TEST(Io, GroundTruthAndResultsRoundTrip) {
  std::stringstream gt;
  io::write_ground_truth(gt, {0.25, -1.5, 600.0});
  const io::GroundTruth g = io::read_ground_truth(gt);
  EXPECT_EQ(g.alpha, 0.25);
  EXPECT_EQ(g.beta, -1.5);
  EXPECT_EQ(g.focal, 600.0);

  std::stringstream rs;
  io::write_results_header(rs);
  io::write_result(rs, {"1acf", "hist", 0.1, 0.2, 612.5, 40, 0.3, 0.2, 1.5});
  io::write_result(rs, {"1ac", "none", 0.1, 0.2, std::nullopt, 3, 0.3, 0.2, 0.01});
  const auto rows = io::read_results(rs);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].focal, 612.5);
  EXPECT_FALSE(rows[1].focal.has_value());
  EXPECT_EQ(rows[1].inliers, 3);
}

TEST(Cli, GenerateIsDeterministicAndExact) {
  TempDir dir;
  const std::string a = dir.file("a.csv");
  const std::string b = dir.file("b.csv");
  for (const std::string& path : {a, b}) {
    const CliRun r = cli({"generate", "--sigma", "0", "--points", "50", "--seed",
                       "5", "--motion", "0.2,0.9", "--focal", "600", "--out",
                       path});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(a + ".gt"), slurp(b + ".gt"));

  const io::CorrespondenceFile f = read_file(a);
  ASSERT_EQ(f.acs.size(), 50u);
  ASSERT_TRUE(f.intrinsics.has_value());
  const PlanarMotion m(0.2, 0.9);
  const EssentialMatrix e = build_essential(m);
  for (const AffineCorrespondence& pixel : f.acs) {
    const AffineCorrespondence ac = f.intrinsics->normalize(pixel);
    EXPECT_LT(std::abs(ac.p2.homogeneous().dot(e * ac.p1.homogeneous())), 1e-9);
    EXPECT_LT((constraint_matrix(ac) * trig_vector(m)).norm(), 1e-9);
  }
  std::ifstream gt(a + ".gt");
  const io::GroundTruth g = io::read_ground_truth(gt);
  EXPECT_DOUBLE_EQ(g.alpha, 0.2);
  EXPECT_DOUBLE_EQ(g.beta, 0.9);
}

TEST(Cli, GenerateRejectsThreePoints) {
  TempDir dir;
  const CliRun r = cli({"generate", "--points", "3", "--out", dir.file("x.csv")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find(">= 4"), std::string::npos) << r.err;
}

TEST(Cli, BadFlagsAreUsageErrors) {
  TempDir dir;
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({"generate", "--out", dir.file("x"), "--sigma", "abc"}).code, 2);
  EXPECT_EQ(cli({"generate", "--out", dir.file("x"), "--motion", "1"}).code, 2);
  EXPECT_EQ(cli({"estimate", "--in", dir.file("x"), "--solver", "8pt"}).code, 2);
  EXPECT_EQ(cli({"benchmark", "--trials", "0"}).code, 2);
  EXPECT_EQ(cli({"benchmark", "--sigmas", "0.1,-1"}).code, 2);
  EXPECT_EQ(cli({"benchmark", "--solvers", "3pc", "--robust", "hist"}).code, 2);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Cli, GeometryRejectionExitCode) {
  EXPECT_EQ(cli::exit_code_for(ErrorCode::kGeometryRejection), 3);
  EXPECT_EQ(cli::exit_code_for(ErrorCode::kNoModel), 5);
  EXPECT_EQ(cli::exit_code_for(ErrorCode::kNoVotes), 5);
  EXPECT_EQ(cli::exit_code_for(ErrorCode::kParseError), 4);
}

TEST(Cli, EstimateZeroNoiseEveryRecordExact) {
  TempDir dir;
  const std::string path = dir.file("zero.csv");
  ASSERT_EQ(cli({"generate", "--sigma", "0", "--seed", "6", "--motion",
                 "0.2,0.9", "--out", path})
                .code,
            0);
  for (const std::string solver : {"1ac", "1acf", "3pc", "2pc"}) {
    const CliRun r = cli({"estimate", "--in", path, "--solver", solver,
                       "--robust", "none"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = read_records(r.out);
    ASSERT_FALSE(rows.empty());
    for (const io::ResultRecord& rec : rows) {
      EXPECT_EQ(rec.solver, solver);
      const double err = std::max(angle_distance(rec.alpha, 0.2),
                                  angle_distance(rec.beta, 0.9));
      if (solver == "1acf") {
        ASSERT_TRUE(rec.focal.has_value());
        EXPECT_LT(err, 1e-6);
      } else {
        EXPECT_LT(err, 1e-8) << solver;
      }
    }
  }
}

TEST(Cli, EstimateHistogramOnMixedFile) {
  TempDir dir;
  const std::string path = dir.file("mixed.csv");
  ASSERT_EQ(cli({"generate", "--sigma", "0.5", "--points", "100", "--seed",
                 "8", "--motion", "-0.1,2.0", "--outliers", "100", "--out",
                 path})
                .code,
            0);
  // Inliers of the generating motion itself; the 1 px threshold also drops
  // some true inliers at this noise level.
  const io::CorrespondenceFile f = read_file(path);
  int truth_inliers = 0;
  for (const AffineCorrespondence& pixel : f.acs) {
    const AffineCorrespondence ac = f.intrinsics->normalize(pixel);
    if (model_residual_px(PlanarMotion(-0.1, 2.0), ac, f.intrinsics->fx) < 1.0) {
      ++truth_inliers;
    }
  }
  ASSERT_GE(truth_inliers, 50);
  for (const std::string solver : {"1ac", "1acf"}) {
    const CliRun r = cli({"estimate", "--in", path, "--solver", solver,
                       "--robust", "hist"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = read_records(r.out);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_LT(rad_to_deg(angle_distance(rows[0].alpha, -0.1)), 1.0);
    EXPECT_LT(rad_to_deg(angle_distance(rows[0].beta, 2.0)), 1.0);
    if (solver == "1ac") {
      EXPECT_GE(rows[0].inliers, 0.9 * truth_inliers) << truth_inliers;
    } else {
      // A few percent of focal error already moves pixel residuals across
      // the threshold, so the focal is checked instead of the count.
      ASSERT_TRUE(rows[0].focal.has_value());
      EXPECT_LT(std::abs(*rows[0].focal - 600.0) / 600.0, 0.05);
    }
  }
  const CliRun r = cli({"estimate", "--in", path, "--solver", "3pc", "--robust",
                     "ransac", "--out", dir.file("res.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto rows = read_records(slurp(dir.file("res.csv")));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_LT(rad_to_deg(angle_distance(rows[0].alpha, -0.1)), 1.0);
}

TEST(Cli, EstimateInputErrors) {
  TempDir dir;
  EXPECT_EQ(cli({"estimate", "--in", dir.file("missing.csv")}).code, 4);

  const std::string bad = dir.file("bad.csv");
  std::ofstream(bad) << "# planarac-correspondences v1\n{\"frame\":\"pixel\"}\n"
                        "p1x,p1y,p2x,p2y,a1,a2,a3,a4\n1,2,3,4,1,0,0,1\n1,2\n";
  const CliRun r = cli({"estimate", "--in", bad});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("line 5"), std::string::npos) << r.err;

  // Pixel frame without intrinsics cannot feed a calibrated solver.
  const std::string bare = dir.file("bare.csv");
  std::ofstream(bare) << "# planarac-correspondences v1\n{\"frame\":\"pixel\"}\n"
                         "p1x,p1y,p2x,p2y,a1,a2,a3,a4\n1,2,3,4,1,0,0,1\n";
  EXPECT_EQ(cli({"estimate", "--in", bare, "--solver", "1ac"}).code, 4);
}

TEST(Cli, EstimateNoModel) {
  TempDir dir;
  const std::string path = dir.file("degenerate.csv");
  // Points on the horizon line with a y-preserving affinity: rank 2.
  std::ofstream(path) << "# planarac-correspondences v1\n"
                         "{\"frame\":\"normalized\"}\n"
                         "p1x,p1y,p2x,p2y,a1,a2,a3,a4\n"
                         "0.1,0,0.3,0,1,0.2,0,1\n";
  EXPECT_EQ(cli({"estimate", "--in", path, "--robust", "none"}).code, 5);
  EXPECT_EQ(cli({"estimate", "--in", path, "--robust", "hist"}).code, 5);
}

TEST(Cli, BenchmarkSchemaAndZeroNoise) {
  const CliRun r = cli({"benchmark", "--sigmas", "0", "--trials", "100",
                     "--solvers", "1ac"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string magic, header, row, extra;
  std::getline(in, magic);
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(magic, "# planarac-benchmark v1");
  EXPECT_EQ(header,
            "solver,sigma,mean_rot_deg,std_rot_deg,mean_tr_deg,std_tr_deg,"
            "mean_focal_rel,std_focal_rel,fail_rate,mean_ms");
  EXPECT_FALSE(std::getline(in, extra));
  std::vector<std::string> fields;
  std::stringstream rs(row);
  for (std::string f; std::getline(rs, f, ',');) fields.push_back(f);
  ASSERT_EQ(fields.size(), 10u);
  EXPECT_EQ(fields[0], "1ac");
  EXPECT_LT(std::stod(fields[2]), 1e-7);
  EXPECT_LT(std::stod(fields[4]), 1e-7);
  EXPECT_TRUE(fields[6].empty());
  EXPECT_EQ(std::stod(fields[8]), 0.0);
}

TEST(Cli, BenchmarkMonotoneColumns) {
  const CliRun r = cli({"benchmark", "--sigmas", "0.2,0.4,0.6,0.8,1.0",
                     "--trials", "200", "--solvers", "1ac,3pc", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  std::vector<double> sig[2], rot[2], tr[2];
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream rs(line);
    for (std::string x; std::getline(rs, x, ',');) f.push_back(x);
    const int k = f[0] == "1ac" ? 0 : 1;
    sig[k].push_back(std::stod(f[1]));
    rot[k].push_back(std::stod(f[2]));
    tr[k].push_back(std::stod(f[4]));
  }
  for (int k = 0; k < 2; ++k) {
    ASSERT_EQ(sig[k].size(), 5u);
    EXPECT_GT(testing::spearman(sig[k], rot[k]), 0.9);
    EXPECT_GT(testing::spearman(sig[k], tr[k]), 0.9);
  }
}

TEST(Cli, BenchmarkDeterministicWithoutTiming) {
  auto strip = [](const std::string& text) {
    std::istringstream in(text);
    std::string out, line;
    while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
    return out;
  };
  const std::vector<std::string> args = {"benchmark", "--sigmas", "0.5",
                                         "--trials", "20", "--solvers",
                                         "1ac,1acf,2pc", "--seed", "11"};
  const CliRun a = cli(args);
  const CliRun b = cli(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(strip(a.out), strip(b.out));
}

}  // namespace
}  // namespace planarac
