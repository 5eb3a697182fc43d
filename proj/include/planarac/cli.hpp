#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "planarac/io.hpp"
#include "planarac/robust.hpp"
#include "planarac/solvers.hpp"
#include "planarac/synthetic.hpp"
#include "planarac/types.hpp"

namespace planarac::cli {

// Process exit codes. Stable; documented in the README.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitGeometry = 3;
inline constexpr int kExitInput = 4;
inline constexpr int kExitNoModel = 5;

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return kExitUsage;
    case ErrorCode::kGeometryRejection: return kExitGeometry;
    case ErrorCode::kParseError: return kExitInput;
    case ErrorCode::kNoModel:
    case ErrorCode::kNoVotes: return kExitNoModel;
    default: return kExitFailure;
  }
}

namespace internal {

// Thrown for problems the user fixes by changing flags.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown for unreadable or unsuitable input/output files.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenerateOptions {
  double sigma = 0.0;
  int points = 50;
  std::uint64_t seed = 42;
  std::vector<double> motion;
  double focal = 600.0;
  std::string out;
  std::string gt;
  std::string frame = "pixel";
  double corrupt = 0.0;
  int outliers = 0;
};

struct EstimateOptions {
  std::string in;
  std::string solver = "1ac";
  std::string robust = "none";
  std::string out;
  double threshold = 1.0;
  double confidence = 0.99;
  std::uint64_t seed = 42;
  double bin_width = 0.5;
  std::optional<double> focal;
};

struct BenchmarkOptions {
  std::vector<double> sigmas = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                0.6, 0.7, 0.8, 0.9, 1.0};
  int trials = 1000;
  std::vector<std::string> solvers = {"1ac", "1acf", "3pc", "2pc"};
  std::uint64_t seed = 42;
  std::string out;
  int points = 50;
  double corrupt = 0.0;
  std::string robust = "none";
};

inline SolverKind solver_or_throw(const std::string& name) {
  const auto kind = parse_solver(name);
  if (!kind) {
    throw UsageError("unknown solver '" + name +
                     "' (expected 1ac, 1acf, 3pc or 2pc)");
  }
  return *kind;
}

// Output goes to a file when a path is given, else to the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw InputError("cannot open '" + path + "' for writing");
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

inline int run_generate(const GenerateOptions& o, std::ostream& out) {
  if (o.points < 4) {
    throw UsageError("--points must be >= 4 (a homography needs at least 4 "
                     "points)");
  }
  if (!(o.sigma >= 0.0) || !(o.corrupt >= 0.0)) {
    throw UsageError("--sigma and --corrupt must be >= 0");
  }
  if (!(o.focal > 0.0)) throw UsageError("--focal must be > 0");
  if (o.outliers < 0) throw UsageError("--outliers must be >= 0");
  if (!o.motion.empty() && o.motion.size() != 2) {
    throw UsageError("--motion takes alpha,beta");
  }
  if (o.frame != "pixel" && o.frame != "normalized") {
    throw UsageError("--frame must be 'pixel' or 'normalized'");
  }

  SceneConfig config;
  config.noise_sigma = o.sigma;
  config.points = o.points;
  config.focal = o.focal;
  config.planarity_sigma_deg = o.corrupt;
  config.seed = o.seed;

  Rng rng = trial_rng(o.seed, 0);
  const PlanarMotion motion = o.motion.empty()
                                  ? sample_motion(config, rng)
                                  : PlanarMotion(o.motion[0], o.motion[1]);
  CameraPose pose = planar_pose(motion);
  if (o.corrupt > 0.0) {
    Rng tilt_rng = trial_rng(o.seed, 0, 1);
    pose = corrupt_planarity(motion, o.corrupt, tilt_rng);
  }
  SyntheticScene scene = generate_scene(config, motion, pose, rng);
  if (o.outliers > 0) {
    Rng outlier_rng = trial_rng(o.seed, 0, 2);
    add_outliers(scene, o.outliers, outlier_rng);
  }

  io::CorrespondenceFile file;
  file.frame = o.frame == "pixel" ? io::Frame::kPixel : io::Frame::kNormalized;
  file.intrinsics = scene.intrinsics;
  file.acs = file.frame == io::Frame::kPixel ? scene.pixel : scene.normalized;

  {
    Sink sink(o.out, out);
    io::write_correspondences(sink.get(), file);
  }
  Sink gt_sink(o.gt.empty() ? o.out + ".gt" : o.gt, out);
  io::write_ground_truth(gt_sink.get(),
                         {motion.alpha, motion.beta, config.focal});
  return kExitOk;
}

inline io::CorrespondenceFile load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return io::read_correspondences(in);
  } catch (const Error& e) {
    throw InputError(path + ": " + e.what());
  }
}

// Correspondences in the frame the solver expects: normalized for calibrated
// solvers, principal-point-centered pixels for the semi-calibrated one.
inline std::vector<AffineCorrespondence> solver_frame(
    const io::CorrespondenceFile& file, bool semi) {
  const auto& k = file.intrinsics;
  std::vector<AffineCorrespondence> out;
  out.reserve(file.acs.size());
  if (file.frame == io::Frame::kNormalized) {
    if (!semi) return file.acs;
    if (!k) {
      throw InputError("1acf needs pixel coordinates: a normalized file must "
                       "carry intrinsics");
    }
    const Eigen::Vector2d f(k->fx, k->fy);
    for (const AffineCorrespondence& ac : file.acs) {
      AffineCorrespondence c = ac;
      c.p1 = ac.p1.cwiseProduct(f);
      c.p2 = ac.p2.cwiseProduct(f);
      for (int r = 0; r < 2; ++r) {
        for (int col = 0; col < 2; ++col) {
          c.affine(r, col) = ac.affine(r, col) * f(r) / f(col);
        }
      }
      out.push_back(c);
    }
    return out;
  }
  if (semi) {
    // Without intrinsics the pixels are taken as already centered.
    if (!k) return file.acs;
    for (const AffineCorrespondence& ac : file.acs) out.push_back(k->center(ac));
    return out;
  }
  if (!k) {
    throw InputError("pixel-frame file has no intrinsics; calibrated solvers "
                     "need them");
  }
  for (const AffineCorrespondence& ac : file.acs) out.push_back(k->normalize(ac));
  return out;
}

inline io::ResultRecord score(const PlanarMotion& m, const std::string& solver,
                              const std::string& robust,
                              std::span<const AffineCorrespondence> acs,
                              double focal, double threshold) {
  io::ResultRecord r;
  r.solver = solver;
  r.robust = robust;
  r.alpha = m.alpha;
  r.beta = m.beta;
  r.focal = m.focal;
  std::vector<double> residuals;
  residuals.reserve(acs.size());
  for (const AffineCorrespondence& ac : acs) {
    try {
      residuals.push_back(model_residual_px(m, ac, focal));
    } catch (const Error&) {
    }
  }
  if (!residuals.empty()) {
    double sum = 0.0;
    for (const double v : residuals) {
      sum += v;
      if (v < threshold) ++r.inliers;
    }
    r.residual_mean_px = sum / static_cast<double>(residuals.size());
    const auto mid = residuals.begin() + residuals.size() / 2;
    std::nth_element(residuals.begin(), mid, residuals.end());
    r.residual_median_px = *mid;
    if (residuals.size() % 2 == 0) {
      const double lower =
          *std::max_element(residuals.begin(), mid);
      r.residual_median_px = 0.5 * (r.residual_median_px + lower);
    }
  }
  return r;
}

inline int run_estimate(const EstimateOptions& o, std::ostream& out,
                        std::ostream& err) {
  const SolverKind kind = solver_or_throw(o.solver);
  if (o.robust != "none" && o.robust != "hist" && o.robust != "ransac") {
    throw UsageError("--robust must be none, hist or ransac");
  }
  if (o.robust == "hist" && sample_size(kind) != 1) {
    throw UsageError("histogram voting needs a one-correspondence solver "
                     "(1ac or 1acf)");
  }
  if (!(o.threshold > 0.0)) throw UsageError("--threshold must be > 0");
  if (!(o.confidence > 0.0) || !(o.confidence < 1.0)) {
    throw UsageError("--confidence must be in (0, 1)");
  }
  if (!(o.bin_width > 0.0)) throw UsageError("--bin-width must be > 0");
  if (o.focal && !(*o.focal > 0.0)) throw UsageError("--focal must be > 0");

  const io::CorrespondenceFile file = load(o.in);
  const bool semi = is_semi_calibrated(kind);
  const std::vector<AffineCorrespondence> acs = solver_frame(file, semi);
  // Pixel scale for residuals of calibrated models.
  const double focal =
      o.focal ? *o.focal : (file.intrinsics ? file.intrinsics->fx : 1.0);

  using Clock = std::chrono::steady_clock;
  std::vector<io::ResultRecord> records;
  if (o.robust == "none") {
    const std::size_t m = static_cast<std::size_t>(sample_size(kind));
    for (std::size_t start = 0; start + m <= acs.size(); start += m) {
      const auto sample = std::span(acs).subspan(start, m);
      const auto t0 = Clock::now();
      try {
        // The solver sees only the sample; its candidates are told apart
        // with the whole file, as in the benchmark.
        const PlanarMotion model =
            select_candidate(run_solver(kind, sample), acs, focal);
        const double ms =
            std::chrono::duration<double, std::milli>(Clock::now() - t0)
                .count();
        records.push_back(score(model, o.solver, o.robust, acs, focal,
                                o.threshold));
        records.back().time_ms = ms;
      } catch (const Error& e) {
        err << "sample at record " << start + 1 << ": " << e.what() << '\n';
      }
    }
    if (records.empty()) {
      throw Error(ErrorCode::kNoModel, "no minimal sample produced a model");
    }
  } else {
    const auto t0 = Clock::now();
    PlanarMotion model;
    if (o.robust == "hist") {
      HistogramConfig hc;
      hc.bin_width = deg_to_rad(o.bin_width);
      model = histogram_vote(acs, kind, hc).motion;
    } else {
      RansacConfig rc;
      rc.confidence = o.confidence;
      rc.threshold_px = o.threshold;
      rc.focal_px = focal;
      rc.seed = o.seed;
      model = ransac_estimate(acs, kind, rc).motion;
    }
    const double ms =
        std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    records.push_back(score(model, o.solver, o.robust, acs, focal,
                            o.threshold));
    records.back().time_ms = ms;
  }

  Sink sink(o.out, out);
  io::write_results_header(sink.get());
  for (const io::ResultRecord& r : records) io::write_result(sink.get(), r);
  return kExitOk;
}

inline int run_benchmark(const BenchmarkOptions& o, std::ostream& out) {
  if (o.sigmas.empty()) throw UsageError("--sigmas must not be empty");
  for (const double s : o.sigmas) {
    if (!(s >= 0.0)) throw UsageError("--sigmas must be >= 0");
  }
  if (o.trials < 1) throw UsageError("--trials must be >= 1");
  if (o.points < 4) {
    throw UsageError("--points must be >= 4 (a homography needs at least 4 "
                     "points)");
  }
  if (!(o.corrupt >= 0.0)) throw UsageError("--corrupt must be >= 0");
  if (o.solvers.empty()) throw UsageError("--solvers must not be empty");
  std::vector<SolverKind> kinds;
  for (const std::string& s : o.solvers) kinds.push_back(solver_or_throw(s));

  SweepOptions options;
  if (o.robust == "hist") {
    for (const SolverKind k : kinds) {
      if (sample_size(k) != 1) {
        throw UsageError("histogram voting needs 1ac or 1acf");
      }
    }
    options.robust = RobustMode::kHistogram;
  } else if (o.robust == "ransac") {
    options.robust = RobustMode::kRansac;
  } else if (o.robust != "none") {
    throw UsageError("--robust must be none, hist or ransac");
  }

  SceneConfig config;
  config.trials = o.trials;
  config.seed = o.seed;
  config.points = o.points;
  config.planarity_sigma_deg = o.corrupt;
  const std::vector<SweepRow> rows =
      run_sweep(config, kinds, o.sigmas, options);

  io::write_benchmark(out, rows);
  return kExitOk;
}

}  // namespace internal

/// Runs the command line in-process. `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"Planar relative motion from affine correspondences",
               "planarac"};
  app.require_subcommand(1);

  internal::GenerateOptions gen;
  CLI::App* generate =
      app.add_subcommand("generate", "Write a synthetic correspondence file");
  generate->add_option("--sigma", gen.sigma, "Pixel noise sigma");
  generate->add_option("--points", gen.points, "Points on the plane");
  generate->add_option("--seed", gen.seed, "RNG seed");
  generate->add_option("--motion", gen.motion, "alpha,beta in radians")
      ->delimiter(',');
  generate->add_option("--focal", gen.focal, "Focal length in pixels");
  generate->add_option("--out", gen.out, "Correspondence file")->required();
  generate->add_option("--gt", gen.gt, "Ground-truth file (default <out>.gt)");
  generate->add_option("--frame", gen.frame, "pixel or normalized");
  generate->add_option("--corrupt", gen.corrupt,
                       "Planarity corruption sigma in degrees");
  generate->add_option("--outliers", gen.outliers,
                       "Random outlier correspondences to append");

  internal::EstimateOptions est;
  double focal_flag = 0.0;
  CLI::App* estimate =
      app.add_subcommand("estimate", "Estimate motion from a file");
  estimate->add_option("--in", est.in, "Correspondence file")->required();
  estimate->add_option("--solver", est.solver, "1ac, 1acf, 3pc or 2pc");
  estimate->add_option("--robust", est.robust, "none, hist or ransac");
  estimate->add_option("--out", est.out, "Results file (default stdout)");
  estimate->add_option("--threshold", est.threshold,
                       "Inlier threshold in pixels");
  estimate->add_option("--confidence", est.confidence, "RANSAC confidence");
  estimate->add_option("--seed", est.seed, "RANSAC seed");
  estimate->add_option("--bin-width", est.bin_width,
                       "Histogram bin width in degrees");
  CLI::Option* focal_opt = estimate->add_option(
      "--focal", focal_flag, "Pixel scale of normalized residuals");

  internal::BenchmarkOptions bench;
  CLI::App* benchmark =
      app.add_subcommand("benchmark", "Synthetic noise sweep");
  benchmark->add_option("--sigmas", bench.sigmas, "Comma list of sigmas")
      ->delimiter(',');
  benchmark->add_option("--trials", bench.trials, "Trials per sigma");
  benchmark->add_option("--solvers", bench.solvers, "Comma list of solvers")
      ->delimiter(',');
  benchmark->add_option("--seed", bench.seed, "RNG seed");
  benchmark->add_option("--out", bench.out, "Output CSV (default stdout)");
  benchmark->add_option("--points", bench.points, "Points per scene");
  benchmark->add_option("--corrupt", bench.corrupt,
                        "Planarity corruption sigma in degrees");
  benchmark->add_option("--robust", bench.robust, "none, hist or ransac");

  std::vector<std::string> argv_store = {"planarac"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (generate->parsed()) return internal::run_generate(gen, out);
    if (estimate->parsed()) {
      if (focal_opt->count() > 0) est.focal = focal_flag;
      return internal::run_estimate(est, out, err);
    }
    internal::Sink sink(bench.out, out);
    return internal::run_benchmark(bench, sink.get());
  } catch (const internal::UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const internal::InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
}

}  // namespace planarac::cli
