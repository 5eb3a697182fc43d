#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "planarac/geometry.hpp"
#include "planarac/robust.hpp"
#include "planarac/solvers.hpp"
#include "planarac/types.hpp"

namespace planarac {

using Rng = std::mt19937_64;

/// Synthetic two-view setup. Defaults follow the usual benchmark camera: 600 px
/// focal length, principal point (300, 300), 50 points on a random plane.
struct SceneConfig {
  double focal = 600.0;
  double cx = 300.0;
  double cy = 300.0;
  int points = 50;
  double noise_sigma = 0.0;          // pixels, added to both images
  double planarity_sigma_deg = 0.0;  // tilt of the second camera
  double alpha_min = -0.3;
  double alpha_max = 0.3;
  double beta_min = -kPi;
  double beta_max = kPi;
  int trials = 1000;
  std::uint64_t seed = 42;

  // Scene shape knobs.
  double depth_min = 3.0;
  double depth_max = 10.0;
  // Minimum |cos| between the plane normal and either optical axis; rejects
  // planes seen at grazing angles.
  double min_plane_incidence = 0.3;
  // Minimum |n_y|. A plane containing the vertical axis makes the epipolar row
  // and the third affine row of every AC proportional, so single-AC solvers
  // lose a constraint on the whole scene.
  double min_plane_vertical = 0.3;

  CameraIntrinsics intrinsics() const {
    return CameraIntrinsics(focal, focal, cx, cy);
  }

  void validate() const {
    if (points < 4) {
      throw Error(ErrorCode::kInvalidArgument,
                  "at least 4 points are needed to estimate a homography");
    }
    if (!(noise_sigma >= 0.0) || !(planarity_sigma_deg >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "sigmas must be >= 0");
    }
    if (!(focal > 0.0) || !(cx > 0.0) || !(cy > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "focal and principal point must be > 0");
    }
    if (!(alpha_max >= alpha_min) || !(beta_max >= beta_min)) {
      throw Error(ErrorCode::kInvalidArgument, "empty motion range");
    }
    if (!(depth_min > 0.0) || !(depth_max > depth_min)) {
      throw Error(ErrorCode::kInvalidArgument, "invalid depth range");
    }
    if (!(min_plane_incidence >= 0.0 && min_plane_incidence < 1.0) ||
        !(min_plane_vertical >= 0.0 && min_plane_vertical < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "plane rejection bounds must lie in [0, 1)");
    }
  }
};

/// Second-camera pose used for projection: X2 = rotation * X1 + translation.
struct CameraPose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::UnitX();
  // Perturbation that was applied on top of the planar rotation.
  Eigen::Vector3d tilt_axis = Eigen::Vector3d::UnitX();
  double tilt_deg = 0.0;
};

inline CameraPose planar_pose(const PlanarMotion& m) {
  CameraPose pose;
  pose.rotation = rotation_of(m);
  pose.translation = translation_of(m);
  return pose;
}

/// Tilts the second camera about a random horizontal axis by an angle drawn
/// from N(0, sigma_deg^2). The translation is left planar.
inline CameraPose corrupt_planarity(const PlanarMotion& m, double sigma_deg,
                                    Rng& rng) {
  if (!(sigma_deg >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sigma must be >= 0");
  }
  CameraPose pose = planar_pose(m);
  if (sigma_deg == 0.0) return pose;
  std::uniform_real_distribution<double> heading(0.0, 2.0 * kPi);
  std::normal_distribution<double> tilt(0.0, sigma_deg);
  const double phi = heading(rng);
  pose.tilt_axis = Eigen::Vector3d(std::cos(phi), 0.0, std::sin(phi));
  pose.tilt_deg = tilt(rng);
  pose.rotation =
      Eigen::AngleAxisd(deg_to_rad(pose.tilt_deg), pose.tilt_axis)
          .toRotationMatrix() *
      pose.rotation;
  return pose;
}

/// Normalized DLT homography mapping p1 -> p2 (>= 4 correspondences).
inline Eigen::Matrix3d estimate_homography(
    std::span<const Eigen::Vector2d> p1, std::span<const Eigen::Vector2d> p2) {
  if (p1.size() != p2.size() || p1.size() < 4) {
    throw Error(ErrorCode::kInvalidArgument,
                "homography needs at least 4 point pairs");
  }
  auto normalizer = [](std::span<const Eigen::Vector2d> pts) {
    Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
    for (const auto& p : pts) centroid += p;
    centroid /= static_cast<double>(pts.size());
    double dist = 0.0;
    for (const auto& p : pts) dist += (p - centroid).norm();
    dist /= static_cast<double>(pts.size());
    const double s = dist > 0.0 ? std::sqrt(2.0) / dist : 1.0;
    Eigen::Matrix3d t;
    t << s, 0.0, -s * centroid.x(), 0.0, s, -s * centroid.y(), 0.0, 0.0, 1.0;
    return t;
  };
  const Eigen::Matrix3d t1 = normalizer(p1);
  const Eigen::Matrix3d t2 = normalizer(p2);

  const Eigen::Index n = static_cast<Eigen::Index>(p1.size());
  Eigen::MatrixXd a(2 * n, 9);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector3d x = t1 * p1[i].homogeneous();
    const Eigen::Vector3d y = t2 * p2[i].homogeneous();
    const double u = y.x() / y.z();
    const double v = y.y() / y.z();
    a.row(2 * i) << 0.0, 0.0, 0.0, -x.x(), -x.y(), -x.z(), v * x.x(),
        v * x.y(), v * x.z();
    a.row(2 * i + 1) << x.x(), x.y(), x.z(), 0.0, 0.0, 0.0, -u * x.x(),
        -u * x.y(), -u * x.z();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::Matrix<double, 9, 1> h = svd.matrixV().col(8);
  Eigen::Matrix3d hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  Eigen::Matrix3d out = t2.inverse() * hn * t1;
  return out / out.norm();
}

/// Plane n . X = d in the first camera frame.
struct Plane {
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
  double offset = 1.0;
};

/// Pixel homography induced by the plane: K (R + t n^T / d) K^-1.
inline Eigen::Matrix3d plane_homography(const CameraIntrinsics& k,
                                        const CameraPose& pose,
                                        const Plane& plane) {
  const Eigen::Matrix3d km = k.matrix();
  const Eigen::Matrix3d h =
      km *
      (pose.rotation + pose.translation * plane.normal.transpose() / plane.offset) *
      km.inverse();
  return h / h.norm();
}

struct SyntheticScene {
  PlanarMotion motion;  // ground truth used for scoring
  CameraPose pose;      // pose used for projection
  CameraIntrinsics intrinsics;
  Plane plane;
  Eigen::Matrix3d homography;  // estimated from the noisy pixels
  std::vector<Eigen::Vector3d> points;
  std::vector<AffineCorrespondence> pixel;
  std::vector<AffineCorrespondence> normalized;
  std::vector<AffineCorrespondence> centered;
  int outliers = 0;  // trailing entries of the AC lists that are gross outliers
};

inline PlanarMotion sample_motion(const SceneConfig& config, Rng& rng) {
  std::uniform_real_distribution<double> alpha(config.alpha_min,
                                               config.alpha_max);
  std::uniform_real_distribution<double> beta(config.beta_min,
                                              config.beta_max);
  const double a = alpha(rng);
  const double b = beta(rng);
  return PlanarMotion(a, b);
}

namespace internal {

inline std::optional<std::vector<Eigen::Vector3d>> sample_plane_points(
    const SceneConfig& config, const CameraIntrinsics& k,
    const CameraPose& pose, const Plane& plane, Rng& rng) {
  const double width = 2.0 * config.cx;
  const double height = 2.0 * config.cy;
  std::uniform_real_distribution<double> ux(0.0, width);
  std::uniform_real_distribution<double> uy(0.0, height);
  const Eigen::Matrix3d kinv = k.matrix().inverse();
  std::vector<Eigen::Vector3d> out;
  const int max_tries = 200 * config.points;
  for (int tries = 0; tries < max_tries &&
                      static_cast<int>(out.size()) < config.points;
       ++tries) {
    const Eigen::Vector3d ray = kinv * Eigen::Vector3d(ux(rng), uy(rng), 1.0);
    const double denom = plane.normal.dot(ray);
    if (std::abs(denom) < 1e-9) continue;
    const Eigen::Vector3d x = (plane.offset / denom) * ray;
    if (x.z() < config.depth_min || x.z() > config.depth_max) continue;
    const Eigen::Vector3d x2 = pose.rotation * x + pose.translation;
    if (x2.z() < 0.5 * config.depth_min) continue;
    const Eigen::Vector2d u2 = k.denormalize(x2.hnormalized());
    if (u2.x() < 0.0 || u2.x() > width || u2.y() < 0.0 || u2.y() > height) {
      continue;
    }
    out.push_back(x);
  }
  if (static_cast<int>(out.size()) < config.points) return std::nullopt;
  return out;
}

}  // namespace internal

/// Random plane seen by both cameras, `config.points` points on it, Gaussian
/// pixel noise on both images, and affinities taken from the homography fitted
/// to the noisy points. `pose` lets callers project with a non-planar pose
/// while `motion` stays the scoring ground truth.
inline SyntheticScene generate_scene(const SceneConfig& config,
                                     const PlanarMotion& motion,
                                     const CameraPose& pose, Rng& rng) {
  config.validate();
  SyntheticScene scene;
  scene.motion = motion;
  scene.pose = pose;
  scene.intrinsics = config.intrinsics();
  const CameraIntrinsics& k = scene.intrinsics;

  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> depth(config.depth_min,
                                               config.depth_max);
  const Eigen::Vector3d c2 = -pose.rotation.transpose() * pose.translation;

  bool found = false;
  for (int attempt = 0; attempt < 100 && !found; ++attempt) {
    Eigen::Vector3d n(gauss(rng), gauss(rng), gauss(rng));
    if (n.norm() < 1e-9) continue;
    n.normalize();
    if (std::abs(n.y()) < config.min_plane_vertical ||
        std::abs(n.z()) < config.min_plane_incidence ||
        std::abs((pose.rotation * n).z()) < config.min_plane_incidence) {
      continue;
    }
    Plane plane{n, n.z() * depth(rng)};
    // Both camera centres must see the same side of the plane.
    if ((0.0 - plane.offset) * (n.dot(c2) - plane.offset) <= 0.0) continue;
    auto pts = internal::sample_plane_points(config, k, pose, plane, rng);
    if (!pts) continue;
    scene.plane = plane;
    scene.points = std::move(*pts);
    found = true;
  }
  if (!found) {
    throw Error(ErrorCode::kGeometryRejection,
                "no valid plane found in 100 attempts");
  }

  std::vector<Eigen::Vector2d> u1, u2;
  u1.reserve(scene.points.size());
  u2.reserve(scene.points.size());
  for (const Eigen::Vector3d& x : scene.points) {
    const Eigen::Vector3d x2 = pose.rotation * x + pose.translation;
    Eigen::Vector2d a = k.denormalize(x.hnormalized());
    Eigen::Vector2d b = k.denormalize(x2.hnormalized());
    // Always drawn, so the stream does not depend on sigma.
    const Eigen::Vector4d noise(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
    a += config.noise_sigma * noise.head<2>();
    b += config.noise_sigma * noise.tail<2>();
    u1.push_back(a);
    u2.push_back(b);
  }

  scene.homography = estimate_homography(u1, u2);
  for (std::size_t i = 0; i < u1.size(); ++i) {
    AffineCorrespondence ac;
    ac.p1 = u1[i];
    ac.p2 = u2[i];
    ac.affine = affine_from_homography(scene.homography, u1[i]).affine;
    scene.pixel.push_back(ac);
    scene.normalized.push_back(k.normalize(ac));
    scene.centered.push_back(k.center(ac));
  }
  return scene;
}

inline SyntheticScene generate_scene(const SceneConfig& config,
                                     const PlanarMotion& motion, Rng& rng) {
  return generate_scene(config, motion, planar_pose(motion), rng);
}

/// Appends `count` gross outliers: independent uniform points in both images
/// and a random similarity-plus-shear affinity, unrelated to the scene.
inline void add_outliers(SyntheticScene& scene, int count, Rng& rng) {
  if (count < 0) {
    throw Error(ErrorCode::kInvalidArgument, "outlier count must be >= 0");
  }
  const CameraIntrinsics& k = scene.intrinsics;
  std::uniform_real_distribution<double> ux(0.0, 2.0 * k.cx);
  std::uniform_real_distribution<double> uy(0.0, 2.0 * k.cy);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_real_distribution<double> log_scale(std::log(0.5),
                                                   std::log(2.0));
  std::uniform_real_distribution<double> shear(-0.3, 0.3);
  for (int i = 0; i < count; ++i) {
    AffineCorrespondence ac;
    ac.p1 = {ux(rng), uy(rng)};
    ac.p2 = {ux(rng), uy(rng)};
    Eigen::Matrix2d shape;
    shape << std::exp(log_scale(rng)), shear(rng), 0.0,
        std::exp(log_scale(rng));
    ac.affine = Eigen::Rotation2Dd(angle(rng)).toRotationMatrix() * shape;
    scene.pixel.push_back(ac);
    scene.normalized.push_back(k.normalize(ac));
    scene.centered.push_back(k.center(ac));
  }
  scene.outliers += count;
}

// --- Sweep -------------------------------------------------------------------

enum class RobustMode { kNone, kHistogram, kRansac };

struct TrialResult {
  SolverKind solver = SolverKind::k1AC;
  double sigma = 0.0;
  int trial = 0;
  bool ok = false;
  std::string failure;
  PlanarMotion truth;
  PlanarMotion estimate;
  double rotation_error_deg = 0.0;
  double translation_error_deg = 0.0;
  std::optional<double> focal_error_rel;
  double time_ms = 0.0;
};

struct SweepRow {
  SolverKind solver = SolverKind::k1AC;
  double sigma = 0.0;
  int trials = 0;
  int failures = 0;
  double mean_rot_deg = 0.0;
  double std_rot_deg = 0.0;
  double mean_tr_deg = 0.0;
  double std_tr_deg = 0.0;
  std::optional<double> mean_focal_rel;
  std::optional<double> std_focal_rel;
  double fail_rate = 0.0;
  double mean_ms = 0.0;
};

/// Picks among solver candidates using the whole scene: most points in front
/// of both cameras, then lowest mean Sampson error. Candidates that fit only
/// the minimal sample (the spurious 2PC root) lose on the second key.
inline PlanarMotion select_candidate(const CandidateSet& candidates,
                                     std::span<const AffineCorrespondence> acs,
                                     double focal_px) {
  if (candidates.empty()) {
    throw Error(ErrorCode::kNoCandidate, "candidate set is empty");
  }
  std::size_t best = 0;
  int best_front = -1;
  double best_err = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const PlanarMotion& m = candidates[i].motion;
    const int front = count_in_front(m, acs);
    double err = 0.0;
    for (const AffineCorrespondence& ac : acs) {
      try {
        err += model_residual_px(m, ac, focal_px);
      } catch (const Error&) {
      }
    }
    err /= static_cast<double>(std::max<std::size_t>(acs.size(), 1));
    if (front > best_front || (front == best_front && err < best_err)) {
      best = i;
      best_front = front;
      best_err = err;
    }
  }
  return candidates[best].motion;
}

struct SweepOptions {
  RobustMode robust = RobustMode::kNone;
  // Minimal samples whose sample_conditioning() falls below this are skipped
  // in favour of the next disjoint group of the scene.
  double min_sample_conditioning = 1e-5;
  HistogramConfig histogram;
  RansacConfig ransac;
};

/// First disjoint group of `sample_size(kind)` correspondences, in scene
/// order, that is not numerically degenerate for the solver.
inline std::span<const AffineCorrespondence> pick_minimal_sample(
    SolverKind kind, std::span<const AffineCorrespondence> acs,
    double min_conditioning) {
  const std::size_t m = static_cast<std::size_t>(sample_size(kind));
  if (acs.size() < m) {
    throw Error(ErrorCode::kDegenerateInput, "not enough correspondences");
  }
  // First disjoint group that clears the bar; when none does (near-vertical
  // planes make every affinity weak) the best-conditioned group is used.
  std::span<const AffineCorrespondence> best = acs.subspan(0, m);
  double best_cond = -1.0;
  for (std::size_t start = 0; start + m <= acs.size(); start += m) {
    const auto sample = acs.subspan(start, m);
    const double cond = sample_conditioning(kind, sample);
    if (cond >= min_conditioning) return sample;
    if (cond > best_cond) {
      best_cond = cond;
      best = sample;
    }
  }
  return best;
}

/// Per-trial stream split from the master seed. The sigma index is not mixed
/// in: trial k sees the same motion, plane, points and unit noise draws at
/// every noise level, so a sweep compares like with like.
inline Rng trial_rng(std::uint64_t seed, int trial, std::uint32_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), stream};
  return Rng(seq);
}

/// Scores one solver on one scene. Failures are recorded, never thrown.
inline TrialResult run_solver_on_scene(SolverKind kind,
                                       const SyntheticScene& scene,
                                       const SweepOptions& options = {}) {
  TrialResult r;
  r.solver = kind;
  r.truth = scene.motion;
  const bool semi = is_semi_calibrated(kind);
  const std::vector<AffineCorrespondence>& acs =
      semi ? scene.centered : scene.normalized;
  const double focal = scene.intrinsics.fx;

  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  try {
    if (options.robust == RobustMode::kHistogram) {
      r.estimate = histogram_vote(acs, kind, options.histogram).motion;
    } else if (options.robust == RobustMode::kRansac) {
      RansacConfig rc = options.ransac;
      rc.focal_px = focal;
      r.estimate = ransac_estimate(acs, kind, rc).motion;
    } else {
      const auto sample = pick_minimal_sample(
          kind, acs, options.min_sample_conditioning);
      const CandidateSet candidates = run_solver(kind, sample);
      r.estimate = select_candidate(candidates, acs, focal);
    }
    r.ok = true;
  } catch (const Error& e) {
    r.failure = e.what();
  }
  r.time_ms = std::chrono::duration<double, std::milli>(Clock::now() - start)
                  .count();
  if (!r.ok) return r;

  r.rotation_error_deg =
      rotation_error(rotation_of(r.estimate), rotation_of(r.truth));
  r.translation_error_deg =
      translation_error(translation_of(r.estimate), translation_of(r.truth));
  if (semi) {
    if (r.estimate.focal) {
      r.focal_error_rel = std::abs(*r.estimate.focal - focal) / focal;
    } else {
      r.ok = false;
      r.failure = "no focal estimate";
    }
  }
  return r;
}

/// Every (sigma, trial, solver) result. Deterministic for a fixed seed except
/// for the timing field.
inline std::vector<TrialResult> run_trials(const SceneConfig& config,
                                           std::span<const SolverKind> solvers,
                                           std::span<const double> sigmas,
                                           const SweepOptions& options = {}) {
  if (solvers.empty() || sigmas.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "need solvers and sigmas");
  }
  config.validate();
  if (config.trials < 1) {
    throw Error(ErrorCode::kInvalidArgument, "trials must be >= 1");
  }
  std::vector<TrialResult> out;
  out.reserve(solvers.size() * sigmas.size() * config.trials);
  for (std::size_t si = 0; si < sigmas.size(); ++si) {
    SceneConfig cfg = config;
    cfg.noise_sigma = sigmas[si];
    cfg.validate();
    for (int trial = 0; trial < config.trials; ++trial) {
      Rng rng = trial_rng(config.seed, trial);
      // The tilt has its own stream so that corrupting planarity leaves the
      // rest of the scene untouched.
      Rng tilt_rng = trial_rng(config.seed, trial, 1);
      const PlanarMotion motion = sample_motion(cfg, rng);
      const CameraPose pose =
          corrupt_planarity(motion, cfg.planarity_sigma_deg, tilt_rng);
      std::optional<SyntheticScene> scene;
      std::string failure;
      try {
        scene = generate_scene(cfg, motion, pose, rng);
      } catch (const Error& e) {
        failure = e.what();
      }
      for (const SolverKind kind : solvers) {
        TrialResult r;
        if (scene) {
          r = run_solver_on_scene(kind, *scene, options);
        } else {
          r.solver = kind;
          r.truth = motion;
          r.failure = failure;
        }
        r.sigma = sigmas[si];
        r.trial = trial;
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

namespace internal {

inline void mean_std(const std::vector<double>& v, double& mean, double& sd) {
  mean = 0.0;
  sd = 0.0;
  if (v.empty()) return;
  for (const double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return;
  for (const double x : v) sd += (x - mean) * (x - mean);
  sd = std::sqrt(sd / static_cast<double>(v.size() - 1));
}

}  // namespace internal

/// Per-(solver, sigma) aggregates, in the order solvers x sigmas first appear.
inline std::vector<SweepRow> aggregate(std::span<const TrialResult> results) {
  std::vector<SweepRow> rows;
  auto find_row = [&rows](SolverKind s, double sigma) -> SweepRow& {
    for (SweepRow& r : rows) {
      if (r.solver == s && r.sigma == sigma) return r;
    }
    rows.push_back({});
    rows.back().solver = s;
    rows.back().sigma = sigma;
    return rows.back();
  };
  for (const TrialResult& r : results) find_row(r.solver, r.sigma);

  for (SweepRow& row : rows) {
    std::vector<double> rot, tr, focal, ms;
    for (const TrialResult& r : results) {
      if (r.solver != row.solver || r.sigma != row.sigma) continue;
      ++row.trials;
      ms.push_back(r.time_ms);
      if (!r.ok) {
        ++row.failures;
        continue;
      }
      rot.push_back(r.rotation_error_deg);
      tr.push_back(r.translation_error_deg);
      if (r.focal_error_rel) focal.push_back(*r.focal_error_rel);
    }
    internal::mean_std(rot, row.mean_rot_deg, row.std_rot_deg);
    internal::mean_std(tr, row.mean_tr_deg, row.std_tr_deg);
    if (!focal.empty()) {
      double m = 0.0, s = 0.0;
      internal::mean_std(focal, m, s);
      row.mean_focal_rel = m;
      row.std_focal_rel = s;
    }
    double sd_unused = 0.0;
    internal::mean_std(ms, row.mean_ms, sd_unused);
    row.fail_rate = row.trials > 0
                        ? static_cast<double>(row.failures) / row.trials
                        : 0.0;
  }
  // Rows are sorted solver-major to match the CSV layout.
  std::vector<SweepRow> sorted;
  for (const SweepRow& r : rows) {
    bool placed = false;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (sorted[i].solver == r.solver) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j].solver == r.solver) ++j;
        sorted.insert(sorted.begin() + static_cast<std::ptrdiff_t>(j), r);
        placed = true;
        break;
      }
    }
    if (!placed) sorted.push_back(r);
  }
  return sorted;
}

inline std::vector<SweepRow> run_sweep(const SceneConfig& config,
                                       std::span<const SolverKind> solvers,
                                       std::span<const double> sigmas,
                                       const SweepOptions& options = {}) {
  const std::vector<TrialResult> results =
      run_trials(config, solvers, sigmas, options);
  return aggregate(results);
}

}  // namespace planarac
