#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "planarac/geometry.hpp"
#include "planarac/solvers.hpp"
#include "planarac/types.hpp"

namespace planarac {

/// First-order geometric error of (q1, q2) w.r.t. E(motion), in pixels.
/// The correspondence must be in normalized coordinates; `focal` converts the
/// normalized distance to pixels.
inline double sampson_error(const PlanarMotion& motion,
                            const AffineCorrespondence& ac, double focal) {
  if (!(focal > 0.0)) {
    throw Error(ErrorCode::kInvalidFocal, "focal length must be positive");
  }
  const EssentialMatrix e = build_essential(motion);
  const Eigen::Vector3d q1 = ac.p1.homogeneous();
  const Eigen::Vector3d q2 = ac.p2.homogeneous();
  const Eigen::Vector3d line2 = e * q1;
  const Eigen::Vector3d line1 = e.transpose() * q2;
  const double denom = std::sqrt(line2.head<2>().squaredNorm() +
                                 line1.head<2>().squaredNorm());
  if (denom < 1e-14) {
    throw Error(ErrorCode::kDegenerateResidual,
                "epipolar gradients vanish (points at the epipoles)");
  }
  return focal * std::abs(q2.dot(line2)) / denom;
}

/// Sampson error in pixels for a model of either kind. Semi-calibrated models
/// (with a focal length) read `ac` as principal-point-centered pixels; the
/// others read it as normalized and use `focal` for the unit conversion.
inline double model_residual_px(const PlanarMotion& motion,
                                const AffineCorrespondence& ac, double focal) {
  if (motion.focal) {
    return sampson_error(motion, scale_points(ac, 1.0 / *motion.focal),
                         *motion.focal);
  }
  return sampson_error(motion, ac, focal);
}

/// Iterations RANSAC needs to draw one all-inlier sample of size m with the
/// given confidence: ceil(log(1 - conf) / log(1 - ratio^m)).
inline std::size_t ransac_iterations(int sample_size, double inlier_ratio,
                                     double confidence) {
  if (sample_size < 1 || !(inlier_ratio > 0.0) || inlier_ratio > 1.0 ||
      !(confidence > 0.0) || !(confidence < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid RANSAC parameters");
  }
  if (inlier_ratio >= 1.0) return 1;
  const double p_good = std::pow(inlier_ratio, sample_size);
  const double n = std::ceil(std::log(1.0 - confidence) / std::log1p(-p_good));
  if (!(n < static_cast<double>(std::numeric_limits<std::size_t>::max()))) {
    return std::numeric_limits<std::size_t>::max();
  }
  return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

// --- Histogram voting --------------------------------------------------------

struct HistogramConfig {
  double bin_width = deg_to_rad(0.5);
  // tau in w = 1 / (1 + r / tau), r = the candidate's algebraic residual.
  double residual_scale = 1e-3;
  double kernel_sigma_bins = 1.0;
  int focal_bins = 200;
  double log10_focal_min = 2.0;
  double log10_focal_max = std::log10(5000.0);
};

struct Vote {
  double alpha = 0.0;
  double beta = 0.0;
  double weight = 1.0;
  std::optional<double> focal;
};

/// Weighted (alpha, beta) accumulator on a periodic grid, plus an optional
/// log-focal accumulator. Each vote is spread over its 3x3 neighbourhood by a
/// normalized Gaussian kernel, so the grid always sums to the total weight.
/// Merging is bin-wise addition.
class VoteHistogram {
 public:
  explicit VoteHistogram(const HistogramConfig& config = {})
      : config_(config) {
    if (!(config.bin_width > 0.0) || !(config.kernel_sigma_bins > 0.0) ||
        config.focal_bins < 1 ||
        !(config.log10_focal_max > config.log10_focal_min)) {
      throw Error(ErrorCode::kInvalidArgument, "invalid histogram config");
    }
    bins_ = static_cast<int>(std::ceil(2.0 * kPi / config.bin_width - 1e-9));
    grid_.assign(static_cast<std::size_t>(bins_) * bins_, 0.0);
    focal_grid_.assign(config.focal_bins, 0.0);
    const double s2 = 2.0 * config.kernel_sigma_bins * config.kernel_sigma_bins;
    double sum = 0.0;
    for (int i = -1; i <= 1; ++i) {
      for (int j = -1; j <= 1; ++j) {
        kernel_[i + 1][j + 1] = std::exp(-(i * i + j * j) / s2);
        sum += kernel_[i + 1][j + 1];
      }
    }
    for (auto& row : kernel_) {
      for (double& k : row) k /= sum;
    }
    for (int i = -1; i <= 1; ++i) kernel_1d_[i + 1] = std::exp(-(i * i) / s2);
  }

  const HistogramConfig& config() const { return config_; }
  int bins_per_axis() const { return bins_; }
  int focal_bins() const { return config_.focal_bins; }
  double total_weight() const { return total_weight_; }
  const std::vector<Vote>& votes() const { return votes_; }

  double bin(int alpha_index, int beta_index) const {
    return grid_[index(alpha_index, beta_index)];
  }
  double focal_bin(int i) const { return focal_grid_[i]; }

  int angle_bin(double angle) const {
    const int i = static_cast<int>(
        std::floor((wrap_angle(angle) + kPi) / config_.bin_width));
    return std::clamp(i, 0, bins_ - 1);
  }

  double bin_center(int i) const {
    return wrap_angle(-kPi + (i + 0.5) * config_.bin_width);
  }

  std::optional<int> log_focal_bin(double focal) const {
    if (!(focal > 0.0)) return std::nullopt;
    const double lf = std::log10(focal);
    if (lf < config_.log10_focal_min || lf >= config_.log10_focal_max) {
      return std::nullopt;
    }
    const double width = (config_.log10_focal_max - config_.log10_focal_min) /
                         config_.focal_bins;
    return std::min(config_.focal_bins - 1,
                    static_cast<int>((lf - config_.log10_focal_min) / width));
  }

  void add(const Vote& vote) {
    const int ia = angle_bin(vote.alpha);
    const int ib = angle_bin(vote.beta);
    for (int i = -1; i <= 1; ++i) {
      for (int j = -1; j <= 1; ++j) {
        grid_[index(wrap_bin(ia + i), wrap_bin(ib + j))] +=
            vote.weight * kernel_[i + 1][j + 1];
      }
    }
    if (vote.focal) {
      if (const auto fb = log_focal_bin(*vote.focal)) {
        double norm = 0.0;
        for (int i = -1; i <= 1; ++i) {
          if (*fb + i >= 0 && *fb + i < config_.focal_bins) {
            norm += kernel_1d_[i + 1];
          }
        }
        for (int i = -1; i <= 1; ++i) {
          if (*fb + i >= 0 && *fb + i < config_.focal_bins) {
            focal_grid_[*fb + i] += vote.weight * kernel_1d_[i + 1] / norm;
          }
        }
      }
    }
    total_weight_ += vote.weight;
    votes_.push_back(vote);
  }

  void merge(const VoteHistogram& other) {
    if (other.bins_ != bins_ || other.config_.focal_bins != config_.focal_bins) {
      throw Error(ErrorCode::kInvalidArgument, "histogram shapes differ");
    }
    for (std::size_t i = 0; i < grid_.size(); ++i) grid_[i] += other.grid_[i];
    for (std::size_t i = 0; i < focal_grid_.size(); ++i) {
      focal_grid_[i] += other.focal_grid_[i];
    }
    total_weight_ += other.total_weight_;
    votes_.insert(votes_.end(), other.votes_.begin(), other.votes_.end());
  }

  /// Weighted mean of the votes falling into the 3x3 neighbourhood of the
  /// heaviest bin. Focal (if any votes carried one) is the weighted geometric
  /// mean of the votes around the heaviest log-focal bin.
  PlanarMotion winner() const {
    if (votes_.empty() || !(total_weight_ > 0.0)) {
      throw Error(ErrorCode::kNoVotes, "histogram is empty");
    }
    const auto it = std::max_element(grid_.begin(), grid_.end());
    const int flat = static_cast<int>(it - grid_.begin());
    const int ia = flat / bins_;
    const int ib = flat % bins_;
    const double ca = bin_center(ia);
    const double cb = bin_center(ib);

    double wsum = 0.0, da = 0.0, db = 0.0;
    for (const Vote& v : votes_) {
      if (bin_distance(angle_bin(v.alpha), ia) <= 1 &&
          bin_distance(angle_bin(v.beta), ib) <= 1) {
        wsum += v.weight;
        da += v.weight * wrap_angle(v.alpha - ca);
        db += v.weight * wrap_angle(v.beta - cb);
      }
    }
    PlanarMotion out(ca, cb);
    if (wsum > 0.0) out = PlanarMotion(ca + da / wsum, cb + db / wsum);
    out.focal = focal_winner();
    return out;
  }

  std::optional<double> focal_winner() const {
    const auto it = std::max_element(focal_grid_.begin(), focal_grid_.end());
    if (it == focal_grid_.end() || !(*it > 0.0)) return std::nullopt;
    const int fb = static_cast<int>(it - focal_grid_.begin());
    double wsum = 0.0, lsum = 0.0;
    for (const Vote& v : votes_) {
      if (!v.focal) continue;
      const auto b = log_focal_bin(*v.focal);
      if (b && std::abs(*b - fb) <= 1) {
        wsum += v.weight;
        lsum += v.weight * std::log(*v.focal);
      }
    }
    if (!(wsum > 0.0)) return std::nullopt;
    return std::exp(lsum / wsum);
  }

 private:
  std::size_t index(int ia, int ib) const {
    return static_cast<std::size_t>(ia) * bins_ + ib;
  }
  int wrap_bin(int i) const { return ((i % bins_) + bins_) % bins_; }
  int bin_distance(int a, int b) const {
    const int d = std::abs(a - b);
    return std::min(d, bins_ - d);
  }

  HistogramConfig config_;
  int bins_ = 0;
  std::vector<double> grid_;
  std::vector<double> focal_grid_;
  double kernel_[3][3] = {};
  double kernel_1d_[3] = {};
  double total_weight_ = 0.0;
  std::vector<Vote> votes_;
};

struct HistogramResult {
  PlanarMotion motion;
  VoteHistogram histogram;
  std::size_t solver_calls = 0;
  std::size_t solver_failures = 0;
};

/// Runs the one-correspondence solver once per AC and votes with every
/// candidate that puts its own point in front of both cameras.
inline void accumulate_votes(std::span<const AffineCorrespondence> acs,
                             SolverKind kind, VoteHistogram& histogram,
                             std::size_t& calls, std::size_t& failures) {
  if (sample_size(kind) != 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "histogram voting needs a one-correspondence solver");
  }
  const double tau = histogram.config().residual_scale;
  for (const AffineCorrespondence& ac : acs) {
    ++calls;
    CandidateSet candidates;
    try {
      candidates = run_solver(kind, std::span(&ac, 1));
    } catch (const Error&) {
      ++failures;
      continue;
    }
    for (const Candidate& c : candidates) {
      if (count_in_front(c.motion, std::span(&ac, 1)) != 1) continue;
      histogram.add({c.motion.alpha, c.motion.beta,
                     1.0 / (1.0 + c.residual / tau), c.motion.focal});
    }
  }
}

inline HistogramResult histogram_vote(std::span<const AffineCorrespondence> acs,
                                      SolverKind kind,
                                      const HistogramConfig& config = {}) {
  HistogramResult result{PlanarMotion{}, VoteHistogram(config), 0, 0};
  accumulate_votes(acs, kind, result.histogram, result.solver_calls,
                   result.solver_failures);
  if (result.histogram.votes().empty()) {
    throw Error(ErrorCode::kNoVotes, "no correspondence produced a vote");
  }
  result.motion = result.histogram.winner();
  return result;
}

// --- RANSAC ------------------------------------------------------------------

struct RansacConfig {
  double confidence = 0.99;
  double threshold_px = 1.0;
  std::size_t max_iterations = 10000;
  // 0 means the solver's minimal sample size.
  int sample_size = 0;
  // Converts normalized residuals to pixels for calibrated solvers.
  double focal_px = 1.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(confidence > 0.0) || !(confidence < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "confidence must be in (0, 1)");
    }
    if (!(threshold_px > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "threshold must be > 0");
    }
    if (sample_size < 0 || sample_size > 3) {
      throw Error(ErrorCode::kInvalidArgument, "sample size must be 1, 2 or 3");
    }
    if (!(focal_px > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "focal must be > 0");
    }
  }
};

struct RansacResult {
  PlanarMotion motion;
  std::vector<bool> inliers;
  std::size_t inlier_count = 0;
  std::size_t iterations = 0;
};

namespace internal {

inline std::size_t count_inliers(const PlanarMotion& m,
                                 std::span<const AffineCorrespondence> acs,
                                 const RansacConfig& config,
                                 std::vector<bool>* mask = nullptr) {
  std::size_t count = 0;
  if (mask) mask->assign(acs.size(), false);
  for (std::size_t i = 0; i < acs.size(); ++i) {
    bool inlier = false;
    try {
      inlier = model_residual_px(m, acs[i], config.focal_px) <
               config.threshold_px;
    } catch (const Error&) {
    }
    if (inlier) {
      ++count;
      if (mask) (*mask)[i] = true;
    }
  }
  return count;
}

}  // namespace internal

/// Plain adaptive RANSAC around a minimal solver. Inliers are correspondences
/// whose Sampson error is below the pixel threshold.
inline RansacResult ransac_estimate(std::span<const AffineCorrespondence> acs,
                                    SolverKind kind,
                                    const RansacConfig& config = {}) {
  config.validate();
  const int m = sample_size(kind);
  if (config.sample_size != 0 && config.sample_size != m) {
    throw Error(ErrorCode::kInvalidArgument,
                "sample size does not match the solver");
  }
  if (acs.size() < static_cast<std::size_t>(m)) {
    throw Error(ErrorCode::kNoModel, "fewer correspondences than sample size");
  }

  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<std::size_t> pick(0, acs.size() - 1);
  std::vector<AffineCorrespondence> sample(m);
  std::vector<std::size_t> indices(m);

  std::size_t bound = config.max_iterations;
  std::size_t best_count = 0;
  bool have_model = false;
  CandidateSet best_candidates;
  RansacResult result;

  std::size_t it = 0;
  for (; it < bound; ++it) {
    for (int k = 0; k < m; ++k) {
      std::size_t idx;
      do {
        idx = pick(rng);
      } while (std::find(indices.begin(), indices.begin() + k, idx) !=
               indices.begin() + k);
      indices[k] = idx;
      sample[k] = acs[idx];
    }
    CandidateSet candidates;
    try {
      candidates = run_solver(kind, sample);
    } catch (const Error&) {
      continue;
    }
    const PlanarMotion model = cheirality_select(candidates, sample);
    const std::size_t count = internal::count_inliers(model, acs, config);
    if (!have_model || count > best_count) {
      have_model = true;
      best_count = count;
      best_candidates = std::move(candidates);
      if (count > 0) {
        bound = std::min(
            config.max_iterations,
            ransac_iterations(m, static_cast<double>(count) / acs.size(),
                              config.confidence));
      }
    }
  }
  if (!have_model) {
    throw Error(ErrorCode::kNoModel, "no sample produced a model");
  }

  // Re-select among all candidates of the winning sample. Sign twins share
  // their Sampson errors, so ties go to the one with more inliers in front.
  std::size_t final_count = 0;
  int final_front = -1;
  for (const Candidate& c : best_candidates) {
    std::vector<bool> mask;
    const std::size_t count =
        internal::count_inliers(c.motion, acs, config, &mask);
    std::vector<AffineCorrespondence> inlier_acs;
    for (std::size_t i = 0; i < acs.size(); ++i) {
      if (mask[i]) inlier_acs.push_back(acs[i]);
    }
    const int front = count_in_front(c.motion, inlier_acs);
    if (final_front < 0 || count > final_count ||
        (count == final_count && front > final_front)) {
      final_count = count;
      final_front = front;
      result.motion = c.motion;
      result.inliers = std::move(mask);
    }
  }
  result.inlier_count = final_count;
  result.iterations = it;
  return result;
}

}  // namespace planarac
