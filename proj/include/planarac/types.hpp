#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace planarac {

enum class ErrorCode {
  kInvalidArgument,
  kNonPlanarPattern,
  kInvalidFocal,
  kAtInfinity,
  kNotARotation,
  kZeroVector,
  kDegenerateInput,
  kSingularSystem,
  kNoValidFocal,
  kNoRealSolution,
  kNoCandidate,
  kDegenerateResidual,
  kNoVotes,
  kNoModel,
  kGeometryRejection,
  kParseError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonPlanarPattern: return "NonPlanarPattern";
    case ErrorCode::kInvalidFocal: return "InvalidFocal";
    case ErrorCode::kAtInfinity: return "AtInfinity";
    case ErrorCode::kNotARotation: return "NotARotation";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kNoValidFocal: return "NoValidFocal";
    case ErrorCode::kNoRealSolution: return "NoRealSolution";
    case ErrorCode::kNoCandidate: return "NoCandidate";
    case ErrorCode::kDegenerateResidual: return "DegenerateResidual";
    case ErrorCode::kNoVotes: return "NoVotes";
    case ErrorCode::kNoModel: return "NoModel";
    case ErrorCode::kGeometryRejection: return "GeometryRejection";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so that
/// callers (the CLI, the sweep harness) can map it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline constexpr double kPi = std::numbers::pi;

/// Wraps an angle into [-pi, pi).
inline double wrap_angle(double angle) {
  // In-range values pass through untouched; the shift below is not exact.
  if (angle >= -kPi && angle < kPi) return angle;
  double wrapped = std::fmod(angle + kPi, 2.0 * kPi);
  if (wrapped < 0.0) wrapped += 2.0 * kPi;
  wrapped -= kPi;
  // fmod can land exactly on +pi after the shift because of rounding.
  if (wrapped >= kPi) wrapped -= 2.0 * kPi;
  return wrapped;
}

/// Smallest absolute difference between two angles, in [0, pi].
inline double angle_distance(double a, double b) {
  return std::abs(wrap_angle(a - b));
}

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// Image point in either normalized (K^-1 p) or principal-point-centered pixel
// coordinates. The frame is a property of the data set, not of the point.
using NormalizedPoint = Eigen::Vector2d;

inline constexpr double kPointSanityBound = 1e6;

/// Point pair plus the 2x2 local affinity a1..a4 (row-major) that maps a
/// neighbourhood of p1 onto a neighbourhood of p2.
struct AffineCorrespondence {
  NormalizedPoint p1 = NormalizedPoint::Zero();
  NormalizedPoint p2 = NormalizedPoint::Zero();
  Eigen::Matrix2d affine = Eigen::Matrix2d::Identity();

  double a1() const { return affine(0, 0); }
  double a2() const { return affine(0, 1); }
  double a3() const { return affine(1, 0); }
  double a4() const { return affine(1, 1); }
};

inline bool is_valid_point(const NormalizedPoint& p) {
  return p.allFinite() && p.cwiseAbs().maxCoeff() < kPointSanityBound;
}

/// Checks the invariants of an affine correspondence. Throws
/// `kInvalidArgument` naming the violated property.
inline void validate(const AffineCorrespondence& ac) {
  if (!is_valid_point(ac.p1) || !is_valid_point(ac.p2)) {
    throw Error(ErrorCode::kInvalidArgument,
                "correspondence point is not finite or exceeds 1e6");
  }
  if (!ac.affine.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "affinity is not finite");
  }
  if (ac.affine.determinant() == 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "affinity is singular");
  }
}

/// Planar relative motion: rotation `alpha` about the camera Y axis and
/// translation direction t = [cos beta, 0, sin beta]. `focal` is only set by
/// the semi-calibrated solver.
struct PlanarMotion {
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<double> focal;

  PlanarMotion() = default;
  PlanarMotion(double alpha_rad, double beta_rad,
               std::optional<double> focal_px = std::nullopt)
      : alpha(wrap_angle(alpha_rad)), beta(wrap_angle(beta_rad)),
        focal(focal_px) {}

  /// The same essential matrix up to sign: translation flipped.
  PlanarMotion flipped() const { return {alpha, beta + kPi, focal}; }
};

/// One hypothesis produced by a minimal solver.
struct Candidate {
  PlanarMotion motion;
  // Norm of the row-normalized constraint matrix applied to the unit-trig
  // vector of the candidate.
  double residual = 0.0;
  // |f_a - f_b| for semi-calibrated candidates, 0 otherwise.
  double focal_gap = 0.0;
};

using CandidateSet = std::vector<Candidate>;

struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;

  CameraIntrinsics() = default;
  CameraIntrinsics(double fx_px, double fy_px, double cx_px, double cy_px)
      : fx(fx_px), fy(fy_px), cx(cx_px), cy(cy_px) {
    if (!(fx > 0.0) || !(fy > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "focal lengths must be > 0");
    }
  }

  Eigen::Matrix3d matrix() const {
    Eigen::Matrix3d k;
    k << fx, 0.0, cx, 0.0, fy, cy, 0.0, 0.0, 1.0;
    return k;
  }

  NormalizedPoint normalize(const Eigen::Vector2d& pixel) const {
    return {(pixel.x() - cx) / fx, (pixel.y() - cy) / fy};
  }

  Eigen::Vector2d denormalize(const NormalizedPoint& q) const {
    return {q.x() * fx + cx, q.y() * fy + cy};
  }

  Eigen::Vector2d center(const Eigen::Vector2d& pixel) const {
    return {pixel.x() - cx, pixel.y() - cy};
  }

  /// Pixel-frame AC -> normalized AC. The affinity is conjugated by
  /// diag(fx, fy) so non-square pixels are handled too.
  AffineCorrespondence normalize(const AffineCorrespondence& pixel_ac) const {
    AffineCorrespondence out;
    out.p1 = normalize(pixel_ac.p1);
    out.p2 = normalize(pixel_ac.p2);
    const Eigen::Vector2d f(fx, fy);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        out.affine(r, c) = pixel_ac.affine(r, c) * f(c) / f(r);
      }
    }
    return out;
  }

  /// Pixel-frame AC -> principal-point-centered AC (affinity unchanged).
  AffineCorrespondence center(const AffineCorrespondence& pixel_ac) const {
    return {center(pixel_ac.p1), center(pixel_ac.p2), pixel_ac.affine};
  }
};

/// Scales both points, leaving the affinity alone. With scale = 1/f this turns
/// a principal-point-centered AC into the normalized AC of K = diag(f, f, 1).
inline AffineCorrespondence scale_points(const AffineCorrespondence& ac,
                                         double scale) {
  return {ac.p1 * scale, ac.p2 * scale, ac.affine};
}

}  // namespace planarac
