#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include <Eigen/Core>
#include <Eigen/LU>

#include "planarac/types.hpp"

namespace planarac {

using EssentialMatrix = Eigen::Matrix3d;
using FundamentalMatrix = Eigen::Matrix3d;

inline Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

/// Rotation by `alpha` about the Y axis (second camera orientation).
inline Eigen::Matrix3d rotation_y(double alpha) {
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  Eigen::Matrix3d r;
  r << c, 0.0, s,
       0.0, 1.0, 0.0,
       -s, 0.0, c;
  return r;
}

inline Eigen::Vector3d translation_direction(double beta) {
  return {std::cos(beta), 0.0, std::sin(beta)};
}

inline Eigen::Matrix3d rotation_of(const PlanarMotion& m) {
  return rotation_y(m.alpha);
}

inline Eigen::Vector3d translation_of(const PlanarMotion& m) {
  return translation_direction(m.beta);
}

/// Trigonometric unknown vector [cos(a+b), sin(a+b), cos b, sin b].
inline Eigen::Vector4d trig_vector(const PlanarMotion& m) {
  const double sum = m.alpha + m.beta;
  return {std::cos(sum), std::sin(sum), std::cos(m.beta), std::sin(m.beta)};
}

/// E = [t]x R for planar motion. Only e2, e4, e6, e8 are non-zero, and
/// ||E||_F = sqrt(2).
inline EssentialMatrix build_essential(const PlanarMotion& m) {
  const double sum = m.alpha + m.beta;
  EssentialMatrix e = EssentialMatrix::Zero();
  e(0, 1) = -std::sin(m.beta);
  e(1, 0) = std::sin(sum);
  e(1, 2) = -std::cos(sum);
  e(2, 1) = std::cos(m.beta);
  return e;
}

inline constexpr double kPlanarPatternTolerance = 1e-9;

/// Inverse of build_essential. E is only defined up to scale and sign, so the
/// result always holds the two candidates (alpha, beta) and (alpha, beta + pi).
inline CandidateSet motion_from_essential(const EssentialMatrix& e) {
  const double norm = e.norm();
  if (!(norm > 0.0) || !e.allFinite()) {
    throw Error(ErrorCode::kNonPlanarPattern, "essential matrix is zero");
  }
  const std::array<std::pair<int, int>, 5> zeros = {
      {{0, 0}, {0, 2}, {1, 1}, {2, 0}, {2, 2}}};
  for (const auto& [r, c] : zeros) {
    if (std::abs(e(r, c)) > kPlanarPatternTolerance * norm) {
      throw Error(ErrorCode::kNonPlanarPattern,
                  "entry (" + std::to_string(r) + "," + std::to_string(c) +
                      ") violates the planar zero pattern");
    }
  }
  const double beta = std::atan2(-e(0, 1), e(2, 1));
  const double sum = std::atan2(e(1, 0), -e(1, 2));
  const PlanarMotion m(sum - beta, beta);
  return {Candidate{m, 0.0, 0.0}, Candidate{m.flipped(), 0.0, 0.0}};
}

/// F = C^-T E C^-1 with C = diag(f, f, 1).
inline FundamentalMatrix fundamental_from_motion(const PlanarMotion& m,
                                                 double focal) {
  if (!(focal > 0.0) || !std::isfinite(focal)) {
    throw Error(ErrorCode::kInvalidFocal, "focal length must be positive");
  }
  FundamentalMatrix f = build_essential(m);
  f(0, 1) /= focal * focal;
  f(1, 0) /= focal * focal;
  f(1, 2) /= focal;
  f(2, 1) /= focal;
  return f;
}

struct AffineWarp {
  NormalizedPoint p2;
  Eigen::Matrix2d affine;
};

/// Image of p1 under the homography together with the Jacobian of the
/// projective map p -> proj(H p) at p1.
inline AffineWarp affine_from_homography(const Eigen::Matrix3d& h,
                                         const NormalizedPoint& p1) {
  const double w = h(2, 0) * p1.x() + h(2, 1) * p1.y() + h(2, 2);
  if (std::abs(w) < 1e-12) {
    throw Error(ErrorCode::kAtInfinity, "point maps to infinity");
  }
  AffineWarp out;
  out.p2 = (h.topLeftCorner<2, 2>() * p1 + h.topRightCorner<2, 1>()) / w;
  out.affine = (h.topLeftCorner<2, 2>() -
                out.p2 * h.bottomLeftCorner<1, 2>()) / w;
  return out;
}

inline bool is_rotation(const Eigen::Matrix3d& r, double tolerance = 1e-6) {
  return r.allFinite() &&
         (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs()
                 .maxCoeff() <= tolerance &&
         std::abs(r.determinant() - 1.0) <= tolerance;
}

// Same value as acos of the normalized dot product, but accurate near 0 where
// acos loses half the digits.
inline double vector_angle(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

/// Angle in degrees between R_est v and R_gt v, v = [1 1 1]/sqrt(3).
inline double rotation_error(const Eigen::Matrix3d& r_est,
                             const Eigen::Matrix3d& r_gt) {
  if (!is_rotation(r_est) || !is_rotation(r_gt)) {
    throw Error(ErrorCode::kNotARotation, "input is not a proper rotation");
  }
  const Eigen::Vector3d v = Eigen::Vector3d::Ones() / std::sqrt(3.0);
  return rad_to_deg(vector_angle(r_est * v, r_gt * v));
}

/// Angle in degrees between the two directions. No folding of antipodal
/// vectors: the sign is assumed fixed by cheirality.
inline double translation_error(const Eigen::Vector3d& t_est,
                                const Eigen::Vector3d& t_gt) {
  const double n_est = t_est.norm();
  const double n_gt = t_gt.norm();
  if (!(n_est > 0.0) || !(n_gt > 0.0)) {
    throw Error(ErrorCode::kZeroVector, "translation vector is zero");
  }
  return rad_to_deg(vector_angle(t_est, t_gt));
}

}  // namespace planarac
