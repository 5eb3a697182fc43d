#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "planarac/geometry.hpp"
#include "planarac/types.hpp"

namespace planarac {

/// Rows: epipolar constraint, then the two affine constraints. Columns act on
/// x = [cos(a+b), sin(a+b), cos b, sin b].
using ConstraintMatrix = Eigen::Matrix<double, 3, 4>;

inline constexpr double kRankTolerance = 1e-8;

inline Eigen::RowVector4d epipolar_row(const NormalizedPoint& q1,
                                       const NormalizedPoint& q2) {
  return {-q2.y(), q1.x() * q2.y(), q1.y(), -q2.x() * q1.y()};
}

inline ConstraintMatrix constraint_matrix(const AffineCorrespondence& ac) {
  const NormalizedPoint& q1 = ac.p1;
  const NormalizedPoint& q2 = ac.p2;
  ConstraintMatrix b;
  b.row(0) = epipolar_row(q1, q2);
  b.row(1) << -ac.a3(), q2.y() + ac.a3() * q1.x(), 0.0, -ac.a1() * q1.y();
  b.row(2) << -ac.a4(), ac.a4() * q1.x(), 1.0, -q2.x() - ac.a2() * q1.y();
  return b;
}

namespace internal {

// Scales each non-zero row to unit length. The null space is unchanged and the
// singular-value ratio becomes a meaningful rank test.
template <int Rows>
Eigen::Matrix<double, Rows, 4> normalize_rows(
    const Eigen::Matrix<double, Rows, 4>& b) {
  Eigen::Matrix<double, Rows, 4> out = b;
  for (int r = 0; r < Rows; ++r) {
    const double n = out.row(r).norm();
    if (n > 0.0) out.row(r) /= n;
  }
  return out;
}

template <int Rows>
Eigen::Matrix4d right_singular_vectors(const Eigen::Matrix<double, Rows, 4>& b,
                                       int required_rank) {
  if (!b.allFinite()) {
    throw Error(ErrorCode::kDegenerateInput, "constraint matrix not finite");
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, Rows, 4>> svd(b, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (!(sv(0) > 0.0) || sv(required_rank - 1) < kRankTolerance * sv(0)) {
    throw Error(ErrorCode::kDegenerateInput,
                "constraint matrix has rank < " + std::to_string(required_rank));
  }
  return svd.matrixV();
}

inline void push_unique(CandidateSet& set, const Candidate& c) {
  for (const Candidate& existing : set) {
    if (angle_distance(existing.motion.alpha, c.motion.alpha) < 1e-12 &&
        angle_distance(existing.motion.beta, c.motion.beta) < 1e-12) {
      return;
    }
  }
  set.push_back(c);
}

inline double algebraic_residual(const ConstraintMatrix& normalized_b,
                                 const PlanarMotion& m) {
  return (normalized_b * trig_vector(m)).norm();
}

// Angles from a vector proportional to x. Each pair (n1, n2) and (n3, n4) is
// read by atan2, so the two halves never need a common scale.
inline CandidateSet sign_candidates(const Eigen::Vector4d& n,
                                    const ConstraintMatrix& normalized_b) {
  const double beta = std::atan2(n(3), n(2));
  const double sum = std::atan2(n(1), n(0));
  const PlanarMotion m(sum - beta, beta);
  const double r = algebraic_residual(normalized_b, m);
  CandidateSet out;
  push_unique(out, {m, r, 0.0});
  push_unique(out, {m.flipped(), r, 0.0});
  return out;
}

// Minimizes x(s, b)^T M x(s, b) over the torus, x = [cos s, sin s, cos b,
// sin b], by damped Newton from (s, b). M = B^T B is a 4x4 PSD matrix.
inline std::pair<double, double> refine_on_manifold(const Eigen::Matrix4d& m,
                                                    double s, double b) {
  auto cost = [&](double ss, double bb) {
    const Eigen::Vector4d x(std::cos(ss), std::sin(ss), std::cos(bb),
                            std::sin(bb));
    return x.dot(m * x);
  };
  double f = cost(s, b);
  // Below this the cost is rounding noise of its own evaluation.
  const double floor = 1e-15 * m.trace();
  double damping = 1e-9 * std::max(m.trace(), 1e-300);
  for (int iter = 0; iter < 50 && f > floor; ++iter) {
    const double cs = std::cos(s), ss = std::sin(s);
    const double cb = std::cos(b), sb = std::sin(b);
    const Eigen::Vector4d x(cs, ss, cb, sb);
    const Eigen::Vector4d xs(-ss, cs, 0.0, 0.0), xb(0.0, 0.0, -sb, cb);
    const Eigen::Vector4d xss(-cs, -ss, 0.0, 0.0), xbb(0.0, 0.0, -cb, -sb);
    const Eigen::Vector4d mx = m * x;
    const Eigen::Vector2d g(2.0 * xs.dot(mx), 2.0 * xb.dot(mx));
    Eigen::Matrix2d h;
    h(0, 0) = 2.0 * (xs.dot(m * xs) + xss.dot(mx));
    h(1, 1) = 2.0 * (xb.dot(m * xb) + xbb.dot(mx));
    h(0, 1) = h(1, 0) = 2.0 * xs.dot(m * xb);
    bool improved = false;
    for (int k = 0; k < 30; ++k) {
      Eigen::Matrix2d hd = h;
      hd.diagonal().array() += damping;
      const Eigen::Vector2d step = -hd.ldlt().solve(g);
      if (!step.allFinite()) break;
      const double f_new = cost(s + step(0), b + step(1));
      if (f_new <= f) {
        s += step(0);
        b += step(1);
        const double gain = f - f_new;
        f = f_new;
        damping = std::max(damping * 0.1, 1e-15 * m.trace());
        improved = true;
        if (step.norm() < 1e-14 || gain <= 1e-30) return {s, b};
        break;
      }
      damping = std::max(damping * 10.0, 1e-12 * m.trace());
    }
    if (!improved) break;
  }
  return {s, b};
}

// Global minimum of x^T M x over the torus. The cost is a trigonometric
// polynomial of degree 2 in each angle and can have several basins, some of
// them only a few degrees wide, so every discrete local minimum of a 2.5-degree
// periodic grid is polished, together with the caller's seed. Coarser grids
// were seen to step over narrow basins at high noise.
inline std::pair<double, double> minimize_on_torus(const Eigen::Matrix4d& m,
                                                   double seed_s,
                                                   double seed_b) {
  constexpr int kGrid = 144;
  const double h = 2.0 * kPi / kGrid;
  // The cost separates as u^T A u + v^T D v + 2 u^T C v with u, v unit
  // vectors of the two angles, so the grid needs one dot product per node.
  const Eigen::Matrix2d a = m.topLeftCorner<2, 2>();
  const Eigen::Matrix2d cm = m.topRightCorner<2, 2>();
  const Eigen::Matrix2d d = m.bottomRightCorner<2, 2>();
  std::vector<Eigen::Vector2d> u(kGrid), p(kGrid);
  std::vector<double> au(kGrid), du(kGrid);
  for (int i = 0; i < kGrid; ++i) {
    u[i] = Eigen::Vector2d(std::cos(-kPi + i * h), std::sin(-kPi + i * h));
    au[i] = u[i].dot(a * u[i]);
    du[i] = u[i].dot(d * u[i]);
    p[i] = 2.0 * cm.transpose() * u[i];
  }
  std::vector<double> grid(kGrid * kGrid);
  auto cost = [&](int i, int j) -> double& {
    return grid[((i + kGrid) % kGrid) * kGrid + (j + kGrid) % kGrid];
  };
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) cost(i, j) = au[i] + du[j] + p[i].dot(u[j]);
  }
  auto torus_cost = [&](double ss, double bb) {
    const Eigen::Vector4d x(std::cos(ss), std::sin(ss), std::cos(bb),
                            std::sin(bb));
    return x.dot(m * x);
  };
  std::pair<double, double> best = refine_on_manifold(m, seed_s, seed_b);
  double best_cost = torus_cost(best.first, best.second);
  // Another basin has to win by more than rounding; near-zero costs would
  // otherwise pick a point drifted along a flat direction.
  const double margin = 1e-12 * m.trace();
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if ((di || dj) && cost(i + di, j + dj) < cost(i, j)) {
            is_min = false;
            break;
          }
        }
      }
      if (!is_min) continue;
      const auto cand = refine_on_manifold(m, -kPi + i * h, -kPi + j * h);
      const double f = torus_cost(cand.first, cand.second);
      if (f < best_cost - margin) {
        best_cost = f;
        best = cand;
      }
    }
  }
  return best;
}

}  // namespace internal

/// Unit null vector of a full-rank constraint matrix (rows are normalized
/// first). Throws kDegenerateInput when the rank is below 3.
inline Eigen::Vector4d null_vector(const ConstraintMatrix& b) {
  return internal::right_singular_vectors<3>(internal::normalize_rows<3>(b), 3)
      .col(3);
}

/// Shared back end of 1AC and 3PC. The null vector of the row-normalized
/// system seeds a global minimization of ||B x|| over unit-trig vectors, so on
/// noisy data the result is the constrained least-squares motion rather than an
/// ad-hoc projection of the null vector. Returns the two global-sign
/// candidates.
inline CandidateSet solve_planar_linear(const ConstraintMatrix& b) {
  const ConstraintMatrix nb = internal::normalize_rows<3>(b);
  const Eigen::Vector4d n = internal::right_singular_vectors<3>(nb, 3).col(3);
  const auto [sum, beta] = internal::minimize_on_torus(
      b.transpose() * b, std::atan2(n(1), n(0)), std::atan2(n(3), n(2)));
  const Eigen::Vector4d x(std::cos(sum), std::sin(sum), std::cos(beta),
                          std::sin(beta));
  return internal::sign_candidates(x, nb);
}

/// Calibrated planar motion from one affine correspondence (normalized
/// coordinates).
inline CandidateSet solve_1ac(const AffineCorrespondence& ac) {
  if (!ac.affine.allFinite() || ac.affine.determinant() == 0.0) {
    throw Error(ErrorCode::kDegenerateInput, "local affinity is singular");
  }
  return solve_planar_linear(constraint_matrix(ac));
}

/// Linear three-point solver; only the point parts of the inputs are used.
inline CandidateSet solve_3pc(std::span<const AffineCorrespondence> acs) {
  if (acs.size() != 3) {
    throw Error(ErrorCode::kInvalidArgument, "3PC needs exactly 3 points");
  }
  ConstraintMatrix b;
  for (int i = 0; i < 3; ++i) b.row(i) = epipolar_row(acs[i].p1, acs[i].p2);
  return solve_planar_linear(b);
}

/// Two-point planar solver. The 2x4 epipolar system leaves a 2D null space
/// {w0 u + w1 v}; the trig structure demands x1^2 + x2^2 = x3^2 + x4^2, a
/// homogeneous quadratic in (w0, w1). Solving it homogeneously covers the
/// finite roots u + lambda v and the lambda -> infinity root x = v alike.
/// At most two roots, each with its sign twin: <= 4 candidates.
inline CandidateSet solve_2pc(std::span<const AffineCorrespondence> acs) {
  if (acs.size() != 2) {
    throw Error(ErrorCode::kInvalidArgument, "2PC needs exactly 2 points");
  }
  Eigen::Matrix<double, 2, 4> b;
  for (int i = 0; i < 2; ++i) b.row(i) = epipolar_row(acs[i].p1, acs[i].p2);
  const Eigen::Matrix<double, 2, 4> nb = internal::normalize_rows<2>(b);
  const Eigen::Matrix4d v = internal::right_singular_vectors<2>(nb, 2);
  const Eigen::Vector4d basis_u = v.col(2);
  const Eigen::Vector4d basis_v = v.col(3);

  const Eigen::Vector4d d(1.0, 1.0, -1.0, -1.0);
  Eigen::Matrix2d q;
  q(0, 0) = basis_u.dot(d.cwiseProduct(basis_u));
  q(0, 1) = q(1, 0) = basis_u.dot(d.cwiseProduct(basis_v));
  q(1, 1) = basis_v.dot(d.cwiseProduct(basis_v));

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(q);
  const Eigen::Vector2d lambda = es.eigenvalues();
  constexpr double kTol = 1e-12;
  if (std::abs(lambda(0)) <= kTol && std::abs(lambda(1)) <= kTol) {
    throw Error(ErrorCode::kDegenerateInput,
                "trig constraint vanishes on the whole null space");
  }
  if (lambda(0) > kTol || lambda(1) < -kTol) {
    throw Error(ErrorCode::kNoRealSolution, "quadratic has no real root");
  }
  const double neg = std::sqrt(std::max(-lambda(0), 0.0));
  const double pos = std::sqrt(std::max(lambda(1), 0.0));

  ConstraintMatrix residual_rows = ConstraintMatrix::Zero();
  residual_rows.topRows<2>() = nb;

  CandidateSet out;
  for (const double sign : {1.0, -1.0}) {
    const Eigen::Vector2d w =
        pos * es.eigenvectors().col(0) + sign * neg * es.eigenvectors().col(1);
    const Eigen::Vector4d x = w(0) * basis_u + w(1) * basis_v;
    for (const Candidate& c : internal::sign_candidates(x, residual_rows)) {
      internal::push_unique(out, c);
    }
  }
  return out;
}

// --- Semi-calibrated solver ------------------------------------------------

/// Raw (unclamped) solution of the squared 2x2 trigonometric system.
struct SquaredCosines {
  double sum;   // cos^2(alpha + beta)
  double beta;  // cos^2(beta)
};

inline constexpr double kSingularSystemTolerance = 1e-14;

/// Solves [n3^2 -n1^2; -n4^2 n2^2] [c_sum; c_beta] = [0; n2^2 - n4^2].
inline SquaredCosines solve_squared_cosines(const Eigen::Vector4d& n) {
  const double n1 = n(0) * n(0), n2 = n(1) * n(1);
  const double n3 = n(2) * n(2), n4 = n(3) * n(3);
  const double det = n3 * n2 - n1 * n4;
  if (!(std::abs(det) >= kSingularSystemTolerance)) {
    throw Error(ErrorCode::kSingularSystem,
                "squared-cosine system is singular");
  }
  const double rhs = n2 - n4;
  // Cramer's rule.
  return {n1 * rhs / det, n3 * rhs / det};
}

/// The four angles with the given squared cosine, after clamping it to the
/// nearest valid value in [0, 1]. Duplicates (at 0, pi/2, pi) are dropped.
inline std::vector<double> angles_from_squared_cosine(double squared_cosine) {
  const double c = std::sqrt(std::clamp(squared_cosine, 0.0, 1.0));
  const double a = std::acos(c);
  const double b = std::acos(-c);
  std::vector<double> out;
  for (const double angle : {a, -a, b, -b}) {
    const double wrapped = wrap_angle(angle);
    const bool seen = std::any_of(out.begin(), out.end(), [&](double x) {
      return angle_distance(x, wrapped) < 1e-12;
    });
    if (!seen) out.push_back(wrapped);
  }
  return out;
}

namespace internal {

// Focal length from one pair of null-vector entries: f = (num/den) tan(theta).
// Indeterminate when theta sits on a clamp point (tan is 0 or infinite) or the
// denominator entry vanishes.
inline std::optional<double> focal_from_ratio(double num, double den,
                                              double theta) {
  constexpr double kTrigFloor = 1e-9;
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  if (std::abs(s) <= kTrigFloor || std::abs(c) <= kTrigFloor || den == 0.0) {
    return std::nullopt;
  }
  return num * s / (den * c);
}

}  // namespace internal

/// Candidate enumeration of the semi-calibrated solver on a unit null vector
/// n ~ [cos(a+b)/f, sin(a+b)/f^2, cos b/f, sin b/f^2]. `normalized_b` is only
/// used for the residual diagnostic and may be zero.
inline CandidateSet focal_candidates_from_null_vector(
    const Eigen::Vector4d& n, const ConstraintMatrix& normalized_b) {
  const SquaredCosines sq = solve_squared_cosines(n);
  const std::vector<double> sums = angles_from_squared_cosine(sq.sum);
  const std::vector<double> betas = angles_from_squared_cosine(sq.beta);

  CandidateSet out;
  for (const double sum : sums) {
    for (const double beta : betas) {
      const Eigen::Vector4d trig(std::cos(sum), std::sin(sum), std::cos(beta),
                                 std::sin(beta));
      // n = x / mu for one scalar mu, so every n_i * trig_i shares the sign
      // of mu. Squaring lost that; reject the mixed-sign permutations here.
      const Eigen::Vector4d prod = n.cwiseProduct(trig);
      constexpr double kSignFloor = 1e-12;
      const bool has_pos = (prod.array() > kSignFloor).any();
      const bool has_neg = (prod.array() < -kSignFloor).any();
      if (has_pos && has_neg) continue;

      const auto fa = internal::focal_from_ratio(n(0), n(1), sum);
      const auto fb = internal::focal_from_ratio(n(2), n(3), beta);
      if (!fa && !fb) continue;
      if ((fa && !(*fa > 0.0)) || (fb && !(*fb > 0.0))) continue;

      double focal = 0.0;
      double gap = 0.0;
      if (fa && fb) {
        focal = 0.5 * (*fa + *fb);
        gap = std::abs(*fa - *fb);
      } else {
        focal = fa ? *fa : *fb;
      }
      if (!std::isfinite(focal)) continue;

      const Eigen::Vector4d x(trig(0) / focal, trig(1) / (focal * focal),
                              trig(2) / focal, trig(3) / (focal * focal));
      const double residual = (normalized_b * x.normalized()).norm();
      internal::push_unique(out, {PlanarMotion(sum - beta, beta, focal),
                                  residual, gap});
    }
  }
  if (out.empty()) {
    throw Error(ErrorCode::kNoValidFocal, "every candidate was rejected");
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Candidate& a, const Candidate& b) {
                     if (a.focal_gap != b.focal_gap) {
                       return a.focal_gap < b.focal_gap;
                     }
                     return a.residual < b.residual;
                   });
  return out;
}

/// Semi-calibrated planar motion and common focal length from one AC given in
/// principal-point-centered pixel coordinates (C = diag(f, f, 1)).
inline CandidateSet solve_1acf(const AffineCorrespondence& ac) {
  if (!ac.affine.allFinite() || ac.affine.determinant() == 0.0) {
    throw Error(ErrorCode::kDegenerateInput, "local affinity is singular");
  }
  // Work in units where the points are O(1); the affinity is invariant to a
  // common scale of both images and f scales back linearly.
  const double scale =
      std::max({1.0, ac.p1.cwiseAbs().maxCoeff(), ac.p2.cwiseAbs().maxCoeff()});
  const ConstraintMatrix nb =
      internal::normalize_rows<3>(constraint_matrix(scale_points(ac, 1.0 / scale)));
  const Eigen::Vector4d n = internal::right_singular_vectors<3>(nb, 3).col(3);

  CandidateSet out = focal_candidates_from_null_vector(n, nb);
  for (Candidate& c : out) {
    c.motion.focal = *c.motion.focal * scale;
    c.focal_gap *= scale;
  }
  return out;
}

// --- Cheirality --------------------------------------------------------------

struct PointDepths {
  double first;
  double second;
};

/// Midpoint triangulation of a normalized point pair under X2 = R X1 + t.
/// Returns nullopt for (near-)parallel rays.
inline std::optional<PointDepths> triangulate_midpoint(
    const Eigen::Matrix3d& r, const Eigen::Vector3d& t,
    const NormalizedPoint& q1, const NormalizedPoint& q2) {
  const Eigen::Vector3d d1 = q1.homogeneous();
  const Eigen::Vector3d d2 = r.transpose() * q2.homogeneous();
  const Eigen::Vector3d c2 = -r.transpose() * t;
  const double a = d1.squaredNorm();
  const double b = d1.dot(d2);
  const double c = d2.squaredNorm();
  const double det = a * c - b * b;
  if (det <= 1e-12 * a * c) return std::nullopt;
  const double rhs1 = d1.dot(c2);
  const double rhs2 = d2.dot(c2);
  // s1 d1 - s2 d2 = c2 in the least-squares sense.
  const double s1 = (c * rhs1 - b * rhs2) / det;
  const double s2 = (b * rhs1 - a * rhs2) / det;
  const Eigen::Vector3d x = 0.5 * (s1 * d1 + c2 + s2 * d2);
  return PointDepths{x.z(), (r * x + t).z()};
}

/// Number of correspondences triangulating in front of both cameras. A
/// candidate carrying a focal length treats the inputs as principal-point
/// centered pixels and normalizes by that focal.
inline int count_in_front(const PlanarMotion& m,
                          std::span<const AffineCorrespondence> acs) {
  const Eigen::Matrix3d r = rotation_of(m);
  const Eigen::Vector3d t = translation_of(m);
  const double inv_f = m.focal ? 1.0 / *m.focal : 1.0;
  int count = 0;
  for (const AffineCorrespondence& ac : acs) {
    const auto depth = triangulate_midpoint(r, t, ac.p1 * inv_f, ac.p2 * inv_f);
    if (depth && depth->first > 0.0 && depth->second > 0.0) ++count;
  }
  return count;
}

/// Index of the candidate with most points in front of both cameras; ties go
/// to the smaller algebraic residual, then to the earlier candidate.
inline std::size_t cheirality_select_index(
    const CandidateSet& candidates,
    std::span<const AffineCorrespondence> acs) {
  if (candidates.empty()) {
    throw Error(ErrorCode::kNoCandidate, "candidate set is empty");
  }
  std::size_t best = 0;
  int best_count = -1;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const int count = count_in_front(candidates[i].motion, acs);
    if (count > best_count ||
        (count == best_count &&
         candidates[i].residual < candidates[best].residual)) {
      best = i;
      best_count = count;
    }
  }
  return best;
}

inline PlanarMotion cheirality_select(
    const CandidateSet& candidates,
    std::span<const AffineCorrespondence> acs) {
  return candidates[cheirality_select_index(candidates, acs)].motion;
}

// --- Sample conditioning -----------------------------------------------------

namespace internal {

template <int Rows>
double rank_ratio(const Eigen::Matrix<double, Rows, 4>& b, int rank) {
  const Eigen::Matrix<double, Rows, 4> nb = normalize_rows<Rows>(b);
  if (!nb.allFinite()) return 0.0;
  Eigen::JacobiSVD<Eigen::Matrix<double, Rows, 4>> svd(nb);
  const auto& sv = svd.singularValues();
  return sv(0) > 0.0 ? sv(rank - 1) / sv(0) : 0.0;
}

}  // namespace internal

// --- Solver dispatch ---------------------------------------------------------

enum class SolverKind { k1AC, k1ACf, k3PC, k2PC };

inline std::string_view solver_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::k1AC: return "1ac";
    case SolverKind::k1ACf: return "1acf";
    case SolverKind::k3PC: return "3pc";
    case SolverKind::k2PC: return "2pc";
  }
  return "?";
}

inline std::optional<SolverKind> parse_solver(std::string_view name) {
  for (const SolverKind k : {SolverKind::k1AC, SolverKind::k1ACf,
                             SolverKind::k3PC, SolverKind::k2PC}) {
    if (solver_name(k) == name) return k;
  }
  return std::nullopt;
}

inline int sample_size(SolverKind kind) {
  switch (kind) {
    case SolverKind::k3PC: return 3;
    case SolverKind::k2PC: return 2;
    default: return 1;
  }
}

inline bool is_semi_calibrated(SolverKind kind) {
  return kind == SolverKind::k1ACf;
}

/// Runs the solver on a minimal sample. 1ACf expects principal-point-centered
/// pixels, the others normalized coordinates.
inline CandidateSet run_solver(SolverKind kind,
                               std::span<const AffineCorrespondence> sample) {
  if (sample.size() != static_cast<std::size_t>(sample_size(kind))) {
    throw Error(ErrorCode::kInvalidArgument, "wrong sample size for solver");
  }
  switch (kind) {
    case SolverKind::k1AC: return solve_1ac(sample[0]);
    case SolverKind::k1ACf: return solve_1acf(sample[0]);
    case SolverKind::k3PC: return solve_3pc(sample);
    case SolverKind::k2PC: return solve_2pc(sample);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown solver");
}

/// sigma_min / sigma_max of the row-normalized constraint matrix the solver
/// would build from this sample (the same quantity its rank test uses).
/// Values near 0 flag degenerate samples, e.g. points on the horizon line
/// q_y = 0, where the epipolar row and the first affine row both vanish.
inline double sample_conditioning(SolverKind kind,
                                  std::span<const AffineCorrespondence> sample) {
  if (sample.size() != static_cast<std::size_t>(sample_size(kind))) {
    throw Error(ErrorCode::kInvalidArgument, "wrong sample size for solver");
  }
  switch (kind) {
    case SolverKind::k1AC:
      return internal::rank_ratio<3>(constraint_matrix(sample[0]), 3);
    case SolverKind::k1ACf: {
      const AffineCorrespondence& ac = sample[0];
      const double scale = std::max({1.0, ac.p1.cwiseAbs().maxCoeff(),
                                     ac.p2.cwiseAbs().maxCoeff()});
      return internal::rank_ratio<3>(
          constraint_matrix(scale_points(ac, 1.0 / scale)), 3);
    }
    case SolverKind::k3PC: {
      ConstraintMatrix b;
      for (int i = 0; i < 3; ++i) {
        b.row(i) = epipolar_row(sample[i].p1, sample[i].p2);
      }
      return internal::rank_ratio<3>(b, 3);
    }
    case SolverKind::k2PC: {
      Eigen::Matrix<double, 2, 4> b;
      for (int i = 0; i < 2; ++i) {
        b.row(i) = epipolar_row(sample[i].p1, sample[i].p2);
      }
      return internal::rank_ratio<2>(b, 2);
    }
  }
  return 0.0;
}

}  // namespace planarac
