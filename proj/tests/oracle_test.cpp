#include <random>

#include <gtest/gtest.h>

#include "planarac/solvers.hpp"
#include "test_util.hpp"

namespace planarac {
namespace {

constexpr double kStep = 0.002;

// The solver returns the constrained minimizer of ||B x||, so its cost can
// never exceed the best grid node's. Agreement in cells is weaker evidence:
// along a flat, diagonal valley the best node can sit several cells from the
// continuous minimum.
TEST(Oracle, SolverBeatsGridOnNoisyInstances) {
  Rng rng(81);
  int within_cell = 0;
  const int instances = 20;
  for (int i = 0; i < instances; ++i) {
    const PlanarMotion m = testing::random_motion(rng);
    const SyntheticScene s = testing::make_scene(m, 0.2 + 0.04 * i, 900 + i);
    const AffineCorrespondence ac =
        pick_minimal_sample(SolverKind::k1AC, s.normalized, 1e-5)[0];
    const ConstraintMatrix b = constraint_matrix(ac);
    const CandidateSet c = solve_1ac(ac);
    const testing::GridMinimum g = testing::grid_minimum(b, kStep);
    const double solver_cost = testing::trig_cost(b, c.front().motion);
    EXPECT_LE(solver_cost, g.cost * (1.0 + 1e-9) + 1e-300) << "instance " << i;
    if (testing::cells_apart(c, g, kStep) <= 1) ++within_cell;
  }
  RecordProperty("within_one_cell", within_cell);
}

// At zero noise the continuous minimum is an exact zero at the true motion;
// the grid can only approach it from above.
TEST(Oracle, NoiseFreeSolverReachesZero) {
  Rng rng(82);
  for (int i = 0; i < 10; ++i) {
    const PlanarMotion m = testing::random_motion(rng);
    const SyntheticScene s = testing::make_scene(m, 0.0, 950 + i);
    const AffineCorrespondence ac =
        pick_minimal_sample(SolverKind::k1AC, s.normalized, 1e-5)[0];
    const ConstraintMatrix b = constraint_matrix(ac);
    const CandidateSet c = solve_1ac(ac);
    const testing::GridMinimum g = testing::grid_minimum(b, kStep);
    const double solver_cost = testing::trig_cost(b, c.front().motion);
    EXPECT_LE(solver_cost, g.cost);
    EXPECT_LT(solver_cost, 1e-20 * b.squaredNorm());
    EXPECT_LT(testing::best_angle_error(c, m), 1e-8);
  }
}

// Many independent noisy instances: no basin is missed.
TEST(Oracle, SolverNeverLosesToGrid) {
  Rng rng(84);
  std::uniform_real_distribution<double> sigma(0.5, 1.0);
  for (int i = 0; i < 200; ++i) {
    const PlanarMotion m = testing::random_motion(rng);
    const SyntheticScene s = testing::make_scene(m, sigma(rng), 20000 + i);
    const AffineCorrespondence ac =
        pick_minimal_sample(SolverKind::k1AC, s.normalized, 1e-5)[0];
    const ConstraintMatrix b = constraint_matrix(ac);
    const testing::GridMinimum g = testing::grid_minimum(b, 0.005);
    EXPECT_LE(testing::trig_cost(b, solve_1ac(ac).front().motion),
              g.cost * (1.0 + 1e-9))
        << "instance " << i;
  }
}

TEST(Oracle, ThreePointSolverBeatsGrid) {
  Rng rng(83);
  for (int i = 0; i < 10; ++i) {
    const PlanarMotion m = testing::random_motion(rng);
    const SyntheticScene s = testing::make_scene(m, 0.5, 970 + i);
    const auto sample =
        pick_minimal_sample(SolverKind::k3PC, s.normalized, 1e-5);
    ConstraintMatrix b;
    for (int r = 0; r < 3; ++r) b.row(r) = epipolar_row(sample[r].p1, sample[r].p2);
    const testing::GridMinimum g = testing::grid_minimum(b, kStep);
    const CandidateSet c = solve_3pc(sample);
    EXPECT_LE(testing::trig_cost(b, c.front().motion), g.cost * (1.0 + 1e-9));
  }
}

}  // namespace
}  // namespace planarac
