// Minimal library walk-through: build a synthetic scene, solve from a single
// affine correspondence, then let histogram voting and RANSAC handle a set
// with outliers.
#include <iostream>

#include "planarac/robust.hpp"
#include "planarac/solvers.hpp"
#include "planarac/synthetic.hpp"

using namespace planarac;

int main() {
  SceneConfig config;
  config.points = 100;
  config.noise_sigma = 0.5;

  Rng rng = trial_rng(7, 0);
  const PlanarMotion truth(0.12, 0.8);
  SyntheticScene scene = generate_scene(config, truth, rng);
  add_outliers(scene, 60, rng);

  // One correspondence is enough for the calibrated solver.
  const AffineCorrespondence& ac = scene.normalized.front();
  const PlanarMotion single =
      cheirality_select(solve_1ac(ac), std::span(&ac, 1));

  const PlanarMotion voted = histogram_vote(scene.normalized,
                                            SolverKind::k1AC).motion;

  RansacConfig rc;
  rc.focal_px = config.focal;
  const RansacResult ransac =
      ransac_estimate(scene.normalized, SolverKind::k1AC, rc);

  // The semi-calibrated solver works on principal-point-centered pixels.
  const HistogramResult semi = histogram_vote(scene.centered,
                                              SolverKind::k1ACf);

  auto show = [&](const char* name, const PlanarMotion& m) {
    std::cout << name << ": alpha " << rad_to_deg(m.alpha) << " deg, beta "
              << rad_to_deg(m.beta) << " deg";
    if (m.focal) std::cout << ", focal " << *m.focal << " px";
    std::cout << "  (rotation error "
              << rotation_error(rotation_of(m), rotation_of(truth))
              << " deg)\n";
  };
  show("truth        ", truth);
  show("1AC, one AC  ", single);
  show("histogram    ", voted);
  show("RANSAC       ", ransac.motion);
  show("1ACf voting  ", semi.motion);
  std::cout << "RANSAC inliers " << ransac.inlier_count << " of "
            << scene.normalized.size() << " after " << ransac.iterations
            << " iterations\n";
  return 0;
}
