#pragma once

#include <string>
#include <vector>

#include "semassoc/problem.hpp"
#include "semassoc/quadric.hpp"

namespace semassoc {

/// Camera pose in the world frame: x_world = R * x_cam + t.
struct Pose {
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  Eigen::Vector3d t = Eigen::Vector3d::Zero();

  Eigen::Matrix4d world_from_cam() const;
  Eigen::Matrix4d cam_from_world() const;
};

struct Landmark {
  Ellipsoid shape;
  std::string category;
};

struct NoiseModel {
  double center_px_sigma = 1.0;   // detection-center pixel noise
  double size_rel_sigma = 0.05;   // relative box size noise
  double detection_prob = 0.9;    // per visible landmark
  double clutter_rate = 0.5;      // Poisson mean of false detections
  int clutter_max = 10;           // hard cap on clutter per frame
};

/// A synthetic world: landmarks, a camera trajectory, a stereo rig and a
/// detection noise model. Generation is a pure function of (scenario, seed).
struct Scenario {
  std::string name = "scenario";
  uint64_t seed = 0;
  CameraModel camera;
  NoiseModel noise;
  std::vector<Landmark> landmarks;
  std::vector<Pose> trajectory;
  double max_range = 40.0;      // detection range, meters
  double prior_margin = 1.5;    // frustum margin factor for the prior map
};

/// Parses a scenario config JSON document. Accepts explicit landmark lists
/// and/or seeded "random_landmarks" clusters, and either explicit pose
/// matrices or waypoints interpolated over the frame count. Throws
/// ParseError with the offending field name.
Scenario scenario_from_json(const std::string& bytes);

/// The built-in demo scenario config (also shipped in configs/demo.json).
std::string default_demo_config();

/// Landmarks of the known map that are plausibly in view at `frame`:
/// in front of the camera within an enlarged frustum and range. These become
/// the problem's landmark columns.
std::vector<int> select_visible_priors(const Scenario& s, int frame);

/// Simulates one frame: detections of visible landmarks (detection
/// probability, pixel noise), clutter, stereo triangulation, and the
/// gated log-likelihood matrix l_kj = -0.5 * distance(meas_k, prior_j)
/// against the prior landmarks transformed into the camera frame.
/// Cross-category pairs are gated. `truth` holds the generating prior index
/// (-1 for clutter). Deterministic given rng_seed. A frame with no
/// detections yields n_meas = 0.
AssignmentProblem build_problem(const Scenario& s, int frame, const std::vector<int>& prior_ids,
                                double null_log_lik, double gate, uint64_t rng_seed);

/// All non-empty frame problems of the scenario, in frame order, with
/// per-frame seeds mixed from the scenario seed.
std::vector<AssignmentProblem> generate_corpus(const Scenario& s, double null_log_lik,
                                               double gate);

}  // namespace semassoc
