#include "semassoc/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "semassoc/problem_io.hpp"
#include "semassoc/rng.hpp"

namespace semassoc {

using nlohmann::json;

Eigen::Matrix4d Pose::world_from_cam() const {
  Eigen::Matrix4d T = Eigen::Matrix4d::Identity();
  T.topLeftCorner<3, 3>() = R;
  T.topRightCorner<3, 1>() = t;
  return T;
}

Eigen::Matrix4d Pose::cam_from_world() const {
  Eigen::Matrix4d T = Eigen::Matrix4d::Identity();
  T.topLeftCorner<3, 3>() = R.transpose();
  T.topRightCorner<3, 1>() = -R.transpose() * t;
  return T;
}

namespace {

double get_num(const json& obj, const std::string& where, const char* key, double fallback,
               bool required = false) {
  if (!obj.contains(key)) {
    if (required) throw ParseError(where + "." + key + ": missing");
    return fallback;
  }
  if (!obj[key].is_number()) throw ParseError(where + "." + key + ": expected a number");
  return obj[key].get<double>();
}

Eigen::Vector3d get_vec3(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
      !v[2].is_number()) {
    throw ParseError(where + ": expected [x, y, z]");
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

// Camera looks along its +z axis; build a pose whose z axis points along
// `dir` in the world, with y kept down-ish (y is image-down).
Pose look_along(const Eigen::Vector3d& position, const Eigen::Vector3d& dir) {
  Pose pose;
  Eigen::Vector3d z = dir.norm() > 1e-12 ? dir.normalized() : Eigen::Vector3d(0, 0, 1);
  Eigen::Vector3d down(0, 1, 0);
  Eigen::Vector3d x = down.cross(z);
  if (x.norm() < 1e-9) x = Eigen::Vector3d(1, 0, 0);
  x.normalize();
  Eigen::Vector3d y = z.cross(x);
  pose.R.col(0) = x;
  pose.R.col(1) = y;
  pose.R.col(2) = z;
  pose.t = position;
  return pose;
}

}  // namespace

Scenario scenario_from_json(const std::string& bytes) {
  json doc = json::parse(bytes, nullptr, false);
  if (doc.is_discarded()) throw ParseError("scenario config: invalid JSON");
  if (!doc.is_object()) throw ParseError("scenario config: expected a JSON object");

  Scenario s;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw ParseError("name: expected a string");
    s.name = doc["name"].get<std::string>();
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer()) {
      throw ParseError("seed: expected an integer");
    }
    s.seed = doc["seed"].get<uint64_t>();
  }
  s.max_range = get_num(doc, "scenario", "max_range", s.max_range);
  s.prior_margin = get_num(doc, "scenario", "prior_margin", s.prior_margin);

  if (doc.contains("camera")) {
    const json& c = doc["camera"];
    if (!c.is_object()) throw ParseError("camera: expected an object");
    s.camera.focal = get_num(c, "camera", "focal", s.camera.focal);
    s.camera.cx = get_num(c, "camera", "cx", s.camera.cx);
    s.camera.cy = get_num(c, "camera", "cy", s.camera.cy);
    s.camera.baseline = get_num(c, "camera", "baseline", s.camera.baseline);
    s.camera.width = static_cast<int>(get_num(c, "camera", "width", s.camera.width));
    s.camera.height = static_cast<int>(get_num(c, "camera", "height", s.camera.height));
    if (!(s.camera.baseline > 0)) throw ParseError("camera.baseline: must be positive");
    if (!(s.camera.focal > 0)) throw ParseError("camera.focal: must be positive");
  }

  if (doc.contains("noise")) {
    const json& n = doc["noise"];
    if (!n.is_object()) throw ParseError("noise: expected an object");
    s.noise.center_px_sigma = get_num(n, "noise", "center_px_sigma", s.noise.center_px_sigma);
    s.noise.size_rel_sigma = get_num(n, "noise", "size_rel_sigma", s.noise.size_rel_sigma);
    s.noise.detection_prob = get_num(n, "noise", "detection_prob", s.noise.detection_prob);
    s.noise.clutter_rate = get_num(n, "noise", "clutter_rate", s.noise.clutter_rate);
    s.noise.clutter_max = static_cast<int>(get_num(n, "noise", "clutter_max", s.noise.clutter_max));
    if (!(s.noise.detection_prob > 0.0 && s.noise.detection_prob <= 1.0)) {
      throw ParseError("noise.detection_prob: must be in (0, 1]");
    }
    if (s.noise.clutter_rate < 0) throw ParseError("noise.clutter_rate: must be >= 0");
  }

  if (doc.contains("landmarks")) {
    if (!doc["landmarks"].is_array()) throw ParseError("landmarks: expected an array");
    size_t i = 0;
    for (const json& lm : doc["landmarks"]) {
      std::string where = "landmarks[" + std::to_string(i++) + "]";
      if (!lm.is_object()) throw ParseError(where + ": expected an object");
      Landmark out;
      Eigen::Vector3d center = get_vec3(lm.contains("center") ? lm["center"] : json(),
                                        where + ".center");
      Eigen::Vector3d radii = get_vec3(lm.contains("radii") ? lm["radii"] : json(),
                                       where + ".radii");
      if (!(radii.minCoeff() > 0)) throw ParseError(where + ".radii: must be positive");
      out.shape = Ellipsoid::from_center_radii(center, radii);
      out.category = lm.contains("category") && lm["category"].is_string()
                         ? lm["category"].get<std::string>()
                         : "object";
      s.landmarks.push_back(std::move(out));
    }
  }

  // Seeded landmark clusters: centers uniform in a box around each cluster
  // center, radii and category drawn from the given lists.
  if (doc.contains("random_landmarks")) {
    if (!doc["random_landmarks"].is_array()) {
      throw ParseError("random_landmarks: expected an array");
    }
    Rng rng(mix_seed(s.seed, 0xC1A57E5ULL));
    size_t ci = 0;
    for (const json& cl : doc["random_landmarks"]) {
      std::string where = "random_landmarks[" + std::to_string(ci++) + "]";
      if (!cl.is_object()) throw ParseError(where + ": expected an object");
      int count = static_cast<int>(get_num(cl, where, "count", 0, true));
      Eigen::Vector3d center = get_vec3(cl.contains("center") ? cl["center"] : json(),
                                        where + ".center");
      double spread = get_num(cl, where, "spread", 5.0);
      double r_min = get_num(cl, where, "radius_min", 0.3);
      double r_max = get_num(cl, where, "radius_max", 1.5);
      std::vector<std::string> categories{"object"};
      if (cl.contains("categories")) {
        if (!cl["categories"].is_array()) throw ParseError(where + ".categories: expected array");
        categories.clear();
        for (const json& c : cl["categories"]) {
          if (!c.is_string()) throw ParseError(where + ".categories: expected strings");
          categories.push_back(c.get<std::string>());
        }
        if (categories.empty()) throw ParseError(where + ".categories: empty");
      }
      for (int i = 0; i < count; ++i) {
        Eigen::Vector3d pos = center + Eigen::Vector3d(rng.uniform(-spread, spread),
                                                       rng.uniform(-spread * 0.2, spread * 0.2),
                                                       rng.uniform(-spread, spread));
        Eigen::Vector3d radii(rng.uniform(r_min, r_max), rng.uniform(r_min, r_max),
                              rng.uniform(r_min, r_max));
        Landmark lm;
        lm.shape = Ellipsoid::from_center_radii(pos, radii);
        lm.category = categories[rng.uniform_index(categories.size())];
        s.landmarks.push_back(std::move(lm));
      }
    }
  }

  if (doc.contains("trajectory")) {
    const json& t = doc["trajectory"];
    if (!t.is_object()) throw ParseError("trajectory: expected an object");
    if (t.contains("poses")) {
      if (!t["poses"].is_array()) throw ParseError("trajectory.poses: expected an array");
      size_t i = 0;
      for (const json& m : t["poses"]) {
        std::string where = "trajectory.poses[" + std::to_string(i++) + "]";
        if (!m.is_array() || m.size() != 16) throw ParseError(where + ": expected 16 numbers");
        Eigen::Matrix4d T;
        for (int r = 0; r < 4; ++r) {
          for (int c = 0; c < 4; ++c) {
            const json& v = m[r * 4 + c];
            if (!v.is_number()) throw ParseError(where + ": expected 16 numbers");
            T(r, c) = v.get<double>();
          }
        }
        Pose pose;
        pose.R = T.topLeftCorner<3, 3>();
        pose.t = T.topRightCorner<3, 1>();
        s.trajectory.push_back(pose);
      }
    } else if (t.contains("waypoints")) {
      if (!t["waypoints"].is_array() || t["waypoints"].size() < 2) {
        throw ParseError("trajectory.waypoints: expected at least 2 waypoints");
      }
      int frames = static_cast<int>(get_num(t, "trajectory", "frames", 0, true));
      if (frames < 1) throw ParseError("trajectory.frames: must be >= 1");
      std::vector<Eigen::Vector3d> wps;
      size_t i = 0;
      for (const json& w : t["waypoints"]) {
        wps.push_back(get_vec3(w, "trajectory.waypoints[" + std::to_string(i++) + "]"));
      }
      for (int f = 0; f < frames; ++f) {
        double u = frames == 1 ? 0.0 : static_cast<double>(f) / (frames - 1);
        double pos = u * (wps.size() - 1);
        size_t seg = std::min(static_cast<size_t>(pos), wps.size() - 2);
        double frac = pos - seg;
        Eigen::Vector3d p = (1 - frac) * wps[seg] + frac * wps[seg + 1];
        Eigen::Vector3d dir = wps[seg + 1] - wps[seg];
        s.trajectory.push_back(look_along(p, dir));
      }
    } else {
      throw ParseError("trajectory: expected \"poses\" or \"waypoints\"");
    }
  }
  if (s.trajectory.empty()) throw ParseError("trajectory: missing or empty");
  return s;
}

namespace {

struct Projection {
  double u, v, z;
  bool in_image(const CameraModel& cam, double margin) const {
    double half_w = margin * cam.width / 2.0;
    double half_h = margin * cam.height / 2.0;
    return std::abs(u - cam.cx) <= half_w && std::abs(v - cam.cy) <= half_h;
  }
};

Projection project_center(const CameraModel& cam, const Eigen::Vector3d& x_cam) {
  return {cam.focal * x_cam.x() / x_cam.z() + cam.cx, cam.focal * x_cam.y() / x_cam.z() + cam.cy,
          x_cam.z()};
}

}  // namespace

std::vector<int> select_visible_priors(const Scenario& s, int frame) {
  std::vector<int> ids;
  Eigen::Matrix4d T_cw = s.trajectory.at(frame).cam_from_world();
  for (size_t i = 0; i < s.landmarks.size(); ++i) {
    Eigen::Vector3d x = (T_cw * s.landmarks[i].shape.mu.homogeneous()).head<3>();
    if (x.z() < 0.3 || x.z() > s.max_range * 1.25) continue;
    if (project_center(s.camera, x).in_image(s.camera, s.prior_margin)) {
      ids.push_back(static_cast<int>(i));
    }
  }
  return ids;
}

AssignmentProblem build_problem(const Scenario& s, int frame, const std::vector<int>& prior_ids,
                                double null_log_lik, double gate, uint64_t rng_seed) {
  Rng rng(rng_seed);
  const CameraModel& cam = s.camera;
  Eigen::Matrix4d T_cw = s.trajectory.at(frame).cam_from_world();

  // Prior map in the camera frame.
  std::vector<Ellipsoid> priors;
  std::vector<const std::string*> prior_cat;
  priors.reserve(prior_ids.size());
  for (int id : prior_ids) {
    priors.push_back(s.landmarks.at(id).shape.transformed(T_cw));
    prior_cat.push_back(&s.landmarks.at(id).category);
  }

  struct Detection {
    Ellipsoid meas;
    const std::string* category;
    int truth;
  };
  std::vector<Detection> detections;

  // True landmark detections.
  for (size_t i = 0; i < s.landmarks.size(); ++i) {
    const Landmark& lm = s.landmarks[i];
    Ellipsoid in_cam = lm.shape.transformed(T_cw);
    if (in_cam.mu.z() < 0.5 || in_cam.mu.z() > s.max_range) continue;
    Projection proj = project_center(cam, in_cam.mu);
    if (!proj.in_image(cam, 1.0)) continue;
    if (!rng.bernoulli(s.noise.detection_prob)) continue;

    double hw = cam.focal * std::sqrt(std::max(in_cam.P(0, 0), 1e-12)) / proj.z;
    double hh = cam.focal * std::sqrt(std::max(in_cam.P(1, 1), 1e-12)) / proj.z;
    double disparity = cam.focal * cam.baseline / proj.z;
    BoundingBox left{proj.u + rng.normal(0, s.noise.center_px_sigma),
                     proj.v + rng.normal(0, s.noise.center_px_sigma),
                     std::max(1.0, 2 * hw * (1 + rng.normal(0, s.noise.size_rel_sigma))),
                     std::max(1.0, 2 * hh * (1 + rng.normal(0, s.noise.size_rel_sigma)))};
    BoundingBox right = left;
    right.cx = proj.u - disparity + rng.normal(0, s.noise.center_px_sigma);

    int truth = kNullTarget;
    for (size_t pi = 0; pi < prior_ids.size(); ++pi) {
      if (prior_ids[pi] == static_cast<int>(i)) {
        truth = static_cast<int>(pi);
        break;
      }
    }
    try {
      detections.push_back({triangulate_measurement(left, right, cam), &lm.category, truth});
    } catch (const UntriangulatableDetection&) {
      // dropped detection (noise pushed the disparity under threshold)
    }
  }

  // Clutter: uniform boxes at uniform depth, random category.
  static const std::string kClutterFallback = "object";
  std::vector<const std::string*> categories;
  for (const Landmark& lm : s.landmarks) {
    if (std::find_if(categories.begin(), categories.end(),
                     [&](const std::string* c) { return *c == lm.category; }) ==
        categories.end()) {
      categories.push_back(&lm.category);
    }
  }
  int n_clutter = std::min(rng.poisson(s.noise.clutter_rate), s.noise.clutter_max);
  for (int i = 0; i < n_clutter; ++i) {
    double z = rng.uniform(2.0, std::max(4.0, s.max_range * 0.8));
    double u = rng.uniform(0.05 * cam.width, 0.95 * cam.width);
    double v = rng.uniform(0.05 * cam.height, 0.95 * cam.height);
    double w = rng.uniform(8.0, 60.0);
    double h = rng.uniform(8.0, 60.0);
    BoundingBox left{u, v, w, h};
    BoundingBox right = left;
    right.cx = u - cam.focal * cam.baseline / z;
    const std::string* cat =
        categories.empty() ? &kClutterFallback : categories[rng.uniform_index(categories.size())];
    try {
      detections.push_back({triangulate_measurement(left, right, cam), cat, kNullTarget});
    } catch (const UntriangulatableDetection&) {
    }
  }

  AssignmentProblem p;
  p.n_meas = static_cast<int>(detections.size());
  p.n_land = static_cast<int>(priors.size());
  p.log_lik.assign(static_cast<size_t>(p.n_meas) * p.n_land, kNegInf);
  p.null_log_lik.assign(p.n_meas, null_log_lik);
  std::vector<int> truth(p.n_meas, kNullTarget);
  for (int k = 0; k < p.n_meas; ++k) {
    truth[k] = detections[k].truth;
    for (int j = 0; j < p.n_land; ++j) {
      if (*detections[k].category != *prior_cat[j]) continue;
      double d = ellipsoid_distance(detections[k].meas, priors[j]);
      if (d <= gate) p.ll(k, j) = -0.5 * d;
    }
  }
  p.truth = std::move(truth);

  char frame_tag[32];
  std::snprintf(frame_tag, sizeof(frame_tag), "%04d", frame);
  p.meta["id"] = s.name + "/" + frame_tag;
  p.meta["scenario"] = s.name;
  p.meta["frame"] = std::to_string(frame);
  p.validate();
  return p;
}

std::vector<AssignmentProblem> generate_corpus(const Scenario& s, double null_log_lik,
                                               double gate) {
  std::vector<AssignmentProblem> out;
  for (int frame = 0; frame < static_cast<int>(s.trajectory.size()); ++frame) {
    AssignmentProblem p = build_problem(s, frame, select_visible_priors(s, frame), null_log_lik,
                                        gate, mix_seed(s.seed, frame));
    if (p.n_meas == 0) continue;  // empty frames are skipped
    out.push_back(std::move(p));
  }
  return out;
}

std::string default_demo_config() {
  return R"({
  "name": "demo",
  "seed": 7,
  "max_range": 45.0,
  "prior_margin": 1.6,
  "camera": {"focal": 500.0, "cx": 320.0, "cy": 240.0, "baseline": 0.5, "width": 640, "height": 480},
  "noise": {"center_px_sigma": 1.0, "size_rel_sigma": 0.05, "detection_prob": 0.85, "clutter_rate": 0.6, "clutter_max": 6},
  "random_landmarks": [
    {"count": 3,  "center": [0, 0, 25],    "spread": 6.0,  "categories": ["car", "trunk"]},
    {"count": 7,  "center": [6, 0, 60],    "spread": 8.0,  "categories": ["car", "trunk", "sign"]},
    {"count": 12, "center": [20, 0, 95],   "spread": 9.0,  "categories": ["car", "trunk", "sign"]},
    {"count": 18, "center": [40, 0, 125],  "spread": 10.0, "categories": ["car", "trunk"]},
    {"count": 30, "center": [70, 0, 150],  "spread": 12.0, "categories": ["car", "trunk", "sign"]}
  ],
  "trajectory": {
    "frames": 160,
    "waypoints": [[0, 0, -10], [4, 0, 30], [14, 0, 65], [30, 0, 100], [55, 0, 130], [90, 0, 155]]
  }
})";
}

}  // namespace semassoc
