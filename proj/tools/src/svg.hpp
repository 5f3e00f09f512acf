#pragma once

#include <array>
#include <string>
#include <vector>

#include "pcl/linalg.hpp"

namespace pcl::cli {

/// Affine window [xmin, xmax] x [ymin, ymax] of the chart z = 1.
struct Viewport {
  double xmin = -1.0, xmax = 1.0;
  double ymin = -1.0, ymax = 1.0;
};

struct ScenePoint {
  Vec3<double> p;
  std::string color = "#000000";
  std::string label;
  std::string cls = "point";
};

struct SceneLine {
  Vec3<double> l;
  std::string color = "#555555";
  double width = 1.0;
  std::string cls = "line";
};

/// Conic p^T m p = 0, drawn as a polyline of sampled points.
struct SceneConic {
  Matrix3<double> m;
  std::string color = "#1f77b4";
  std::string cls = "conic";
};

struct ScenePolyline {
  std::vector<Vec3<double>> pts;
  bool closed = false;
  std::string color = "#000000";
  std::string cls = "polyline";
};

/// Dense point cloud rendered as one path of dots.
struct SceneCloud {
  std::vector<Vec3<double>> pts;
  std::string color = "#000000";
  std::string cls = "cloud";
};

struct Scene {
  Viewport view;
  std::string title;
  std::vector<SceneConic> conics;
  std::vector<SceneLine> lines;
  std::vector<ScenePolyline> polylines;
  std::vector<SceneCloud> clouds;
  std::vector<ScenePoint> points;

  /// Fit the viewport to the finite points and clouds with a relative margin.
  void fit(double margin = 0.15);
};

/// Clip a homogeneous line to the viewport; false when it misses it.
bool clip_line(const Vec3<double>& l, const Viewport& v, std::array<double, 2>& a, std::array<double, 2>& b);

/// Points of a real conic in projective order, one per pencil line through
/// a base point of the conic; empty when no real point is found.
std::vector<Vec3<double>> sample_conic(const Matrix3<double>& m, int samples = 256);

/// Fixed six-decimal rendering with no negative zero.
std::string fixed6(double x);

std::string render_svg(const Scene& scene, int width = 800);

}  // namespace pcl::cli
