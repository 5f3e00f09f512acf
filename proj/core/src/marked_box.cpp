#include "pcl/marked_box.hpp"

#include <cmath>
#include <unordered_set>

namespace pcl {

namespace {

template <std::size_t N>
DimensionEstimate box_count(const std::vector<std::array<double, N>>& pts, int kmin, int kmax) {
  if (pts.size() < 1000) fail(ErrorKind::TooFewPoints, "box counting needs at least 1000 points");
  if (kmin < 0 || kmax - kmin < 1 || kmax > 24)
    fail(ErrorKind::DegenerateScaleRange, "need 0 <= kmin < kmax <= 24");
  std::array<double, N> lo, hi;
  lo.fill(INFINITY);
  hi.fill(-INFINITY);
  for (const auto& p : pts)
    for (std::size_t i = 0; i < N; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  double extent = 0.0;
  for (std::size_t i = 0; i < N; ++i) extent = std::max(extent, hi[i] - lo[i]);
  if (!(extent > 0.0) || !std::isfinite(extent)) fail(ErrorKind::DegenerateScaleRange, "points have no extent");

  DimensionEstimate est;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = kmin; k <= kmax; ++k) {
    const double cells = std::ldexp(1.0, k);
    std::unordered_set<std::uint64_t> occupied;
    for (const auto& p : pts) {
      std::uint64_t key = 0;
      for (std::size_t i = 0; i < N; ++i) {
        auto c = static_cast<std::uint64_t>(std::min(cells - 1, std::floor((p[i] - lo[i]) / extent * cells)));
        key = (key << 21) | c;
      }
      occupied.insert(key);
    }
    const double x = k * std::log(2.0);
    const double y = std::log(static_cast<double>(occupied.size()));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    est.scales.push_back({k, extent / cells, occupied.size()});
  }
  const double n = kmax - kmin + 1;
  est.dimension = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return est;
}

}  // namespace

DimensionEstimate box_dimension(const std::vector<std::array<double, 2>>& pts, int kmin, int kmax) {
  auto e = box_count(pts, kmin, kmax);
  e.chart = "affine";
  return e;
}

DimensionEstimate box_dimension(const std::vector<std::array<double, 3>>& pts, int kmin, int kmax) {
  auto e = box_count(pts, kmin, kmax);
  e.chart = "elliptic";
  return e;
}

DimensionEstimate pappus_curve_dimension(double x, double y, const CurveDimensionOptions& opts) {
  const auto seed = box_from_coords<double>(x, y);
  if (opts.chart == DimensionChart::Affine) {
    std::vector<std::array<double, 2>> pts;
    for (const auto& p : seed_arc_points(seed, opts.depth)) pts.push_back({p[0] / p[2], p[1] / p[2]});
    return box_dimension(pts, opts.kmin, opts.kmax);
  }
  std::vector<std::array<double, 3>> pts;
  std::array<double, 3> prev{0, 0, 0};
  for (const auto& p : curve_points(seed, opts.depth)) {
    const double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    std::array<double, 3> q{p[0] / n, p[1] / n, p[2] / n};
    if (q[0] * prev[0] + q[1] * prev[1] + q[2] * prev[2] < 0)
      for (auto& c : q) c = -c;
    pts.push_back(q);
    prev = q;
  }
  return box_dimension(pts, opts.kmin, opts.kmax);
}

std::vector<int> transversality_crossings(double x, double y, int depth, int sample_depth) {
  if (sample_depth < 1 || sample_depth > depth) fail(ErrorKind::InvalidArgument, "need 1 <= sample_depth <= depth");
  const auto seed = box_from_coords<double>(x, y);
  std::vector<Vec3<double>> arc;
  for (const auto& p : seed_arc_points(seed, depth)) arc.push_back({p[0] / p[2], p[1] / p[2], 1.0});
  std::vector<int> out;
  for (const auto& node : orbit_to_depth(seed, sample_depth)) {
    if (node.address.size() != static_cast<std::size_t>(sample_depth) + 1 || node.address[0] != '0') continue;
    if (node.address.find('1') == std::string::npos) continue;  // top is the arc endpoint
    const Vec3<double> line = node.box.line_a();
    int prev = 0, changes = 0;
    for (const auto& p : arc) {
      const double v = dot(line, p);
      const int s = std::fabs(v) <= 1e-12 * max_norm(line) ? 0 : (v > 0 ? 1 : -1);
      if (s == 0) continue;
      if (prev != 0 && s != prev) ++changes;
      prev = s;
    }
    out.push_back(changes);
  }
  return out;
}

}  // namespace pcl
