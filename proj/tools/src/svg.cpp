#include "svg.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace pcl::cli {

namespace {

using P2 = std::array<double, 2>;

bool finite_chart(const Vec3<double>& p, P2& out) {
  const double n = std::max({std::fabs(p[0]), std::fabs(p[1]), std::fabs(p[2])});
  if (n == 0.0 || std::fabs(p[2]) <= 1e-12 * n) return false;
  out = {p[0] / p[2], p[1] / p[2]};
  return std::isfinite(out[0]) && std::isfinite(out[1]);
}

double qform(const Matrix3<double>& m, const Vec3<double>& a, const Vec3<double>& b) { return dot(a, mul(m, b)); }

Vec3<double> unit(const Vec3<double>& v) {
  const double n = std::sqrt(dot(v, v));
  return n == 0.0 ? v : Vec3<double>{v[0] / n, v[1] / n, v[2] / n};
}

// A real point of the conic on one of a few candidate lines.
bool base_point(const Matrix3<double>& m, Vec3<double>& p0) {
  std::vector<Vec3<double>> lines;
  const Vec3<double> center = mul(adjugate(m), Vec3<double>{0.0, 0.0, 1.0});
  lines.push_back(cross(center, Vec3<double>{1.0, 0.0, 0.0}));
  lines.push_back(cross(center, Vec3<double>{0.0, 1.0, 0.0}));
  for (const Vec3<double>& l : {Vec3<double>{1, 0, 0}, Vec3<double>{0, 1, 0}, Vec3<double>{0, 0, 1},
                                 Vec3<double>{1, 1, 0}, Vec3<double>{1, -1, 0}, Vec3<double>{1, 2, 3}})
    lines.push_back(l);
  const double scale = std::max(1e-300, max_norm(m));
  for (const auto& raw : lines) {
    if (max_norm(raw) == 0.0) continue;
    const Vec3<double> l = unit(raw);
    Vec3<double> u = cross(l, Vec3<double>{1.0, 0.0, 0.0});
    if (max_norm(u) < 0.5) u = cross(l, Vec3<double>{0.0, 1.0, 0.0});
    u = unit(u);
    const Vec3<double> v = unit(cross(l, u));
    const double a = qform(m, u, u) / scale, b = qform(m, u, v) / scale, c = qform(m, v, v) / scale;
    if (std::fabs(a) < 1e-14) {
      p0 = u;
      return true;
    }
    const double disc = b * b - a * c;
    if (disc < 0.0) continue;
    const double s = (-b + std::sqrt(disc)) / a;
    p0 = unit(Vec3<double>{s * u[0] + v[0], s * u[1] + v[1], s * u[2] + v[2]});
    return true;
  }
  return false;
}

std::string color_attr(const std::string& c) { return "\"" + c + "\""; }

}  // namespace

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

void Scene::fit(double margin) {
  bool any = false;
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  auto add = [&](const Vec3<double>& p) {
    P2 q;
    if (!finite_chart(p, q)) return;
    if (!any) {
      xmin = xmax = q[0];
      ymin = ymax = q[1];
      any = true;
    }
    xmin = std::min(xmin, q[0]);
    xmax = std::max(xmax, q[0]);
    ymin = std::min(ymin, q[1]);
    ymax = std::max(ymax, q[1]);
  };
  for (const auto& p : points) add(p.p);
  for (const auto& c : clouds)
    for (const auto& p : c.pts) add(p);
  for (const auto& pl : polylines)
    for (const auto& p : pl.pts) add(p);
  if (!any) return;
  const double ext = std::max({xmax - xmin, ymax - ymin, 1e-9});
  const double pad = margin * ext;
  const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
  const double hx = 0.5 * std::max(xmax - xmin, 1e-3 * ext) + pad;
  const double hy = 0.5 * std::max(ymax - ymin, 1e-3 * ext) + pad;
  view = {cx - hx, cx + hx, cy - hy, cy + hy};
}

bool clip_line(const Vec3<double>& l, const Viewport& v, P2& a, P2& b) {
  std::vector<P2> hits;
  const double tol = 1e-12 * std::max(v.xmax - v.xmin, v.ymax - v.ymin);
  if (std::fabs(l[1]) > 0.0)
    for (double x : {v.xmin, v.xmax}) {
      const double y = -(l[0] * x + l[2]) / l[1];
      if (y >= v.ymin - tol && y <= v.ymax + tol) hits.push_back({x, y});
    }
  if (std::fabs(l[0]) > 0.0)
    for (double y : {v.ymin, v.ymax}) {
      const double x = -(l[1] * y + l[2]) / l[0];
      if (x >= v.xmin - tol && x <= v.xmax + tol) hits.push_back({x, y});
    }
  if (hits.size() < 2) return false;
  double best = -1.0;
  for (std::size_t i = 0; i < hits.size(); ++i)
    for (std::size_t j = i + 1; j < hits.size(); ++j) {
      const double d = std::hypot(hits[i][0] - hits[j][0], hits[i][1] - hits[j][1]);
      if (d > best) {
        best = d;
        a = hits[i];
        b = hits[j];
      }
    }
  return best > tol;
}

std::vector<Vec3<double>> sample_conic(const Matrix3<double>& m, int samples) {
  Vec3<double> p0;
  if (!base_point(m, p0)) return {};
  Vec3<double> e1 = cross(p0, Vec3<double>{0.0, 0.0, 1.0});
  if (max_norm(e1) < 0.5) e1 = cross(p0, Vec3<double>{1.0, 0.0, 0.0});
  e1 = unit(e1);
  const Vec3<double> e2 = unit(cross(p0, e1));
  std::vector<Vec3<double>> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    const double th = std::numbers::pi * k / samples;
    const Vec3<double> w = {std::cos(th) * e1[0] + std::sin(th) * e2[0], std::cos(th) * e1[1] + std::sin(th) * e2[1],
                            std::cos(th) * e1[2] + std::sin(th) * e2[2]};
    const double s = -qform(m, w, w), t = 2.0 * qform(m, p0, w);
    out.push_back({s * p0[0] + t * w[0], s * p0[1] + t * w[1], s * p0[2] + t * w[2]});
  }
  return out;
}

std::string render_svg(const Scene& scene, int width) {
  const Viewport& v = scene.view;
  const double pad = 20.0;
  const double k = (width - 2.0 * pad) / (v.xmax - v.xmin);
  const double height = std::round((v.ymax - v.ymin) * k + 2.0 * pad);
  const double tx = pad - k * v.xmin, ty = pad + k * v.ymax;
  auto px = [&](const P2& p) { return fixed6(k * p[0] + tx) + "," + fixed6(-k * p[1] + ty); };
  const double diag = std::hypot(v.xmax - v.xmin, v.ymax - v.ymin);
  auto near_view = [&](const P2& p) {
    return p[0] > v.xmin - 2 * diag && p[0] < v.xmax + 2 * diag && p[1] > v.ymin - 2 * diag && p[1] < v.ymax + 2 * diag;
  };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  os << "<metadata>{\"chart\":\"affine z=1\",\"viewport\":[" << fixed6(v.xmin) << "," << fixed6(v.xmax) << ","
     << fixed6(v.ymin) << "," << fixed6(v.ymax) << "],\"transform\":[" << fixed6(k) << ",0,0," << fixed6(-k) << ","
     << fixed6(tx) << "," << fixed6(ty) << "]}</metadata>\n";
  if (!scene.title.empty()) os << "<title>" << scene.title << "</title>\n";
  os << "<defs><clipPath id=\"view\"><rect x=\"" << fixed6(pad) << "\" y=\"" << fixed6(pad) << "\" width=\""
     << fixed6(width - 2 * pad) << "\" height=\"" << fixed6(height - 2 * pad) << "\"/></clipPath></defs>\n";
  os << "<g clip-path=\"url(#view)\" fill=\"none\">\n";

  for (const auto& c : scene.conics) {
    const auto pts = sample_conic(c.m);
    std::vector<std::vector<P2>> runs(1);
    bool wrapped = true;
    for (const auto& p : pts) {
      P2 q;
      const bool ok = finite_chart(p, q) && near_view(q);
      if (ok && !runs.back().empty() && std::hypot(q[0] - runs.back().back()[0], q[1] - runs.back().back()[1]) > diag)
        runs.emplace_back();
      if (!ok) {
        wrapped = false;
        if (!runs.back().empty()) runs.emplace_back();
        continue;
      }
      runs.back().push_back(q);
    }
    if (wrapped && runs.size() == 1 && !runs[0].empty()) runs[0].push_back(runs[0].front());
    for (const auto& r : runs) {
      if (r.size() < 2) continue;
      os << "<polyline class=\"" << c.cls << "\" stroke=" << color_attr(c.color) << " points=\"";
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? " " : "") << px(r[i]);
      os << "\"/>\n";
    }
  }

  for (const auto& l : scene.lines) {
    P2 a, b;
    if (!clip_line(l.l, v, a, b)) continue;
    const std::string pa = px(a), pb = px(b);
    os << "<line class=\"" << l.cls << "\" stroke=" << color_attr(l.color) << " stroke-width=\"" << fixed6(l.width)
       << "\" x1=\"" << pa.substr(0, pa.find(',')) << "\" y1=\"" << pa.substr(pa.find(',') + 1) << "\" x2=\""
       << pb.substr(0, pb.find(',')) << "\" y2=\"" << pb.substr(pb.find(',') + 1) << "\"/>\n";
  }

  for (const auto& pl : scene.polylines) {
    std::vector<P2> r;
    for (const auto& p : pl.pts) {
      P2 q;
      if (finite_chart(p, q)) r.push_back(q);
    }
    if (r.size() < 2) continue;
    os << "<" << (pl.closed ? "polygon" : "polyline") << " class=\"" << pl.cls << "\" stroke=" << color_attr(pl.color)
       << " points=\"";
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? " " : "") << px(r[i]);
    os << "\"/>\n";
  }

  for (const auto& c : scene.clouds) {
    os << "<path class=\"" << c.cls << "\" stroke=" << color_attr(c.color)
       << " stroke-width=\"1.500000\" stroke-linecap=\"round\" d=\"";
    bool first = true;
    for (const auto& p : c.pts) {
      P2 q;
      if (!finite_chart(p, q) || !near_view(q)) continue;
      const std::string s = px(q);
      os << (first ? "" : " ") << "M" << s << "h0";
      first = false;
    }
    os << "\"/>\n";
  }
  os << "</g>\n";

  for (const auto& p : scene.points) {
    P2 q;
    if (!finite_chart(p.p, q)) continue;
    const std::string s = px(q);
    const std::string x = s.substr(0, s.find(',')), y = s.substr(s.find(',') + 1);
    os << "<circle class=\"" << p.cls << "\" cx=\"" << x << "\" cy=\"" << y << "\" r=\"3.000000\" fill="
       << color_attr(p.color) << "/>\n";
    if (!p.label.empty())
      os << "<text class=\"label\" x=\"" << fixed6(k * q[0] + tx + 5) << "\" y=\"" << fixed6(-k * q[1] + ty - 5)
         << "\" font-size=\"11\">" << p.label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace pcl::cli
