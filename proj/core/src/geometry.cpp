#include "inav/geometry.hpp"

#include <algorithm>
#include <limits>

namespace inav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
  double lo = kInf;
  double hi = -kInf;
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

Interval project(const PlacedShape& s, const Vec2& axis) {
  Interval iv;
  if (s.is_circle) {
    double c = s.center.dot(axis);
    iv.add(c - s.radius);
    iv.add(c + s.radius);
  } else {
    for (const Vec2& v : s.vertices) iv.add(v.dot(axis));
  }
  return iv;
}

Interval project(const Segment& seg, const Vec2& axis) {
  Interval iv;
  iv.add(seg.a.dot(axis));
  iv.add(seg.b.dot(axis));
  return iv;
}

// Overlap of projections; negative when separated.
double overlap(const Interval& a, const Interval& b) {
  return std::min(a.hi, b.hi) - std::max(a.lo, b.lo);
}

void append_edge_normals(const std::vector<Vec2>& verts, std::vector<Vec2>& axes) {
  size_t n = verts.size();
  for (size_t i = 0; i < n; ++i) {
    Vec2 e = verts[(i + 1) % n] - verts[i];
    Vec2 nrm = e.perp().normalized();
    if (nrm.norm_sq() > 0.0) axes.push_back(nrm);
  }
}

Vec2 closest_vertex(const std::vector<Vec2>& verts, const Vec2& p) {
  Vec2 best = verts.front();
  double best_d = (best - p).norm_sq();
  for (const Vec2& v : verts) {
    double d = (v - p).norm_sq();
    if (d < best_d) {
      best_d = d;
      best = v;
    }
  }
  return best;
}

// Closest point on polygon boundary to p.
Vec2 closest_boundary_point(const std::vector<Vec2>& verts, const Vec2& p) {
  Vec2 best;
  double best_d = kInf;
  size_t n = verts.size();
  for (size_t i = 0; i < n; ++i) {
    Vec2 q = closest_point_on_segment({verts[i], verts[(i + 1) % n]}, p);
    double d = (q - p).norm_sq();
    if (d < best_d) {
      best_d = d;
      best = q;
    }
  }
  return best;
}

// SAT over the provided axes for shapes known to overlap; returns the minimum
// translation separating `a` from `b`. Per axis the candidates are pushing a
// past b's upper or lower end, which stays correct when one projection
// contains the other.
Contact min_translation(const PlacedShape& a, const PlacedShape& b,
                        const std::vector<Vec2>& axes) {
  double best = kInf;
  Vec2 best_axis;
  for (const Vec2& axis : axes) {
    Interval ia = project(a, axis);
    Interval ib = project(b, axis);
    double push_up = ib.hi - ia.lo;
    double push_down = ia.hi - ib.lo;
    double mag = std::min(push_up, push_down);
    if (mag < best) {
      best = mag;
      best_axis = push_up <= push_down ? axis : -axis;
    }
  }
  Contact c;
  c.depth = best;
  c.normal = best_axis;
  c.point = a.is_circle ? a.center - best_axis * a.radius
                        : closest_boundary_point(a.vertices, b.center);
  return c;
}

}  // namespace

ConvexPolygon make_rectangle(double length, double width) {
  double hl = length * 0.5, hw = width * 0.5;
  return ConvexPolygon{{{-hl, -hw}, {hl, -hw}, {hl, hw}, {-hl, hw}}};
}

double shape_bounding_radius(const Shape& shape) {
  if (const Circle* c = std::get_if<Circle>(&shape)) return c->radius;
  const ConvexPolygon& p = std::get<ConvexPolygon>(shape);
  double r = 0.0;
  for (const Vec2& v : p.vertices) r = std::max(r, v.norm());
  return r;
}

AABB PlacedShape::bounds() const {
  if (is_circle) {
    return {{center.x - radius, center.y - radius}, {center.x + radius, center.y + radius}};
  }
  AABB box{{kInf, kInf}, {-kInf, -kInf}};
  for (const Vec2& v : vertices) {
    box.min.x = std::min(box.min.x, v.x);
    box.min.y = std::min(box.min.y, v.y);
    box.max.x = std::max(box.max.x, v.x);
    box.max.y = std::max(box.max.y, v.y);
  }
  return box;
}

PlacedShape place_shape(const Shape& shape, const Pose& pose) {
  PlacedShape out;
  if (const Circle* c = std::get_if<Circle>(&shape)) {
    out.is_circle = true;
    out.center = pose.position();
    out.radius = c->radius;
    return out;
  }
  const ConvexPolygon& poly = std::get<ConvexPolygon>(shape);
  out.is_circle = false;
  out.vertices.reserve(poly.vertices.size());
  Vec2 centroid;
  for (const Vec2& v : poly.vertices) {
    Vec2 w = pose.to_world(v);
    out.vertices.push_back(w);
    centroid += w;
  }
  out.center = centroid / static_cast<double>(poly.vertices.size());
  return out;
}

Vec2 closest_point_on_segment(const Segment& seg, const Vec2& p) {
  Vec2 d = seg.b - seg.a;
  double len_sq = d.norm_sq();
  if (len_sq == 0.0) return seg.a;
  double t = std::clamp((p - seg.a).dot(d) / len_sq, 0.0, 1.0);
  return seg.a + d * t;
}

double distance_point_segment(const Vec2& p, const Segment& seg) {
  return (p - closest_point_on_segment(seg, p)).norm();
}

bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& verts) {
  size_t n = verts.size();
  for (size_t i = 0; i < n; ++i) {
    Vec2 e = verts[(i + 1) % n] - verts[i];
    if (e.cross(p - verts[i]) < 0.0) return false;  // CCW winding
  }
  return true;
}

double distance_point_shape(const Vec2& p, const PlacedShape& s) {
  if (s.is_circle) {
    return std::max(0.0, (p - s.center).norm() - s.radius);
  }
  if (point_in_polygon(p, s.vertices)) return 0.0;
  return (p - closest_boundary_point(s.vertices, p)).norm();
}

std::optional<Contact> disc_vs_segment(const Vec2& center, double radius, const Segment& seg) {
  Vec2 q = closest_point_on_segment(seg, center);
  Vec2 d = center - q;
  double dist = d.norm();
  if (dist >= radius) return std::nullopt;
  Contact c;
  c.depth = radius - dist;
  // Degenerate overlap of the segment line: push perpendicular to the wall.
  c.normal = dist > 1e-12 ? d / dist : seg.direction().perp();
  c.point = q;
  return c;
}

std::optional<Contact> disc_vs_shape(const Vec2& center, double radius, const PlacedShape& s) {
  if (s.is_circle) {
    Vec2 d = center - s.center;
    double dist = d.norm();
    if (dist >= radius + s.radius) return std::nullopt;
    Contact c;
    c.depth = radius + s.radius - dist;
    c.normal = dist > 1e-12 ? d / dist : Vec2{1.0, 0.0};
    c.point = s.center + c.normal * s.radius;
    return c;
  }
  if (point_in_polygon(center, s.vertices)) {
    // Center swallowed by the polygon: exit through the nearest face.
    Vec2 q = closest_boundary_point(s.vertices, center);
    Vec2 n = (q - center).normalized();
    Contact c;
    c.depth = radius + (q - center).norm();
    c.normal = -n;
    c.point = q;
    return c;
  }
  Vec2 q = closest_boundary_point(s.vertices, center);
  Vec2 d = center - q;
  double dist = d.norm();
  if (dist >= radius) return std::nullopt;
  Contact c;
  c.depth = radius - dist;
  c.normal = dist > 1e-12 ? d / dist : Vec2{1.0, 0.0};
  c.point = q;
  return c;
}

std::optional<Contact> shape_vs_segment(const PlacedShape& s, const Segment& seg) {
  if (s.is_circle) {
    auto c = disc_vs_segment(s.center, s.radius, seg);
    if (!c) return std::nullopt;
    c->point = closest_point_on_segment(seg, s.center);
    return c;
  }
  // Exact overlap test first: an endpoint inside, or an edge crossing.
  bool hit = point_in_polygon(seg.a, s.vertices) || point_in_polygon(seg.b, s.vertices);
  size_t n = s.vertices.size();
  for (size_t i = 0; !hit && i < n; ++i) {
    Segment edge{s.vertices[i], s.vertices[(i + 1) % n]};
    Vec2 r = edge.b - edge.a, q = seg.b - seg.a;
    double denom = r.cross(q);
    if (std::abs(denom) < 1e-15) continue;
    double t = (seg.a - edge.a).cross(q) / denom;
    double u = (seg.a - edge.a).cross(r) / denom;
    if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0) hit = true;
  }
  if (!hit) return std::nullopt;

  PlacedShape segshape;
  segshape.is_circle = false;
  segshape.vertices = {seg.a, seg.b};
  segshape.center = seg.midpoint();
  std::vector<Vec2> axes;
  append_edge_normals(s.vertices, axes);
  Vec2 seg_n = (seg.b - seg.a).perp().normalized();
  if (seg_n.norm_sq() > 0.0) {
    axes.push_back(seg_n);
    axes.push_back(seg.direction());
  }
  Contact c = min_translation(s, segshape, axes);
  if (c.depth <= 0.0) return std::nullopt;  // boundary touch
  return c;
}

std::optional<Contact> shape_vs_shape(const PlacedShape& a, const PlacedShape& b) {
  if (a.is_circle && b.is_circle) {
    auto c = disc_vs_shape(a.center, a.radius, b);
    return c;
  }
  if (a.is_circle) {
    return disc_vs_shape(a.center, a.radius, b);
  }
  if (b.is_circle) {
    auto c = disc_vs_shape(b.center, b.radius, a);
    if (!c) return std::nullopt;
    c->normal = -c->normal;  // translation is for `a` now
    return c;
  }
  std::vector<Vec2> axes;
  append_edge_normals(a.vertices, axes);
  append_edge_normals(b.vertices, axes);
  for (const Vec2& axis : axes) {
    if (overlap(project(a, axis), project(b, axis)) <= 0.0) return std::nullopt;
  }
  Contact c = min_translation(a, b, axes);
  if (c.depth <= 0.0) return std::nullopt;
  return c;
}

bool shapes_overlap(const PlacedShape& a, const PlacedShape& b) {
  return shape_vs_shape(a, b).has_value();
}

std::optional<double> ray_vs_segment(const Vec2& origin, const Vec2& dir, const Segment& seg) {
  Vec2 v = seg.b - seg.a;
  double denom = dir.cross(v);
  if (std::abs(denom) < 1e-15) return std::nullopt;  // parallel
  Vec2 w = seg.a - origin;
  double t = w.cross(v) / denom;   // along ray
  double u = w.cross(dir) / denom; // along segment
  if (t < 0.0 || u < 0.0 || u > 1.0) return std::nullopt;
  return t;
}

std::optional<double> ray_vs_circle(const Vec2& origin, const Vec2& dir, const Vec2& center, double radius) {
  Vec2 oc = origin - center;
  double b = oc.dot(dir);
  double c = oc.norm_sq() - radius * radius;
  double disc = b * b - c;
  if (disc < 0.0) return std::nullopt;
  double sq = std::sqrt(disc);
  double t = -b - sq;
  if (t < 0.0) t = -b + sq;  // origin inside
  if (t < 0.0) return std::nullopt;
  return t;
}

std::optional<double> ray_vs_shape(const Vec2& origin, const Vec2& dir, const PlacedShape& s) {
  if (s.is_circle) return ray_vs_circle(origin, dir, s.center, s.radius);
  std::optional<double> best;
  size_t n = s.vertices.size();
  for (size_t i = 0; i < n; ++i) {
    auto t = ray_vs_segment(origin, dir, {s.vertices[i], s.vertices[(i + 1) % n]});
    if (t && (!best || *t < *best)) best = t;
  }
  return best;
}

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  if (a > M_PI) a -= 2.0 * M_PI;
  if (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

}  // namespace inav
