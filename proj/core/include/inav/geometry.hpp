#pragma once

#include <cmath>
#include <optional>
#include <variant>
#include <vector>

namespace inav {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double norm_sq() const { return x * x + y * y; }
  Vec2 perp() const { return {-y, x}; }  // 90 deg CCW
  Vec2 normalized() const {
    double n = norm();
    return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
  }
  Vec2 rotated(double angle) const {
    double c = std::cos(angle), s = std::sin(angle);
    return {c * x - s * y, s * x + c * y};
  }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Planar pose; x forward, y left, theta CCW from +x.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Vec2 position() const { return {x, y}; }
  Vec2 heading() const { return {std::cos(theta), std::sin(theta)}; }

  // World point expressed in this pose's frame.
  Vec2 to_local(const Vec2& world) const {
    return (world - position()).rotated(-theta);
  }
  Vec2 to_world(const Vec2& local) const {
    return position() + local.rotated(theta);
  }
};

struct AABB {
  Vec2 min;
  Vec2 max;

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  double area() const { return width() * height(); }
  bool contains(const Vec2& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
};

struct Segment {
  Vec2 a;
  Vec2 b;

  double length() const { return (b - a).norm(); }
  Vec2 direction() const { return (b - a).normalized(); }
  Vec2 midpoint() const { return (a + b) * 0.5; }
};

struct Circle {
  double radius = 0.0;
};

// Vertices in body frame, counter-clockwise.
struct ConvexPolygon {
  std::vector<Vec2> vertices;
};

ConvexPolygon make_rectangle(double length, double width);

using Shape = std::variant<Circle, ConvexPolygon>;

double shape_bounding_radius(const Shape& shape);

// A shape transformed into the world frame.
struct PlacedShape {
  bool is_circle = true;
  Vec2 center;                 // circle center (also polygon centroid proxy)
  double radius = 0.0;         // circle only
  std::vector<Vec2> vertices;  // polygon only, world frame, CCW

  AABB bounds() const;
};

PlacedShape place_shape(const Shape& shape, const Pose& pose);

Vec2 closest_point_on_segment(const Segment& seg, const Vec2& p);
double distance_point_segment(const Vec2& p, const Segment& seg);
bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& verts);

// Distance from point to a placed footprint; zero inside.
double distance_point_shape(const Vec2& p, const PlacedShape& s);

// Penetration between two overlapping convex bodies. `normal` is the unit
// direction that separates the pair by translating the FIRST body by
// normal * depth. `point` is a representative contact location.
struct Contact {
  double depth = 0.0;
  Vec2 normal;
  Vec2 point;
};

std::optional<Contact> disc_vs_segment(const Vec2& center, double radius, const Segment& seg);
std::optional<Contact> disc_vs_shape(const Vec2& center, double radius, const PlacedShape& s);
std::optional<Contact> shape_vs_segment(const PlacedShape& s, const Segment& seg);
std::optional<Contact> shape_vs_shape(const PlacedShape& a, const PlacedShape& b);
bool shapes_overlap(const PlacedShape& a, const PlacedShape& b);

// Ray parameter t >= 0 of the first intersection, for unit direction `dir`,
// or nullopt when the ray misses.
std::optional<double> ray_vs_segment(const Vec2& origin, const Vec2& dir, const Segment& seg);
std::optional<double> ray_vs_circle(const Vec2& origin, const Vec2& dir, const Vec2& center, double radius);
std::optional<double> ray_vs_shape(const Vec2& origin, const Vec2& dir, const PlacedShape& s);

double wrap_angle(double a);  // into (-pi, pi]

}  // namespace inav
