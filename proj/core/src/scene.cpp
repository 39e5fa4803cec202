#include "inav/scene.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "inav/robot.hpp"
#include "inav/planner.hpp"
#include "inav/rng.hpp"

namespace inav {

using ordered_json = nlohmann::ordered_json;

std::string to_string(ObjectClass c) {
  switch (c) {
    case ObjectClass::chair: return "chair";
    case ObjectClass::desk: return "desk";
    case ObjectClass::door: return "door";
    case ObjectClass::sofa: return "sofa";
    case ObjectClass::table: return "table";
    case ObjectClass::basket: return "basket";
    case ObjectClass::shoe: return "shoe";
    case ObjectClass::pot: return "pot";
    case ObjectClass::toy: return "toy";
  }
  return "?";
}

std::optional<ObjectClass> object_class_from_string(const std::string& name) {
  for (ObjectClass c : kAllObjectClasses) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

ClassDefaults class_defaults(ObjectClass c) {
  switch (c) {
    case ObjectClass::chair: return {7.0, 0.5, make_rectangle(0.45, 0.45)};
    case ObjectClass::desk: return {30.0, 0.5, make_rectangle(1.2, 0.6)};
    case ObjectClass::door: return {25.0, 0.5, make_rectangle(0.9, 0.04)};
    case ObjectClass::sofa: return {45.0, 0.5, make_rectangle(1.8, 0.85)};
    case ObjectClass::table: return {20.0, 0.5, make_rectangle(0.9, 0.9)};
    case ObjectClass::basket: return {0.5, 0.5, Circle{0.15}};
    case ObjectClass::shoe: return {0.3, 0.5, Circle{0.08}};
    case ObjectClass::pot: return {1.2, 0.5, Circle{0.12}};
    case ObjectClass::toy: return {0.2, 0.5, Circle{0.06}};
  }
  return {1.0, 0.5, Circle{0.1}};
}

PlacedShape Door::leaf_shape(double angle) const {
  Vec2 dir{std::cos(angle), std::sin(angle)};
  Vec2 n = dir.perp() * (leaf_thickness * 0.5);
  Vec2 tip = hinge + dir * leaf_length;
  PlacedShape s;
  s.is_circle = false;
  s.vertices = {hinge - n, tip - n, tip + n, hinge + n};
  s.center = (hinge + tip) * 0.5;
  return s;
}

double MovableObject::static_friction_force() const {
  return friction * mass * kGravity;
}

double distance_to_static(const Scene& scene, const Vec2& p) {
  double d = std::numeric_limits<double>::infinity();
  for (const Wall& w : scene.walls) d = std::min(d, distance_point_segment(p, w.segment));
  return d;
}

namespace {

void line_col_at(const std::string& text, size_t byte, int& line, int& col) {
  line = 1;
  col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
}

Vec2 parse_point(const ordered_json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw SceneError(what + ": expected [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Shape parse_shape(const ordered_json& j, const std::string& what) {
  if (j.contains("circle")) {
    double r = j.at("circle").get<double>();
    if (!(r > 0.0)) throw SceneError(what + ": circle radius must be > 0");
    return Circle{r};
  }
  if (j.contains("rect")) {
    const auto& r = j.at("rect");
    double l = r.at(0).get<double>(), w = r.at(1).get<double>();
    if (!(l > 0.0) || !(w > 0.0)) throw SceneError(what + ": rect sides must be > 0");
    return make_rectangle(l, w);
  }
  if (j.contains("polygon")) {
    ConvexPolygon poly;
    for (const auto& v : j.at("polygon")) poly.vertices.push_back(parse_point(v, what));
    if (poly.vertices.size() < 3) throw SceneError(what + ": polygon needs >= 3 vertices");
    return poly;
  }
  throw SceneError(what + ": footprint must be one of circle/rect/polygon");
}

ordered_json shape_to_json(const Shape& shape) {
  ordered_json j;
  if (const Circle* c = std::get_if<Circle>(&shape)) {
    j["circle"] = c->radius;
  } else {
    const ConvexPolygon& p = std::get<ConvexPolygon>(shape);
    ordered_json verts = ordered_json::array();
    for (const Vec2& v : p.vertices) verts.push_back({v.x, v.y});
    j["polygon"] = verts;
  }
  return j;
}

// Translate an object out of any wall it penetrates, along the shortest
// separation axis, a few passes in case the fix for one wall breaks another.
void relax_object(MovableObject& obj, const Scene& scene) {
  for (int pass = 0; pass < 64; ++pass) {
    PlacedShape s = obj.placed();
    std::optional<Contact> deepest;
    for (const Wall& w : scene.walls) {
      auto c = shape_vs_segment(s, w.segment);
      if (c && (!deepest || c->depth > deepest->depth)) deepest = c;
    }
    if (!deepest) return;
    obj.pose.x += deepest->normal.x * deepest->depth;
    obj.pose.y += deepest->normal.y * deepest->depth;
  }
  throw SceneError("object " + std::to_string(obj.id) + ": cannot be separated from walls");
}

void validate_scene(const Scene& scene) {
  for (const Wall& w : scene.walls) {
    if ((w.segment.a - w.segment.b).norm() == 0.0) throw SceneError("wall endpoints must be distinct");
  }
  for (const Door& d : scene.doors) {
    if (!(d.leaf_length > 0.0) || !(d.leaf_mass > 0.0)) throw SceneError("door leaf length/mass must be > 0");
    if (d.swing_min > d.swing_max) throw SceneError("door swing_range must be ordered [min, max]");
    if (d.rest_angle < d.swing_min - 1e-9 || d.rest_angle > d.swing_max + 1e-9) {
      throw SceneError("door rest_angle outside swing_range");
    }
  }
  for (const MovableObject& o : scene.objects) {
    std::string tag = "object " + std::to_string(o.id);
    if (!(o.mass > 0.0)) throw SceneError(tag + ": mass must be > 0");
    if (!(o.friction > 0.0) || o.friction > 2.0) throw SceneError(tag + ": friction must be in (0, 2]");
    if (shape_bounding_radius(o.footprint) <= 0.0) throw SceneError(tag + ": degenerate footprint");
    AABB box = o.placed().bounds();
    if (!scene.floor_bounds.contains(box.min) || !scene.floor_bounds.contains(box.max)) {
      throw SceneError(tag + ": footprint outside floor bounds");
    }
  }
}

}  // namespace

Scene load_scene(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    int line, col;
    line_col_at(text, e.byte > 0 ? e.byte - 1 : 0, line, col);
    throw SceneError("parse error at line " + std::to_string(line) + ", column " +
                     std::to_string(col) + ": " + e.what());
  }

  Scene scene;
  try {
    scene.id = j.value("id", "");
    const auto& b = j.at("bounds");
    scene.floor_bounds.min = parse_point(b.at("min"), "bounds.min");
    scene.floor_bounds.max = parse_point(b.at("max"), "bounds.max");
    if (scene.floor_bounds.width() <= 0.0 || scene.floor_bounds.height() <= 0.0) {
      throw SceneError("bounds: empty floor extent");
    }

    for (const auto& w : j.value("walls", ordered_json::array())) {
      scene.walls.push_back({{parse_point(w.at("from"), "wall.from"), parse_point(w.at("to"), "wall.to")}});
    }

    for (const auto& d : j.value("doors", ordered_json::array())) {
      Door door;
      door.hinge = parse_point(d.at("hinge"), "door.hinge");
      door.leaf_length = d.value("leaf_length", 0.9);
      door.leaf_thickness = d.value("leaf_thickness", 0.04);
      door.rest_angle = d.at("rest_angle").get<double>();
      const auto& sr = d.at("swing_range");
      door.swing_min = sr.at(0).get<double>();
      door.swing_max = sr.at(1).get<double>();
      ClassDefaults dd = class_defaults(ObjectClass::door);
      door.leaf_mass = d.value("mass", dd.mass);
      door.hinge_static_torque = d.value("static_torque", 3.0);
      door.hinge_kinetic_torque = d.value("kinetic_torque", 1.5);
      scene.doors.push_back(door);
    }

    for (const auto& dw : j.value("doorways", ordered_json::array())) {
      scene.doorways.push_back({{parse_point(dw.at("from"), "doorway.from"),
                                 parse_point(dw.at("to"), "doorway.to")}});
    }

    std::map<ObjectClass, std::pair<double, double>> overrides;  // mass, friction
    if (j.contains("class_defaults")) {
      for (const auto& [name, val] : j.at("class_defaults").items()) {
        auto cls = object_class_from_string(name);
        if (!cls) throw SceneError("class_defaults: unknown class '" + name + "'");
        ClassDefaults base = class_defaults(*cls);
        overrides[*cls] = {val.value("mass", base.mass), val.value("friction", base.friction)};
      }
    }

    int next_id = 1;
    for (const auto& o : j.value("objects", ordered_json::array())) {
      MovableObject obj;
      obj.id = next_id++;
      std::string cls_name = o.at("class").get<std::string>();
      auto cls = object_class_from_string(cls_name);
      if (!cls) throw SceneError("object " + std::to_string(obj.id) + ": unknown class '" + cls_name + "'");
      if (*cls == ObjectClass::door) {
        throw SceneError("object " + std::to_string(obj.id) + ": doors belong in the doors list");
      }
      obj.cls = *cls;
      ClassDefaults def = class_defaults(*cls);
      if (auto it = overrides.find(*cls); it != overrides.end()) {
        def.mass = it->second.first;
        def.friction = it->second.second;
      }
      const auto& pose = o.at("pose");
      obj.pose = {pose.at(0).get<double>(), pose.at(1).get<double>(), pose.at(2).get<double>()};
      obj.footprint = o.contains("shape") ? parse_shape(o.at("shape"), "object " + std::to_string(obj.id))
                                          : def.footprint;
      obj.mass = o.value("mass", def.mass);
      obj.friction = o.value("friction", def.friction);
      scene.objects.push_back(obj);
    }
  } catch (const nlohmann::json::exception& e) {
    throw SceneError(std::string("scene document: ") + e.what());
  }

  for (MovableObject& obj : scene.objects) relax_object(obj, scene);
  validate_scene(scene);
  return scene;
}

Scene load_scene_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SceneError("cannot open scene file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  Scene scene = load_scene(ss.str());
  if (scene.id.empty()) {
    size_t slash = path.find_last_of('/');
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    size_t dot = base.find_last_of('.');
    scene.id = dot == std::string::npos ? base : base.substr(0, dot);
  }
  return scene;
}

std::string save_scene(const Scene& scene) {
  ordered_json j;
  j["id"] = scene.id;
  j["bounds"] = {{"min", {scene.floor_bounds.min.x, scene.floor_bounds.min.y}},
                 {"max", {scene.floor_bounds.max.x, scene.floor_bounds.max.y}}};
  ordered_json walls = ordered_json::array();
  for (const Wall& w : scene.walls) {
    walls.push_back({{"from", {w.segment.a.x, w.segment.a.y}}, {"to", {w.segment.b.x, w.segment.b.y}}});
  }
  j["walls"] = walls;
  ordered_json doors = ordered_json::array();
  for (const Door& d : scene.doors) {
    doors.push_back({{"hinge", {d.hinge.x, d.hinge.y}},
                     {"leaf_length", d.leaf_length},
                     {"leaf_thickness", d.leaf_thickness},
                     {"rest_angle", d.rest_angle},
                     {"swing_range", {d.swing_min, d.swing_max}},
                     {"mass", d.leaf_mass},
                     {"static_torque", d.hinge_static_torque},
                     {"kinetic_torque", d.hinge_kinetic_torque}});
  }
  j["doors"] = doors;
  ordered_json doorways = ordered_json::array();
  for (const Doorway& dw : scene.doorways) {
    doorways.push_back({{"from", {dw.span.a.x, dw.span.a.y}}, {"to", {dw.span.b.x, dw.span.b.y}}});
  }
  j["doorways"] = doorways;
  ordered_json objects = ordered_json::array();
  for (const MovableObject& o : scene.objects) {
    ordered_json obj;
    obj["class"] = to_string(o.cls);
    obj["pose"] = {o.pose.x, o.pose.y, o.pose.theta};
    obj["shape"] = shape_to_json(o.footprint);
    obj["mass"] = o.mass;
    obj["friction"] = o.friction;
    objects.push_back(obj);
  }
  j["objects"] = objects;
  return j.dump(2) + "\n";
}

}  // namespace inav
