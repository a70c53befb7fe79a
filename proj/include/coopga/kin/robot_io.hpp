// Robot description loading. Joints are given convention-neutrally as a
// rotation axis (unit 3-vector), a point on the axis, and a fixed
// child-frame offset (translation + quaternion, order (w, x, y, z)); angles
// in radians, lengths in meters.

#pragma once

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>

#include "coopga/kin/chain.hpp"

namespace coopga::kin {

namespace detail {

inline cga::Vec3 parse_vec3(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
      !j[2].is_number()) {
    throw ConfigError(where + ": expected an array of 3 numbers");
  }
  return cga::Vec3{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline Motor parse_quaternion(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4) {
    throw ConfigError(where + ": expected a quaternion array [w, x, y, z]");
  }
  const double w = j[0].get<double>();
  const double x = j[1].get<double>();
  const double y = j[2].get<double>();
  const double z = j[3].get<double>();
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (std::abs(n - 1.0) > 1e-6) {
    throw ConfigError(where + ": quaternion must be unit (|q| deviates by " +
                      std::to_string(std::abs(n - 1.0)) + ")");
  }
  return Motor::from_quaternion(w, x, y, z);
}

inline Motor parse_pose(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("translation") || !j.contains("quaternion")) {
    throw ConfigError(where + ": expected {translation, quaternion}");
  }
  const cga::Vec3 t = parse_vec3(j["translation"], where + ".translation");
  const Motor r = parse_quaternion(j["quaternion"], where + ".quaternion");
  return Motor::translator(t) * r;
}

}  // namespace detail

inline KinematicChain load_robot(const nlohmann::json& j, const std::string& where = "robot") {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  if (!j.contains("joints") || !j["joints"].is_array() || j["joints"].empty()) {
    throw ConfigError(where + ": requires a non-empty joints array");
  }
  const std::string name = j.value("name", "");
  Motor base = Motor::identity();
  if (j.contains("base_pose")) base = detail::parse_pose(j["base_pose"], where + ".base_pose");

  std::vector<JointDescription> joints;
  int idx = 0;
  for (const auto& joint : j["joints"]) {
    const std::string at = where + ".joints[" + std::to_string(idx++) + "]";
    for (const char* key : {"axis", "point", "offset_translation", "offset_quaternion"}) {
      if (!joint.contains(key)) throw ConfigError(at + ": missing field '" + key + "'");
    }
    const cga::Vec3 axis = detail::parse_vec3(joint["axis"], at + ".axis");
    const cga::Vec3 point = detail::parse_vec3(joint["point"], at + ".point");
    const cga::Vec3 t = detail::parse_vec3(joint["offset_translation"], at + ".offset_translation");
    const Motor r = detail::parse_quaternion(joint["offset_quaternion"], at + ".offset_quaternion");

    const double axis_norm = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
    if (std::abs(axis_norm - 1.0) > 1e-6) {
      throw ConfigError(at + ".axis: must be a unit vector (norm " + std::to_string(axis_norm) +
                        ")");
    }
    JointDescription desc;
    desc.axis = revolute_axis(axis, point);
    desc.offset = Motor::translator(t) * r;
    if (joint.contains("limits")) {
      const auto& lim = joint["limits"];
      if (!lim.is_array() || lim.size() != 2) {
        throw ConfigError(at + ".limits: expected [min, max]");
      }
      desc.limit_min = lim[0].get<double>();
      desc.limit_max = lim[1].get<double>();
      if (desc.limit_min > desc.limit_max) {
        throw ConfigError(at + ".limits: min exceeds max");
      }
    }
    joints.push_back(desc);
  }
  return KinematicChain(std::move(joints), base, name);
}

inline KinematicChain load_robot_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("load_robot_file: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("load_robot_file: parse error in '" + path + "': " + e.what());
  }
  return load_robot(j, path);
}

}  // namespace coopga::kin
