#pragma once

#include "finecog/geometry.hpp"

#include <nlohmann/json.hpp>

namespace finecog {

inline nlohmann::json pose_to_json(const Pose& pose) {
    return {{"position", {pose.position.x, pose.position.y, pose.position.z}},
            {"yaw", pose.yaw_deg}};
}

inline Pose pose_from_json(const nlohmann::json& j) {
    const auto& p = j.at("position");
    return Pose{{p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()},
                j.at("yaw").get<double>()};
}

} // namespace finecog
