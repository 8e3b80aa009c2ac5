#include "finecog/geometry.hpp"

#include "finecog/errors.hpp"

#include <cmath>

namespace finecog {

namespace {
constexpr double kPi = 3.14159265358979323846;

double deg_to_rad(double deg) { return deg * kPi / 180.0; }
} // namespace

Vec3 Vec3::normalized() const {
    const double n = norm();
    if (n == 0.0) {
        return {0.0, 0.0, 0.0};
    }
    return {x / n, y / n, z / n};
}

bool Pose::finite() const {
    return std::isfinite(position.x) && std::isfinite(position.y) &&
           std::isfinite(position.z) && std::isfinite(yaw_deg);
}

double normalize_yaw(double yaw_deg) {
    double y = std::fmod(yaw_deg, 360.0);
    if (y < 0.0) {
        y += 360.0;
    }
    if (y >= 360.0) { // fmod can land exactly on 360 after the correction
        y -= 360.0;
    }
    return y;
}

ActionCommand ActionCommand::of(ActionKind kind) {
    return {kind, action_magnitude(kind)};
}

double action_magnitude(ActionKind kind) {
    switch (kind) {
    case ActionKind::TaskFinish:
        return 0.0;
    case ActionKind::MoveForward:
    case ActionKind::MoveLeft:
    case ActionKind::MoveRight:
        return 5.0;
    case ActionKind::TurnLeft:
    case ActionKind::TurnRight:
        return 15.0;
    case ActionKind::Ascend:
    case ActionKind::Descend:
        return 2.0;
    }
    throw ContractViolation("unknown action kind");
}

std::string action_name(ActionKind kind) {
    switch (kind) {
    case ActionKind::TaskFinish:
        return "TASK_FINISH";
    case ActionKind::MoveForward:
        return "MOVE_FORWARD";
    case ActionKind::TurnLeft:
        return "TURN_LEFT";
    case ActionKind::TurnRight:
        return "TURN_RIGHT";
    case ActionKind::Ascend:
        return "ASCEND";
    case ActionKind::Descend:
        return "DESCEND";
    case ActionKind::MoveLeft:
        return "MOVE_LEFT";
    case ActionKind::MoveRight:
        return "MOVE_RIGHT";
    }
    throw ContractViolation("unknown action kind");
}

std::string action_label(ActionKind kind) {
    switch (kind) {
    case ActionKind::TaskFinish:
        return "TASK_FINISH";
    case ActionKind::MoveForward:
        return "MOVE_FORWARD (5 meters)";
    case ActionKind::TurnLeft:
        return "TURN_LEFT (15 degrees)";
    case ActionKind::TurnRight:
        return "TURN_RIGHT (15 degrees)";
    case ActionKind::Ascend:
        return "ASCEND (2 meters)";
    case ActionKind::Descend:
        return "DESCEND (2 meters)";
    case ActionKind::MoveLeft:
        return "MOVE_LEFT (5 meters)";
    case ActionKind::MoveRight:
        return "MOVE_RIGHT (5 meters)";
    }
    throw ContractViolation("unknown action kind");
}

bool is_valid_action_id(int id) { return id >= 0 && id <= 7; }

ActionKind action_from_id(int id) {
    if (!is_valid_action_id(id)) {
        throw ContractViolation("action id out of range: " + std::to_string(id));
    }
    return static_cast<ActionKind>(id);
}

Pose apply_action(const Pose& pose, const ActionCommand& action) {
    if (action.kind == ActionKind::TaskFinish) {
        throw ContractViolation("TaskFinish is handled by the orchestrator, not kinematics");
    }

    Pose out = pose;
    const double yaw_rad = deg_to_rad(pose.yaw_deg);
    const double c = std::cos(yaw_rad);
    const double s = std::sin(yaw_rad);

    switch (action.kind) {
    case ActionKind::MoveForward:
        out.position = pose.position + Vec3{c, s, 0.0} * action.magnitude;
        break;
    case ActionKind::MoveLeft:
        // Left is the heading rotated +90 deg; using (-s, c) keeps left and
        // right exact bitwise negations of each other.
        out.position = pose.position + Vec3{-s, c, 0.0} * action.magnitude;
        break;
    case ActionKind::MoveRight:
        out.position = pose.position + Vec3{s, -c, 0.0} * action.magnitude;
        break;
    case ActionKind::TurnLeft:
        out.yaw_deg = normalize_yaw(pose.yaw_deg + action.magnitude);
        break;
    case ActionKind::TurnRight:
        out.yaw_deg = normalize_yaw(pose.yaw_deg - action.magnitude);
        break;
    case ActionKind::Ascend:
        out.position.z = pose.position.z + action.magnitude;
        break;
    case ActionKind::Descend:
        out.position.z = pose.position.z - action.magnitude;
        break;
    case ActionKind::TaskFinish:
        break; // unreachable
    }
    return out;
}

} // namespace finecog
