#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

namespace finecog {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    bool operator==(const Vec3& o) const = default;

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    double norm_xy() const { return std::sqrt(x * x + y * y); }
    Vec3 normalized() const;
};

/// Agent state: position in meters plus yaw heading in degrees.
/// Yaw 0 points along +x and grows counter-clockwise seen from above.
struct Pose {
    Vec3 position;
    double yaw_deg = 0.0;

    bool operator==(const Pose& o) const = default;
    bool finite() const;
};

/// Wrap a yaw angle into [0, 360).
double normalize_yaw(double yaw_deg);

/// Discrete action set. Numeric values match the prompt action numbering.
enum class ActionKind : int {
    TaskFinish = 0,
    MoveForward = 1,
    TurnLeft = 2,
    TurnRight = 3,
    Ascend = 4,
    Descend = 5,
    MoveLeft = 6,
    MoveRight = 7,
};

struct ActionCommand {
    ActionKind kind = ActionKind::TaskFinish;
    double magnitude = 0.0; // meters for translations, degrees for turns

    static ActionCommand of(ActionKind kind);
    bool operator==(const ActionCommand& o) const = default;
};

/// Fixed magnitude for each action: 5 m translations, 15 deg turns,
/// 2 m vertical moves, 0 for TaskFinish.
double action_magnitude(ActionKind kind);

/// "MOVE_FORWARD", "TURN_LEFT", ... as used in warnings and prompts.
std::string action_name(ActionKind kind);

/// Prompt line body, e.g. "MOVE_FORWARD (5 meters)".
std::string action_label(ActionKind kind);

bool is_valid_action_id(int id);
ActionKind action_from_id(int id);

/// Pure kinematics for the non-terminal actions. Translations move in the
/// pose frame (forward = heading, left/right perpendicular), turns adjust
/// yaw by 15 degrees with renormalization, ascend/descend move +-2 m in z.
/// Collision risk never blocks motion; it is advisory only.
Pose apply_action(const Pose& pose, const ActionCommand& action);

} // namespace finecog
