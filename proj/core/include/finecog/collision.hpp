#pragma once

#include "finecog/sensing.hpp"

#include <string>

namespace finecog {

/// Parameters of the rule-based collision estimator. Defaults follow the
/// 672x672, 90-degree-fov configuration the thresholds were tuned for.
struct CollisionParams {
    int img_width = 672;
    int img_height = 672;
    double drone_width = 1.0;   // meters
    double drone_height = 0.1;  // meters
    double fov = 90.0;          // degrees
    double forward_distance = 5.1;   // slightly beyond one forward step
    double vertical_distance = 2.2;  // slightly beyond one vertical step
    double gradient_threshold = 0.02;
    double band_fraction = 0.05;

    void validate() const;
    bool operator==(const CollisionParams&) const = default;
};

/// The reference listing indexes the scanned vertical band past the image
/// bottom, which its bounds guard silently turns into a no-op. Corrected mode
/// scans the evident intended rows (top band for ascend, bottom band for
/// descend); FaithfulBug reproduces the no-op for trace-level replication.
enum class CollisionMode {
    Corrected,
    FaithfulBug,
};

std::string to_string(CollisionMode mode);
CollisionMode collision_mode_from_string(const std::string& name);

enum class VerticalDirection { Up, Down };

/// Half extents (pixels) of the scanned central region; exposed because the
/// closed-form values are asserted by tests.
int forward_half_width(const CollisionParams& params);
int forward_half_height(const CollisionParams& params);
int vertical_half_width(const CollisionParams& params);

/// Forward-motion risk: any pixel in the centered rectangle strictly closer
/// than forward_distance.
bool check_forward(const DepthImage& depth, const CollisionParams& params);

/// Ascend/descend risk from the height map inferred under the planar-surface
/// assumption: a band pixel is risky when its inferred height is below
/// vertical_distance and the vertical gradient is at most gradient_threshold.
bool check_vertical(const DepthImage& depth, const CollisionParams& params,
                    VerticalDirection direction,
                    CollisionMode mode = CollisionMode::Corrected);

/// Concatenated advisory sentences in fixed order, or exactly "None".
/// The strings feed prompts verbatim, trailing spaces included.
std::string collision_warning(const DepthImage& depth, const CollisionParams& params,
                              CollisionMode mode = CollisionMode::Corrected);

} // namespace finecog
