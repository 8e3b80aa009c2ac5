#pragma once

#include "finecog/geometry.hpp"
#include "finecog/world.hpp"

#include <string>
#include <vector>

namespace finecog {

/// Per-pixel distance image, row 0 at the top of the view.
/// Every value lies in (0, max_range].
struct DepthImage {
    int width = 0;
    int height = 0;
    double max_range = 0.0;
    std::vector<double> values;
    /// Set when the camera spawned inside occupied geometry; the image is
    /// then filled with the minimum representable depth.
    bool camera_in_geometry = false;

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// Distance along a unit-direction ray to the first occupied voxel, capped
/// at max_range (returned when nothing is hit).
double ray_distance(const VoxelWorld& world, const Vec3& origin, const Vec3& dir,
                    double max_range);

/// Pinhole depth render. Camera forward axis = pose yaw, pitch level, square
/// pixels; fov is the horizontal field of view in degrees and the vertical
/// field follows from the aspect ratio.
DepthImage render_depth(const VoxelWorld& world, const Pose& pose, double fov_deg,
                        int width, int height, double max_range = 1000.0);

struct VisibleObject {
    std::string label;
    /// Signed horizontal angle from the heading, degrees; positive = left.
    double bearing_deg = 0.0;
    double distance_m = 0.0;
    /// True when the ray to the object's center crosses other occupancy first.
    bool occluded = false;
};

/// Labeled-object oracle: objects whose box center lies inside the square
/// frustum (half-angle fov/2 both axes), sorted near to far.
std::vector<VisibleObject> visible_objects(const VoxelWorld& world, const Pose& pose,
                                           double fov_deg);

} // namespace finecog
