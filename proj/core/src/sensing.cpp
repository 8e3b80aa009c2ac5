#include "finecog/sensing.hpp"

#include "finecog/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace finecog {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Depth reported when the camera itself sits inside geometry.
constexpr double kMinDepth = 1e-3;

struct Basis {
    Vec3 forward;
    Vec3 right;
    Vec3 up;
};

Basis camera_basis(const Pose& pose) {
    const double yaw = pose.yaw_deg * kPi / 180.0;
    const double c = std::cos(yaw);
    const double s = std::sin(yaw);
    return {{c, s, 0.0}, {s, -c, 0.0}, {0.0, 0.0, 1.0}};
}

// First occupied voxel along the ray, optionally ignoring voxels overlapping
// one object's box (so an object does not occlude its own center).
double march_ray(const VoxelWorld& world, const Vec3& origin, const Vec3& dir,
                 double max_range, const ObjectBox* ignore) {
    const double e = world.voxel_edge();

    int ix = static_cast<int>(std::floor(origin.x / e));
    int iy = static_cast<int>(std::floor(origin.y / e));
    int iz = static_cast<int>(std::floor(origin.z / e));

    const double dx = dir.x;
    const double dy = dir.y;
    const double dz = dir.z;

    const int step_x = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
    const int step_y = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
    const int step_z = dz > 0 ? 1 : (dz < 0 ? -1 : 0);

    const double inf = std::numeric_limits<double>::infinity();
    const auto boundary_t = [&](double pos, double d, int i, int step) {
        if (step == 0) {
            return inf;
        }
        const double edge = (step > 0 ? (i + 1) * e : i * e);
        return (edge - pos) / d;
    };

    double t_max_x = boundary_t(origin.x, dx, ix, step_x);
    double t_max_y = boundary_t(origin.y, dy, iy, step_y);
    double t_max_z = boundary_t(origin.z, dz, iz, step_z);
    const double t_delta_x = step_x ? e / std::abs(dx) : inf;
    const double t_delta_y = step_y ? e / std::abs(dy) : inf;
    const double t_delta_z = step_z ? e / std::abs(dz) : inf;

    const auto voxel_blocks = [&](int x, int y, int z) {
        if (!world.occupied(x, y, z)) {
            return false;
        }
        if (ignore != nullptr) {
            // Skip voxels whose cell overlaps the ignored box.
            const double x0 = x * e, y0 = y * e, z0 = z * e;
            if (x0 < ignore->max.x && x0 + e > ignore->min.x && y0 < ignore->max.y &&
                y0 + e > ignore->min.y && z0 < ignore->max.z && z0 + e > ignore->min.z) {
                return false;
            }
        }
        return true;
    };

    double t = 0.0;
    // The starting voxel counts as an immediate hit.
    if (voxel_blocks(ix, iy, iz)) {
        return kMinDepth;
    }
    while (t <= max_range) {
        if (t_max_x <= t_max_y && t_max_x <= t_max_z) {
            t = t_max_x;
            t_max_x += t_delta_x;
            ix += step_x;
        } else if (t_max_y <= t_max_z) {
            t = t_max_y;
            t_max_y += t_delta_y;
            iy += step_y;
        } else {
            t = t_max_z;
            t_max_z += t_delta_z;
            iz += step_z;
        }
        if (t > max_range) {
            break;
        }
        // Once the ray leaves the grid on all advancing axes it cannot re-enter.
        const bool outside_forever =
            (ix < 0 && step_x <= 0) || (ix >= world.nx() && step_x >= 0) ||
            (iy < 0 && step_y <= 0) || (iy >= world.ny() && step_y >= 0) ||
            (iz < 0 && step_z <= 0) || (iz >= world.nz() && step_z >= 0);
        if (voxel_blocks(ix, iy, iz)) {
            return std::max(t, kMinDepth);
        }
        if (outside_forever) {
            break;
        }
    }
    return max_range;
}

} // namespace

double ray_distance(const VoxelWorld& world, const Vec3& origin, const Vec3& dir,
                    double max_range) {
    return march_ray(world, origin, dir.normalized(), max_range, nullptr);
}

DepthImage render_depth(const VoxelWorld& world, const Pose& pose, double fov_deg,
                        int width, int height, double max_range) {
    if (!(fov_deg > 0.0 && fov_deg < 180.0)) {
        throw ContractViolation("fov must lie in (0, 180)");
    }
    if (width < 1 || height < 1) {
        throw ContractViolation("render dimensions must be at least 1x1");
    }

    DepthImage img;
    img.width = width;
    img.height = height;
    img.max_range = max_range;
    img.values.assign(static_cast<std::size_t>(width) * height, max_range);

    if (world.occupied_at(pose.position)) {
        img.camera_in_geometry = true;
        std::fill(img.values.begin(), img.values.end(), kMinDepth);
        return img;
    }

    const Basis cam = camera_basis(pose);
    const double tan_half_x = std::tan(fov_deg * 0.5 * kPi / 180.0);
    const double tan_half_y = tan_half_x * static_cast<double>(height) / width;

    for (int py = 0; py < height; ++py) {
        // Row 0 looks up: ndc runs from +1 (top) to -1 (bottom).
        const double ndc_y = 1.0 - 2.0 * (py + 0.5) / height;
        for (int px = 0; px < width; ++px) {
            const double ndc_x = 2.0 * (px + 0.5) / width - 1.0;
            const Vec3 dir = (cam.forward + cam.right * (ndc_x * tan_half_x) +
                              cam.up * (ndc_y * tan_half_y))
                                 .normalized();
            img.at(px, py) = march_ray(world, pose.position, dir, max_range, nullptr);
        }
    }
    return img;
}

std::vector<VisibleObject> visible_objects(const VoxelWorld& world, const Pose& pose,
                                           double fov_deg) {
    const Basis cam = camera_basis(pose);
    const Vec3 left{-cam.right.x, -cam.right.y, -cam.right.z};
    const double half_angle = fov_deg * 0.5;

    std::vector<VisibleObject> result;
    for (const auto& obj : world.objects()) {
        const Vec3 v = obj.center() - pose.position;
        const double dist = v.norm();
        if (dist == 0.0) {
            continue;
        }
        const double fwd = v.dot(cam.forward);
        if (fwd <= 0.0) {
            continue;
        }
        const double bearing = std::atan2(v.dot(left), fwd) * 180.0 / kPi;
        const double elevation = std::atan2(v.z, std::hypot(v.x, v.y)) * 180.0 / kPi;
        if (std::abs(bearing) > half_angle || std::abs(elevation) > half_angle) {
            continue;
        }
        const double hit = march_ray(world, pose.position, v.normalized(), dist, &obj);
        const bool occluded = hit < dist;
        result.push_back({obj.label, bearing, dist, occluded});
    }
    std::sort(result.begin(), result.end(), [](const auto& a, const auto& b) {
        if (a.distance_m != b.distance_m) {
            return a.distance_m < b.distance_m;
        }
        return a.label < b.label;
    });
    return result;
}

} // namespace finecog
