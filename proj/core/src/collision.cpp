#include "finecog/collision.hpp"

#include "finecog/errors.hpp"

#include <cmath>
#include <vector>

namespace finecog {

namespace {

constexpr double kPi = 3.14159265358979323846;

int half_extent(double body_size, double distance, double pixel_angle) {
    const double half_angle = std::atan(body_size / (2.0 * distance)) * (180.0 / kPi);
    return static_cast<int>(std::ceil(half_angle / pixel_angle));
}

void require_dims(const DepthImage& depth, const CollisionParams& params) {
    if (depth.width != params.img_width || depth.height != params.img_height) {
        throw ContractViolation("depth image dimensions do not match collision params");
    }
}

} // namespace

void CollisionParams::validate() const {
    if (img_width <= 0 || img_height <= 0 || !(drone_width > 0) || !(drone_height > 0) ||
        !(forward_distance > 0) || !(vertical_distance > 0) || !(gradient_threshold > 0) ||
        !(band_fraction > 0)) {
        throw ContractViolation("collision params must be strictly positive");
    }
    if (!(fov > 0.0 && fov < 180.0)) {
        throw ContractViolation("collision fov must lie in (0, 180)");
    }
}

std::string to_string(CollisionMode mode) {
    return mode == CollisionMode::Corrected ? "corrected" : "faithful-bug";
}

CollisionMode collision_mode_from_string(const std::string& name) {
    if (name == "corrected") {
        return CollisionMode::Corrected;
    }
    if (name == "faithful-bug") {
        return CollisionMode::FaithfulBug;
    }
    throw ContractViolation("unknown collision mode: " + name);
}

int forward_half_width(const CollisionParams& params) {
    const double pixel_angle = params.fov / params.img_width;
    return half_extent(params.drone_width, params.forward_distance, pixel_angle);
}

int forward_half_height(const CollisionParams& params) {
    const double pixel_angle = params.fov / params.img_width;
    return half_extent(params.drone_height, params.forward_distance, pixel_angle);
}

int vertical_half_width(const CollisionParams& params) {
    // The vertical branch derives its column range from the same drone-width
    // geometry but at the vertical distance threshold.
    const double pixel_angle = params.fov / params.img_width;
    return half_extent(params.drone_width, params.vertical_distance, pixel_angle);
}

bool check_forward(const DepthImage& depth, const CollisionParams& params) {
    params.validate();
    require_dims(depth, params);

    const int center_x = params.img_width / 2;
    const int center_y = params.img_height / 2;
    const int half_width = forward_half_width(params);
    const int half_height = forward_half_height(params);

    // Asymmetric ranges [-half, half) follow the reference scan exactly.
    for (int dx = -half_width; dx < half_width; ++dx) {
        for (int dy = -half_height; dy < half_height; ++dy) {
            const int x = center_x + dx;
            const int y = center_y + dy;
            if (x < 0 || x >= params.img_width || y < 0 || y >= params.img_height) {
                continue;
            }
            if (depth.at(x, y) < params.forward_distance) {
                return true;
            }
        }
    }
    return false;
}

bool check_vertical(const DepthImage& depth, const CollisionParams& params,
                    VerticalDirection direction, CollisionMode mode) {
    params.validate();
    require_dims(depth, params);

    const int width = params.img_width;
    const int height = params.img_height;
    const int center_x = width / 2;
    const int center_y = height / 2;
    const double pixel_angle = params.fov / width;
    const int half_width = vertical_half_width(params);
    const int band = static_cast<int>(std::ceil(height * params.band_fraction));

    // height_map[y][x]: inferred height offset of the surface seen at (x, y),
    // treating unseen regions as planar continuations.
    std::vector<double> height_map(static_cast<std::size_t>(width) * height);
    for (int y = 0; y < height; ++y) {
        const double angle_tan = std::tan(std::abs(y - center_y) * pixel_angle * (kPi / 180.0));
        for (int x = 0; x < width; ++x) {
            height_map[static_cast<std::size_t>(y) * width + x] = angle_tan * depth.at(x, y);
        }
    }
    const auto hm = [&](int x, int y) {
        return height_map[static_cast<std::size_t>(y) * width + x];
    };
    // Row-axis gradient: central differences inside, one-sided at the rims.
    const auto gradient_y = [&](int x, int y) {
        if (height < 2) {
            return 0.0;
        }
        if (y == 0) {
            return hm(x, 1) - hm(x, 0);
        }
        if (y == height - 1) {
            return hm(x, height - 1) - hm(x, height - 2);
        }
        return (hm(x, y + 1) - hm(x, y - 1)) / 2.0;
    };

    for (int dx = -half_width; dx < half_width; ++dx) {
        const int x = center_x + dx;
        for (int dy = 0; dy < band; ++dy) {
            int y = 0;
            switch (mode) {
            case CollisionMode::FaithfulBug:
                y = height + dy; // out of bounds by construction: scan never fires
                break;
            case CollisionMode::Corrected:
                y = direction == VerticalDirection::Up ? dy : height - 1 - dy;
                break;
            }
            if (x < 0 || x >= width || y < 0 || y >= height) {
                continue;
            }
            const double gradient = std::abs(gradient_y(x, y));
            if (hm(x, y) < params.vertical_distance && gradient <= params.gradient_threshold) {
                return true;
            }
        }
    }
    return false;
}

std::string collision_warning(const DepthImage& depth, const CollisionParams& params,
                              CollisionMode mode) {
    std::string risks;
    if (check_forward(depth, params)) {
        risks += "MOVE_FORWARD will collide with objects. ";
    }
    if (check_vertical(depth, params, VerticalDirection::Up, mode)) {
        risks += "ASCEND will collide with objects. ";
    }
    if (check_vertical(depth, params, VerticalDirection::Down, mode)) {
        risks += "DESCEND will collide with objects. ";
    }
    if (risks.empty()) {
        risks = "None";
    }
    return risks;
}

} // namespace finecog
