#include "finecog/world.hpp"

#include "finecog/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace finecog {

using nlohmann::json;

namespace {

// FNV-1a, enough to detect a swapped world file; not cryptographic.
std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

json vec_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) {
        throw ContractViolation("expected a 3-element array for a vector");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

} // namespace

bool ObjectBox::contains(const Vec3& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y &&
           p.z >= min.z && p.z <= max.z;
}

VoxelWorld::VoxelWorld(int nx, int ny, int nz, double voxel_edge)
    : nx_(nx), ny_(ny), nz_(nz), voxel_edge_(voxel_edge) {
    if (nx <= 0 || ny <= 0 || nz <= 0) {
        throw ContractViolation("world dimensions must be positive");
    }
    if (!(voxel_edge > 0.0)) {
        throw ContractViolation("voxel edge must be positive");
    }
    occupancy_.assign(static_cast<std::size_t>(nx) * ny * nz, 0);
}

Vec3 VoxelWorld::extent() const {
    return {nx_ * voxel_edge_, ny_ * voxel_edge_, nz_ * voxel_edge_};
}

std::size_t VoxelWorld::index(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(ix) * ny_ + iy) * nz_ + iz;
}

bool VoxelWorld::in_bounds(int ix, int iy, int iz) const {
    return ix >= 0 && ix < nx_ && iy >= 0 && iy < ny_ && iz >= 0 && iz < nz_;
}

bool VoxelWorld::occupied(int ix, int iy, int iz) const {
    if (!in_bounds(ix, iy, iz)) {
        return false;
    }
    return occupancy_[index(ix, iy, iz)] != 0;
}

bool VoxelWorld::occupied_at(const Vec3& p) const {
    const int ix = static_cast<int>(std::floor(p.x / voxel_edge_));
    const int iy = static_cast<int>(std::floor(p.y / voxel_edge_));
    const int iz = static_cast<int>(std::floor(p.z / voxel_edge_));
    return occupied(ix, iy, iz);
}

void VoxelWorld::set_voxel(int ix, int iy, int iz, bool value) {
    if (!in_bounds(ix, iy, iz)) {
        throw ContractViolation("voxel index out of bounds");
    }
    occupancy_[index(ix, iy, iz)] = value ? 1 : 0;
}

void VoxelWorld::add_object(const std::string& label, const Vec3& min, const Vec3& max) {
    if (min.x > max.x || min.y > max.y || min.z > max.z) {
        throw ContractViolation("object box min must not exceed max: " + label);
    }
    const Vec3 ext = extent();
    if (min.x < 0 || min.y < 0 || min.z < 0 || max.x > ext.x || max.y > ext.y ||
        max.z > ext.z) {
        throw ContractViolation("object box outside world extent: " + label);
    }

    const auto lo = [&](double v) {
        return std::max(0, static_cast<int>(std::floor(v / voxel_edge_)));
    };
    const auto hi = [&](double v, int n) {
        // Boxes touching a voxel boundary do not claim the next voxel.
        int i = static_cast<int>(std::ceil(v / voxel_edge_)) - 1;
        return std::min(n - 1, std::max(i, 0));
    };
    for (int ix = lo(min.x); ix <= hi(max.x, nx_); ++ix) {
        for (int iy = lo(min.y); iy <= hi(max.y, ny_); ++iy) {
            for (int iz = lo(min.z); iz <= hi(max.z, nz_); ++iz) {
                occupancy_[index(ix, iy, iz)] = 1;
            }
        }
    }
    objects_.push_back({label, min, max});
}

std::vector<std::string> VoxelWorld::validate() const {
    std::vector<std::string> problems;
    const Vec3 ext = extent();
    for (const auto& obj : objects_) {
        if (obj.min.x < 0 || obj.min.y < 0 || obj.min.z < 0 || obj.max.x > ext.x ||
            obj.max.y > ext.y || obj.max.z > ext.z) {
            problems.push_back("object outside extent: " + obj.label);
            continue;
        }
        // Sample voxel centers inside the box; all must be occupied.
        const double e = voxel_edge_;
        for (int ix = static_cast<int>(obj.min.x / e); ix * e < obj.max.x && ix < nx_; ++ix) {
            for (int iy = static_cast<int>(obj.min.y / e); iy * e < obj.max.y && iy < ny_; ++iy) {
                for (int iz = static_cast<int>(obj.min.z / e); iz * e < obj.max.z && iz < nz_; ++iz) {
                    const Vec3 c{(ix + 0.5) * e, (iy + 0.5) * e, (iz + 0.5) * e};
                    if (obj.contains(c) && !occupied(ix, iy, iz)) {
                        problems.push_back("object not solid in occupancy grid: " + obj.label);
                        goto next_object;
                    }
                }
            }
        }
    next_object:;
    }
    return problems;
}

std::uint64_t VoxelWorld::checksum() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    h = fnv1a(h, &nx_, sizeof nx_);
    h = fnv1a(h, &ny_, sizeof ny_);
    h = fnv1a(h, &nz_, sizeof nz_);
    h = fnv1a(h, &voxel_edge_, sizeof voxel_edge_);
    h = fnv1a(h, occupancy_.data(), occupancy_.size());
    for (const auto& obj : objects_) {
        h = fnv1a(h, obj.label.data(), obj.label.size());
        h = fnv1a(h, &obj.min, sizeof obj.min);
        h = fnv1a(h, &obj.max, sizeof obj.max);
    }
    return h;
}

json VoxelWorld::to_json() const {
    json occupied = json::array();
    for (int ix = 0; ix < nx_; ++ix) {
        for (int iy = 0; iy < ny_; ++iy) {
            for (int iz = 0; iz < nz_; ++iz) {
                if (occupancy_[index(ix, iy, iz)]) {
                    occupied.push_back(json::array({ix, iy, iz}));
                }
            }
        }
    }
    json objects = json::array();
    for (const auto& obj : objects_) {
        objects.push_back({{"label", obj.label},
                           {"min", vec_to_json(obj.min)},
                           {"max", vec_to_json(obj.max)}});
    }
    return {{"voxel_edge", voxel_edge_},
            {"dims", json::array({nx_, ny_, nz_})},
            {"occupied", occupied},
            {"objects", objects}};
}

VoxelWorld VoxelWorld::from_json(const json& doc) {
    for (const char* key : {"voxel_edge", "dims", "occupied", "objects"}) {
        if (!doc.contains(key)) {
            throw ContractViolation(std::string("world file missing field: ") + key);
        }
    }
    const auto& dims = doc["dims"];
    if (!dims.is_array() || dims.size() != 3) {
        throw ContractViolation("world dims must be a 3-element array");
    }
    VoxelWorld world(dims[0].get<int>(), dims[1].get<int>(), dims[2].get<int>(),
                     doc["voxel_edge"].get<double>());
    for (const auto& v : doc["occupied"]) {
        if (!v.is_array() || v.size() != 3) {
            throw ContractViolation("occupied entries must be [ix, iy, iz] triples");
        }
        world.set_voxel(v[0].get<int>(), v[1].get<int>(), v[2].get<int>());
    }
    for (const auto& o : doc["objects"]) {
        const ObjectBox box{o.at("label").get<std::string>(), vec_from_json(o.at("min")),
                            vec_from_json(o.at("max"))};
        // Object voxels arrive through "occupied"; only record the box here
        // so a load/save round trip is lossless.
        world.objects_.push_back(box);
    }
    auto problems = world.validate();
    if (!problems.empty()) {
        throw ContractViolation("inconsistent world file: " + problems.front());
    }
    return world;
}

VoxelWorld VoxelWorld::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open world file: " + path.string());
    }
    json doc = json::parse(in);
    return from_json(doc);
}

void VoxelWorld::save_file(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write world file: " + path.string());
    }
    out << to_json().dump(2) << '\n';
}

} // namespace finecog
