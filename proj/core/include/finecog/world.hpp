#pragma once

#include "finecog/geometry.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace finecog {

/// Axis-aligned labeled object inside the world, in meters.
struct ObjectBox {
    std::string label;
    Vec3 min;
    Vec3 max;

    Vec3 center() const { return (min + max) * 0.5; }
    bool contains(const Vec3& p) const;
};

/// Desk-scale occupancy grid with labeled objects. Immutable once built and
/// safe to share across concurrently running episodes.
///
/// Voxel (0,0,0) spans [0, voxel_edge) on each axis; the world covers
/// [0, dims * voxel_edge]. Objects are solid: every voxel their box overlaps
/// is occupied.
class VoxelWorld {
public:
    VoxelWorld(int nx, int ny, int nz, double voxel_edge);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int nz() const { return nz_; }
    double voxel_edge() const { return voxel_edge_; }
    Vec3 extent() const;

    bool in_bounds(int ix, int iy, int iz) const;
    bool occupied(int ix, int iy, int iz) const;
    bool occupied_at(const Vec3& p) const;

    void set_voxel(int ix, int iy, int iz, bool value = true);
    /// Marks every voxel the box overlaps and records the labeled object.
    void add_object(const std::string& label, const Vec3& min, const Vec3& max);

    const std::vector<ObjectBox>& objects() const { return objects_; }

    /// Structural checks: boxes inside the extent, occupancy covering every
    /// object box. Returns human-readable problems, empty when consistent.
    std::vector<std::string> validate() const;

    /// Stable content hash used to pin episode logs to the world they ran in.
    std::uint64_t checksum() const;

    nlohmann::json to_json() const;
    static VoxelWorld from_json(const nlohmann::json& doc);
    static VoxelWorld load_file(const std::filesystem::path& path);
    void save_file(const std::filesystem::path& path) const;

private:
    std::size_t index(int ix, int iy, int iz) const;

    int nx_;
    int ny_;
    int nz_;
    double voxel_edge_;
    std::vector<std::uint8_t> occupancy_;
    std::vector<ObjectBox> objects_;
};

} // namespace finecog
