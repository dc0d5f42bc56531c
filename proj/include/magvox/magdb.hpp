/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

#pragma once

#include "magvox/geom.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

namespace magvox
{

struct VoxelIndex
{
  std::int32_t x = 0;
  std::int32_t y = 0;
  std::int32_t z = 0;

  auto operator<=>(const VoxelIndex&) const = default;
};

struct VoxelIndexHash
{
  std::size_t operator()(const VoxelIndex& v) const noexcept
  {
    std::uint64_t h = static_cast<std::uint32_t>(v.x);
    h = h * 0x9E3779B97F4A7C15ull ^ static_cast<std::uint32_t>(v.y);
    h = h * 0x9E3779B97F4A7C15ull ^ static_cast<std::uint32_t>(v.z);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

/// Weighted running sum of unit anchors stored in one voxel.
struct AccumulatedAnchor
{
  Vec3 sum = Vec3::Zero();
  double weight_total = 0.0;
  std::int32_t visit_count = 0;

  bool operator==(const AccumulatedAnchor&) const = default;
};

/// Exponentially smoothed gyro magnitude, used to down-weight updates during fast motion.
struct IaiTracker
{
  double iai = 0.0;
  double k_iai = 0.95;
  double iai_0 = 1.0;
  double W = 0.1;

  void validate() const;
};

/// iai <- iai * k_iai + |omega| * (1 - k_iai), with omega in rad/s.
IaiTracker iaiStep(IaiTracker tracker, const Vec3& omega);

/// Normalized magnetometer direction expressed in the global frame.
Vec3 computeAnchor(const Vec3& mag, const Rotationd& thetaHat);

class AnchorVoxelGrid
{
public:
  static constexpr double kDefaultResolution = 0.1;

  explicit AnchorVoxelGrid(double l_db = kDefaultResolution, const Vec3& origin = Vec3::Zero());

  double resolution() const { return m_resolution; }
  const Vec3& origin() const { return m_origin; }

  VoxelIndex indexOf(const Vec3& location) const;
  Vec3 centerOf(const VoxelIndex& index) const;

  /**
   * Fold a unit anchor into the voxel containing `location`.
   *
   * Full weight when `adaptive` is off or the tracker's IAI is at or below
   * iai_0; weight W otherwise. A previously empty voxel always receives the
   * anchor. Returns the weight applied.
   */
  double update(const Vec3& location, const Vec3& anchor, const IaiTracker& tracker, bool adaptive);

  /// Mean stored direction of the voxel containing `location`, if any.
  std::optional<Vec3> query(const Vec3& location) const;

  std::size_t filledVoxels() const { return m_cells.size(); }
  bool empty() const { return m_cells.empty(); }
  double meanVisits() const;

  const std::unordered_map<VoxelIndex, AccumulatedAnchor, VoxelIndexHash>& cells() const
  {
    return m_cells;
  }

  /// Cells sorted by index, for deterministic output.
  std::vector<std::pair<VoxelIndex, AccumulatedAnchor>> sortedCells() const;

  bool operator==(const AnchorVoxelGrid& other) const;

private:
  double m_resolution;
  Vec3 m_origin;
  std::unordered_map<VoxelIndex, AccumulatedAnchor, VoxelIndexHash> m_cells;
};

/// Payload stored per filled voxel: key plus accumulated anchor.
inline constexpr std::size_t kBytesPerVoxel = sizeof(VoxelIndex) + sizeof(AccumulatedAnchor);
static_assert(kBytesPerVoxel <= 64);

std::size_t memoryFootprint(const AnchorVoxelGrid& grid);

using FieldDirectionFn = std::function<Vec3(const Vec3&)>;

/// Mean angle (degrees) between stored anchors and the true field direction at voxel centers.
double databaseError(const AnchorVoxelGrid& grid, const FieldDirectionFn& trueField);

/// CSV `ix,iy,iz,nx,ny,nz,weight_total,visit_count`, one row per filled voxel.
void dumpGrid(const AnchorVoxelGrid& grid, std::ostream& out);

} // namespace magvox
