/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

#include "magvox/magdb.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

namespace magvox
{

void IaiTracker::validate() const
{
  if (!(iai >= 0.0))
    throw ConfigError("IAI must be non-negative");
  if (!(k_iai > 0.0 && k_iai < 1.0))
    throw ConfigError("k_iai must lie in (0, 1)");
  if (!(W > 0.0))
    throw ConfigError("adaptive weight W must be positive");
}

IaiTracker iaiStep(IaiTracker tracker, const Vec3& omega)
{
  tracker.iai = tracker.iai * tracker.k_iai + omega.norm() * (1.0 - tracker.k_iai);
  return tracker;
}

Vec3 computeAnchor(const Vec3& mag, const Rotationd& thetaHat)
{
  if (mag.norm() < 1e-9)
    throw ZeroField();
  return normalize(thetaHat.apply(mag));
}

AnchorVoxelGrid::AnchorVoxelGrid(double l_db, const Vec3& origin)
  : m_resolution(l_db), m_origin(origin)
{
  if (!(l_db > 0.0))
    throw ConfigError("database resolution must be positive");
}

VoxelIndex AnchorVoxelGrid::indexOf(const Vec3& location) const
{
  const Vec3 r = (location - m_origin) / m_resolution;
  return VoxelIndex{static_cast<std::int32_t>(std::floor(r.x())),
                    static_cast<std::int32_t>(std::floor(r.y())),
                    static_cast<std::int32_t>(std::floor(r.z()))};
}

Vec3 AnchorVoxelGrid::centerOf(const VoxelIndex& index) const
{
  return m_origin + m_resolution * Vec3(index.x + 0.5, index.y + 0.5, index.z + 0.5);
}

double AnchorVoxelGrid::update(const Vec3& location,
                               const Vec3& anchor,
                               const IaiTracker& tracker,
                               bool adaptive)
{
  auto it = m_cells.try_emplace(indexOf(location)).first;
  AccumulatedAnchor& cell = it->second;

  // W > 0, so even a down-weighted anchor fills an empty voxel.
  const double weight = (adaptive && tracker.iai > tracker.iai_0) ? tracker.W : 1.0;

  cell.sum += weight * anchor;
  cell.weight_total += weight;
  cell.visit_count += 1;

  // An antipodal pair can cancel the sum; such a voxel cannot answer queries.
  if (cell.sum.norm() == 0.0)
    m_cells.erase(it);
  return weight;
}

std::optional<Vec3> AnchorVoxelGrid::query(const Vec3& location) const
{
  const auto it = m_cells.find(indexOf(location));
  if (it == m_cells.end())
    return std::nullopt;
  return Vec3(it->second.sum.normalized());
}

double AnchorVoxelGrid::meanVisits() const
{
  if (m_cells.empty())
    return 0.0;
  double visits = 0.0;
  for (const auto& [index, cell] : m_cells)
    visits += cell.visit_count;
  return visits / static_cast<double>(m_cells.size());
}

std::vector<std::pair<VoxelIndex, AccumulatedAnchor>> AnchorVoxelGrid::sortedCells() const
{
  std::vector<std::pair<VoxelIndex, AccumulatedAnchor>> out(m_cells.begin(), m_cells.end());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

bool AnchorVoxelGrid::operator==(const AnchorVoxelGrid& other) const
{
  return m_resolution == other.m_resolution && m_origin == other.m_origin &&
         m_cells == other.m_cells;
}

std::size_t memoryFootprint(const AnchorVoxelGrid& grid)
{
  return grid.filledVoxels() * kBytesPerVoxel;
}

double databaseError(const AnchorVoxelGrid& grid, const FieldDirectionFn& trueField)
{
  if (grid.empty())
    throw EmptyDatabase();
  double total = 0.0;
  for (const auto& [index, cell] : grid.sortedCells())
  {
    const Vec3 stored = cell.sum.normalized();
    total += angleBetween(stored, trueField(grid.centerOf(index)));
  }
  return total / static_cast<double>(grid.filledVoxels());
}

void dumpGrid(const AnchorVoxelGrid& grid, std::ostream& out)
{
  out << "ix,iy,iz,nx,ny,nz,weight_total,visit_count\n";
  for (const auto& [index, cell] : grid.sortedCells())
  {
    const Vec3 n = cell.sum.normalized();
    out << fmt::format("{},{},{},{:.9f},{:.9f},{:.9f},{:.9f},{}\n", index.x, index.y, index.z,
                       n.x(), n.y(), n.z(), cell.weight_total, cell.visit_count);
  }
}

} // namespace magvox
