#include "surplusect/icosphere.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>

#include <Eigen/Geometry>

#include "surplusect/errors.hpp"

namespace surplusect {

Icosphere build_icosphere(int subdivisions) {
  if (subdivisions < 0 || subdivisions > 8) {
    throw InvalidArgument("icosphere: subdivisions must be in [0, 8]");
  }
  const double phi = std::numbers::phi;
  std::vector<Eigen::Vector3d> verts = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
      {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& v : verts) v.normalize();
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    const auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      const auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      verts.push_back((verts[static_cast<std::size_t>(a)] + verts[static_cast<std::size_t>(b)])
                          .normalized());
      const int idx = static_cast<int>(verts.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int ab = mid(f[0], f[1]);
      const int bc = mid(f[1], f[2]);
      const int ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }

  Icosphere mesh;
  mesh.vertices = std::move(verts);
  const std::size_t count = mesh.vertices.size();
  mesh.rings.assign(count, {});
  for (const auto& f : faces) {
    for (int e = 0; e < 3; ++e) {
      const int a = f[static_cast<std::size_t>(e)];
      const int b = f[static_cast<std::size_t>((e + 1) % 3)];
      auto& ra = mesh.rings[static_cast<std::size_t>(a)];
      auto& rb = mesh.rings[static_cast<std::size_t>(b)];
      if (std::find(ra.begin(), ra.end(), b) == ra.end()) ra.push_back(b);
      if (std::find(rb.begin(), rb.end(), a) == rb.end()) rb.push_back(a);
    }
  }
  for (std::size_t i = 0; i < count; ++i) {
    const Eigen::Vector3d& v = mesh.vertices[i];
    Eigen::Index k = 0;
    v.cwiseAbs().minCoeff(&k);
    const Eigen::Vector3d e1 = v.cross(Eigen::Vector3d::Unit(k)).normalized();
    const Eigen::Vector3d e2 = v.cross(e1);
    auto& ring = mesh.rings[i];
    std::vector<std::pair<double, int>> keyed;
    for (int nb : ring) {
      const Eigen::Vector3d d = mesh.vertices[static_cast<std::size_t>(nb)] - v;
      keyed.emplace_back(std::atan2(d.dot(e2), d.dot(e1)), nb);
      const double angle = std::acos(std::clamp(v.dot(mesh.vertices[static_cast<std::size_t>(nb)]), -1.0, 1.0));
      mesh.max_edge_angle = std::max(mesh.max_edge_angle, angle);
    }
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t j = 0; j < ring.size(); ++j) ring[j] = keyed[j].second;
  }
  return mesh;
}

const Icosphere& icosphere(int subdivisions) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<Icosphere>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[subdivisions];
  if (!slot) slot = std::make_unique<Icosphere>(build_icosphere(subdivisions));
  return *slot;
}

}  // namespace surplusect
