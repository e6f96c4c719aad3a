#pragma once

#include <vector>

#include <Eigen/Core>

namespace surplusect {

/// Geodesic sphere from a subdivided icosahedron: 10 * 4^s + 2 vertices.
/// The orientation puts +-e1, +-e2, +-e3 on the mesh from the first subdivision on.
struct Icosphere {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::vector<int>> rings;  // neighbours in cyclic order
  double max_edge_angle = 0.0;
};

Icosphere build_icosphere(int subdivisions);

/// Cached, thread-safe access to build_icosphere.
const Icosphere& icosphere(int subdivisions);

}  // namespace surplusect
