#pragma once

#include <optional>
#include <string>
#include <vector>

#include "remixsig/errors.hpp"
#include "remixsig/geometry.hpp"

namespace remixsig {

struct ZeroArea final : Error {
    using Error::Error;
};

struct NonOrthonormalRotation final : Error {
    using Error::Error;
};

struct Triangle {
    Vec3 v0, v1, v2;
    /// Normal as stored in the source file, if it was plausibly unit length.
    /// Never used in computations; kept only for faithful re-serialization.
    std::optional<Vec3> stored_normal;

    double area() const { return 0.5 * cross(v1 - v0, v2 - v0).norm(); }
    Vec3 centroid() const { return (v0 + v1 + v2) / 3.0; }

    /// Unit normal from winding order; zero vector for degenerate triangles.
    Vec3 winding_normal() const { return normalized(cross(v1 - v0, v2 - v0)); }
};

struct TriangleMesh {
    std::vector<Triangle> triangles;
    std::string source_id;
};

/// Sum of triangle areas. Degenerate triangles contribute zero.
double surface_area(const TriangleMesh& mesh);

/// Area-weighted mean of triangle centroids. Throws ZeroArea when the
/// total surface area vanishes.
Vec3 area_centroid(const TriangleMesh& mesh);

/// Area-weighted mean distance of triangle centroids from the area
/// centroid; a cheap analytic proxy for the mesh's radial extent.
double mean_centroid_distance(const TriangleMesh& mesh);

/// Maps every vertex v -> R*v + t. Stored normals are dropped (recomputed
/// from winding when needed). Throws NonOrthonormalRotation when R^T R
/// deviates from the identity by more than 1e-9.
TriangleMesh apply_rigid(const TriangleMesh& mesh, const Mat3& rotation, const Vec3& translation);

}  // namespace remixsig
