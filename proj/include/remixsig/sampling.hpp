#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "remixsig/errors.hpp"
#include "remixsig/geometry.hpp"
#include "remixsig/mesh.hpp"

namespace remixsig {

/// All sample points coincide; no scale can be derived.
struct DegenerateShape final : Error {
    using Error::Error;
};

struct RadiusOutOfRange final : Error {
    using Error::Error;
};

/// Area-weighted point samples of a mesh surface. Weights sum to 1.
struct SurfaceSamples {
    std::vector<Vec3> points;
    std::vector<double> weights;
};

/// Translate-then-scale transform placing a shape in the unit ball with a
/// fixed weighted mean radius.
struct NormalizationTransform {
    Vec3 translation;   // negated centroid
    double scale = 1.0; // applied after translation

    Vec3 apply(const Vec3& p) const { return (p + translation) * scale; }
};

/// Cubic occupancy grid over [-1,1]^3. Values are binary after surface
/// rasterization but the type admits anything in [0,1].
struct VoxelGrid {
    explicit VoxelGrid(int resolution);

    int n = 0;
    std::vector<double> values;       // n^3, x-major: index = (ix*n + iy)*n + iz
    std::size_t overflow_count = 0;   // points clamped from outside [-1,1]^3

    double at(int ix, int iy, int iz) const { return values[(static_cast<std::size_t>(ix) * n + iy) * n + iz]; }
    double& at(int ix, int iy, int iz) { return values[(static_cast<std::size_t>(ix) * n + iy) * n + iz]; }

    /// Trilinear interpolation between voxel centers; reads 0 outside.
    double sample_trilinear(const Vec3& p) const;
};

/// Spherical restriction of a voxel grid: 2B x 2B samples at the
/// equiangular angles theta_i = (i+0.5)pi/2B, phi_j = (j+0.5)2pi/2B.
struct SphereSamples {
    int radius_index = 0;
    int bandwidth = 0;
    std::vector<double> values;  // theta-major: index = i*(2B) + j

    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * (2 * bandwidth) + j]; }
};

/// Uniform barycentric samples: each non-degenerate triangle receives
/// max(1, round(density * area)) points; a point's weight is its
/// triangle's area share divided by the triangle's point count.
/// Degenerate triangles are skipped (zero weight). Throws ZeroArea.
SurfaceSamples sample_surface(const TriangleMesh& mesh, double samples_per_unit_area,
                              std::uint64_t seed);

/// translation = -(weighted centroid); scale set so the weighted mean
/// distance from the origin equals target_mean_radius. Throws
/// DegenerateShape when the mean radius after centering is zero.
NormalizationTransform compute_normalization(const SurfaceSamples& samples,
                                             double target_mean_radius = 0.5);

/// Marks the voxel floor((p+1)/2*n) of every transformed point. Points
/// outside [-1,1]^3 are clamped to the boundary voxel and counted in
/// overflow_count.
VoxelGrid voxelize(const SurfaceSamples& samples, const NormalizationTransform& transform, int n);

/// Samples the grid on the sphere of radius r_k = 2k/n (k voxel units from
/// the center) by trilinear interpolation. Requires 1 <= k <= n/2.
SphereSamples restrict_to_sphere(const VoxelGrid& grid, int radius_index, int bandwidth);

}  // namespace remixsig
