#include "remixsig/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "remixsig/rng.hpp"

namespace remixsig {

VoxelGrid::VoxelGrid(int resolution) : n(resolution) {
    if (n < 8 || n % 2 != 0)
        throw DomainError("VoxelGrid: resolution must be even and >= 8");
    values.assign(static_cast<std::size_t>(n) * n * n, 0.0);
}

double VoxelGrid::sample_trilinear(const Vec3& p) const {
    // Continuous grid coordinates with voxel centers at integer positions.
    double gx = (p.x + 1.0) * 0.5 * n - 0.5;
    double gy = (p.y + 1.0) * 0.5 * n - 0.5;
    double gz = (p.z + 1.0) * 0.5 * n - 0.5;
    int ix = static_cast<int>(std::floor(gx));
    int iy = static_cast<int>(std::floor(gy));
    int iz = static_cast<int>(std::floor(gz));
    double fx = gx - ix, fy = gy - iy, fz = gz - iz;
    double acc = 0.0;
    for (int dx = 0; dx < 2; ++dx) {
        int x = ix + dx;
        if (x < 0 || x >= n) continue;
        double wx = dx ? fx : 1.0 - fx;
        for (int dy = 0; dy < 2; ++dy) {
            int y = iy + dy;
            if (y < 0 || y >= n) continue;
            double wy = dy ? fy : 1.0 - fy;
            for (int dz = 0; dz < 2; ++dz) {
                int z = iz + dz;
                if (z < 0 || z >= n) continue;
                double wz = dz ? fz : 1.0 - fz;
                acc += wx * wy * wz * at(x, y, z);
            }
        }
    }
    return acc;
}

SurfaceSamples sample_surface(const TriangleMesh& mesh, double samples_per_unit_area,
                              std::uint64_t seed) {
    if (!(samples_per_unit_area > 0.0) || !std::isfinite(samples_per_unit_area))
        throw DomainError("sample_surface: density must be positive and finite");
    double total_area = surface_area(mesh);
    if (total_area <= 0.0) throw ZeroArea("sample_surface: mesh has zero surface area");

    Rng rng(seed);
    SurfaceSamples out;
    for (const Triangle& t : mesh.triangles) {
        double area = t.area();
        if (area <= 0.0) continue;  // degenerate: zero sampling weight
        auto count = static_cast<std::int64_t>(
            std::max<double>(1.0, std::llround(samples_per_unit_area * area)));
        double w = area / (total_area * static_cast<double>(count));
        Vec3 e1 = t.v1 - t.v0, e2 = t.v2 - t.v0;
        for (std::int64_t i = 0; i < count; ++i) {
            double u = rng.uniform01(), v = rng.uniform01();
            if (u + v > 1.0) {
                u = 1.0 - u;
                v = 1.0 - v;
            }
            out.points.push_back(t.v0 + e1 * u + e2 * v);
            out.weights.push_back(w);
        }
    }
    return out;
}

NormalizationTransform compute_normalization(const SurfaceSamples& samples,
                                             double target_mean_radius) {
    if (samples.points.empty())
        throw DomainError("compute_normalization: no sample points");
    if (!(target_mean_radius > 0.0 && target_mean_radius < 1.0))
        throw DomainError("compute_normalization: target mean radius must lie in (0,1)");

    Vec3 centroid;
    for (std::size_t i = 0; i < samples.points.size(); ++i)
        centroid += samples.points[i] * samples.weights[i];

    double mean_radius = 0.0;
    for (std::size_t i = 0; i < samples.points.size(); ++i)
        mean_radius += (samples.points[i] - centroid).norm() * samples.weights[i];
    if (mean_radius <= 0.0)
        throw DegenerateShape("compute_normalization: all sample points coincide");

    return {.translation = -centroid, .scale = target_mean_radius / mean_radius};
}

VoxelGrid voxelize(const SurfaceSamples& samples, const NormalizationTransform& transform, int n) {
    if (!(transform.scale > 0.0) || !std::isfinite(transform.scale))
        throw DomainError("voxelize: transform scale must be positive and finite");
    VoxelGrid grid(n);
    for (const Vec3& p : samples.points) {
        Vec3 q = transform.apply(p);
        bool overflow = false;
        int idx[3];
        for (int a = 0; a < 3; ++a) {
            double c = q[a];
            if (c < -1.0 || c > 1.0) overflow = true;
            int i = static_cast<int>(std::floor((c + 1.0) * 0.5 * n));
            idx[a] = std::clamp(i, 0, n - 1);
        }
        if (overflow) ++grid.overflow_count;
        grid.at(idx[0], idx[1], idx[2]) = 1.0;
    }
    return grid;
}

SphereSamples restrict_to_sphere(const VoxelGrid& grid, int radius_index, int bandwidth) {
    int max_k = grid.n / 2;
    if (radius_index < 1 || radius_index > max_k)
        throw RadiusOutOfRange("restrict_to_sphere: radius index must lie in [1, n/2]");
    if (bandwidth < 1) throw DomainError("restrict_to_sphere: bandwidth must be >= 1");

    int m = 2 * bandwidth;
    double r = static_cast<double>(radius_index) / max_k;
    SphereSamples out;
    out.radius_index = radius_index;
    out.bandwidth = bandwidth;
    out.values.resize(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        double theta = (i + 0.5) * M_PI / m;
        double st = std::sin(theta), ct = std::cos(theta);
        for (int j = 0; j < m; ++j) {
            double phi = (j + 0.5) * 2.0 * M_PI / m;
            Vec3 p{r * st * std::cos(phi), r * st * std::sin(phi), r * ct};
            out.values[static_cast<std::size_t>(i) * m + j] = grid.sample_trilinear(p);
        }
    }
    return out;
}

}  // namespace remixsig
