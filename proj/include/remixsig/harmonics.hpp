#pragma once

#include <cstdint>
#include <vector>

#include "remixsig/errors.hpp"
#include "remixsig/mesh.hpp"
#include "remixsig/sampling.hpp"

namespace remixsig {

struct BandwidthTooLow final : Error {
    using Error::Error;
};

struct IncompatibleParams final : Error {
    using Error::Error;
};

/// Associated Legendre function P_l^m(x) with Condon-Shortley phase,
/// by upward recurrence in l. Requires 0 <= m <= l and |x| <= 1.
double assoc_legendre(int l, int m, double x);

/// Orthonormal real spherical harmonic:
///   Y_l^0      = N(l,0)   P_l^0(cos theta)
///   Y_l^m, m>0 = sqrt(2) N(l,m)  P_l^m(cos theta)  cos(m phi)
///   Y_l^m, m<0 = sqrt(2) N(l,|m|) P_l^|m|(cos theta) sin(|m| phi)
/// with N(l,m) = sqrt((2l+1)(l-m)! / (4 pi (l+m)!)).
double real_sh(int l, int m, double theta, double phi);

/// Equiangular colatitude nodes theta_i = (i+0.5)pi/2B, i in [0, 2B).
std::vector<double> sphere_theta_nodes(int bandwidth);

/// Quadrature weights w_i such that sum_i w_i f(theta_i) equals
/// int_0^pi f(theta) sin(theta) dtheta exactly whenever f is a polynomial
/// in cos(theta) of degree < 2B (Fejer's first rule: the nodes' cosines
/// are Chebyshev roots).
std::vector<double> sphere_theta_weights(int bandwidth);

/// Azimuth nodes phi_j = (j+0.5)2pi/2B, j in [0, 2B).
std::vector<double> sphere_phi_nodes(int bandwidth);

/// Descriptor pipeline parameters. Two descriptors are comparable only if
/// these match exactly.
struct DescriptorParams {
    int n = 64;          // voxel grid resolution (even, >= 8)
    int R = 32;          // concentric radii, <= n/2
    int L = 16;          // max spherical harmonic degree
    int B = 128;         // sampling bandwidth, >= L+1
    double density = 5000.0;  // surface samples per unit normalized area
    std::uint64_t seed = 42;

    bool operator==(const DescriptorParams&) const = default;
    void validate() const;  // throws DomainError on violated constraints
};

/// R x (L+1) grid of non-negative frequency energies; rotation-invariant
/// signature of a voxelized surface. Row k-1 holds e_0..e_L at radius r_k.
struct ShapeDescriptor {
    DescriptorParams params;
    std::vector<double> energies;  // R*(L+1), row-major by radius

    double energy(int radius_index, int degree) const {
        return energies[static_cast<std::size_t>(radius_index - 1) * (params.L + 1) + degree];
    }
    double norm() const;
};

/// Precomputed tables (Legendre values at the theta nodes, azimuth
/// trigonometry, quadrature weights) for expanding 2B x 2B sphere samples
/// up to degree L. Shareable read-only across threads.
class SpherePlan {
  public:
    SpherePlan(int max_degree, int bandwidth);

    /// Frequency energies e_0..e_L of the sampled function:
    /// e_l = sqrt(sum_m a_{l,m}^2) with a_{l,m} the quadrature estimate of
    /// the Y_l^m coefficient.
    std::vector<double> decompose(const SphereSamples& samples) const;

    int max_degree() const { return max_degree_; }
    int bandwidth() const { return bandwidth_; }

  private:
    int max_degree_;
    int bandwidth_;
    std::vector<double> theta_weights_;
    std::vector<double> legendre_;  // [(l,m) pair][theta index], m >= 0
    std::vector<double> cos_m_;     // [m][phi index]
    std::vector<double> sin_m_;
};

/// One-shot expansion of a single sphere. Throws BandwidthTooLow when the
/// sample grid's bandwidth is < max_degree+1.
std::vector<double> decompose_sphere(const SphereSamples& samples, int max_degree);

/// Full signature: row k = decompose_sphere(restrict_to_sphere(grid, k, B))
/// for k = 1..R.
ShapeDescriptor build_descriptor(const VoxelGrid& grid, const DescriptorParams& params);

/// Whole pipeline for one mesh: surface sampling (seeded from params.seed
/// mixed with the mesh's source_id), normalization to mean radius 0.5,
/// rasterization, harmonic analysis. The sampling density is interpreted
/// per unit of normalized area, so meshes in any unit system get
/// comparable sample counts.
ShapeDescriptor describe_mesh(const TriangleMesh& mesh, const DescriptorParams& params);

/// Euclidean distance over the flattened energy grids. Throws
/// IncompatibleParams when the descriptors' params differ.
double descriptor_distance(const ShapeDescriptor& a, const ShapeDescriptor& b);

}  // namespace remixsig
