#include "remixsig/harmonics.hpp"

#include <cmath>
#include <sstream>

#include "remixsig/rng.hpp"

namespace remixsig {

namespace {

constexpr double kFourPi = 4.0 * M_PI;

/// Index of the (l, m>=0) pair in a packed triangular table.
inline std::size_t pair_index(int l, int m) {
    return static_cast<std::size_t>(l) * (l + 1) / 2 + m;
}

/// Normalized associated Legendre N(l,m) P_l^m(x) for all l in [m, L] at
/// fixed m, appended into out[pair_index(l,m)*stride + column]. The fully
/// normalized recurrence stays bounded for any degree.
void normalized_legendre_column(int max_degree, double x, std::vector<double>& out,
                                std::size_t stride, std::size_t column) {
    double somx2 = std::sqrt((1.0 - x) * (1.0 + x));
    double pmm = 1.0 / std::sqrt(kFourPi);  // NP_0^0
    for (int m = 0; m <= max_degree; ++m) {
        out[pair_index(m, m) * stride + column] = pmm;
        if (m + 1 <= max_degree) {
            double pmmp1 = x * std::sqrt(2.0 * m + 3.0) * pmm;
            out[pair_index(m + 1, m) * stride + column] = pmmp1;
            double prev_a = std::sqrt(2.0 * m + 3.0);
            double pll_m2 = pmm, pll_m1 = pmmp1;
            for (int l = m + 2; l <= max_degree; ++l) {
                double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
                double pll = a * (x * pll_m1 - pll_m2 / prev_a);
                out[pair_index(l, m) * stride + column] = pll;
                prev_a = a;
                pll_m2 = pll_m1;
                pll_m1 = pll;
            }
        }
        // NP_{m+1}^{m+1} from NP_m^m (Condon-Shortley phase).
        pmm *= -somx2 * std::sqrt((2.0 * m + 3.0) / (2.0 * m + 2.0));
    }
}

double normalized_legendre(int l, int m, double x) {
    std::vector<double> table(pair_index(l, l) + 1);
    normalized_legendre_column(l, x, table, 1, 0);
    return table[pair_index(l, m)];
}

}  // namespace

double assoc_legendre(int l, int m, double x) {
    if (l < 0 || m < 0 || m > l) throw DomainError("assoc_legendre: need 0 <= m <= l");
    if (!(std::abs(x) <= 1.0)) throw DomainError("assoc_legendre: need |x| <= 1");
    // P_m^m = (-1)^m (2m-1)!! (1-x^2)^{m/2}, then upward in l.
    double somx2 = std::sqrt((1.0 - x) * (1.0 + x));
    double pmm = 1.0;
    for (int i = 1; i <= m; ++i) pmm *= -(2.0 * i - 1.0) * somx2;
    if (l == m) return pmm;
    double pmmp1 = x * (2.0 * m + 1.0) * pmm;
    if (l == m + 1) return pmmp1;
    double pll = 0.0;
    for (int ll = m + 2; ll <= l; ++ll) {
        pll = ((2.0 * ll - 1.0) * x * pmmp1 - (ll + m - 1.0) * pmm) / (ll - m);
        pmm = pmmp1;
        pmmp1 = pll;
    }
    return pll;
}

double real_sh(int l, int m, double theta, double phi) {
    if (l < 0 || std::abs(m) > l) throw DomainError("real_sh: need |m| <= l");
    double np = normalized_legendre(l, std::abs(m), std::cos(theta));
    if (m == 0) return np;
    if (m > 0) return M_SQRT2 * np * std::cos(m * phi);
    return M_SQRT2 * np * std::sin(-m * phi);
}

std::vector<double> sphere_theta_nodes(int bandwidth) {
    int m = 2 * bandwidth;
    std::vector<double> nodes(m);
    for (int i = 0; i < m; ++i) nodes[i] = (i + 0.5) * M_PI / m;
    return nodes;
}

std::vector<double> sphere_theta_weights(int bandwidth) {
    // Fejer's first rule: cos(theta_i) are Chebyshev roots, so these
    // weights integrate polynomials in cos(theta) of degree < 2B exactly
    // against the sin(theta) measure. Plain sin(theta_i)*dtheta weights
    // leave O(1/B^2) orthonormality residue, far above test tolerance.
    int m = 2 * bandwidth;
    std::vector<double> w(m);
    for (int i = 0; i < m; ++i) {
        double theta = (i + 0.5) * M_PI / m;
        double s = 0.0;
        for (int j = 1; j <= m / 2; ++j) s += std::cos(2.0 * j * theta) / (4.0 * j * j - 1.0);
        w[i] = (2.0 / m) * (1.0 - 2.0 * s);
    }
    return w;
}

std::vector<double> sphere_phi_nodes(int bandwidth) {
    int m = 2 * bandwidth;
    std::vector<double> nodes(m);
    for (int i = 0; i < m; ++i) nodes[i] = (i + 0.5) * 2.0 * M_PI / m;
    return nodes;
}

void DescriptorParams::validate() const {
    if (n < 8 || n % 2 != 0) throw DomainError("params: n must be even and >= 8");
    if (R < 1 || R > n / 2) throw DomainError("params: R must lie in [1, n/2]");
    if (L < 0) throw DomainError("params: L must be >= 0");
    if (B < L + 1) throw BandwidthTooLow("params: B must be >= L+1");
    if (!(density > 0.0) || !std::isfinite(density))
        throw DomainError("params: density must be positive and finite");
}

double ShapeDescriptor::norm() const {
    double s = 0.0;
    for (double e : energies) s += e * e;
    return std::sqrt(s);
}

SpherePlan::SpherePlan(int max_degree, int bandwidth)
    : max_degree_(max_degree), bandwidth_(bandwidth) {
    if (max_degree < 0) throw DomainError("SpherePlan: max degree must be >= 0");
    if (bandwidth < max_degree + 1)
        throw BandwidthTooLow("SpherePlan: bandwidth must be >= max degree + 1");
    int m = 2 * bandwidth;
    theta_weights_ = sphere_theta_weights(bandwidth);
    std::vector<double> thetas = sphere_theta_nodes(bandwidth);
    std::vector<double> phis = sphere_phi_nodes(bandwidth);

    legendre_.assign((pair_index(max_degree, max_degree) + 1) * m, 0.0);
    for (int i = 0; i < m; ++i)
        normalized_legendre_column(max_degree, std::cos(thetas[i]), legendre_, m, i);

    cos_m_.resize(static_cast<std::size_t>(max_degree + 1) * m);
    sin_m_.resize(static_cast<std::size_t>(max_degree + 1) * m);
    for (int order = 0; order <= max_degree; ++order)
        for (int j = 0; j < m; ++j) {
            cos_m_[static_cast<std::size_t>(order) * m + j] = std::cos(order * phis[j]);
            sin_m_[static_cast<std::size_t>(order) * m + j] = std::sin(order * phis[j]);
        }
}

std::vector<double> SpherePlan::decompose(const SphereSamples& samples) const {
    if (samples.bandwidth != bandwidth_)
        throw IncompatibleParams("decompose: sample grid bandwidth does not match plan");
    int m = 2 * bandwidth_;
    double dphi = 2.0 * M_PI / m;

    // Azimuthal stage: per theta row, projections onto cos(m phi), sin(m phi).
    std::vector<double> cos_proj(static_cast<std::size_t>(m) * (max_degree_ + 1));
    std::vector<double> sin_proj(static_cast<std::size_t>(m) * (max_degree_ + 1));
    for (int i = 0; i < m; ++i) {
        const double* row = samples.values.data() + static_cast<std::size_t>(i) * m;
        for (int order = 0; order <= max_degree_; ++order) {
            const double* c = cos_m_.data() + static_cast<std::size_t>(order) * m;
            const double* s = sin_m_.data() + static_cast<std::size_t>(order) * m;
            double ac = 0.0, as = 0.0;
            for (int j = 0; j < m; ++j) {
                ac += row[j] * c[j];
                as += row[j] * s[j];
            }
            cos_proj[static_cast<std::size_t>(i) * (max_degree_ + 1) + order] = ac * dphi;
            sin_proj[static_cast<std::size_t>(i) * (max_degree_ + 1) + order] = as * dphi;
        }
    }

    // Colatitude stage: weighted Legendre projections, then energy norms.
    std::vector<double> energies(max_degree_ + 1, 0.0);
    for (int l = 0; l <= max_degree_; ++l) {
        double sum_sq = 0.0;
        for (int order = 0; order <= l; ++order) {
            const double* leg = legendre_.data() + pair_index(l, order) * m;
            double ac = 0.0, as = 0.0;
            for (int i = 0; i < m; ++i) {
                double lw = leg[i] * theta_weights_[i];
                ac += lw * cos_proj[static_cast<std::size_t>(i) * (max_degree_ + 1) + order];
                as += lw * sin_proj[static_cast<std::size_t>(i) * (max_degree_ + 1) + order];
            }
            if (order == 0) {
                sum_sq += ac * ac;
            } else {
                ac *= M_SQRT2;
                as *= M_SQRT2;
                sum_sq += ac * ac + as * as;
            }
        }
        energies[l] = std::sqrt(sum_sq);
    }
    return energies;
}

std::vector<double> decompose_sphere(const SphereSamples& samples, int max_degree) {
    SpherePlan plan(max_degree, samples.bandwidth);
    return plan.decompose(samples);
}

ShapeDescriptor build_descriptor(const VoxelGrid& grid, const DescriptorParams& params) {
    params.validate();
    if (grid.n != params.n)
        throw IncompatibleParams("build_descriptor: grid resolution does not match params");
    SpherePlan plan(params.L, params.B);
    ShapeDescriptor desc;
    desc.params = params;
    desc.energies.reserve(static_cast<std::size_t>(params.R) * (params.L + 1));
    for (int k = 1; k <= params.R; ++k) {
        std::vector<double> row = plan.decompose(restrict_to_sphere(grid, k, params.B));
        desc.energies.insert(desc.energies.end(), row.begin(), row.end());
    }
    return desc;
}

ShapeDescriptor describe_mesh(const TriangleMesh& mesh, const DescriptorParams& params) {
    params.validate();
    std::uint64_t design_seed = mix_seed(params.seed, fnv1a(mesh.source_id));

    // Pre-pass with a fixed point budget to learn the normalization scale,
    // so params.density counts samples per unit of *normalized* area.
    double area = surface_area(mesh);
    if (area <= 0.0) throw ZeroArea("describe_mesh: mesh has zero surface area");
    SurfaceSamples pre = sample_surface(mesh, 1000.0 / area, mix_seed(design_seed, 1));
    double scale = compute_normalization(pre).scale;

    SurfaceSamples samples =
        sample_surface(mesh, params.density * scale * scale, mix_seed(design_seed, 2));
    NormalizationTransform transform = compute_normalization(samples);
    VoxelGrid grid = voxelize(samples, transform, params.n);
    return build_descriptor(grid, params);
}

double descriptor_distance(const ShapeDescriptor& a, const ShapeDescriptor& b) {
    if (!(a.params == b.params) || a.energies.size() != b.energies.size())
        throw IncompatibleParams("descriptor_distance: descriptors built with different params");
    double s = 0.0;
    for (std::size_t i = 0; i < a.energies.size(); ++i) {
        double d = a.energies[i] - b.energies[i];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace remixsig
