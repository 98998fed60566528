#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "remixsig/corpus.hpp"
#include "remixsig/errors.hpp"
#include "remixsig/mesh.hpp"

namespace remixsig {

/// Parametric primitives used as synthetic roots.
TriangleMesh make_icosphere(int subdivisions, double radius, std::string id);
TriangleMesh make_box(const Vec3& half_extents, std::string id);
TriangleMesh make_cylinder(double radius, double height, int segments, std::string id);
TriangleMesh make_torus(double major_radius, double tube_radius, int segments_major,
                        int segments_minor, std::string id);

/// Radial Gaussian bump toward `direction`: vertices scale by
/// 1 + amplitude * exp(-(angle/width)^2) where angle is measured from the
/// bump direction at the mesh's area centroid.
TriangleMesh displace_radial_bump(const TriangleMesh& mesh, const Vec3& direction,
                                  double amplitude, double width);

/// Synthetic corpus generator configuration. Likes and makes are drawn from
/// negative-binomial distributions; each effect multiplies the base mean
/// for the corresponding injected class (original truth label, inherited).
struct SyntheticConfig {
    int n_designs = 50;
    double remix_fraction = 0.5;  // fraction of designs that have a parent
    double epsilon = 0.02;        // imitative jitter, relative to mean radius
    double base_likes = 10.0;
    double base_makes = 2.0;
    double effect_orig_likes = 0.5;
    double effect_orig_makes = 0.5;
    double effect_inh_likes = 0.5;
    double effect_inh_makes = 0.5;
    int nb_dispersion = 3;
    std::uint64_t seed = 42;

    void validate() const;  // throws ConfigError
};

struct SyntheticDesign {
    DesignRecord record;
    TriangleMesh mesh;
    std::string true_class;  // "original" or "imitative"
};

struct SyntheticCorpus {
    std::vector<SyntheticDesign> designs;
};

/// Deterministic corpus with known ground truth. Roots are randomized
/// primitives (original). Each remix child is either a jittered,
/// mildly anisotropically scaled copy of its parent (imitative) or a
/// fresh primitive from a different family (original). Designs carry
/// strictly increasing timestamps in generation order.
SyntheticCorpus generate_synthetic_corpus(const SyntheticConfig& config);

/// Directory layout: meshes/<id>.stl, metadata.csv, truth.csv (id,true_class).
/// Byte-identical for identical configs.
void write_synthetic_corpus(const SyntheticCorpus& corpus, const std::filesystem::path& dir);

}  // namespace remixsig
