#include "remixsig/synthetic.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <utility>

#include "remixsig/rng.hpp"
#include "remixsig/stl_io.hpp"

namespace remixsig {

namespace {

constexpr int kFamilies = 4;  // icosphere, box, cylinder, torus

template <typename Fn>
void map_vertices(TriangleMesh& mesh, Fn&& fn) {
    for (Triangle& t : mesh.triangles) {
        t.v0 = fn(t.v0);
        t.v1 = fn(t.v1);
        t.v2 = fn(t.v2);
        t.stored_normal.reset();  // stale after a non-rigid map
    }
}

void subdivide_projected(std::vector<Triangle>& tris, double radius, int levels) {
    auto project = [radius](const Vec3& v) { return normalized(v) * radius; };
    for (int s = 0; s < levels; ++s) {
        std::vector<Triangle> next;
        next.reserve(tris.size() * 4);
        for (const Triangle& t : tris) {
            // Midpoints are pure functions of the endpoint coordinates, so
            // shared edges stay coincident across the triangle soup.
            Vec3 a = project((t.v0 + t.v1) * 0.5);
            Vec3 b = project((t.v1 + t.v2) * 0.5);
            Vec3 c = project((t.v2 + t.v0) * 0.5);
            next.push_back({t.v0, a, c, std::nullopt});
            next.push_back({a, t.v1, b, std::nullopt});
            next.push_back({c, b, t.v2, std::nullopt});
            next.push_back({a, b, c, std::nullopt});
        }
        tris = std::move(next);
    }
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

struct Wave {
    Vec3 u;
    double freq, phase, amp;
};

std::vector<Wave> random_waves(int count, Rng& rng, double freq_lo, double freq_hi) {
    std::vector<Wave> waves(count);
    for (Wave& w : waves) {
        w.u = rng.unit_vector();
        w.freq = rng.uniform(freq_lo, freq_hi);
        w.phase = rng.uniform(0.0, 2.0 * M_PI);
        w.amp = rng.uniform(0.5, 1.0) / std::sqrt(double(count));
    }
    return waves;
}

/// Radial modulation r -> r * (1 + amplitude * squash(field(rhat))) about the
/// area centroid, followed by an anisotropic scale. The field is squashed into
/// (-0.9, 0.9) so the factor can never collapse or flip the radius, and the
/// displacement is a pure function of position, so coincident soup vertices
/// stay coincident.
void modulate_radially(TriangleMesh& mesh, const std::vector<Wave>& waves, double amplitude,
                       const Vec3& scale) {
    Vec3 c = area_centroid(mesh);
    map_vertices(mesh, [&](const Vec3& v) {
        Vec3 d = v - c;
        double len = d.norm();
        double field = 0.0;
        if (len > 0.0) {
            Vec3 rhat = d * (1.0 / len);
            for (const Wave& w : waves)
                field += w.amp * std::sin(w.freq * dot(w.u, rhat) * M_PI + w.phase);
        }
        Vec3 rel = d * (1.0 + amplitude * 0.9 * std::tanh(field));
        return c + Vec3{rel.x * scale.x, rel.y * scale.y, rel.z * scale.z};
    });
}

TriangleMesh make_family_variant(int family, Rng& rng, const std::string& id) {
    TriangleMesh m;
    switch (family) {
        case 0: {
            m = make_icosphere(2, 1.0, id);
            Vec3 s{rng.uniform(0.6, 1.6), rng.uniform(0.6, 1.6), rng.uniform(0.6, 1.6)};
            map_vertices(m, [&s](const Vec3& v) {
                return Vec3{v.x * s.x, v.y * s.y, v.z * s.z};
            });
            if (rng.uniform01() < 0.5) {
                Vec3 dir = rng.unit_vector();
                double amp = rng.uniform(0.08, 0.3);
                double width = rng.uniform(0.4, 0.9);
                m = displace_radial_bump(m, dir, amp, width);
                m.source_id = id;
            }
            break;
        }
        case 1:
            m = make_box({rng.uniform(0.3, 1.2), rng.uniform(0.3, 1.2), rng.uniform(0.3, 1.2)},
                         id);
            break;
        case 2:
            m = make_cylinder(rng.uniform(0.2, 0.9), rng.uniform(0.6, 2.4), 48, id);
            break;
        default:
            m = make_torus(1.0, rng.uniform(0.1, 0.45), 48, 24, id);
    }
    // Every fresh design carries a strong individual deformation on top of its
    // family base: two wave packets in independently drawn frequency bands
    // with a per-design amplitude. Fresh shapes therefore differ in which
    // harmonic degrees and radii carry energy — not merely in phase, which the
    // rotation-invariant descriptor cannot see. This keeps nearest-prior
    // distances of original designs well above the near-zero distances of
    // imitative copies.
    double f0 = rng.uniform(0.6, 2.0);
    double f1 = rng.uniform(2.0, 4.0);
    int n0 = 2 + static_cast<int>(rng.uniform_int(0, 4));
    int n1 = 2 + static_cast<int>(rng.uniform_int(0, 4));
    std::vector<Wave> signature = random_waves(n0, rng, 0.8 * f0, 1.2 * f0);
    std::vector<Wave> high = random_waves(n1, rng, 0.8 * f1, 1.2 * f1);
    double balance = rng.uniform(0.2, 0.8);
    for (Wave& w : signature) w.amp *= balance;
    for (Wave& w : high) w.amp *= 1.0 - balance;
    signature.insert(signature.end(), high.begin(), high.end());
    double amplitude = rng.uniform(0.4, 0.8);
    Vec3 aniso{rng.uniform(0.8, 1.3), rng.uniform(0.8, 1.3), rng.uniform(0.8, 1.3)};
    modulate_radially(m, signature, amplitude, aniso);
    return m;
}

/// Imitative copy: a smooth random radial modulation of relative magnitude
/// epsilon plus a mild anisotropic scale, both vanishing at epsilon = 0.
TriangleMesh jitter_copy(const TriangleMesh& parent, double epsilon, Rng& rng, std::string id) {
    std::vector<Wave> waves = random_waves(3, rng, 1.0, 3.0);
    Vec3 scale{1.0 + epsilon * rng.uniform(-0.5, 0.5), 1.0 + epsilon * rng.uniform(-0.5, 0.5),
               1.0 + epsilon * rng.uniform(-0.5, 0.5)};
    TriangleMesh child = parent;
    child.source_id = std::move(id);
    modulate_radially(child, waves, epsilon, scale);
    return child;
}

}  // namespace

TriangleMesh make_icosphere(int subdivisions, double radius, std::string id) {
    if (subdivisions < 0 || subdivisions > 7)
        throw DomainError("make_icosphere: subdivisions must lie in [0, 7]");
    if (!(radius > 0.0)) throw DomainError("make_icosphere: radius must be positive");
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    const std::array<Vec3, 12> verts = {{{-1, t, 0},
                                         {1, t, 0},
                                         {-1, -t, 0},
                                         {1, -t, 0},
                                         {0, -1, t},
                                         {0, 1, t},
                                         {0, -1, -t},
                                         {0, 1, -t},
                                         {t, 0, -1},
                                         {t, 0, 1},
                                         {-t, 0, -1},
                                         {-t, 0, 1}}};
    const std::array<std::array<int, 3>, 20> faces = {{{0, 11, 5},  {0, 5, 1},   {0, 1, 7},
                                                       {0, 7, 10},  {0, 10, 11}, {1, 5, 9},
                                                       {5, 11, 4},  {11, 10, 2}, {10, 7, 6},
                                                       {7, 1, 8},   {3, 9, 4},   {3, 4, 2},
                                                       {3, 2, 6},   {3, 6, 8},   {3, 8, 9},
                                                       {4, 9, 5},   {2, 4, 11},  {6, 2, 10},
                                                       {8, 6, 7},   {9, 8, 1}}};
    TriangleMesh mesh;
    mesh.source_id = std::move(id);
    mesh.triangles.reserve(20);
    for (const auto& f : faces)
        mesh.triangles.push_back({normalized(verts[f[0]]) * radius,
                                  normalized(verts[f[1]]) * radius,
                                  normalized(verts[f[2]]) * radius, std::nullopt});
    subdivide_projected(mesh.triangles, radius, subdivisions);
    return mesh;
}

TriangleMesh make_box(const Vec3& half_extents, std::string id) {
    if (!(half_extents.x > 0.0 && half_extents.y > 0.0 && half_extents.z > 0.0))
        throw DomainError("make_box: half extents must be positive");
    double x = half_extents.x, y = half_extents.y, z = half_extents.z;
    auto corner = [&](int sx, int sy, int sz) {
        return Vec3{sx ? x : -x, sy ? y : -y, sz ? z : -z};
    };
    TriangleMesh mesh;
    mesh.source_id = std::move(id);
    auto quad = [&mesh](const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
        mesh.triangles.push_back({a, b, c, std::nullopt});
        mesh.triangles.push_back({a, c, d, std::nullopt});
    };
    // Outward CCW faces.
    quad(corner(1, 0, 0), corner(1, 1, 0), corner(1, 1, 1), corner(1, 0, 1));  // +x
    quad(corner(0, 0, 0), corner(0, 0, 1), corner(0, 1, 1), corner(0, 1, 0));  // -x
    quad(corner(0, 1, 0), corner(0, 1, 1), corner(1, 1, 1), corner(1, 1, 0));  // +y
    quad(corner(0, 0, 0), corner(1, 0, 0), corner(1, 0, 1), corner(0, 0, 1));  // -y
    quad(corner(0, 0, 1), corner(1, 0, 1), corner(1, 1, 1), corner(0, 1, 1));  // +z
    quad(corner(0, 0, 0), corner(0, 1, 0), corner(1, 1, 0), corner(1, 0, 0));  // -z
    return mesh;
}

TriangleMesh make_cylinder(double radius, double height, int segments, std::string id) {
    if (!(radius > 0.0) || !(height > 0.0))
        throw DomainError("make_cylinder: radius and height must be positive");
    if (segments < 3) throw DomainError("make_cylinder: need at least 3 segments");
    TriangleMesh mesh;
    mesh.source_id = std::move(id);
    double h = height / 2.0;
    Vec3 top_c{0, 0, h}, bot_c{0, 0, -h};
    for (int i = 0; i < segments; ++i) {
        double a0 = 2.0 * M_PI * i / segments;
        double a1 = 2.0 * M_PI * (i + 1) / segments;
        Vec3 b0{radius * std::cos(a0), radius * std::sin(a0), -h};
        Vec3 b1{radius * std::cos(a1), radius * std::sin(a1), -h};
        Vec3 t0{b0.x, b0.y, h}, t1{b1.x, b1.y, h};
        mesh.triangles.push_back({b0, b1, t1, std::nullopt});
        mesh.triangles.push_back({b0, t1, t0, std::nullopt});
        mesh.triangles.push_back({top_c, t0, t1, std::nullopt});
        mesh.triangles.push_back({bot_c, b1, b0, std::nullopt});
    }
    return mesh;
}

TriangleMesh make_torus(double major_radius, double tube_radius, int segments_major,
                        int segments_minor, std::string id) {
    if (!(tube_radius > 0.0) || !(major_radius > tube_radius))
        throw DomainError("make_torus: need major_radius > tube_radius > 0");
    if (segments_major < 3 || segments_minor < 3)
        throw DomainError("make_torus: need at least 3 segments each way");
    auto point = [&](int i, int j) {
        double u = 2.0 * M_PI * (i % segments_major) / segments_major;
        double v = 2.0 * M_PI * (j % segments_minor) / segments_minor;
        double w = major_radius + tube_radius * std::cos(v);
        return Vec3{w * std::cos(u), w * std::sin(u), tube_radius * std::sin(v)};
    };
    TriangleMesh mesh;
    mesh.source_id = std::move(id);
    for (int i = 0; i < segments_major; ++i)
        for (int j = 0; j < segments_minor; ++j) {
            Vec3 p00 = point(i, j), p10 = point(i + 1, j);
            Vec3 p11 = point(i + 1, j + 1), p01 = point(i, j + 1);
            mesh.triangles.push_back({p00, p10, p11, std::nullopt});
            mesh.triangles.push_back({p00, p11, p01, std::nullopt});
        }
    return mesh;
}

TriangleMesh displace_radial_bump(const TriangleMesh& mesh, const Vec3& direction,
                                  double amplitude, double width) {
    double dlen = direction.norm();
    if (!(dlen > 0.0)) throw DomainError("displace_radial_bump: direction must be nonzero");
    if (!(width > 0.0)) throw DomainError("displace_radial_bump: width must be positive");
    Vec3 dir = direction * (1.0 / dlen);
    Vec3 c = area_centroid(mesh);
    TriangleMesh out = mesh;
    map_vertices(out, [&](const Vec3& v) {
        Vec3 d = v - c;
        double len = d.norm();
        if (len <= 0.0) return v;
        double angle = std::acos(std::clamp(dot(d, dir) / len, -1.0, 1.0));
        double s = 1.0 + amplitude * std::exp(-(angle / width) * (angle / width));
        return c + d * s;
    });
    return out;
}

void SyntheticConfig::validate() const {
    if (n_designs < 10) throw ConfigError("config: n_designs must be >= 10");
    if (!(remix_fraction >= 0.0 && remix_fraction <= 1.0))
        throw ConfigError("config: remix_fraction must lie in [0, 1]");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
        throw ConfigError("config: epsilon must be >= 0 and finite");
    if (!(base_likes > 0.0) || !(base_makes > 0.0))
        throw ConfigError("config: base means must be positive");
    if (effect_orig_likes < 0.0 || effect_orig_makes < 0.0 || effect_inh_likes < 0.0 ||
        effect_inh_makes < 0.0)
        throw ConfigError("config: effect sizes must be >= 0");
    if (nb_dispersion < 1) throw ConfigError("config: nb_dispersion must be >= 1");
}

SyntheticCorpus generate_synthetic_corpus(const SyntheticConfig& config) {
    config.validate();
    Rng rng(mix_seed(config.seed, fnv1a("synthetic-corpus")));
    SyntheticCorpus corpus;
    corpus.designs.reserve(config.n_designs);
    std::vector<int> family_of(config.n_designs, 0);

    for (int i = 0; i < config.n_designs; ++i) {
        char idbuf[16];
        std::snprintf(idbuf, sizeof idbuf, "d%04d", i + 1);
        std::string id = idbuf;

        SyntheticDesign design;
        bool remix = i > 0 && rng.uniform01() < config.remix_fraction;
        if (!remix) {
            int family = static_cast<int>(rng.uniform_int(0, kFamilies - 1));
            family_of[i] = family;
            design.mesh = make_family_variant(family, rng, id);
            design.true_class = "original";
        } else {
            int parent = static_cast<int>(rng.uniform_int(0, i - 1));
            const SyntheticDesign& p = corpus.designs[parent];
            // Most remixes imitate; the rest branch to a fresh family. The
            // bias keeps the two true classes near balance overall, which
            // centers the mean-split threshold between the score clusters.
            if (rng.uniform01() < 0.8) {
                family_of[i] = family_of[parent];
                design.mesh = jitter_copy(p.mesh, config.epsilon, rng, id);
                design.true_class = "imitative";
            } else {
                int family =
                    (family_of[parent] + 1 + static_cast<int>(rng.uniform_int(0, kFamilies - 2))) %
                    kFamilies;
                family_of[i] = family;
                design.mesh = make_family_variant(family, rng, id);
                design.true_class = "original";
            }
            design.record.parent_ids.push_back(p.record.id);
        }

        bool original = design.true_class == "original";
        double likes_mean = config.base_likes *
                            (original ? 1.0 + config.effect_orig_likes : 1.0) *
                            (remix ? 1.0 + config.effect_inh_likes : 1.0);
        double makes_mean = config.base_makes *
                            (original ? 1.0 + config.effect_orig_makes : 1.0) *
                            (remix ? 1.0 + config.effect_inh_makes : 1.0);
        design.record.id = id;
        design.record.mesh_path = "meshes/" + id + ".stl";
        design.record.likes =
            static_cast<std::int64_t>(rng.negative_binomial(config.nb_dispersion, likes_mean));
        design.record.makes =
            static_cast<std::int64_t>(rng.negative_binomial(config.nb_dispersion, makes_mean));
        design.record.timestamp = 1600000000 + static_cast<std::int64_t>(i) * 60;
        corpus.designs.push_back(std::move(design));
    }
    return corpus;
}

void write_synthetic_corpus(const SyntheticCorpus& corpus, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir / "meshes");
    for (const SyntheticDesign& d : corpus.designs)
        write_stl_binary_file(d.mesh, dir / d.record.mesh_path);

    std::ofstream meta(dir / "metadata.csv", std::ios::binary);
    if (!meta) throw Error("cannot open " + (dir / "metadata.csv").string() + " for writing");
    meta << "id,mesh_path,likes,makes,parents,timestamp\n";
    for (const SyntheticDesign& d : corpus.designs) {
        const DesignRecord& r = d.record;
        std::string parents;
        for (std::size_t i = 0; i < r.parent_ids.size(); ++i) {
            if (i) parents += ';';
            parents += r.parent_ids[i];
        }
        meta << csv_escape(r.id) << ',' << csv_escape(r.mesh_path) << ',' << r.likes << ','
             << r.makes << ',' << csv_escape(parents) << ',';
        if (r.timestamp) meta << *r.timestamp;
        meta << '\n';
    }
    meta.flush();
    if (!meta) throw Error("failed writing metadata.csv");

    std::ofstream truth(dir / "truth.csv", std::ios::binary);
    if (!truth) throw Error("cannot open " + (dir / "truth.csv").string() + " for writing");
    truth << "id,true_class\n";
    for (const SyntheticDesign& d : corpus.designs)
        truth << csv_escape(d.record.id) << ',' << d.true_class << '\n';
    truth.flush();
    if (!truth) throw Error("failed writing truth.csv");
}

}  // namespace remixsig
