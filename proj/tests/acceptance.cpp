// Acceptance harness: checks the nine release bars in order, one PASS/FAIL
// line each, and exits nonzero if any bar is missed. Criteria 6 and part of
// 8 drive the actual CLI binary; everything else runs in process.
//
// usage: remixsig_acceptance <remixsig-cli> <work-dir>

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "remixsig/analysis.hpp"
#include "remixsig/harmonics.hpp"
#include "remixsig/rng.hpp"
#include "remixsig/stats.hpp"
#include "remixsig/stl_io.hpp"
#include "remixsig/synthetic.hpp"

namespace fs = std::filesystem;
using namespace remixsig;

namespace {

struct WelchCase {
    std::vector<double> a, b;
    double t, df, p, ci_low, ci_high;
};

#include "welch_reference.inc"

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double s() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

int g_failures = 0;

void report(int num, bool ok, const std::string& detail, double seconds) {
    std::printf("%s criterion %d: %s [%.1fs]\n", ok ? "PASS" : "FAIL", num, detail.c_str(),
                seconds);
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string num(double v, const char* f = "%.3g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

int run_cli(const std::string& cmd) {
    int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------- criterion 1

void criterion1() {
    Timer tm;
    double worst = 0.0;
    for (const WelchCase& c : kWelchCases) {
        WelchResult r = welch_test(c.a, c.b);
        worst = std::max({worst, rel_err(r.t, c.t), rel_err(r.df, c.df),
                          rel_err(r.p_two_sided, c.p), rel_err(r.ci_low, c.ci_low),
                          rel_err(r.ci_high, c.ci_high)});
    }
    double s = tm.s();
    bool ok = kWelchCases.size() == 25 && worst < 1e-9 && s < 1.0;
    report(1, ok, "welch_test vs reference on 25 random pairs, worst rel err " + num(worst), s);
}

// ---------------------------------------------------------------- criterion 2

void criterion2() {
    Timer tm;
    double beta_err = 0.0;
    for (int k = 0; k <= 128; ++k) {
        double x = k / 128.0;
        beta_err = std::max(beta_err, std::abs(regularized_incomplete_beta(1, 1, x) - x));
    }
    double cauchy_err = std::max(std::abs(t_cdf(1.0, 1.0) - 0.75),
                                 std::abs(t_quantile(0.975, 1.0) - std::tan(0.475 * M_PI)));
    double round_trip = 0.0;
    for (double df : {1.0, 2.0, 5.0, 30.0, 1000.0})
        for (double p : {0.005, 0.025, 0.1, 0.25, 0.5, 0.75, 0.9, 0.975, 0.995})
            round_trip = std::max(round_trip, std::abs(t_cdf(t_quantile(p, df), df) - p) / p);
    double s = tm.s();
    bool ok = beta_err < 1e-15 && cauchy_err < 1e-10 && round_trip < 1e-9 && s < 1.0;
    report(2, ok,
           "I_x(1,1) grid err " + num(beta_err) + ", Cauchy cdf/quantile err " + num(cauchy_err) +
               ", cdf/quantile round trip rel err " + num(round_trip),
           s);
}

// ---------------------------------------------------------------- criterion 3

void criterion3() {
    Timer tm;
    const int L = 16, B = 64;
    std::vector<double> theta = sphere_theta_nodes(B);
    std::vector<double> phi = sphere_phi_nodes(B);
    std::vector<double> wt = sphere_theta_weights(B);
    const std::size_t nodes = theta.size() * phi.size();
    const int nb = (L + 1) * (L + 1);
    const double phi_w = M_PI / B;  // azimuth step 2*pi / 2B

    std::vector<double> v(nb * nodes), vw(nb * nodes);
    int p = 0;
    for (int l = 0; l <= L; ++l)
        for (int m = -l; m <= l; ++m, ++p) {
            double* row = &v[static_cast<std::size_t>(p) * nodes];
            double* roww = &vw[static_cast<std::size_t>(p) * nodes];
            std::size_t k = 0;
            for (std::size_t i = 0; i < theta.size(); ++i)
                for (std::size_t j = 0; j < phi.size(); ++j, ++k) {
                    double y = real_sh(l, m, theta[i], phi[j]);
                    row[k] = y;
                    roww[k] = y * wt[i] * phi_w;
                }
        }

    double worst = 0.0;
    for (int a = 0; a < nb; ++a)
        for (int b = a; b < nb; ++b) {
            const double* ra = &vw[static_cast<std::size_t>(a) * nodes];
            const double* rb = &v[static_cast<std::size_t>(b) * nodes];
            double dot = 0.0;
            for (std::size_t k = 0; k < nodes; ++k) dot += ra[k] * rb[k];
            worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
        }
    double s = tm.s();
    bool ok = worst < 1e-6 && s < 30.0;
    report(3, ok, "Y_l^m Gram matrix at L=16, B=64: max |G - I| = " + num(worst), s);
}

// ------------------------------------------------------------- criteria 4 + 5
//
// The family corpus serves two bars: criterion 5's nearest-neighbor
// precision and criterion 4's scale for "small relative to inter-class
// distances". Its build time is charged to criterion 5.

struct FamilyCorpus {
    std::vector<ShapeDescriptor> descs;
    std::vector<int> fam;
    double inter_mean = 0.0;
    int nn_correct = 0;
    double seconds = 0.0;
};

FamilyCorpus build_family_corpus() {
    Timer tm;
    FamilyCorpus fc;
    DescriptorParams P;
    Rng rng(fnv1a("c5-corpus-v3"));
    for (int f = 0; f < 3; ++f)
        for (int i = 0; i < 20; ++i) {
            char id[32];
            std::snprintf(id, sizeof id, "f%dv%02d", f, i);
            TriangleMesh m;
            if (f == 0) {
                m = make_icosphere(2, 1.0, id);
                double a = rng.uniform(0.85, 1.0), b = rng.uniform(0.75, 0.9),
                       c = rng.uniform(0.65, 0.8);
                for (Triangle& t : m.triangles) {
                    for (Vec3* vp : {&t.v0, &t.v1, &t.v2}) {
                        vp->x *= a;
                        vp->y *= b;
                        vp->z *= c;
                    }
                    t.stored_normal.reset();
                }
            } else if (f == 1) {
                m = make_cylinder(rng.uniform(0.2, 0.26), rng.uniform(2.6, 3.0), 48, id);
            } else {
                m = make_torus(1.0, rng.uniform(0.11, 0.15), 48, 24, id);
            }
            fc.descs.push_back(describe_mesh(m, P));
            fc.fam.push_back(f);
        }

    double inter = 0.0;
    int n_inter = 0;
    for (std::size_t i = 0; i < fc.descs.size(); ++i) {
        double best = 1e300;
        std::size_t best_j = i;
        for (std::size_t j = 0; j < fc.descs.size(); ++j) {
            if (i == j) continue;
            double d = descriptor_distance(fc.descs[i], fc.descs[j]);
            if (d < best) {
                best = d;
                best_j = j;
            }
            if (j > i && fc.fam[i] != fc.fam[j]) {
                inter += d;
                ++n_inter;
            }
        }
        if (fc.fam[best_j] == fc.fam[i]) ++fc.nn_correct;
    }
    fc.inter_mean = inter / n_inter;
    fc.seconds = tm.s();
    return fc;
}

void criterion4(const FamilyCorpus& fc) {
    Timer tm;
    DescriptorParams P;  // n=64, L=16 per the bar
    TriangleMesh base = make_icosphere(3, 1.0, "fixture");
    base = displace_radial_bump(base, {0.3, 0.5, 0.8}, 0.35, 0.6);
    base.source_id = "fixture";
    ShapeDescriptor d0 = describe_mesh(base, P);

    // the 24 proper signed permutations = axis-aligned rotations
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    double worst_axis = 0.0;
    for (const auto& pm : perms)
        for (int sx = -1; sx <= 1; sx += 2)
            for (int sy = -1; sy <= 1; sy += 2)
                for (int sz = -1; sz <= 1; sz += 2) {
                    Mat3 R;
                    R.m.fill(0.0);
                    const double sign[3] = {static_cast<double>(sx), static_cast<double>(sy),
                                            static_cast<double>(sz)};
                    for (int r = 0; r < 3; ++r) R.m[r * 3 + pm[r]] = sign[r];
                    double det = R.m[0] * (R.m[4] * R.m[8] - R.m[5] * R.m[7]) -
                                 R.m[1] * (R.m[3] * R.m[8] - R.m[5] * R.m[6]) +
                                 R.m[2] * (R.m[3] * R.m[7] - R.m[4] * R.m[6]);
                    if (det < 0.5) continue;  // reflections are not rotations
                    TriangleMesh rot = apply_rigid(base, R, {0, 0, 0});
                    rot.source_id = "fixture";
                    worst_axis = std::max(worst_axis, descriptor_distance(d0, describe_mesh(rot, P)));
                }

    Rng rr(123);
    double worst_rand = 0.0;
    for (int k = 0; k < 20; ++k) {
        Mat3 R = Mat3::axis_angle(rr.unit_vector(), rr.uniform(0.0, 2.0 * M_PI));
        TriangleMesh rot = apply_rigid(base, R, {0, 0, 0});
        rot.source_id = "fixture";
        worst_rand = std::max(worst_rand, descriptor_distance(d0, describe_mesh(rot, P)));
    }

    double axis_ratio = worst_axis / d0.norm();
    double rand_ratio = worst_rand / fc.inter_mean;
    double s = tm.s();
    bool ok = axis_ratio < 1e-3 && rand_ratio < 0.05 && s < 120.0;
    report(4, ok,
           "rotation invariance: axis-aligned err " + num(axis_ratio) +
               " of descriptor norm, random err " + num(rand_ratio) + " of inter-class mean",
           s);
}

void criterion5(const FamilyCorpus& fc) {
    bool ok = fc.nn_correct >= 57 && fc.seconds < 300.0;  // 57/60 = 95%
    report(5, ok,
           "nearest-neighbor precision@1 = " + std::to_string(fc.nn_correct) +
               "/60 on 3 families x 20 perturbations",
           fc.seconds);
}

// ---------------------------------------------------------------- criterion 6

std::map<std::string, std::string> read_csv_column(const fs::path& path, std::size_t col) {
    std::map<std::string, std::string> out;
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (fields.size() > col) out[fields[0]] = fields[col];
    }
    return out;
}

bool parse_report_blocks(const std::string& text, std::vector<double>& ts,
                         std::vector<double>& ps) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::size_t eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        key.erase(0, key.find_first_not_of(' '));
        key.erase(key.find_last_not_of(' ') + 1);
        std::string val = line.substr(eq + 3);
        if (key == "t")
            ts.push_back(std::strtod(val.c_str(), nullptr));
        else if (key == "p-value")
            ps.push_back(val[0] == '<' ? 0.0 : std::strtod(val.c_str(), nullptr));
    }
    return ts.size() == 4 && ps.size() == 4;
}

struct CliArtifacts {
    bool ready = false;
    fs::path metadata, cache, report, plot, labels;
};

void criterion6(const std::string& cli, const fs::path& work, CliArtifacts& art) {
    Timer tm;
    fs::path corpus = work / "c6_corpus";
    fs::path cache = work / "c6_cache.bin";
    fs::path log = work / "c6_log.txt";
    fs::remove_all(corpus);
    fs::remove(cache);

    std::string synth =
        q(cli) + " synth -o " + q(corpus) +
        " --designs 500 --remix-fraction 0.7 --epsilon 0.02 --base-likes 10 --base-makes 2"
        " --effect-orig-likes 1.5 --effect-orig-makes 1.5 --effect-inh-likes 1.5"
        " --effect-inh-makes 1.5 --seed 2026 > " +
        q(log) + " 2>&1";
    if (run_cli(synth) != 0) {
        report(6, false, "synth exited nonzero (see " + log.string() + ")", tm.s());
        return;
    }

    fs::path metadata = corpus / "metadata.csv";
    std::string describe = q(cli) + " describe -m " + q(metadata) + " -c " + q(cache) +
                           " -j 1 >> " + q(log) + " 2>&1";
    if (run_cli(describe) != 0) {
        report(6, false, "describe exited nonzero (see " + log.string() + ")", tm.s());
        return;
    }

    fs::path rep_p = work / "c6_report.txt", plot_p = work / "c6_plot.csv",
             lab_p = work / "c6_labels.csv";
    std::string analyze = q(cli) + " analyze -m " + q(metadata) + " -c " + q(cache) +
                          " --report " + q(rep_p) + " --plot " + q(plot_p) + " --labels " +
                          q(lab_p) + " >> " + q(log) + " 2>&1";
    if (run_cli(analyze) != 0) {
        report(6, false, "analyze exited nonzero (see " + log.string() + ")", tm.s());
        return;
    }

    std::map<std::string, std::string> truth = read_csv_column(corpus / "truth.csv", 1);
    std::map<std::string, std::string> labels = read_csv_column(lab_p, 2);
    int agree = 0;
    for (const auto& [id, cls] : truth)
        if (auto it = labels.find(id); it != labels.end() && it->second == cls) ++agree;
    double agreement = truth.empty() ? 0.0 : static_cast<double>(agree) / truth.size();

    std::vector<double> ts, ps;
    bool parsed = parse_report_blocks(slurp(rep_p), ts, ps);
    bool signs = parsed, small_p = parsed;
    double max_p = 0.0;
    if (parsed)
        for (int i = 0; i < 4; ++i) {
            signs = signs && ts[i] > 0.0;  // original > imitative, inherited > standalone
            small_p = small_p && ps[i] < 0.01;
            max_p = std::max(max_p, ps[i]);
        }

    double s = tm.s();
    bool ok = truth.size() == 500 && labels.size() == 500 && agreement >= 0.90 && signs &&
              small_p && s < 600.0;
    report(6, ok,
           "end-to-end synth/describe/analyze: label agreement " +
               num(agreement * 100, "%.1f") + "%, all four t > 0: " + (signs ? "yes" : "no") +
               ", max p = " + num(max_p),
           s);
    art.ready = ok || (parsed && truth.size() == 500);
    art.metadata = metadata;
    art.cache = cache;
    art.report = rep_p;
    art.plot = plot_p;
    art.labels = lab_p;
}

// ---------------------------------------------------------------- criterion 7

void criterion7() {
    Timer tm;
    DescriptorParams P;
    P.n = 16;
    P.R = 8;
    P.L = 4;
    P.B = 8;
    P.density = 400.0;
    int hits = 0, ran = 0;
    for (int seed = 1; seed <= 200; ++seed) {
        SyntheticConfig cfg;
        cfg.n_designs = 60;
        cfg.remix_fraction = 0.7;
        cfg.epsilon = 0.02;
        cfg.base_likes = 10;
        cfg.base_makes = 2;
        cfg.effect_orig_likes = cfg.effect_orig_makes = 0.0;
        cfg.effect_inh_likes = cfg.effect_inh_makes = 0.0;
        cfg.seed = static_cast<std::uint64_t>(seed);
        SyntheticCorpus corpus = generate_synthetic_corpus(cfg);
        DescriptorMap descs;
        std::vector<DesignRecord> records;
        for (const SyntheticDesign& d : corpus.designs) {
            descs.emplace(d.record.id, describe_mesh(d.mesh, P));
            records.push_back(d.record);
        }
        AnalysisReport rep = run_analysis(build_graph(std::move(records)), descs, {});
        const ComparisonBlock& b = rep.blocks[0];  // originality x likes
        if (b.degenerate()) continue;
        ++ran;
        if (b.welch->p_two_sided < 0.05) ++hits;
    }
    double rate = ran > 0 ? static_cast<double>(hits) / ran : 1.0;
    double s = tm.s();
    bool ok = ran >= 190 && rate >= 0.02 && rate <= 0.08;
    report(7, ok,
           "null calibration: " + std::to_string(hits) + "/" + std::to_string(ran) +
               " originality-likes tests with p < 0.05 (rate " + num(rate) + ")",
           s);
}

// ---------------------------------------------------------------- criterion 8

void criterion8(const std::string& cli, const fs::path& work, const CliArtifacts& art) {
    Timer tm;
    DescriptorParams P;
    Rng rng(fnv1a("acceptance-triples"));
    auto random_desc = [&] {
        ShapeDescriptor d;
        d.params = P;
        d.energies.resize(static_cast<std::size_t>(P.R) * (P.L + 1));
        for (double& e : d.energies) e = rng.uniform(0.0, 3.0);
        return d;
    };

    bool tri_ok = true;
    for (int i = 0; i < 1000; ++i) {
        ShapeDescriptor a = random_desc(), b = random_desc(), c = random_desc();
        if (descriptor_distance(a, c) >
            descriptor_distance(a, b) + descriptor_distance(b, c) + 1e-12)
            tri_ok = false;
    }

    DescriptorMap m;
    for (int i = 0; i < 25; ++i) m.emplace("d" + std::to_string(i), random_desc());
    m.begin()->second.energies[0] = 7.25e-300;  // extreme magnitude must survive
    std::ostringstream os1;
    save_descriptors(m, os1);
    std::istringstream is1(os1.str());
    DescriptorMap back = load_descriptors(is1);
    bool cache_ok = back.size() == m.size();
    for (const auto& [id, d] : m) {
        auto it = back.find(id);
        if (it == back.end() || !(it->second.params == d.params) ||
            it->second.energies.size() != d.energies.size() ||
            std::memcmp(it->second.energies.data(), d.energies.data(),
                        d.energies.size() * sizeof(double)) != 0)
            cache_ok = false;
    }
    std::ostringstream os2;
    save_descriptors(back, os2);
    cache_ok = cache_ok && os1.str() == os2.str();

    Rng mr(fnv1a("acceptance-stl"));
    TriangleMesh mesh;
    mesh.source_id = "rt";
    auto f32 = [&] { return static_cast<double>(static_cast<float>(mr.uniform(-2.0, 2.0))); };
    for (int i = 0; i < 40; ++i)
        mesh.triangles.push_back(
            {{f32(), f32(), f32()}, {f32(), f32(), f32()}, {f32(), f32(), f32()}, std::nullopt});
    std::vector<std::uint8_t> bytes1 = write_stl_binary(mesh);
    TriangleMesh parsed = parse_stl(bytes1, "rt");
    std::vector<std::uint8_t> bytes2 = write_stl_binary(parsed);
    bool stl_ok = bytes1 == bytes2;

    bool rerun_ok = false;
    if (art.ready) {
        fs::path r1 = work / "c8_rep1.txt", p1 = work / "c8_plot1.csv",
                 l1 = work / "c8_lab1.csv";
        fs::path r2 = work / "c8_rep2.txt", p2 = work / "c8_plot2.csv",
                 l2 = work / "c8_lab2.csv";
        std::string base = q(cli) + " analyze -m " + q(art.metadata) + " -c " + q(art.cache);
        std::string run1 = base + " --report " + q(r1) + " --plot " + q(p1) + " --labels " +
                           q(l1) + " > /dev/null 2>&1";
        std::string run2 = base + " --report " + q(r2) + " --plot " + q(p2) + " --labels " +
                           q(l2) + " > /dev/null 2>&1";
        if (run_cli(run1) == 0 && run_cli(run2) == 0)
            rerun_ok = slurp(r1) == slurp(r2) && slurp(p1) == slurp(p2) &&
                       slurp(l1) == slurp(l2) && slurp(r1) == slurp(art.report) &&
                       slurp(l1) == slurp(art.labels) && !slurp(r1).empty();
    }

    double s = tm.s();
    bool ok = tri_ok && cache_ok && stl_ok && rerun_ok;
    report(8, ok,
           std::string("metric/format properties: triangle inequality ") +
               (tri_ok ? "ok" : "VIOLATED") + ", cache round trip " +
               (cache_ok ? "bit-exact" : "MISMATCH") + ", STL round trip " +
               (stl_ok ? "bit-exact" : "MISMATCH") + ", repeated analyze " +
               (rerun_ok ? "byte-identical" : "MISMATCH"),
           s);
}

// ---------------------------------------------------------------- criterion 9

void criterion9() {
    Timer tm;
    DescriptorParams P;
    P.B = 64;  // bar is n=64, R=32, L=16, B=64
    TriangleMesh mesh = make_icosphere(3, 1.0, "perf");
    mesh = displace_radial_bump(mesh, {0.3, 0.5, 0.8}, 0.35, 0.6);
    Timer t1;
    ShapeDescriptor d = describe_mesh(mesh, P);
    double describe_s = t1.s();

    Rng rng(fnv1a("acceptance-pairwise"));
    std::vector<ShapeDescriptor> ds(1000);
    for (ShapeDescriptor& x : ds) {
        x.params = P;
        x.energies.resize(static_cast<std::size_t>(P.R) * (P.L + 1));
        for (double& e : x.energies) e = rng.uniform(0.0, 2.0);
    }
    Timer t2;
    double acc = 0.0;
    for (int i = 0; i < 1000; ++i)
        for (int j = 0; j < 1000; ++j) acc += descriptor_distance(ds[i], ds[j]);
    double pair_s = t2.s();

    bool ok = describe_s < 5.0 && pair_s < 10.0 && d.norm() > 0.0 && acc > 0.0;
    report(9, ok,
           "single-mesh descriptor in " + num(describe_s) + "s, 1000x1000 distances in " +
               num(pair_s) + "s",
           tm.s());
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: %s <remixsig-cli> <work-dir>\n", argv[0]);
        return 2;
    }
    std::string cli = argv[1];
    fs::path work = argv[2];
    fs::create_directories(work);

    criterion1();
    criterion2();
    criterion3();
    FamilyCorpus fc = build_family_corpus();
    criterion4(fc);
    criterion5(fc);
    CliArtifacts art;
    criterion6(cli, work, art);
    criterion7();
    criterion8(cli, work, art);
    criterion9();

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all 9 criteria passed\n");
    return 0;
}
