#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "remixsig/analysis.hpp"
#include "remixsig/corpus.hpp"
#include "remixsig/stl_io.hpp"
#include "remixsig/synthetic.hpp"

namespace fs = std::filesystem;
using namespace remixsig;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitDegenerate = 3;

template <typename T>
T parse_number(const std::string& s, const std::string& key) {
    T v{};
    if constexpr (std::is_floating_point_v<T>) {
        char* end = nullptr;
        v = static_cast<T>(std::strtod(s.c_str(), &end));
        if (s.empty() || end != s.c_str() + s.size())
            throw ConfigError("config: bad numeric value for '" + key + "': '" + s + "'");
    } else {
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size())
            throw ConfigError("config: bad integer value for '" + key + "': '" + s + "'");
    }
    return v;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

/// key=value lines; '#' comments and blank lines ignored.
std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(line_no) + " is not key=value");
        kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return kv;
}

/// Descriptor parameter flags shared by describe/analyze, with config-file
/// fallback (flags beat file) and the R = n/2 default.
struct ParamFlags {
    DescriptorParams params;
    std::string config_path;
    CLI::Option *on = nullptr, *oR = nullptr, *oL = nullptr, *oB = nullptr, *od = nullptr,
                *os = nullptr;

    void add_to(CLI::App* cmd) {
        on = cmd->add_option("-n,--grid", params.n, "voxel grid resolution (even, >= 8)");
        oR = cmd->add_option("-R,--radii", params.R, "concentric sphere count (default n/2)");
        oL = cmd->add_option("-L,--degree", params.L, "max spherical harmonic degree");
        oB = cmd->add_option("-B,--bandwidth", params.B, "sphere sampling bandwidth (>= L+1)");
        od = cmd->add_option("--density", params.density,
                             "surface samples per unit normalized area");
        os = cmd->add_option("--seed", params.seed, "sampling RNG seed");
        cmd->add_option("--config", config_path, "key=value config file (flags win)");
    }

    /// Applies the config file underneath explicit flags. Returns true when
    /// any descriptor parameter was set explicitly (flag or file).
    bool resolve(std::map<std::string, std::string>* leftover = nullptr) {
        bool any = on->count() || oR->count() || oL->count() || oB->count() || od->count() ||
                   os->count();
        bool r_set = oR->count() > 0;
        if (!config_path.empty()) {
            auto kv = read_config_file(config_path);
            auto take = [&kv](const char* key, CLI::Option* opt, auto& value) {
                auto it = kv.find(key);
                if (it == kv.end()) return false;
                if (opt->count() == 0)
                    value = parse_number<std::decay_t<decltype(value)>>(it->second, key);
                kv.erase(it);
                return true;
            };
            any |= take("n", on, params.n);
            r_set |= take("R", oR, params.R);
            any |= r_set;
            any |= take("L", oL, params.L);
            any |= take("B", oB, params.B);
            any |= take("density", od, params.density);
            any |= take("seed", os, params.seed);
            if (leftover)
                *leftover = std::move(kv);
            else if (!kv.empty())
                throw ConfigError("config: unknown key '" + kv.begin()->first + "'");
        }
        if (!r_set) params.R = params.n / 2;
        params.validate();
        return any;
    }
};

fs::path resolve_mesh_path(const fs::path& metadata, const std::string& mesh_path) {
    return metadata.parent_path() / fs::path(mesh_path);
}

void write_text_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw Error("failed writing " + path.string());
}

int cmd_synth(const SyntheticConfig& cfg, const std::string& out_dir) {
    SyntheticCorpus corpus = generate_synthetic_corpus(cfg);
    write_synthetic_corpus(corpus, out_dir);
    std::cout << "wrote " << corpus.designs.size() << " designs to " << out_dir << "\n";
    return kExitOk;
}

int cmd_describe(const std::string& metadata_path, const std::string& cache_path,
                 ParamFlags& flags, int jobs) {
    flags.resolve();
    const DescriptorParams& params = flags.params;
    std::vector<DesignRecord> records = load_metadata_file(metadata_path);

    DescriptorMap cache;
    if (fs::exists(cache_path)) {
        cache = load_descriptors_file(cache_path);
        if (!cache.empty() && !(cache.begin()->second.params == params))
            throw ParamMismatch("describe: existing cache " + cache_path +
                                " was built with different parameters");
    }

    std::vector<const DesignRecord*> todo;
    std::size_t skipped = 0;
    for (const DesignRecord& rec : records) {
        if (cache.contains(rec.id))
            ++skipped;
        else
            todo.push_back(&rec);
    }

    std::mutex mu;
    DescriptorMap fresh;
    std::vector<std::string> failures;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= todo.size()) break;
            const DesignRecord& rec = *todo[i];
            try {
                TriangleMesh mesh =
                    parse_stl_file(resolve_mesh_path(metadata_path, rec.mesh_path), rec.id);
                ShapeDescriptor desc = describe_mesh(mesh, params);
                std::lock_guard<std::mutex> lk(mu);
                fresh.emplace(rec.id, std::move(desc));
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lk(mu);
                failures.push_back(rec.id + ": " + e.what());
            }
        }
    };
    int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(todo.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    std::sort(failures.begin(), failures.end());
    for (const std::string& f : failures) std::cerr << "error: describe " << f << "\n";

    std::size_t computed = fresh.size();
    cache.merge(fresh);
    if (computed > 0) save_descriptors_file(cache, cache_path);
    std::cout << "computed=" << computed << " skipped=" << skipped
              << " failed=" << failures.size() << "\n";
    if (cache.empty()) {
        std::cerr << "error: describe produced no descriptors\n";
        return kExitInputError;
    }
    return kExitOk;
}

int cmd_analyze(const std::string& metadata_path, const std::string& cache_path,
                ParamFlags& flags, const std::string& mode_name, double confidence, bool log1p,
                const std::string& report_path, const std::string& plot_path,
                const std::string& labels_path, CLI::Option* mode_opt, CLI::Option* conf_opt) {
    std::map<std::string, std::string> leftover;
    bool explicit_params = flags.resolve(&leftover);
    std::string mode = mode_name;
    double conf = confidence;
    for (auto& [key, value] : leftover) {
        if (key == "mode") {
            if (mode_opt->count() == 0) mode = value;
        } else if (key == "confidence") {
            if (conf_opt->count() == 0) conf = parse_number<double>(value, "confidence");
        } else {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }

    RemixGraph graph = build_graph(load_metadata_file(metadata_path));
    for (const DanglingParent& w : graph.warnings)
        std::cerr << "warning: design '" << w.child_id << "' references missing parent '"
                  << w.parent_id << "' (edge dropped)\n";

    DescriptorMap descriptors = load_descriptors_file(cache_path);
    if (explicit_params && !descriptors.empty() &&
        !(descriptors.begin()->second.params == flags.params))
        throw ParamMismatch("analyze: cache " + cache_path +
                            " was built with different parameters than requested");

    AnalysisConfig cfg;
    cfg.mode = score_mode_from_string(mode);
    cfg.confidence = conf;
    cfg.log1p_outcomes = log1p;
    AnalysisReport report = run_analysis(graph, descriptors, cfg);

    std::string text = render_report(report);
    if (report_path.empty())
        std::cout << text;
    else
        write_text_file(report_path, text);
    if (!plot_path.empty()) write_text_file(plot_path, emit_plot_data(report));
    if (!labels_path.empty()) write_text_file(labels_path, emit_labels(report));

    for (const std::string& w : report.analysis_warnings) std::cerr << "warning: " << w << "\n";
    bool degenerate = false;
    for (const ComparisonBlock& b : report.blocks) degenerate |= b.degenerate();
    return degenerate ? kExitDegenerate : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"remixsig: rotation-invariant originality analysis for 3D remix corpora"};
    app.require_subcommand(1);

    // synth
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic corpus with ground truth");
    SyntheticConfig synth_cfg;
    std::string synth_out;
    synth->add_option("-o,--out", synth_out, "output corpus directory")->required();
    synth->add_option("--designs", synth_cfg.n_designs, "number of designs (>= 10)");
    synth->add_option("--remix-fraction", synth_cfg.remix_fraction,
                      "fraction of designs with a parent");
    synth->add_option("--epsilon", synth_cfg.epsilon, "imitative jitter magnitude");
    synth->add_option("--base-likes", synth_cfg.base_likes, "base mean of likes");
    synth->add_option("--base-makes", synth_cfg.base_makes, "base mean of makes");
    synth->add_option("--effect-orig-likes", synth_cfg.effect_orig_likes,
                      "likes boost for original designs");
    synth->add_option("--effect-orig-makes", synth_cfg.effect_orig_makes,
                      "makes boost for original designs");
    synth->add_option("--effect-inh-likes", synth_cfg.effect_inh_likes,
                      "likes boost for inherited designs");
    synth->add_option("--effect-inh-makes", synth_cfg.effect_inh_makes,
                      "makes boost for inherited designs");
    synth->add_option("--dispersion", synth_cfg.nb_dispersion,
                      "negative binomial dispersion (>= 1)");
    synth->add_option("--seed", synth_cfg.seed, "corpus RNG seed");

    // describe
    CLI::App* describe =
        app.add_subcommand("describe", "compute shape descriptors into a cache file");
    std::string d_metadata, d_cache;
    int d_jobs = 1;
    describe->add_option("-m,--metadata", d_metadata, "metadata CSV path")->required();
    describe->add_option("-c,--cache", d_cache, "descriptor cache path (read + write)")
        ->required();
    describe->add_option("-j,--jobs", d_jobs, "worker threads")->check(CLI::PositiveNumber);
    ParamFlags d_flags;
    d_flags.add_to(describe);

    // analyze
    CLI::App* analyze =
        app.add_subcommand("analyze", "run the originality/inheritance analysis");
    std::string a_metadata, a_cache, a_mode = "hybrid";
    std::string a_report, a_plot, a_labels;
    double a_conf = 0.95;
    bool a_log1p = false;
    analyze->add_option("-m,--metadata", a_metadata, "metadata CSV path")->required();
    analyze->add_option("-c,--cache", a_cache, "descriptor cache path")->required();
    CLI::Option* a_mode_opt = analyze->add_option(
        "--mode", a_mode, "originality mode: parent-min | nearest-neighbor | hybrid");
    CLI::Option* a_conf_opt =
        analyze->add_option("--confidence", a_conf, "confidence level in (0, 1)");
    analyze->add_flag("--log1p", a_log1p, "analyze log(1+x) outcomes");
    analyze->add_option("--report", a_report, "report output path (default: stdout)");
    analyze->add_option("--plot", a_plot, "plot data CSV output path");
    analyze->add_option("--labels", a_labels, "per-design labels CSV output path");
    ParamFlags a_flags;
    a_flags.add_to(analyze);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (synth->parsed()) return cmd_synth(synth_cfg, synth_out);
        if (describe->parsed()) return cmd_describe(d_metadata, d_cache, d_flags, d_jobs);
        return cmd_analyze(a_metadata, a_cache, a_flags, a_mode, a_conf, a_log1p, a_report,
                           a_plot, a_labels, a_mode_opt, a_conf_opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}
