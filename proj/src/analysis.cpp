#include "remixsig/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace remixsig {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string format_p(double p) {
    if (p < 2.2e-16) return "< 2.2e-16";
    return fmt("%.6g", p);
}

std::optional<GroupSummary> summarize_opt(const std::vector<double>& values) {
    if (values.empty()) return std::nullopt;
    if (values.size() == 1) return GroupSummary{1, values.front(), 0.0};
    return summarize(values);
}

ComparisonBlock make_block(Comparison cmp, Outcome oc, std::string label1, std::string label2,
                           const std::vector<double>& v1, const std::vector<double>& v2,
                           double confidence) {
    ComparisonBlock b;
    b.comparison = cmp;
    b.outcome = oc;
    b.group1_label = std::move(label1);
    b.group2_label = std::move(label2);
    b.n1 = v1.size();
    b.n2 = v2.size();
    b.group1 = summarize_opt(v1);
    b.group2 = summarize_opt(v2);
    if (b.n1 < 2 || b.n2 < 2) {
        const std::string& who = b.n1 < 2 ? b.group1_label : b.group2_label;
        b.degenerate_reason = "empty group: '" + who + "' has fewer than 2 designs";
        return b;
    }
    try {
        b.welch = welch_test(*b.group1, *b.group2, confidence);
    } catch (const ZeroStandardError&) {
        b.degenerate_reason = "zero variance in both groups";
    }
    return b;
}

const char* outcome_name(Outcome oc) { return oc == Outcome::Likes ? "likes" : "makes"; }

const char* comparison_name(Comparison c) {
    return c == Comparison::Originality ? "originality" : "inheritance";
}

}  // namespace

ScoreMode score_mode_from_string(const std::string& name) {
    if (name == "parent-min") return ScoreMode::ParentMin;
    if (name == "nearest-neighbor") return ScoreMode::NearestNeighbor;
    if (name == "hybrid") return ScoreMode::Hybrid;
    throw ConfigError("unknown originality mode '" + name +
                      "' (expected parent-min, nearest-neighbor, or hybrid)");
}

std::string to_string(ScoreMode mode) {
    switch (mode) {
        case ScoreMode::ParentMin: return "parent-min";
        case ScoreMode::NearestNeighbor: return "nearest-neighbor";
        default: return "hybrid";
    }
}

OriginalityScore originality_score(const std::string& id, const DescriptorMap& descriptors,
                                   const RemixGraph& graph, ScoreMode mode) {
    auto self_it = descriptors.find(id);
    if (self_it == descriptors.end())
        throw NoDescriptor("originality_score: no descriptor for '" + id + "'");
    if (descriptors.size() < 2)
        throw SingletonCorpus("originality_score: need at least 2 descriptors");
    const ShapeDescriptor& self = self_it->second;
    auto node_it = graph.nodes.find(id);
    const DesignRecord* node = node_it == graph.nodes.end() ? nullptr : &node_it->second;

    // Min distance to parents holding descriptors; nullopt when unscoreable.
    auto parent_min = [&]() -> std::optional<double> {
        if (!node || node->parent_ids.empty()) return std::nullopt;
        std::optional<double> best;
        for (const std::string& pid : node->parent_ids) {
            auto it = descriptors.find(pid);
            if (it == descriptors.end()) continue;
            double d = descriptor_distance(self, it->second);
            if (!best || d < *best) best = d;
        }
        return best;
    };

    // Min distance over strictly earlier designs when timestamps allow,
    // otherwise over all other designs.
    auto nearest = [&]() -> double {
        const bool has_ts = node && node->timestamp.has_value();
        const std::int64_t ts = has_ts ? *node->timestamp : 0;
        double best_prior = std::numeric_limits<double>::infinity();
        double best_all = best_prior;
        bool any_prior = false;
        for (const auto& [oid, od] : descriptors) {
            if (oid == id) continue;
            double d = descriptor_distance(self, od);
            best_all = std::min(best_all, d);
            if (has_ts) {
                auto oit = graph.nodes.find(oid);
                if (oit != graph.nodes.end() && oit->second.timestamp &&
                    *oit->second.timestamp < ts) {
                    best_prior = std::min(best_prior, d);
                    any_prior = true;
                }
            }
        }
        return any_prior ? best_prior : best_all;
    };

    switch (mode) {
        case ScoreMode::ParentMin: {
            std::optional<double> pm = parent_min();
            if (!pm)
                throw NoParents("originality_score: '" + id +
                                "' has no parent with a descriptor");
            return {id, *pm, ScoreMode::ParentMin};
        }
        case ScoreMode::NearestNeighbor:
            return {id, nearest(), ScoreMode::NearestNeighbor};
        default: {
            std::optional<double> pm = parent_min();
            if (pm) return {id, *pm, ScoreMode::ParentMin};
            return {id, nearest(), ScoreMode::NearestNeighbor};
        }
    }
}

OriginalityPartition partition_by_mean(const std::vector<OriginalityScore>& scores) {
    if (scores.size() < 2) throw TooFewScores("partition_by_mean: need at least 2 scores");
    double sum = 0.0;
    for (const OriginalityScore& s : scores) sum += s.distance;
    OriginalityPartition p;
    p.threshold = sum / scores.size();
    for (const OriginalityScore& s : scores) {
        if (s.distance > p.threshold)
            p.original_ids.insert(s.design_id);
        else
            p.imitative_ids.insert(s.design_id);
    }
    return p;
}

AnalysisReport run_analysis(const RemixGraph& graph, const DescriptorMap& descriptors,
                            const AnalysisConfig& config) {
    if (!(config.confidence > 0.0 && config.confidence < 1.0))
        throw DomainError("run_analysis: confidence must lie in (0, 1)");
    AnalysisReport rep;
    rep.mode = config.mode;
    rep.confidence = config.confidence;

    DescriptorMap working;
    for (const auto& [id, rec] : graph.nodes) {
        auto it = descriptors.find(id);
        if (it == descriptors.end())
            ++rep.dropped_missing_descriptor;
        else
            working.emplace(id, it->second);
    }
    if (rep.dropped_missing_descriptor > 0)
        rep.analysis_warnings.push_back(
            "dropped " + std::to_string(rep.dropped_missing_descriptor) +
            " design(s) with no descriptor");
    if (working.size() < 2)
        throw SingletonCorpus("run_analysis: fewer than 2 designs have descriptors");

    std::size_t unscoreable = 0;
    for (const auto& [id, d] : working) {
        if (config.mode == ScoreMode::ParentMin) {
            try {
                rep.scores.push_back(originality_score(id, working, graph, config.mode));
            } catch (const NoParents&) {
                ++unscoreable;
            }
        } else {
            rep.scores.push_back(originality_score(id, working, graph, config.mode));
        }
    }
    if (unscoreable > 0)
        rep.analysis_warnings.push_back("parent-min mode skipped " + std::to_string(unscoreable) +
                                        " design(s) with no scoreable parent");
    if (rep.scores.size() < 2)
        throw SingletonCorpus("run_analysis: fewer than 2 designs could be scored");

    if (config.mode != ScoreMode::ParentMin) {
        std::size_t no_ts = 0;
        for (const OriginalityScore& s : rep.scores)
            if (!graph.nodes.at(s.design_id).timestamp) ++no_ts;
        if (no_ts > 0)
            rep.analysis_warnings.push_back(
                std::to_string(no_ts) +
                " design(s) lack timestamps; nearest-neighbor search uses all other designs "
                "for them");
    }

    rep.partition = partition_by_mean(rep.scores);
    rep.classes = classify(graph);

    auto outcome_value = [&config](const DesignRecord& r, Outcome oc) {
        double v = static_cast<double>(oc == Outcome::Likes ? r.likes : r.makes);
        return config.log1p_outcomes ? std::log1p(v) : v;
    };
    auto collect = [&](Comparison cmp, bool group1, Outcome oc) {
        std::vector<double> vals;
        for (const OriginalityScore& s : rep.scores) {
            bool in_group1 = cmp == Comparison::Originality
                                 ? rep.partition.original_ids.contains(s.design_id)
                                 : rep.classes.at(s.design_id) == InheritanceClass::Inherited;
            if (in_group1 == group1)
                vals.push_back(outcome_value(graph.nodes.at(s.design_id), oc));
        }
        return vals;
    };

    const struct {
        Comparison cmp;
        Outcome oc;
        const char* l1;
        const char* l2;
    } specs[4] = {{Comparison::Originality, Outcome::Likes, "Original", "Imitative"},
                  {Comparison::Originality, Outcome::Makes, "Original", "Imitative"},
                  {Comparison::Inheritance, Outcome::Likes, "Inherited", "Standalone"},
                  {Comparison::Inheritance, Outcome::Makes, "Inherited", "Standalone"}};
    for (int i = 0; i < 4; ++i)
        rep.blocks[i] = make_block(specs[i].cmp, specs[i].oc, specs[i].l1, specs[i].l2,
                                   collect(specs[i].cmp, true, specs[i].oc),
                                   collect(specs[i].cmp, false, specs[i].oc), config.confidence);

    for (const ComparisonBlock& b : rep.blocks) {
        auto push = [&](const std::string& label, const std::optional<GroupSummary>& g) {
            if (!g) return;
            PlotRow row;
            row.comparison = comparison_name(b.comparison);
            row.group = label;
            row.outcome = outcome_name(b.outcome);
            row.n = g->n;
            row.mean = g->mean;
            double half = 0.0;
            if (g->n >= 2 && g->variance > 0.0)
                half = t_quantile(0.5 * (1.0 + config.confidence), static_cast<double>(g->n - 1)) *
                       std::sqrt(g->variance / g->n);
            row.ci_low = g->mean - half;
            row.ci_high = g->mean + half;
            rep.plot.push_back(std::move(row));
        };
        push(b.group1_label, b.group1);
        push(b.group2_label, b.group2);
    }
    return rep;
}

std::string render_report(const AnalysisReport& report) {
    std::string out;
    out += "remixsig analysis report\n";
    out += "mode: " + to_string(report.mode) +
           " | confidence: " + fmt("%g", report.confidence * 100.0) + "%\n";
    out += "designs scored: " + std::to_string(report.scores.size());
    if (report.dropped_missing_descriptor > 0)
        out += " (dropped without descriptor: " + std::to_string(report.dropped_missing_descriptor) +
               ")";
    out += "\n";
    out += "originality threshold: " + fmt("%.6g", report.partition.threshold) +
           " (original: " + std::to_string(report.partition.original_ids.size()) +
           ", imitative: " + std::to_string(report.partition.imitative_ids.size()) + ")\n";

    const std::string ci_label = fmt("%g", report.confidence * 100.0) + "% C.I.";
    for (const ComparisonBlock& b : report.blocks) {
        out += "\n";
        out += std::string(b.comparison == Comparison::Originality ? "Originality" : "Inheritance") +
               " - Welch Two Sample t-test (" + outcome_name(b.outcome) + ")\n";
        if (b.degenerate()) {
            out += "  skipped: " + b.degenerate_reason + " (n1 = " + std::to_string(b.n1) +
                   ", n2 = " + std::to_string(b.n2) + ")\n";
            continue;
        }
        const WelchResult& w = *b.welch;
        std::string mu1 = "μ (" + b.group1_label + ")";
        std::string mu2 = "μ (" + b.group2_label + ")";
        std::size_t width = std::max({ci_label.size(), mu1.size(), mu2.size(),
                                      std::string("p-value").size()});
        auto pad = [width](std::string s) {
            // mu is two UTF-8 bytes but one column; keep columns aligned.
            std::size_t cols = s.size() - (s.find("μ") == std::string::npos ? 0 : 1);
            while (cols < width) {
                s += ' ';
                ++cols;
            }
            return s;
        };
        out += "  " + pad("t") + " = " + fmt("%.4f", w.t) + "\n";
        out += "  " + pad("df") + " = " + fmt("%.2f", w.df) + "\n";
        out += "  " + pad("p-value") + " = " + format_p(w.p_two_sided) + "\n";
        out += "  " + pad(ci_label) + " = [" + fmt("%.4f", w.ci_low) + ", " +
               fmt("%.4f", w.ci_high) + "]\n";
        out += "  " + pad(mu1) + " = " + fmt("%.4f", w.mean_a) + "  (n = " +
               std::to_string(b.n1) + ")\n";
        out += "  " + pad(mu2) + " = " + fmt("%.4f", w.mean_b) + "  (n = " +
               std::to_string(b.n2) + ")\n";
    }

    if (!report.analysis_warnings.empty()) {
        out += "\n";
        for (const std::string& w : report.analysis_warnings) out += "warning: " + w + "\n";
    }
    return out;
}

std::string emit_plot_data(const AnalysisReport& report) {
    std::string out = "comparison,group,outcome,n,mean,ci_low,ci_high\n";
    for (const PlotRow& r : report.plot)
        out += r.comparison + "," + r.group + "," + r.outcome + "," + std::to_string(r.n) + "," +
               fmt("%.17g", r.mean) + "," + fmt("%.17g", r.ci_low) + "," +
               fmt("%.17g", r.ci_high) + "\n";
    return out;
}

std::string emit_labels(const AnalysisReport& report) {
    std::string out = "id,inheritance,originality,score,mode\n";
    for (const OriginalityScore& s : report.scores) {
        bool original = report.partition.original_ids.contains(s.design_id);
        bool inherited = report.classes.at(s.design_id) == InheritanceClass::Inherited;
        out += s.design_id;
        out += inherited ? ",inherited," : ",standalone,";
        out += original ? "original," : "imitative,";
        out += fmt("%.17g", s.distance) + "," + to_string(s.mode_used) + "\n";
    }
    return out;
}

}  // namespace remixsig
