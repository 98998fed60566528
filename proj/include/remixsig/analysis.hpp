#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "remixsig/corpus.hpp"
#include "remixsig/errors.hpp"
#include "remixsig/stats.hpp"

namespace remixsig {

struct NoDescriptor final : Error {
    using Error::Error;
};

struct NoParents final : Error {
    using Error::Error;
};

struct SingletonCorpus final : Error {
    using Error::Error;
};

struct TooFewScores final : Error {
    using Error::Error;
};

enum class ScoreMode { ParentMin, NearestNeighbor, Hybrid };

ScoreMode score_mode_from_string(const std::string& name);  // throws ConfigError
std::string to_string(ScoreMode mode);

/// Distance attributed to one design. mode_used records the branch that
/// actually produced the distance (Hybrid resolves to one of the two).
struct OriginalityScore {
    std::string design_id;
    double distance = 0.0;
    ScoreMode mode_used = ScoreMode::NearestNeighbor;
};

/// Mean split of the score distribution: strictly greater than the mean is
/// original, less-or-equal is imitative.
struct OriginalityPartition {
    double threshold = 0.0;
    std::set<std::string> original_ids;
    std::set<std::string> imitative_ids;
};

enum class Comparison { Originality, Inheritance };
enum class Outcome { Likes, Makes };

/// One Welch comparison in the report. `welch` is absent when a group was
/// degenerate (n < 2); the reason is then recorded.
struct ComparisonBlock {
    Comparison comparison = Comparison::Originality;
    Outcome outcome = Outcome::Likes;
    std::string group1_label, group2_label;
    std::size_t n1 = 0, n2 = 0;
    std::optional<GroupSummary> group1, group2;
    std::optional<WelchResult> welch;
    std::string degenerate_reason;

    bool degenerate() const { return !welch.has_value(); }
};

struct PlotRow {
    std::string comparison, group, outcome;
    std::size_t n = 0;
    double mean = 0.0, ci_low = 0.0, ci_high = 0.0;
};

struct AnalysisConfig {
    ScoreMode mode = ScoreMode::Hybrid;
    double confidence = 0.95;
    bool log1p_outcomes = false;  // analyze log(1+x) instead of raw counts
};

struct AnalysisReport {
    ScoreMode mode = ScoreMode::Hybrid;
    double confidence = 0.95;
    std::vector<OriginalityScore> scores;  // sorted by design id
    OriginalityPartition partition;
    std::map<std::string, InheritanceClass> classes;
    std::array<ComparisonBlock, 4> blocks;  // orig x likes, orig x makes, inh x likes, inh x makes
    std::vector<PlotRow> plot;
    std::vector<std::string> analysis_warnings;
    std::size_t dropped_missing_descriptor = 0;
};

/// Distance for one design. ParentMin: min distance to parents (error if
/// none have descriptors). NearestNeighbor: min distance to other designs,
/// restricted to strictly earlier timestamps when both sides have one
/// (falls back to all others when no prior design exists). Hybrid:
/// ParentMin when the design has scoreable parents, else NearestNeighbor.
OriginalityScore originality_score(const std::string& id, const DescriptorMap& descriptors,
                                   const RemixGraph& graph, ScoreMode mode);

/// Threshold = arithmetic mean of distances; ties go imitative. Throws
/// TooFewScores for fewer than 2 scores.
OriginalityPartition partition_by_mean(const std::vector<OriginalityScore>& scores);

/// Scores every design with a descriptor, partitions by the mean, splits by
/// inheritance, and runs the four Welch comparisons. Designs without
/// descriptors are dropped with a warning. Degenerate comparisons are
/// reported in place; the others still run.
AnalysisReport run_analysis(const RemixGraph& graph, const DescriptorMap& descriptors,
                            const AnalysisConfig& config);

/// Four text blocks in table row order: t, df, p-value, 95% C.I., two mu rows.
std::string render_report(const AnalysisReport& report);

/// CSV `comparison,group,outcome,n,mean,ci_low,ci_high`; the interval is the
/// per-group mean's CI at the report's configured confidence:
/// mean +- t_quantile((1+c)/2, n-1) * sqrt(variance/n).
std::string emit_plot_data(const AnalysisReport& report);

/// Per-design labels CSV `id,inheritance,originality,score,mode`.
std::string emit_labels(const AnalysisReport& report);

}  // namespace remixsig
