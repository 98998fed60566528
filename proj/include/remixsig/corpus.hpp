#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "remixsig/errors.hpp"
#include "remixsig/harmonics.hpp"

namespace remixsig {

struct BadHeader final : Error {
    using Error::Error;
};

struct RowParseError final : Error {
    RowParseError(std::size_t line_number, const std::string& what);
    std::size_t line = 0;
};

struct DuplicateId final : Error {
    using Error::Error;
};

struct CycleDetected final : Error {
    using Error::Error;
};

struct BadMagic final : Error {
    using Error::Error;
};

struct ParamMismatch final : Error {
    using Error::Error;
};

struct RaggedRow final : Error {
    using Error::Error;
};

struct DesignRecord {
    std::string id;
    std::string mesh_path;
    std::int64_t likes = 0;
    std::int64_t makes = 0;
    std::vector<std::string> parent_ids;
    std::optional<std::int64_t> timestamp;  // epoch seconds
};

enum class InheritanceClass { Standalone, Inherited };

/// Parent id referenced by a record but absent from the corpus; the edge
/// was dropped.
struct DanglingParent {
    std::string child_id;
    std::string parent_id;
};

/// Parent -> child inheritance DAG. Node records hold the pruned parent
/// lists (dangling parents removed).
struct RemixGraph {
    std::map<std::string, DesignRecord> nodes;
    std::vector<std::pair<std::string, std::string>> edges;  // (parent, child)
    std::vector<DanglingParent> warnings;

    const DesignRecord& node(const std::string& id) const { return nodes.at(id); }
};

/// Parses metadata CSV with header `id,mesh_path,likes,makes,parents,timestamp`.
/// `parents` is a semicolon-joined id list; empty timestamp means absent.
/// RFC-4180-style quoting. Throws BadHeader, RowParseError, DuplicateId.
std::vector<DesignRecord> load_metadata(std::string_view csv_text);

std::vector<DesignRecord> load_metadata_file(const std::filesystem::path& path);

/// Builds the inheritance DAG. Dangling parents are dropped with a warning
/// (the child may become Standalone). Throws CycleDetected (message lists
/// one cycle) and DuplicateId.
RemixGraph build_graph(std::vector<DesignRecord> records);

/// Standalone iff in-degree 0 after pruning, else Inherited.
std::map<std::string, InheritanceClass> classify(const RemixGraph& graph);

using DescriptorMap = std::map<std::string, ShapeDescriptor>;

/// Descriptor cache, text format:
///   SHDESC 1 n=<n> R=<R> L=<L> B=<B> density=<d> seed=<s>
///   <id>,<e[1][0]>,...,<e[R][L]>
/// Energies are row-major decimal floats at full round-trip precision.
void save_descriptors(const DescriptorMap& descriptors, std::ostream& out);
void save_descriptors_file(const DescriptorMap& descriptors, const std::filesystem::path& path);

/// Validates the header line and row shapes. Throws BadMagic (unknown
/// magic or version), RaggedRow, DuplicateId.
DescriptorMap load_descriptors(std::istream& in);
DescriptorMap load_descriptors_file(const std::filesystem::path& path);

}  // namespace remixsig
