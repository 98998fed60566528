#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "remixsig/errors.hpp"
#include "remixsig/mesh.hpp"

namespace remixsig {

/// Byte count inconsistent with the declared binary triangle count.
struct TruncatedFile final : Error {
    using Error::Error;
};

/// ASCII token stream violates the facet grammar.
struct MalformedAscii final : Error {
    using Error::Error;
};

/// File parsed but holds zero triangles.
struct EmptyMesh final : Error {
    using Error::Error;
};

/// A parsed vertex coordinate is NaN or infinite.
struct InvalidGeometry final : Error {
    using Error::Error;
};

/// Parses binary or ASCII STL. A file is treated as ASCII when it starts
/// with "solid" AND contains a "facet" token (binary files sometimes start
/// with "solid" too). Stored facet normals are kept only when their length
/// is within [0.99, 1.01]; they are never trusted for computation.
TriangleMesh parse_stl(std::span<const std::uint8_t> bytes, std::string source_id = {});

TriangleMesh parse_stl_file(const std::filesystem::path& path, std::string source_id = {});

/// Little-endian binary STL. Vertices are written as float32; a mesh parsed
/// from binary STL round-trips with bit-equal vertex coordinates. Facet
/// normals use the stored normal when present, else the winding normal.
std::vector<std::uint8_t> write_stl_binary(const TriangleMesh& mesh);

void write_stl_binary_file(const TriangleMesh& mesh, const std::filesystem::path& path);

}  // namespace remixsig
