#include "remixsig/stl_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace remixsig {

namespace {

float read_f32_le(const std::uint8_t* p) {
    std::uint32_t u = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                      (static_cast<std::uint32_t>(p[2]) << 16) |
                      (static_cast<std::uint32_t>(p[3]) << 24);
    float f;
    std::memcpy(&f, &u, 4);
    return f;
}

void write_f32_le(std::vector<std::uint8_t>& out, float f) {
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    out.push_back(static_cast<std::uint8_t>(u & 0xff));
    out.push_back(static_cast<std::uint8_t>((u >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>((u >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((u >> 24) & 0xff));
}

void set_stored_normal(Triangle& t, const Vec3& n) {
    double len = n.norm();
    if (n.finite() && len >= 0.99 && len <= 1.01) t.stored_normal = n;
}

void check_vertices(const Triangle& t) {
    if (!t.v0.finite() || !t.v1.finite() || !t.v2.finite())
        throw InvalidGeometry("parse_stl: non-finite vertex coordinate");
}

TriangleMesh parse_binary(std::span<const std::uint8_t> bytes, std::string source_id) {
    if (bytes.size() < 84) throw TruncatedFile("parse_stl: file shorter than binary STL header");
    std::uint32_t count = static_cast<std::uint32_t>(bytes[80]) |
                          (static_cast<std::uint32_t>(bytes[81]) << 8) |
                          (static_cast<std::uint32_t>(bytes[82]) << 16) |
                          (static_cast<std::uint32_t>(bytes[83]) << 24);
    if (count == 0) throw EmptyMesh("parse_stl: binary STL declares 0 triangles");
    std::size_t needed = 84 + static_cast<std::size_t>(count) * 50;
    if (bytes.size() < needed) {
        std::ostringstream msg;
        msg << "parse_stl: declared " << count << " triangles but file holds only "
            << (bytes.size() - 84) / 50;
        throw TruncatedFile(msg.str());
    }
    TriangleMesh mesh;
    mesh.source_id = std::move(source_id);
    mesh.triangles.reserve(count);
    const std::uint8_t* p = bytes.data() + 84;
    for (std::uint32_t i = 0; i < count; ++i, p += 50) {
        Vec3 n{read_f32_le(p), read_f32_le(p + 4), read_f32_le(p + 8)};
        Triangle t;
        t.v0 = {read_f32_le(p + 12), read_f32_le(p + 16), read_f32_le(p + 20)};
        t.v1 = {read_f32_le(p + 24), read_f32_le(p + 28), read_f32_le(p + 32)};
        t.v2 = {read_f32_le(p + 36), read_f32_le(p + 40), read_f32_le(p + 44)};
        check_vertices(t);
        set_stored_normal(t, n);
        mesh.triangles.push_back(t);
    }
    return mesh;
}

/// Whitespace-delimited token stream over the ASCII payload.
class TokenStream {
  public:
    explicit TokenStream(std::span<const std::uint8_t> bytes) : data_(bytes) {}

    std::string next() {
        while (pos_ < data_.size() && std::isspace(data_[pos_])) ++pos_;
        std::size_t start = pos_;
        while (pos_ < data_.size() && !std::isspace(data_[pos_])) ++pos_;
        return std::string(reinterpret_cast<const char*>(data_.data()) + start, pos_ - start);
    }

    void expect(const char* token) {
        std::string got = next();
        if (got != token)
            throw MalformedAscii("parse_stl: expected token '" + std::string(token) + "', got '" +
                                 got + "'");
    }

    double number() {
        std::string tok = next();
        if (tok.empty()) throw MalformedAscii("parse_stl: expected a number, got end of file");
        char* end = nullptr;
        double v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size())
            throw MalformedAscii("parse_stl: expected a number, got '" + tok + "'");
        return v;
    }

    /// Consumes tokens until end of the current line (for solid names).
    void skip_line() {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
    }

  private:
    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

TriangleMesh parse_ascii(std::span<const std::uint8_t> bytes, std::string source_id) {
    TokenStream ts(bytes);
    ts.expect("solid");
    ts.skip_line();
    TriangleMesh mesh;
    mesh.source_id = std::move(source_id);
    for (;;) {
        std::string tok = ts.next();
        if (tok == "endsolid") break;
        if (tok != "facet")
            throw MalformedAscii("parse_stl: expected 'facet' or 'endsolid', got '" + tok + "'");
        ts.expect("normal");
        Vec3 n;
        n.x = ts.number();
        n.y = ts.number();
        n.z = ts.number();
        ts.expect("outer");
        ts.expect("loop");
        Triangle t;
        for (Vec3* v : {&t.v0, &t.v1, &t.v2}) {
            ts.expect("vertex");
            v->x = ts.number();
            v->y = ts.number();
            v->z = ts.number();
        }
        ts.expect("endloop");
        ts.expect("endfacet");
        check_vertices(t);
        set_stored_normal(t, n);
        mesh.triangles.push_back(t);
    }
    if (mesh.triangles.empty()) throw EmptyMesh("parse_stl: ASCII STL holds 0 triangles");
    return mesh;
}

bool looks_ascii(std::span<const std::uint8_t> bytes) {
    static constexpr char kSolid[] = "solid";
    if (bytes.size() < 5 || std::memcmp(bytes.data(), kSolid, 5) != 0) return false;
    // Binary files sometimes start with "solid"; require a facet token too.
    static constexpr char kFacet[] = "facet";
    for (std::size_t i = 5; i + 5 <= bytes.size(); ++i)
        if (std::memcmp(bytes.data() + i, kFacet, 5) == 0) return true;
    return false;
}

}  // namespace

TriangleMesh parse_stl(std::span<const std::uint8_t> bytes, std::string source_id) {
    if (bytes.empty()) throw TruncatedFile("parse_stl: empty input");
    if (looks_ascii(bytes)) return parse_ascii(bytes, std::move(source_id));
    return parse_binary(bytes, std::move(source_id));
}

TriangleMesh parse_stl_file(const std::filesystem::path& path, std::string source_id) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("parse_stl_file: cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (source_id.empty()) source_id = path.stem().string();
    return parse_stl(bytes, std::move(source_id));
}

std::vector<std::uint8_t> write_stl_binary(const TriangleMesh& mesh) {
    std::vector<std::uint8_t> out;
    out.reserve(84 + mesh.triangles.size() * 50);
    static constexpr char kHeader[] = "binary STL";
    out.resize(80, 0);
    std::memcpy(out.data(), kHeader, sizeof(kHeader) - 1);
    std::uint32_t count = static_cast<std::uint32_t>(mesh.triangles.size());
    for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>((count >> s) & 0xff));
    for (const Triangle& t : mesh.triangles) {
        Vec3 n = t.stored_normal ? *t.stored_normal : t.winding_normal();
        for (const Vec3& v : {n, t.v0, t.v1, t.v2}) {
            write_f32_le(out, static_cast<float>(v.x));
            write_f32_le(out, static_cast<float>(v.y));
            write_f32_le(out, static_cast<float>(v.z));
        }
        out.push_back(0);
        out.push_back(0);  // attribute byte count
    }
    return out;
}

void write_stl_binary_file(const TriangleMesh& mesh, const std::filesystem::path& path) {
    std::vector<std::uint8_t> bytes = write_stl_binary(mesh);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("write_stl_binary_file: cannot open " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace remixsig
