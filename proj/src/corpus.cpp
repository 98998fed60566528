#include "remixsig/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace remixsig {

RowParseError::RowParseError(std::size_t line_number, const std::string& what)
    : Error("line " + std::to_string(line_number) + ": " + what), line(line_number) {}

namespace {

struct CsvRow {
    std::vector<std::string> fields;
    std::size_t line = 0;  // 1-based line where the row starts
};

/// RFC-4180-style lexer: quoted fields may contain commas, quotes ("")
/// and newlines; rows end at bare LF / CRLF / end of text.
std::vector<CsvRow> lex_csv(std::string_view text) {
    std::vector<CsvRow> rows;
    std::size_t line = 1;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        CsvRow row;
        row.line = line;
        std::string field;
        bool in_quotes = false;
        bool quoted = false;
        for (;;) {
            if (i >= n) {
                if (in_quotes) throw RowParseError(row.line, "unterminated quoted field");
                row.fields.push_back(std::move(field));
                break;
            }
            char c = text[i];
            if (in_quotes) {
                if (c == '"') {
                    if (i + 1 < n && text[i + 1] == '"') {
                        field += '"';
                        i += 2;
                    } else {
                        in_quotes = false;
                        ++i;
                    }
                } else {
                    if (c == '\n') ++line;
                    field += c;
                    ++i;
                }
            } else if (c == '"' && field.empty() && !quoted) {
                quoted = true;
                in_quotes = true;
                ++i;
            } else if (c == ',') {
                row.fields.push_back(std::move(field));
                field.clear();
                quoted = false;
                ++i;
            } else if (c == '\n' || c == '\r') {
                if (c == '\r' && i + 1 < n && text[i + 1] == '\n') ++i;
                ++i;
                ++line;
                row.fields.push_back(std::move(field));
                break;
            } else {
                field += c;
                ++i;
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::int64_t parse_i64_field(const std::string& s, std::size_t line, const char* what) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw RowParseError(line, std::string(what) + " is not an integer: '" + s + "'");
    return v;
}

std::int64_t parse_count_field(const std::string& s, std::size_t line, const char* what) {
    std::int64_t v = parse_i64_field(s, line, what);
    if (v < 0) throw RowParseError(line, std::string(what) + " must be >= 0, got " + s);
    return v;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw Error("failed reading " + path.string());
    return std::move(buf).str();
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::vector<DesignRecord> load_metadata(std::string_view csv_text) {
    std::vector<CsvRow> rows = lex_csv(csv_text);
    static const std::vector<std::string> kHeader = {"id",    "mesh_path", "likes",
                                                     "makes", "parents",   "timestamp"};
    if (rows.empty() || rows.front().fields != kHeader)
        throw BadHeader("metadata: header must be id,mesh_path,likes,makes,parents,timestamp");

    std::vector<DesignRecord> out;
    std::set<std::string> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const CsvRow& row = rows[r];
        if (row.fields.size() == 1 && row.fields[0].empty()) continue;  // blank line
        if (row.fields.size() != 6)
            throw RowParseError(row.line, "expected 6 fields, got " +
                                              std::to_string(row.fields.size()));
        DesignRecord rec;
        rec.id = row.fields[0];
        if (rec.id.empty()) throw RowParseError(row.line, "empty id");
        if (!seen.insert(rec.id).second)
            throw DuplicateId("metadata: duplicate id '" + rec.id + "' (line " +
                              std::to_string(row.line) + ")");
        rec.mesh_path = row.fields[1];
        rec.likes = parse_count_field(row.fields[2], row.line, "likes");
        rec.makes = parse_count_field(row.fields[3], row.line, "makes");

        const std::string& parents = row.fields[4];
        std::size_t start = 0;
        while (start <= parents.size() && !parents.empty()) {
            std::size_t sep = parents.find(';', start);
            std::string part = parents.substr(
                start, sep == std::string::npos ? std::string::npos : sep - start);
            if (!part.empty()) {
                if (part == rec.id)
                    throw RowParseError(row.line, "design '" + rec.id + "' lists itself as a parent");
                rec.parent_ids.push_back(std::move(part));
            }
            if (sep == std::string::npos) break;
            start = sep + 1;
        }

        if (!row.fields[5].empty())
            rec.timestamp = parse_i64_field(row.fields[5], row.line, "timestamp");
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<DesignRecord> load_metadata_file(const std::filesystem::path& path) {
    return load_metadata(read_text_file(path));
}

RemixGraph build_graph(std::vector<DesignRecord> records) {
    RemixGraph g;
    for (DesignRecord& rec : records) {
        std::string id = rec.id;
        if (!g.nodes.emplace(id, std::move(rec)).second)
            throw DuplicateId("build_graph: duplicate id '" + id + "'");
    }

    for (auto& [id, rec] : g.nodes) {
        std::vector<std::string> kept;
        for (std::string& p : rec.parent_ids) {
            if (!g.nodes.contains(p))
                g.warnings.push_back({id, p});
            else if (std::find(kept.begin(), kept.end(), p) == kept.end())
                kept.push_back(std::move(p));
        }
        rec.parent_ids = std::move(kept);
    }
    for (const auto& [id, rec] : g.nodes)
        for (const std::string& p : rec.parent_ids) g.edges.emplace_back(p, id);

    // Kahn's algorithm over parent -> child edges; leftovers mean a cycle.
    std::map<std::string, int> indeg;
    std::map<std::string, std::vector<std::string>> children;
    for (const auto& [id, rec] : g.nodes) {
        indeg[id] = static_cast<int>(rec.parent_ids.size());
        for (const std::string& p : rec.parent_ids) children[p].push_back(id);
    }
    std::set<std::string> ready;
    for (const auto& [id, d] : indeg)
        if (d == 0) ready.insert(id);
    std::size_t processed = 0;
    while (!ready.empty()) {
        std::string id = *ready.begin();
        ready.erase(ready.begin());
        ++processed;
        for (const std::string& c : children[id])
            if (--indeg[c] == 0) ready.insert(c);
    }
    if (processed != g.nodes.size()) {
        // Walk still-blocked parents from the smallest leftover id until a
        // node repeats; that suffix is a cycle.
        std::string cur;
        for (const auto& [id, d] : indeg)
            if (d > 0) {
                cur = id;
                break;
            }
        std::vector<std::string> path;
        std::map<std::string, std::size_t> pos;
        while (!pos.contains(cur)) {
            pos[cur] = path.size();
            path.push_back(cur);
            for (const std::string& p : g.nodes.at(cur).parent_ids)
                if (indeg[p] > 0) {
                    cur = p;
                    break;
                }
        }
        std::vector<std::string> cycle(path.begin() + pos[cur], path.end());
        std::reverse(cycle.begin(), cycle.end());  // report in parent -> child order
        std::string msg = "build_graph: cycle detected: ";
        for (const std::string& s : cycle) {
            msg += s;
            msg += " -> ";
        }
        msg += cycle.front();
        throw CycleDetected(msg);
    }
    return g;
}

std::map<std::string, InheritanceClass> classify(const RemixGraph& graph) {
    std::map<std::string, InheritanceClass> out;
    for (const auto& [id, rec] : graph.nodes)
        out[id] = rec.parent_ids.empty() ? InheritanceClass::Standalone
                                         : InheritanceClass::Inherited;
    return out;
}

void save_descriptors(const DescriptorMap& descriptors, std::ostream& out) {
    if (descriptors.empty()) throw DomainError("save_descriptors: nothing to save");
    const DescriptorParams& p = descriptors.begin()->second.params;
    const std::size_t expected = static_cast<std::size_t>(p.R) * (p.L + 1);
    for (const auto& [id, d] : descriptors) {
        if (!(d.params == p))
            throw ParamMismatch("save_descriptors: descriptor '" + id + "' has different params");
        if (d.energies.size() != expected)
            throw RaggedRow("save_descriptors: descriptor '" + id + "' has wrong energy count");
        if (id.find_first_of(",\r\n") != std::string::npos)
            throw DomainError("save_descriptors: id '" + id + "' contains a separator");
    }
    out << "SHDESC 1 n=" << p.n << " R=" << p.R << " L=" << p.L << " B=" << p.B
        << " density=" << format_double(p.density) << " seed=" << p.seed << "\n";
    for (const auto& [id, d] : descriptors) {
        out << id;
        for (double e : d.energies) out << ',' << format_double(e);
        out << "\n";
    }
}

void save_descriptors_file(const DescriptorMap& descriptors, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    save_descriptors(descriptors, out);
    out.flush();
    if (!out) throw Error("failed writing " + path.string());
}

DescriptorMap load_descriptors(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw BadMagic("descriptor cache: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::istringstream hs(line);
    std::string magic;
    int version = 0;
    hs >> magic;
    if (magic != "SHDESC") throw BadMagic("descriptor cache: bad magic '" + magic + "'");
    if (!(hs >> version) || version != 1)
        throw BadMagic("descriptor cache: unsupported version");
    auto field = [&hs](const char* key) {
        std::string tok;
        if (!(hs >> tok)) throw BadMagic(std::string("descriptor cache: missing ") + key);
        std::string prefix = std::string(key) + "=";
        if (tok.rfind(prefix, 0) != 0)
            throw BadMagic(std::string("descriptor cache: expected ") + key + "=..., got '" +
                           tok + "'");
        return tok.substr(prefix.size());
    };
    auto to_int = [](const std::string& s, const char* key) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size())
            throw BadMagic(std::string("descriptor cache: bad ") + key + " value '" + s + "'");
        return v;
    };

    DescriptorParams p;
    p.n = to_int(field("n"), "n");
    p.R = to_int(field("R"), "R");
    p.L = to_int(field("L"), "L");
    p.B = to_int(field("B"), "B");
    {
        std::string s = field("density");
        char* end = nullptr;
        p.density = std::strtod(s.c_str(), &end);
        if (end != s.c_str() + s.size() || s.empty())
            throw BadMagic("descriptor cache: bad density value '" + s + "'");
    }
    {
        std::string s = field("seed");
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size())
            throw BadMagic("descriptor cache: bad seed value '" + s + "'");
        p.seed = v;
    }
    std::string extra;
    if (hs >> extra) throw BadMagic("descriptor cache: unexpected trailing header field");
    try {
        p.validate();
    } catch (const std::exception& e) {
        throw BadMagic(std::string("descriptor cache: invalid params: ") + e.what());
    }

    const std::size_t expected = static_cast<std::size_t>(p.R) * (p.L + 1);
    DescriptorMap out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        ShapeDescriptor d;
        d.params = p;
        d.energies.reserve(expected);
        std::size_t start = line.find(',');
        if (start == std::string::npos)
            throw RaggedRow("descriptor cache line " + std::to_string(line_no) +
                            ": expected " + std::to_string(expected) + " values, got 0");
        std::string id = line.substr(0, start);
        if (id.empty())
            throw RaggedRow("descriptor cache line " + std::to_string(line_no) + ": empty id");
        std::size_t count = 0;
        while (start != std::string::npos) {
            std::size_t next = line.find(',', start + 1);
            std::string tok = line.substr(
                start + 1, next == std::string::npos ? std::string::npos : next - start - 1);
            char* end = nullptr;
            double v = std::strtod(tok.c_str(), &end);
            if (tok.empty() || end != tok.c_str() + tok.size() || !std::isfinite(v))
                throw RaggedRow("descriptor cache line " + std::to_string(line_no) +
                                ": bad value '" + tok + "'");
            d.energies.push_back(v);
            ++count;
            start = next;
        }
        if (count != expected)
            throw RaggedRow("descriptor cache line " + std::to_string(line_no) + ": expected " +
                            std::to_string(expected) + " values, got " + std::to_string(count));
        if (!out.emplace(std::move(id), std::move(d)).second)
            throw DuplicateId("descriptor cache line " + std::to_string(line_no) +
                              ": duplicate id");
    }
    return out;
}

DescriptorMap load_descriptors_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return load_descriptors(in);
}

}  // namespace remixsig
