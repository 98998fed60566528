#include <doctest.h>

#include <sstream>
#include <string>

#include "remixsig/corpus.hpp"

using namespace remixsig;

namespace {

const char kHeader[] = "id,mesh_path,likes,makes,parents,timestamp\n";

std::vector<DesignRecord> parse(const std::string& rows) {
    return load_metadata(kHeader + rows);
}

DesignRecord rec(std::string id, std::vector<std::string> parents = {}) {
    DesignRecord r;
    r.id = std::move(id);
    r.parent_ids = std::move(parents);
    return r;
}

ShapeDescriptor tiny_descriptor(double fill) {
    ShapeDescriptor d;
    d.params.n = 8;
    d.params.R = 2;
    d.params.L = 1;
    d.params.B = 2;
    d.params.density = 10.0;
    d.energies = {fill, fill / 3, fill * 1.000000000000123, 0.0};
    return d;
}

}  // namespace

TEST_CASE("load_metadata parses fields, parents, and timestamps") {
    auto recs = parse(
        "a,meshes/a.stl,3,1,,1600000000\n"
        "b,meshes/b.stl,0,0,a,\n"
        "c,\"meshes/with,comma.stl\",12,4,a;b,1600000120\n");
    REQUIRE(recs.size() == 3);
    CHECK(recs[0].id == "a");
    CHECK(recs[0].mesh_path == "meshes/a.stl");
    CHECK(recs[0].likes == 3);
    CHECK(recs[0].makes == 1);
    CHECK(recs[0].parent_ids.empty());
    CHECK(recs[0].timestamp == 1600000000);

    CHECK(!recs[1].timestamp.has_value());
    CHECK(recs[1].parent_ids == std::vector<std::string>{"a"});

    CHECK(recs[2].mesh_path == "meshes/with,comma.stl");
    CHECK(recs[2].parent_ids == std::vector<std::string>{"a", "b"});
}

TEST_CASE("load_metadata quoting, blank rows, CRLF") {
    auto recs = load_metadata(
        "id,mesh_path,likes,makes,parents,timestamp\r\n"
        "\"x\"\"y\",p.stl,1,2,,\r\n"
        "\n"
        "z,q.stl,0,0,\"a;b\",\n");
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].id == "x\"y");  // escaped quote
    CHECK(recs[1].parent_ids.size() == 2);
}

TEST_CASE("load_metadata error reporting") {
    CHECK_THROWS_AS(load_metadata("id,path\nx,y\n"), BadHeader);
    CHECK_THROWS_AS(load_metadata(""), BadHeader);

    // wrong field count, with the line number in the message
    try {
        parse("a,p.stl,1,2,\n");
        FAIL("expected RowParseError");
    } catch (const RowParseError& e) {
        CHECK(e.line == 2);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    CHECK_THROWS_AS(parse("a,p.stl,-1,0,,\n"), RowParseError);       // negative likes
    CHECK_THROWS_AS(parse("a,p.stl,x,0,,\n"), RowParseError);        // non-integer
    CHECK_THROWS_AS(parse("a,p.stl,1,0,,oops\n"), RowParseError);    // bad timestamp
    CHECK_THROWS_AS(parse(",p.stl,1,0,,\n"), RowParseError);         // empty id
    CHECK_THROWS_AS(parse("a,p.stl,1,0,a,\n"), RowParseError);       // self parent
    CHECK_THROWS_AS(parse("a,\"p.stl,1,0,,\n"), RowParseError);      // unterminated quote
    CHECK_THROWS_AS(parse("a,p.stl,1,0,,\na,q.stl,2,0,,\n"), DuplicateId);
}

TEST_CASE("build_graph edges, pruning, classification") {
    RemixGraph g = build_graph({rec("a"), rec("b", {"a"}), rec("c", {"a", "ghost", "b"}),
                                rec("d", {"missing"})});
    CHECK(g.nodes.size() == 4);
    REQUIRE(g.warnings.size() == 2);
    CHECK(g.warnings[0].child_id == "c");
    CHECK(g.warnings[0].parent_id == "ghost");
    CHECK(g.warnings[1].child_id == "d");

    // pruned parent lists
    CHECK(g.node("c").parent_ids == std::vector<std::string>{"a", "b"});
    CHECK(g.node("d").parent_ids.empty());

    using P = std::pair<std::string, std::string>;
    CHECK(g.edges == std::vector<P>{{"a", "b"}, {"a", "c"}, {"b", "c"}});

    auto cls = classify(g);
    CHECK(cls.at("a") == InheritanceClass::Standalone);
    CHECK(cls.at("b") == InheritanceClass::Inherited);
    CHECK(cls.at("c") == InheritanceClass::Inherited);
    CHECK(cls.at("d") == InheritanceClass::Standalone);  // only parent was dangling
}

TEST_CASE("build_graph deduplicates repeated parents") {
    RemixGraph g = build_graph({rec("a"), rec("b", {"a", "a"})});
    CHECK(g.node("b").parent_ids == std::vector<std::string>{"a"});
    CHECK(g.edges.size() == 1);
}

TEST_CASE("build_graph rejects duplicates and cycles") {
    CHECK_THROWS_AS(build_graph({rec("a"), rec("a")}), DuplicateId);

    try {
        build_graph({rec("a", {"b"}), rec("b", {"a"}), rec("c")});
        FAIL("expected CycleDetected");
    } catch (const CycleDetected& e) {
        std::string msg = e.what();
        bool ab = msg.find("a -> b -> a") != std::string::npos;
        bool ba = msg.find("b -> a -> b") != std::string::npos;
        CHECK((ab || ba));
    }

    // a 3-cycle reachable only through a healthy prefix
    CHECK_THROWS_AS(build_graph({rec("r"), rec("x", {"r", "z"}), rec("y", {"x"}),
                                 rec("z", {"y"})}),
                    CycleDetected);
}

TEST_CASE("descriptor cache round trip is bit exact") {
    DescriptorMap m;
    m.emplace("a", tiny_descriptor(0.1));
    m.emplace("b", tiny_descriptor(7.25e-300));
    m.emplace("c", tiny_descriptor(12345.678901234567));

    std::ostringstream out;
    save_descriptors(m, out);
    std::string text = out.str();
    CHECK(text.rfind("SHDESC 1 n=8 R=2 L=1 B=2 density=10 seed=42", 0) == 0);

    std::istringstream in(text);
    DescriptorMap back = load_descriptors(in);
    REQUIRE(back.size() == m.size());
    for (const auto& [id, d] : m) {
        REQUIRE(back.count(id) == 1);
        CHECK(back.at(id).params == d.params);
        CHECK(back.at(id).energies == d.energies);  // exact doubles
    }

    // saving the reloaded map reproduces identical bytes
    std::ostringstream out2;
    save_descriptors(back, out2);
    CHECK(out2.str() == text);
}

TEST_CASE("save_descriptors validation") {
    DescriptorMap empty;
    std::ostringstream out;
    CHECK_THROWS_AS(save_descriptors(empty, out), DomainError);

    DescriptorMap mixed;
    mixed.emplace("a", tiny_descriptor(1.0));
    ShapeDescriptor other = tiny_descriptor(1.0);
    other.params.L = 0;
    other.energies = {1.0, 2.0};
    mixed.emplace("b", other);
    CHECK_THROWS_AS(save_descriptors(mixed, out), ParamMismatch);

    DescriptorMap ragged;
    ShapeDescriptor bad = tiny_descriptor(1.0);
    bad.energies.pop_back();
    ragged.emplace("a", bad);
    CHECK_THROWS_AS(save_descriptors(ragged, out), RaggedRow);

    DescriptorMap comma;
    comma.emplace("a,b", tiny_descriptor(1.0));
    CHECK_THROWS_AS(save_descriptors(comma, out), DomainError);
}

TEST_CASE("load_descriptors validation") {
    auto load = [](const std::string& text) {
        std::istringstream in(text);
        return load_descriptors(in);
    };
    const std::string header = "SHDESC 1 n=8 R=2 L=1 B=2 density=10 seed=42\n";

    CHECK_THROWS_AS(load(""), BadMagic);
    CHECK_THROWS_AS(load("NOPE 1 n=8 R=2 L=1 B=2 density=10 seed=42\n"), BadMagic);
    CHECK_THROWS_AS(load("SHDESC 2 n=8 R=2 L=1 B=2 density=10 seed=42\n"), BadMagic);
    CHECK_THROWS_AS(load("SHDESC 1 n=8 R=2 L=1\n"), BadMagic);             // missing fields
    CHECK_THROWS_AS(load("SHDESC 1 n=8 R=2 L=1 B=2 density=10 seed=x\n"), BadMagic);
    CHECK_THROWS_AS(load("SHDESC 1 n=9 R=2 L=1 B=2 density=10 seed=42\n"), BadMagic);  // n odd
    CHECK_THROWS_AS(load("SHDESC 1 n=8 R=2 L=1 B=2 density=10 seed=42 extra=1\n"), BadMagic);

    // R*(L+1) = 4 energies expected
    CHECK_THROWS_AS(load(header + "a,1,2,3\n"), RaggedRow);
    CHECK_THROWS_AS(load(header + "a,1,2,3,4,5\n"), RaggedRow);
    CHECK_THROWS_AS(load(header + "a,1,2,oops,4\n"), RaggedRow);
    CHECK_THROWS_AS(load(header + ",1,2,3,4\n"), RaggedRow);               // empty id
    CHECK_THROWS_AS(load(header + "a,1,2,3,4\na,1,2,3,4\n"), DuplicateId);

    DescriptorMap ok = load(header + "a,1,2,3,4\n");
    REQUIRE(ok.size() == 1);
    CHECK(ok.at("a").energies == std::vector<double>{1, 2, 3, 4});
    CHECK(ok.at("a").params.n == 8);
}
