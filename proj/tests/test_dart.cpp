#include <doctest.h>

#include <sstream>

#include "fourcolor/config.hpp"
#include "fourcolor/dart.hpp"
#include "fourcolor/hom.hpp"
#include "fourcolor/reduce.hpp"

using namespace fourcolor;

namespace {
const Rotations kTriangle{{1, 2}, {2, 0}, {0, 1}};
const Rotations kEdge{{1, -1}, {0, -1}};
}  // namespace

TEST_CASE("closed triangle from rotations") {
    PseudoTriangulation z = from_rotations(3, kTriangle);
    CHECK(z.dart_count() == 6);
    CHECK(validate(z).empty());
    for (VertexId v = 0; v < 3; ++v) {
        CHECK(degree(z, v) == 2);
        CHECK(!is_boundary_vertex(z, v));
    }
}

TEST_CASE("single edge from rotations") {
    PseudoTriangulation z = from_rotations(2, kEdge);
    CHECK(z.dart_count() == 2);
    CHECK(validate(z).empty());
    for (DartId e = 0; e < 2; ++e) {
        CHECK(z.succ[e] == kNil);
        CHECK(z.pred[e] == kNil);
    }
    CHECK(degree(z, 0) == 1);
    CHECK(is_boundary_vertex(z, 0));
}

TEST_CASE("rotation discrepancy raises") {
    CHECK_THROWS_AS(from_rotations(2, {{1}, {}}), RotationDiscrepancyError);
    CHECK_THROWS_AS(from_rotations(2, {{1, 1}, {0, 0}}), MultipleDartsError);
}

TEST_CASE("terminal triangulation is valid") {
    PseudoTriangulation t = terminal_triangulation();
    CHECK(validate(t).empty());
}

TEST_CASE("validate reports broken involution") {
    PseudoTriangulation z = from_rotations(3, kTriangle);
    z.rev[0] = 0;  // now rev(rev(x)) != x somewhere
    auto report = validate(z);
    bool found_m2 = false;
    for (const auto& v : report)
        if (v.requirement == Requirement::M2) found_m2 = true;
    CHECK(found_m2);
}

TEST_CASE("mirror is an involution and round-trips") {
    PseudoTriangulation z = from_rotations(3, kTriangle);
    PseudoTriangulation mm = mirror(mirror(z));
    CHECK(mm.head == z.head);
    CHECK(mm.succ == z.succ);
    CHECK(mm.pred == z.pred);
    CHECK(validate(mirror(z)).empty());
    CHECK(isomorphic(z, mirror(z)));
}

TEST_CASE("rotation round trip") {
    PseudoTriangulation z = from_rotations(3, kTriangle);
    auto rot = to_rotations(z);
    REQUIRE(rot.has_value());
    PseudoTriangulation z2 = from_rotations(3, *rot);
    CHECK(isomorphic(z, z2));
    CHECK(z2.dart_count() == z.dart_count());
}

TEST_CASE("canonical trace equal across triangle roots") {
    PseudoTriangulation z = from_rotations(3, kTriangle);
    std::string t0 = canonical_trace(z, 0);
    for (DartId r = 1; r < 6; ++r) CHECK(canonical_trace(z, r) == t0);
}

TEST_CASE("dart json round trip") {
    PseudoTriangulation z = from_rotations(3, kTriangle);
    PseudoTriangulation z2 = read_dart_json(write_dart_json(z));
    CHECK(z2.head == z.head);
    CHECK(z2.rev == z.rev);
}

TEST_CASE("rotation text round trip") {
    std::string text = write_rotation_text(kTriangle, 0);
    std::istringstream in(text);
    RotationFile f = read_rotation_text(in);
    CHECK(f.n == 3);
    CHECK(f.rotations == kTriangle);
}
