#include <gtest/gtest.h>

#include "pa/io.hpp"

using namespace pa;
using pa::io::json;

TEST(Io, RationalsAreStrings) {
    EXPECT_EQ(io::rational_to_json(Q(-3, 2)), "-3/2");
    EXPECT_EQ(io::rational_from_json("6/4"), Q(3, 2));
    EXPECT_EQ(io::rational_from_json("5"), Q(5));
    EXPECT_THROW(io::rational_from_json(1.5), InputError);
    EXPECT_THROW(io::rational_from_json("1/0"), InputError);
    EXPECT_THROW(io::rational_from_json("x"), InputError);
}

TEST(Io, BuiltinsRoundTrip) {
    for (const auto& name : builtin_names()) {
        SCOPED_TRACE(name);
        const Builtin b = builtin(name);
        if (b.structure) {
            const json j = io::structure_to_json(*b.structure);
            const json again = json::parse(io::dump(j));
            if (b.valid) {
                QuasiTwilled S = io::structure_from_json(again);
                EXPECT_EQ(io::structure_to_json(S), j);
                EXPECT_TRUE(check_pc(S).pass());
            } else {
                EXPECT_THROW(io::structure_from_json(again), ValidationError);
                EXPECT_NO_THROW(io::structure_from_json(again, false));
            }
        }
        if (b.algebra) {
            const json j = io::algebra_to_json(*b.algebra);
            LiePseudoalgebra L = io::algebra_from_json(json::parse(io::dump(j)));
            EXPECT_EQ(io::algebra_to_json(L), j);
        }
        if (b.map && b.structure) {
            const json j = io::map_to_json(*b.map, b.kind);
            HModuleMap m = io::map_from_json(j, b.map->from, b.map->to);
            EXPECT_EQ(m, *b.map);
            EXPECT_EQ(io::map_kind_of(j), b.kind);
        }
    }
}

TEST(Io, UnsortedSlotsAreStraightened) {
    HopfPtr H = io::hopf_from_json(json{{"generators", {"d"}}});
    // (1 ⊗ ∂) ⊗_H e0 loads as −(∂ ⊗ 1) ⊗_H e0 + (1 ⊗ 1) ⊗_H ∂e0.
    json raw = json::array({{{"slots", {{0}, {1}}}, {"coeff", {0}}, {"basis", 0}, {"c", "1"}}});
    PTElem e = io::pt_from_json(*H, raw, 2, 1);
    PTElem expected = pt_from_raw(*H, {MultiIndex::unit(0), {}}, {}, 0) * Q(-1) +
                      pt_from_raw(*H, {{}, {}}, MultiIndex::unit(0), 0);
    EXPECT_EQ(e, expected);
    json canonical = io::pt_to_json(e, 1);
    EXPECT_EQ(io::pt_from_json(*H, canonical, 2, 1), e);
}

TEST(Io, SchemaErrors) {
    const Builtin b = builtin("rank2_type_ii");
    json j = io::structure_to_json(*b.structure);
    json v = j;
    v["meta"]["schema_version"] = "2";
    EXPECT_THROW(io::structure_from_json(v), InputError);
    v = j;
    v["meta"]["kind"] = "algebra";
    EXPECT_THROW(io::structure_from_json(v), InputError);
    v = j;
    v["maps"]["mu"] = json::array({{{"tuple", {0, 0}}, {"value", json::array({{{"slots", {{0}}}, {"basis", 5}, {"c", "1"}}})}}});
    EXPECT_THROW(io::structure_from_json(v), InputError);
    v = j;
    v["hopf"]["generators"] = json::array();
    EXPECT_THROW(io::structure_from_json(v), InputError);
    EXPECT_THROW(io::read_file("/nonexistent/pa.json"), InputError);
}

TEST(Io, HopfAlgebrasAreShared) {
    const json h = {{"generators", {"a", "b"}}, {"brackets", {{{"i", 0}, {"j", 1}, {"coeffs", json::array({json::array({1, "1"})})}}}}};
    EXPECT_EQ(io::hopf_from_json(h), io::hopf_from_json(json::parse(h.dump())));
    // [b, a] = −b is the same algebra written the other way round.
    const json flipped = {{"generators", {"a", "b"}}, {"brackets", {{{"i", "1"}, {"j", "0"}, {"coeffs", json::array({json::array({"1", "-1"})})}}}}};
    EXPECT_EQ(io::hopf_from_json(h), io::hopf_from_json(flipped));
}

TEST(Io, IngredientsRoundTrip) {
    for (OperatorKind k : dictionary_kinds()) {
        SCOPED_TRACE(to_string(k));
        KindDemo d = demo(k);
        const json j = io::ingredients_to_json(d.in);
        Ingredients in = io::ingredients_from_json(json::parse(io::dump(j)));
        EXPECT_EQ(io::ingredients_to_json(in), j);
        EXPECT_TRUE(dictionary_check(in, d.valid_map).op_zero);
    }
}

TEST(Io, CochainRoundTrip) {
    const Builtin b = builtin("virasoro");
    const LiePseudoalgebra& L = *b.algebra;
    const json j = io::cochain_to_json(L.bracket);
    Cochain f = io::cochain_from_json(json::parse(io::dump(j)), L.M, L.M);
    EXPECT_EQ(f, L.bracket);
}
