#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pa/cli.hpp"
#include "pa/io.hpp"

using namespace pa;
using pa::io::json;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out, err;
};

CliRun pa_run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("pa_cli_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, TypeIiFilePassesCheckQt) {
    ASSERT_EQ(pa_run({"zoo", "rank2_type_ii", "-o", path("t2.json")}).code, 0);
    EXPECT_EQ(pa_run({"check-qt", path("t2.json")}).code, 0);
    EXPECT_EQ(pa_run({"check", path("t2.json")}).code, 0);
}

TEST_F(Cli, ModifiedRScalarMaps) {
    ASSERT_EQ(pa_run({"zoo", "modified_r_demo", "-o", path("s.json"), "--map-out", path("d2.json")}).code, 0);
    EXPECT_EQ(pa_run({"dmap", "--type", "I", path("s.json"), path("d2.json")}).code, 0);

    json m = io::read_file(path("d2.json"));
    m["matrix"][0][0][0]["c"] = "1";
    io::write_file(path("d1.json"), m);
    const CliRun r = pa_run({"--json", "dmap", "--type", "I", path("s.json"), path("d1.json")});
    EXPECT_EQ(r.code, 1);
    const json rep = json::parse(r.out);
    const json& res = rep["checks"][0]["residuals"];
    ASSERT_EQ(res.size(), 1u);
    // 3[x*x] = 3(∂⊗1 − 1⊗∂) ⊗_H x in canonical form.
    const HopfPtr H = io::hopf_from_json(io::read_file(path("s.json"))["hopf"]);
    const PTElem vir = pt_from_raw(*H, {MultiIndex::unit(0), {}}, {}, 0) - pt_from_raw(*H, {{}, MultiIndex::unit(0)}, {}, 0);
    EXPECT_EQ(io::pt_from_json(*H, res[0]["value"], 2, 1), vir * Q(3));
    EXPECT_EQ(rep["conventions"]["ce_sign"], "classical");
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(pa_run({}).code, 2);
    EXPECT_EQ(pa_run({"frobnicate"}).code, 2);
    EXPECT_EQ(pa_run({"check-qt", path("missing.json")}).code, 2);
    EXPECT_EQ(pa_run({"dmap", "--type", "III", "a", "b"}).code, 2);
    EXPECT_EQ(pa_run({"zoo", "nope"}).code, 2);
    EXPECT_EQ(pa_run({"rank2-search", "--max-deg", "-1"}).code, 2);
    EXPECT_EQ(pa_run({"--help"}).code, 0);

    json s = io::structure_to_json(*builtin("rank2_type_ii").structure);
    s["maps"]["eta"][0]["value"][0]["c"] = "1/0";
    io::write_file(path("den0.json"), s);
    EXPECT_EQ(pa_run({"check-qt", path("den0.json")}).code, 2);

    s = io::structure_to_json(*builtin("rank2_type_ii").structure);
    s["maps"]["eta"][0]["value"][0]["c"] = 1;
    io::write_file(path("float.json"), s);
    EXPECT_EQ(pa_run({"check-qt", path("float.json")}).code, 2);

    std::ofstream(path("garbage.json")) << "{ not json";
    EXPECT_EQ(pa_run({"check", path("garbage.json")}).code, 2);

    // The displayed Type (iii) data fails PC: check-qt reports it, and loaders refuse it unless told not to.
    ASSERT_EQ(pa_run({"zoo", "rank2_type_iii", "-o", path("t3.json")}).code, 1);
    ASSERT_EQ(pa_run({"zoo", "modified_r_demo", "-o", path("m.json"), "--map-out", path("d.json")}).code, 0);
    EXPECT_EQ(pa_run({"check-qt", path("t3.json")}).code, 1);
    EXPECT_EQ(pa_run({"linf", "--type", "I", path("t3.json"), "--max-arity", "2"}).code, 1);
    const CliRun nv = pa_run({"--json", "linf", "--type", "I", path("t3.json"), "--max-arity", "2", "--no-validate"});
    ASSERT_LE(nv.code, 1);
    for (const auto& c : json::parse(nv.out)["checks"]) EXPECT_EQ(c["name"].get<std::string>().rfind("load:", 0), std::string::npos);

    // A map of the wrong shape or type is an input error.
    EXPECT_EQ(pa_run({"dmap", "--type", "II", path("m.json"), path("d.json")}).code, 2);
}

TEST_F(Cli, ZooFilesRoundTripByteForByte) {
    for (const auto& name : builtin_names()) {
        SCOPED_TRACE(name);
        const CliRun emitted = pa_run({"zoo", name});
        const Builtin b = builtin(name);
        ASSERT_EQ(emitted.code, b.valid ? 0 : 1);
        const json j = json::parse(emitted.out);
        const std::string again = b.structure ? io::dump(io::structure_to_json(io::structure_from_json(j, false)))
                                              : io::dump(io::algebra_to_json(io::algebra_from_json(j)));
        EXPECT_EQ(again, emitted.out);
    }
}

TEST_F(Cli, ReportsAreDeterministic) {
    ASSERT_EQ(pa_run({"zoo", "reynolds_demo", "-o", path("r.json"), "--map-out", path("t.json")}).code, 0);
    const std::vector<std::string> cmd = {"--json", "--seed", "7", "linf", "--type", "II", path("r.json"), "--max-arity", "3"};
    const CliRun a = pa_run(cmd), b = pa_run(cmd);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    const CliRun t = pa_run({"--json", "--timing", "dmap", "--type", "II", path("r.json"), path("t.json")});
    EXPECT_EQ(t.code, 0);
    EXPECT_TRUE(json::parse(t.out).contains("timing"));
}

TEST_F(Cli, TwistWritesLoadableStructures) {
    ASSERT_EQ(pa_run({"zoo", "modified_r_demo", "-o", path("s.json"), "--map-out", path("d.json")}).code, 0);
    ASSERT_EQ(pa_run({"twist", "--type", "I", path("s.json"), path("d.json"), "-o", path("tw1.json")}).code, 0);
    EXPECT_EQ(pa_run({"check-qt", path("tw1.json")}).code, 0);

    ASSERT_EQ(pa_run({"zoo", "reynolds_demo", "-o", path("r.json"), "--map-out", path("t.json")}).code, 0);
    ASSERT_EQ(pa_run({"twist", "--type", "II", path("r.json"), path("t.json"), "-o", path("tw2.json")}).code, 0);
    EXPECT_EQ(io::file_kind(io::read_file(path("tw2.json"))), "quasi_twilled");
    EXPECT_EQ(pa_run({"check-qt", path("tw2.json")}).code, 0);
}

TEST_F(Cli, NrOfALieBracketWithItselfVanishes) {
    io::write_file(path("vir.json"), io::cochain_to_json(builtin("virasoro").algebra->bracket));
    const CliRun r = pa_run({"--json", "nr", path("vir.json"), path("vir.json"), "-o", path("b.json")});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(json::parse(r.out)["result"]["zero"].get<bool>());
    EXPECT_EQ(io::cochain_from_json(io::read_file(path("b.json"))).arity, 3);
}

TEST_F(Cli, CeAndCohomology) {
    ASSERT_EQ(pa_run({"zoo", "modified_r_demo", "-o", path("s.json"), "--map-out", path("d.json")}).code, 0);
    const QuasiTwilled S = io::structure_from_json(io::read_file(path("s.json")));
    const HModuleMap D = io::map_from_json(io::read_file(path("d.json")), S.g, S.h);
    std::mt19937_64 rng(3);
    const CEComplex C = ce_complex(S, D, MapKind::TypeI);
    io::write_file(path("f.json"), io::cochain_to_json(random_ce_cochain(rng, C, 1, 1)));
    EXPECT_EQ(pa_run({"ce", "--type", "I", path("s.json"), path("d.json"), path("f.json"), "-o", path("df.json")}).code, 0);
    EXPECT_EQ(io::cochain_from_json(io::read_file(path("df.json")), S.G, S.G), ce_diff(C, io::cochain_from_json(io::read_file(path("f.json")), S.G, S.G)));

    const CliRun h = pa_run({"--json", "cohomology", "--type", "I", path("s.json"), path("d.json"), "--degree", "1", "--max-pbw", "1"});
    EXPECT_EQ(h.code, 0);
    const json dims = json::parse(h.out)["result"]["dims"];
    EXPECT_EQ(dims["H"].get<long>(), dims["Z"].get<long>() - dims["B"].get<long>());
}

TEST_F(Cli, DictionaryDemos) {
    for (OperatorKind k : dictionary_kinds()) {
        SCOPED_TRACE(to_string(k));
        ASSERT_EQ(pa_run({"zoo", "--ingredients", to_string(k), "-o", path("in.json"), "--map-out", path("m.json")}).code, 0);
        EXPECT_EQ(pa_run({"dictionary", "--kind", to_string(k), path("in.json"), path("m.json")}).code, 0);
        json m = io::read_file(path("m.json"));
        m["matrix"][0][0] = json::array({{{"mono", json::array({0})}, {"c", "7"}}});
        io::write_file(path("bad.json"), m);
        EXPECT_EQ(pa_run({"dictionary", "--kind", to_string(k), path("in.json"), path("bad.json")}).code, 1);
    }
    ASSERT_EQ(pa_run({"zoo", "--ingredients", "ModifiedR", "-o", path("in.json"), "--map-out", path("m.json")}).code, 0);
    EXPECT_EQ(pa_run({"dictionary", "--kind", "Reynolds", path("in.json"), path("m.json")}).code, 2);
}

TEST_F(Cli, Rank2SearchAtDegreeZero) {
    const CliRun r = pa_run({"--json", "rank2-search", "--max-deg", "0"});
    ASSERT_LE(r.code, 1);
    const json rep = json::parse(r.out);
    EXPECT_EQ(rep["result"]["max_deg"], 0);
    EXPECT_FALSE(rep["result"]["families"].empty());
}
