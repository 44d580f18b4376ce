#include "pa/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <functional>

#include "pa/io.hpp"

namespace pa {

namespace {

using io::json;

// Raised after a load-time check failed; the report already carries the residuals.
struct LoadFailed {};

struct Options {
    bool json_out = false, timing = false, no_validate = false;
    uint64_t seed = 1;
    std::string perm = "image", pc67 = "printed23", pc3 = "printed", ce = "classical", twist2 = "reordered";

    PCFlags pc() const {
        return {perm == "image" ? PermConvention::Image : PermConvention::Inverse,
                pc67 == "printed23" ? PC67Variant::Printed23 : PC67Variant::Proof123,
                pc3 == "printed" ? PC3Sign::Printed : PC3Sign::ProofExpansion};
    }
    CESign ce_sign() const { return ce == "classical" ? CESign::Classical : CESign::Shifted; }
    Twist2Form twist2_form() const { return twist2 == "reordered" ? Twist2Form::Reordered : Twist2Form::Printed; }
};

class Report {
public:
    Report(const std::vector<std::string>& args, const Options& o) {
        j_["args"] = args;
        j_["conventions"] = io::conventions_json(o.pc(), o.ce_sign(), o.twist2_form());
        j_["checks"] = json::array();
        j_["result"] = json::object();
        j_["outputs"] = json::array();
    }

    // Invariant checks guard identities that hold by construction; their failure is an internal error.
    void check(const std::string& name, bool pass, json residuals = json::array(), bool invariant = false) {
        json c = {{"name", name}, {"pass", pass}};
        if (invariant) c["invariant"] = true;
        if (!residuals.empty()) c["residuals"] = std::move(residuals);
        j_["checks"].push_back(std::move(c));
    }
    json& result() { return j_["result"]; }
    void output(const std::string& path) { j_["outputs"].push_back(path); }
    void set(const std::string& key, json v) { j_[key] = std::move(v); }

    int exit_code() const {
        int code = 0;
        for (const auto& c : j_["checks"])
            if (!c["pass"].get<bool>()) code = std::max(code, c.value("invariant", false) ? 3 : 1);
        return code;
    }
    json finish(int code) {
        j_["exit_code"] = code;
        j_["verdict"] = code == 0 ? "pass" : code == 1 ? "fail" : "error";
        return j_;
    }

private:
    json j_;
};

json residual(const std::string& label, const Tuple& t, const PTElem& v, const HopfAlgebra& H, const FreeModule& M) {
    return {{"label", label}, {"tuple", t}, {"value", io::pt_to_json(v, H.dim())}, {"text", format_pt(H, M, v)}};
}

json table_residuals(const std::string& label, const ValueTable& t, const HopfAlgebra& H, const FreeModule& M) {
    json out = json::array();
    for (const auto& [tuple, v] : t) out.push_back(residual(label, tuple, v, H, M));
    return out;
}

json residual_list(const std::vector<Residual>& rs, const HopfAlgebra& H, const FreeModule& M) {
    json out = json::array();
    for (const auto& r : rs) out.push_back(residual(r.label, r.tuple, r.value, H, M));
    return out;
}

MapKind parse_type(const std::string& t) { return t == "I" ? MapKind::TypeI : MapKind::TypeII; }

void add_pc_checks(Report& rep, const QuasiTwilled& S, const PCReport& r, const std::string& prefix) {
    for (int k = 1; k <= 8; ++k)
        rep.check(prefix + "PC" + std::to_string(k), r.label_pass(k), residual_list(r.by_label[k], S.H(), *S.G));
}

QuasiTwilled load_structure(const std::string& path, const Options& o, Report& rep) {
    QuasiTwilled S = io::structure_from_json(io::read_file(path), false);
    rep.result()["structure"] = S.name;
    if (!o.no_validate) {
        const PCReport r = check_pc(S, o.pc());
        if (!r.pass()) {
            add_pc_checks(rep, S, r, "load: ");
            throw LoadFailed{};
        }
    }
    return S;
}

HModuleMap load_map(const std::string& path, const QuasiTwilled& S, MapKind kind) {
    const json j = io::read_file(path);
    if (auto k = io::map_kind_of(j); k && *k != kind) throw InputError("map file '" + path + "' is of the other type");
    return kind == MapKind::TypeI ? io::map_from_json(j, S.g, S.h) : io::map_from_json(j, S.h, S.g);
}

std::string type_name(MapKind k) { return k == MapKind::TypeI ? "I" : "II"; }

// ---- commands ----

void cmd_check(const std::string& path, const Options&, Report& rep) {
    const json j = io::read_file(path);
    const std::string kind = io::file_kind(j);
    LiePseudoalgebra L;
    if (kind == "algebra") {
        L = io::algebra_from_json(j, false);
    } else if (kind == "quasi_twilled") {
        QuasiTwilled S = io::structure_from_json(j, false);
        rep.result()["structure"] = S.name;
        L = {S.G, S.omega()};
    } else {
        throw InputError("check expects an algebra or quasi_twilled file, got '" + kind + "'");
    }
    const HopfAlgebra& H = *L.M->H;
    json skew = json::array();
    for (const auto& v : skew_check(L.bracket)) skew.push_back(residual("skew", v.tuple, v.residual, H, *L.M));
    rep.check("skew-symmetry", skew.empty(), skew);
    const CheckReport r = check_lie(L);
    rep.check("Jacobi identity", r.pass(), residual_list(r.failures, H, *L.M));
    rep.result()["rank"] = L.M->rank();
}

void cmd_check_qt(const std::string& path, const Options& o, Report& rep) {
    QuasiTwilled S = io::structure_from_json(io::read_file(path), false);
    rep.result()["structure"] = S.name;
    const PCReport r = check_pc(S, o.pc());
    add_pc_checks(rep, S, r, "");
    const MCReport m = check_mc_omega(S, o.pc());
    rep.check("[Omega,Omega] = 0", m.bracket_zero, table_residuals("[Omega,Omega]", m.bracket.sorted_values(), S.H(), *S.G));
    rep.check("PC verdict agrees with [Omega,Omega] region by region", r.pass() == m.bracket_zero && m.table_ok, {}, true);
    json regions = json::array();
    for (const auto& g : m.regions)
        regions.push_back({{"label", g.label}, {"bidegree", g.bidegree}, {"bracket_zero", g.bracket_zero}});
    rep.result()["regions"] = regions;
}

void cmd_dmap(MapKind kind, const std::string& spath, const std::string& mpath, const Options& o, Report& rep) {
    QuasiTwilled S = load_structure(spath, o, rep);
    HModuleMap M = load_map(mpath, S, kind);
    if (kind == MapKind::TypeI) {
        const ComponentMap r = dmap1_residual(S, M);
        rep.check("type I deformation map identity", r.values.empty(), table_residuals("theta^D", r.values, S.H(), *S.h));
        const bool mc = mc_residual_type1(S, M).is_zero();
        rep.check("Maurer-Cartan residual agrees", mc == r.values.empty(), {}, true);
        const GraphReport g = graph_check(S, M);
        rep.check("graph criterion agrees", g.closed == r.values.empty(), {}, true);
        rep.result()["graph_closed"] = g.closed;
    } else {
        const ComponentMap r = dmap2_residual(S, M);
        rep.check("type II deformation map identity", r.values.empty(), table_residuals("xi^T", r.values, S.H(), *S.g));
        const bool mc = mc_residual_type2(S, M).is_zero();
        rep.check("Maurer-Cartan residual agrees", mc == r.values.empty(), {}, true);
    }
}

void cmd_twist(MapKind kind, const std::string& spath, const std::string& mpath, const std::string& out,
               const Options& o, Report& rep) {
    QuasiTwilled S = load_structure(spath, o, rep);
    HModuleMap M = load_map(mpath, S, kind);
    json file;
    if (kind == MapKind::TypeI) {
        Twist1Result t = twist1(S, M);
        rep.check("closed form equals the exponential series", t.matches_exp, {}, true);
        rep.result()["is_deformation_map"] = t.is_dmap;
        t.twisted.name = S.name + "^D";
        file = io::structure_to_json(t.twisted);
    } else {
        const Twist2Result t = twist2(S, M, o.twist2_form());
        rep.check("closed form equals the exponential series", t.matches_exp, {}, true);
        rep.result()["is_deformation_map"] = t.is_dmap;
        rep.result()["xi"] = table_residuals("xi^T", t.xi.values, S.H(), *S.g);
        if (t.is_dmap) {
            file = io::structure_to_json(from_omega(S.g, S.h, S.G, t.omega, S.name + "^T"));
        } else {
            // ξ^T ≠ 0 puts a g-valued part on h ⊗ h, so the result is only a bracket on G.
            file = io::cochain_to_json(t.omega);
        }
    }
    rep.result()["written_kind"] = file["meta"]["kind"];
    if (!out.empty()) {
        io::write_file(out, file);
        rep.output(out);
    }
}

void cmd_nr(const std::string& fpath, const std::string& gpath, const std::string& out, Report& rep) {
    const Cochain f = io::cochain_from_json(io::read_file(fpath));
    const Cochain g = io::cochain_from_json(io::read_file(gpath), f.source, f.target);
    if (f.source != f.target) throw InputError("the bracket needs cochains from a module to itself");
    const Cochain b = nr_bracket(f, g);
    rep.result()["arity"] = b.arity;
    rep.result()["zero"] = b.is_zero();
    rep.result()["value"] = format_cochain(b);
    if (!out.empty()) {
        io::write_file(out, io::cochain_to_json(b));
        rep.output(out);
    }
}

void cmd_linf(MapKind kind, const std::string& spath, int max_arity, const Options& o, Report& rep) {
    if (max_arity < 0 || max_arity > 6) throw InputError("--max-arity must lie in 0..6");
    QuasiTwilled S = load_structure(spath, o, rep);
    const LInfOperators ops = kind == MapKind::TypeI ? curved_l_type1(S) : curved_l_type2(S);
    std::mt19937_64 rng(o.seed);
    std::vector<Cochain> samples;
    for (int i = 0; i < std::max(2, max_arity); ++i) samples.push_back(random_k_element(rng, S, kind, 1 + i % 2, 1));
    const LInfReport r = linf_jacobi_check(ops, max_arity, samples);
    json fails = json::array();
    for (const auto& f : r.failures) fails.push_back({{"n", f.n}, {"inputs", f.inputs}, {"value", format_cochain(f.residual)}});
    rep.check("generalized Jacobi identities up to arity " + std::to_string(max_arity), r.pass(), fails);
    rep.result()["checked"] = r.checked;
    rep.result()["curvature_zero"] = ops.l({}).is_zero();
}

CEComplex load_complex(MapKind kind, const std::string& spath, const std::string& mpath, const Options& o,
                       Report& rep, QuasiTwilled& S) {
    S = load_structure(spath, o, rep);
    HModuleMap M = load_map(mpath, S, kind);
    return ce_complex(S, M, kind, o.ce_sign());
}

void cmd_ce(MapKind kind, const std::string& spath, const std::string& mpath, const std::string& cpath,
            const std::string& out, const Options& o, Report& rep) {
    QuasiTwilled S;
    const CEComplex C = load_complex(kind, spath, mpath, o, rep, S);
    const Cochain f = io::cochain_from_json(io::read_file(cpath), S.G, S.G);
    if (f.arity < 1) throw InputError("the cochain must have arity at least 1");
    const Cochain d = ce_diff(C, f);
    const Cochain dd = ce_diff(C, d);
    rep.check("d(d(f)) = 0", dd.is_zero(), table_residuals("d(d(f))", dd.sorted_values(), S.H(), *S.G));
    const ConsistencyReport c = consistency_l1_vs_d(C, f);
    rep.check("l1 = (-1)^(p-1) d", c.equal, table_residuals("l1 - (-1)^(p-1) d", (c.l1 - c.d).sorted_values(), S.H(), *S.G));
    rep.result()["degree"] = f.arity;
    rep.result()["d"] = format_cochain(d);
    if (!out.empty()) {
        io::write_file(out, io::cochain_to_json(d));
        rep.output(out);
    }
}

void cmd_cohomology(MapKind kind, const std::string& spath, const std::string& mpath, int p, int cap,
                    const Options& o, Report& rep) {
    if (p < 1) throw InputError("--degree must be at least 1");
    if (cap < 0) throw InputError("--max-pbw must be nonnegative");
    QuasiTwilled S;
    const CEComplex C = load_complex(kind, spath, mpath, o, rep, S);
    const CohomologyDims d = truncated_cohomology(C, p, cap);
    rep.check("boundaries lie in the cycles", d.dim_b <= d.dim_z, {}, true);
    rep.result()["dims"] = {{"degree", d.p},      {"max_pbw", d.cap}, {"C", d.dim_c},
                            {"Z", d.dim_z},       {"B", d.dim_b},     {"H", d.dim_h},
                            {"growth", d.growth}, {"image_within_truncation", d.image_within_truncation}};
}

void cmd_dictionary(const std::string& kind_name, const std::string& ipath, const std::string& mpath,
                    Report& rep) {
    const OperatorKind kind = operator_kind_from_string(kind_name);
    Ingredients in = io::ingredients_from_json(io::read_file(ipath));
    if (in.kind != kind) throw InputError("--kind " + kind_name + " does not match the file's operator " + to_string(in.kind));
    const MapKind mk = map_kind(kind);
    const ModulePtr g = in.g.M, h = in.h.M ? in.h.M : in.g.M;
    const json mj = io::read_file(mpath);
    if (auto k = io::map_kind_of(mj); k && *k != mk) throw InputError("map file is of the other type");
    const HModuleMap M = mk == MapKind::TypeI ? io::map_from_json(mj, g, h) : io::map_from_json(mj, h, g);
    const DictionaryReport r = dictionary_check(in, M);
    const HopfAlgebra& H = *g->H;
    const FreeModule& target = mk == MapKind::TypeI ? *h : *g;
    rep.check(to_string(kind) + " identity", r.op_zero, table_residuals("operator", r.op, H, target));
    rep.check("deformation map identity", r.dmap_zero, table_residuals(mk == MapKind::TypeI ? "theta^D" : "xi^T", r.dmap.values, H, target));
    rep.check("Maurer-Cartan equation", r.mc_zero);
    bool agree = r.agree();
    if (mk == MapKind::TypeI) agree = agree && r.graph_closed == r.dmap_zero;
    rep.check("operator, deformation map and MC verdicts agree", agree, {}, true);
    rep.result()["kind"] = to_string(kind);
    rep.result()["map_type"] = type_name(mk);
    rep.result()["same_values"] = r.same_values;
}

// Returns true when the emitted file went to stdout in place of the report.
bool cmd_zoo(const std::string& name, bool list, const std::string& ingredients, const std::string& out,
             const std::string& map_out, std::ostream& os, Report& rep) {
    if (list) {
        json names = json::array();
        for (const auto& n : builtin_names()) {
            const Builtin b = builtin(n);
            names.push_back({{"name", n}, {"description", b.description}, {"valid", b.valid}});
        }
        rep.result()["builtins"] = names;
        json kinds = json::array();
        for (OperatorKind k : dictionary_kinds()) kinds.push_back(to_string(k));
        rep.result()["ingredient_kinds"] = kinds;
        return false;
    }
    json file, map;
    if (!ingredients.empty()) {
        if (!name.empty()) throw InputError("give either a builtin name or --ingredients");
        KindDemo d = demo(operator_kind_from_string(ingredients));
        file = io::ingredients_to_json(d.in);
        map = io::map_to_json(d.valid_map, map_kind(d.in.kind));
    } else {
        if (name.empty()) throw InputError("zoo needs a builtin name, --ingredients or --list");
        const Builtin b = builtin(name);
        file = b.structure ? io::structure_to_json(*b.structure) : io::algebra_to_json(*b.algebra);
        if (b.map) map = io::map_to_json(*b.map, b.kind);
        rep.check("builtin passes its load-time checks", b.valid);
        rep.result()["description"] = b.description;
    }
    if (!map_out.empty()) {
        if (map.is_null()) throw InputError("builtin '" + name + "' has no deformation map");
        io::write_file(map_out, map);
        rep.output(map_out);
    }
    if (out.empty()) {
        os << io::dump(file);
        return true;
    }
    io::write_file(out, file);
    rep.output(out);
    return false;
}

void cmd_rank2(int max_deg, const Options& o, Report& rep) {
    const Rank2Report r = rank2_search(max_deg, o.seed);
    auto describe = [](const Rank2Family& f) {
        const QuasiTwilled& S = f.sample;
        json sample = json::object();
        const std::pair<const char*, ComponentMap> comps[] = {
            {"pi", pi_map(S)}, {"rho", rho_map(S)}, {"eta", eta_map(S)}, {"theta", theta_map(S)}, {"mu", mu_map(S)}};
        for (const auto& [label, c] : comps)
            for (const auto& [t, v] : c.values) sample[label] = format_pt(S.H(), c.to_h ? *S.h : *S.g, v);
        return json{{"mu", f.mu_virasoro ? "virasoro" : "zero"},
                    {"type", to_string(f.type)},
                    {"parameters", f.family.dirs.size()},
                    {"sample_valid", f.sample_valid},
                    {"sample", sample}};
    };
    json fams = json::array(), eta_only = json::array();
    for (const auto& f : r.families) fams.push_back(describe(f));
    for (const auto& f : r.eta_only_families) eta_only.push_back(describe(f));
    rep.check("search complete (no unresolved or pinned families)", r.complete(), {}, true);
    bool samples = true;
    for (const auto& f : r.families) samples = samples && f.sample_valid;
    rep.check("every family sample satisfies PC", samples, {}, true);
    rep.check("only Types (i)/(ii)/(iii) among mu = 0 families", r.only_known_types());
    rep.check("mu = Virasoro, pi = rho = theta = 0 recovers the eta family", r.eta_only_matches);
    rep.result()["max_deg"] = r.max_deg;
    rep.result()["unknowns"] = r.unknowns.size();
    rep.result()["equations"] = r.equations;
    rep.result()["families"] = fams;
    rep.result()["eta_only_families"] = eta_only;
}

// ---- rendering ----

std::string scalar_text(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void render(const json& r, std::ostream& os) {
    os << "pa " << r["command"].get<std::string>() << ": " << r["verdict"].get<std::string>() << "\n";
    const json& c = r["conventions"];
    os << "  conventions: " << c["pc"].get<std::string>() << ", ce_sign=" << c["ce_sign"].get<std::string>()
       << ", twist2=" << c["twist2"].get<std::string>() << "\n";
    for (const auto& ch : r["checks"]) {
        os << "  [" << (ch["pass"].get<bool>() ? "PASS" : "FAIL") << "] " << ch["name"].get<std::string>() << "\n";
        if (!ch.contains("residuals")) continue;
        for (const auto& x : ch["residuals"]) {
            if (x.contains("text"))
                os << "      " << x["label"].get<std::string>() << " " << x["tuple"].dump() << ": "
                   << x["text"].get<std::string>() << "\n";
            else
                os << "      " << x.dump() << "\n";
        }
    }
    for (const auto& [k, v] : r["result"].items()) {
        if (v.is_array() && !v.empty() && v.front().is_object()) {
            os << "  " << k << ":\n";
            for (const auto& e : v) os << "    " << e.dump() << "\n";
        } else if (v.is_object()) {
            os << "  " << k << ":";
            for (const auto& [kk, vv] : v.items()) os << " " << kk << "=" << scalar_text(vv);
            os << "\n";
        } else {
            os << "  " << k << ": " << scalar_text(v) << "\n";
        }
    }
    for (const auto& p : r["outputs"]) os << "  wrote " << p.get<std::string>() << "\n";
    if (r.contains("error")) os << "  error: " << r["error"].get<std::string>() << "\n";
    if (r.contains("timing")) os << "  time: " << r["timing"]["seconds"].dump() << " s\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Exact computations with Lie pseudoalgebras, quasi-twilled structures and deformation maps", "pa"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_flag("--json", o.json_out, "Print the report as JSON");
    app.add_flag("--timing", o.timing, "Record wall-clock time in the report");
    app.add_flag("--no-validate", o.no_validate, "Skip load-time PC checks");
    app.add_option("--seed", o.seed, "Seed of every randomized suite")->capture_default_str();
    app.add_option("--perm", o.perm, "Reading of printed cycles")->check(CLI::IsMember({"image", "inverse"}))->capture_default_str();
    app.add_option("--pc67", o.pc67, "Permutation in PC6/PC7")->check(CLI::IsMember({"printed23", "proof123"}))->capture_default_str();
    app.add_option("--pc3", o.pc3, "Sign pattern of PC3")->check(CLI::IsMember({"printed", "proof"}))->capture_default_str();
    app.add_option("--ce-sign", o.ce, "Sign convention of the CE differential")->check(CLI::IsMember({"classical", "shifted"}))->capture_default_str();
    app.add_option("--twist2", o.twist2, "Form of the type II twist")->check(CLI::IsMember({"reordered", "printed"}))->capture_default_str();

    std::string type = "I", s1, s2, s3, outp, map_out, kind, name, ingredients;
    int max_arity = 4, degree = 1, max_pbw = 2, max_deg = 2;
    bool list = false;
    auto add_type = [&](CLI::App* c) { c->add_option("--type", type)->required()->check(CLI::IsMember({"I", "II"})); };

    std::function<void(Report&)> action;
    bool file_to_stdout = false;

    auto* check = app.add_subcommand("check", "Skew-symmetry and Jacobi identity of an algebra or of (G, Omega)");
    check->add_option("structure", s1)->required();
    check->callback([&] { action = [&](Report& r) { cmd_check(s1, o, r); }; });

    auto* check_qt = app.add_subcommand("check-qt", "PC1-PC8 and [Omega,Omega] = 0 of a quasi-twilled structure");
    check_qt->add_option("structure", s1)->required();
    check_qt->callback([&] { action = [&](Report& r) { cmd_check_qt(s1, o, r); }; });

    auto* dmap = app.add_subcommand("dmap", "Deformation map identity of a map");
    add_type(dmap);
    dmap->add_option("structure", s1)->required();
    dmap->add_option("map", s2)->required();
    dmap->callback([&] { action = [&](Report& r) { cmd_dmap(parse_type(type), s1, s2, o, r); }; });

    auto* twist = app.add_subcommand("twist", "Twist a structure by a map");
    add_type(twist);
    twist->add_option("structure", s1)->required();
    twist->add_option("map", s2)->required();
    twist->add_option("-o", outp, "Output file");
    twist->callback([&] { action = [&](Report& r) { cmd_twist(parse_type(type), s1, s2, outp, o, r); }; });

    auto* nr = app.add_subcommand("nr", "Nijenhuis-Richardson bracket of two cochains");
    nr->add_option("f", s1)->required();
    nr->add_option("g", s2)->required();
    nr->add_option("-o", outp, "Output file");
    nr->callback([&] { action = [&](Report& r) { cmd_nr(s1, s2, outp, r); }; });

    auto* linf = app.add_subcommand("linf", "Generalized Jacobi identities of the curved L-infinity algebra");
    add_type(linf);
    linf->add_option("structure", s1)->required();
    linf->add_option("--max-arity", max_arity)->capture_default_str();
    linf->callback([&] { action = [&](Report& r) { cmd_linf(parse_type(type), s1, max_arity, o, r); }; });

    auto* ce = app.add_subcommand("ce", "Chevalley-Eilenberg differential of a cochain");
    add_type(ce);
    ce->add_option("structure", s1)->required();
    ce->add_option("map", s2)->required();
    ce->add_option("cochain", s3)->required();
    ce->add_option("-o", outp, "Output file");
    ce->callback([&] { action = [&](Report& r) { cmd_ce(parse_type(type), s1, s2, s3, outp, o, r); }; });

    auto* coh = app.add_subcommand("cohomology", "Truncated cohomology dimensions");
    add_type(coh);
    coh->add_option("structure", s1)->required();
    coh->add_option("map", s2)->required();
    coh->add_option("--degree", degree)->required();
    coh->add_option("--max-pbw", max_pbw)->required();
    coh->callback([&] { action = [&](Report& r) { cmd_cohomology(parse_type(type), s1, s2, degree, max_pbw, o, r); }; });

    auto* dict = app.add_subcommand("dictionary", "Operator identity versus deformation map and MC equation");
    dict->add_option("--kind", kind)->required();
    dict->add_option("ingredients", s1)->required();
    dict->add_option("map", s2)->required();
    dict->callback([&] { action = [&](Report& r) { cmd_dictionary(kind, s1, s2, r); }; });

    auto* zoo = app.add_subcommand("zoo", "Emit a builtin structure or demo ingredients");
    zoo->add_option("name", name);
    zoo->add_flag("--list", list, "List builtins");
    zoo->add_option("--ingredients", ingredients, "Emit the demo ingredients of an operator kind");
    zoo->add_option("-o", outp, "Output file (default: stdout)");
    zoo->add_option("--map-out", map_out, "Also write the builtin's deformation map");
    zoo->callback([&] {
        action = [&](Report& r) { file_to_stdout = cmd_zoo(name, list, ingredients, outp, map_out, out, r); };
    });

    auto* rank2 = app.add_subcommand("rank2-search", "Rank-2 classification over Q[d]");
    rank2->add_option("--max-deg", max_deg)->required();
    rank2->callback([&] { action = [&](Report& r) { cmd_rank2(max_deg, o, r); }; });

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "pa: " << e.what() << "\n";
        return 2;
    }

    Report rep(args, o);
    rep.set("command", app.get_subcommands().front()->get_name());
    rep.set("seed", o.seed);
    const auto t0 = std::chrono::steady_clock::now();
    int code = 0;
    auto fail = [&](int c, const std::string& msg) {
        code = c;
        rep.set("error", msg);
    };
    try {
        action(rep);
        code = rep.exit_code();
    } catch (const LoadFailed&) {
        code = 1;
        rep.set("error", "load-time checks failed");
    } catch (const InputError& e) {
        fail(2, e.what());
    } catch (const ValidationError& e) {
        fail(1, e.what());
    } catch (const ResourceError& e) {
        fail(3, e.what());
    } catch (const InternalError& e) {
        fail(3, e.what());
    } catch (const io::json::exception& e) {
        fail(2, std::string("malformed input: ") + e.what());
    } catch (const std::exception& e) {
        fail(3, e.what());
    }
    if (o.timing)
        rep.set("timing", {{"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}});
    const json r = rep.finish(code);
    if (file_to_stdout && code == 0) return 0;
    // The emitted file owns stdout; a failing report then goes to stderr.
    std::ostream& ros = file_to_stdout ? err : out;
    if (o.json_out)
        ros << io::dump(r);
    else
        render(r, ros);
    if (code >= 2) err << "pa: " << r["error"].get<std::string>() << "\n";
    return code;
}

}  // namespace pa
