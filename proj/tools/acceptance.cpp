// Acceptance suite: one line per criterion, exact (zero-residual) comparisons, pinned time limits.
#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

#include "pa/cli.hpp"
#include "pa/io.hpp"

using namespace pa;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double limit_s;
    std::function<Outcome()> run;
};

// Collects the first few failure notes and a running verdict.
struct Tally {
    bool pass = true;
    int trials = 0;
    std::vector<std::string> notes;
    void expect(bool ok, const std::string& what) {
        ++trials;
        if (ok) return;
        pass = false;
        if (notes.size() < 4) notes.push_back(what);
    }
    std::string failures() const {
        std::string s;
        for (const auto& n : notes) s += "; " + n;
        return s;
    }
};

const char* type_name(MapKind k) { return k == MapKind::TypeI ? "type I" : "type II"; }

// Δ on one leg of a tensor.
HTensor coproduct_on_leg(const HopfAlgebra& H, const HTensor& t, int leg) {
    HTensor r;
    r.arity = t.arity + 1;
    for (const auto& [slots, c] : t.terms)
        for (const auto& sp : H.splits(slots[leg], 2)) {
            std::vector<MultiIndex> s = slots;
            s[leg] = sp[0];
            s.insert(s.begin() + leg + 1, sp[1]);
            r.terms.emplace_back(std::move(s), c);
        }
    r.normalize();
    return r;
}

Outcome hopf_axioms(uint64_t seed) {
    std::mt19937_64 rng(seed);
    Tally t;
    for (auto H : {hopf_polynomial(), hopf_two_dim_nonabelian()}) {
        const std::string tag = H->dim() == 1 ? "Q[d]" : "U(b2)";
        for (int trial = 0; trial < 40; ++trial) {
            const HElem x = random_helem(rng, *H, 4, 4), y = random_helem(rng, *H, 4, 4);
            const HTensor dx = H->coproduct_iter(x, 1);
            HElem left, right;
            for (const auto& [s, c] : dx.terms) {
                if (s[0].zero()) left = left + HElem::mono(s[1], c);
                if (s[1].zero()) right = right + HElem::mono(s[0], c);
            }
            t.expect(left == x && right == x, tag + " counit");
            t.expect(H->multiply_legs(H->antipode_on_leg(dx, 0)) == HElem::one() * H->counit(x) &&
                         H->multiply_legs(H->antipode_on_leg(dx, 1)) == HElem::one() * H->counit(x),
                     tag + " antipode");
            t.expect(coproduct_on_leg(*H, dx, 0) == coproduct_on_leg(*H, dx, 1), tag + " coassociativity");
            t.expect(H->coproduct_iter(H->mul(x, y), 1) == H->tensor_mul(dx, H->coproduct_iter(y, 1)),
                     tag + " Delta multiplicative");
            t.expect(H->counit(H->mul(x, y)) == H->counit(x) * H->counit(y), tag + " counit multiplicative");
        }
    }
    return {t.pass, std::to_string(t.trials) + " checks on PBW degree <= 4 elements" + t.failures()};
}

Outcome virasoro_validity() {
    const Builtin b = builtin("virasoro");
    const bool skew = skew_check(b.algebra->bracket).empty();
    const bool lie = check_lie(*b.algebra).pass();
    return {skew && lie, std::string("skew ") + (skew ? "ok" : "fails") + ", Jacobi " + (lie ? "ok" : "fails")};
}

Outcome pc_vs_nr(uint64_t seed) {
    std::vector<QuasiTwilled> cases;
    for (const auto& e : zoo_structures()) cases.push_back(e.S);
    for (const auto& n : builtin_names())
        if (auto b = builtin(n); b.structure) cases.push_back(*b.structure);
    std::mt19937_64 rng(seed);
    HopfPtr H = hopf_polynomial();
    ModulePtr g = make_module(H, "g", {"x"}), h = make_module(H, "h", {"v"});
    for (int trial = 0; trial < 50; ++trial) {
        QuasiTwilled S = random_structure(rng, g, h, 3);
        // Dropping components makes a share of the samples satisfy every condition.
        if (trial % 3 == 0)
            S = make_quasi_twilled(g, h, pi_map(S), {1, 1, true, {}}, {0, 2, true, {}}, {1, 1, false, {}}, {2, 0, true, {}});
        if (trial % 3 == 1)
            S = make_quasi_twilled(g, h, {2, 0, false, {}}, {1, 1, true, {}}, mu_map(S), eta_map(S), {2, 0, true, {}});
        cases.push_back(S);
    }
    Tally t;
    int passing = 0;
    for (size_t i = 0; i < cases.size(); ++i) {
        const PCReport pc = check_pc(cases[i]);
        const MCReport mc = check_mc_omega(cases[i]);
        const std::string tag = "case " + std::to_string(i);
        passing += pc.pass();
        t.expect(pc.pass() == mc.pass(), tag + " verdicts differ");
        t.expect(mc.table_ok, tag + " [Omega,Omega] != -2 PC residual on some region");
        t.expect(mc.bullets_ok, tag + " bullet expression mismatch");
        for (const auto& r : mc.regions)
            t.expect(pc.label_pass(r.label) == r.bracket_zero, tag + " PC" + std::to_string(r.label) + " vs bidegree " + r.bidegree);
    }
    return {t.pass, std::to_string(cases.size()) + " structures, " + std::to_string(passing) + " satisfy PC" + t.failures()};
}

Outcome twist_closed_forms(uint64_t seed) {
    std::mt19937_64 rng(seed);
    Tally t;
    int max_terms = 0;
    const auto zoo = zoo_structures();
    for (const auto& e : zoo) {
        for (int trial = 0; trial < 20; ++trial) {
            const HModuleMap D = random_map(rng, e.S.g, e.S.h, 1), T = random_map(rng, e.S.h, e.S.g, 1);
            try {
                const TwistSeries s1 = exp_twist(e.S, D, MapKind::TypeI), s2 = exp_twist(e.S, T, MapKind::TypeII);
                max_terms = std::max({max_terms, s1.terms, s2.terms});
                t.expect(s1.agree() && s2.agree(), e.name + " series != conjugation");
                t.expect(s1.terms <= 4 && s2.terms <= 4, e.name + " more than 4 terms");
            } catch (const InternalError& err) {
                t.expect(false, e.name + " " + err.what());
            }
            t.expect(twist1(e.S, D).matches_exp, e.name + " type I closed form");
            t.expect(twist2(e.S, T).matches_exp, e.name + " type II closed form");
        }
    }
    return {t.pass, std::to_string(zoo.size()) + " structures x 20 map pairs, at most " + std::to_string(max_terms) +
                        " nonzero terms" + t.failures()};
}

HModuleMap scalar_map(const ModulePtr& from, const ModulePtr& to, const Q& c) {
    HModuleMap m = HModuleMap::zero(from, to);
    for (int i = 0; i < std::min(from->rank(), to->rank()); ++i) m.matrix[i][i] = HElem::one() * c;
    return m;
}

Outcome dictionary(uint64_t seed, bool graph_only) {
    std::mt19937_64 rng(seed);
    Tally t;
    int zero_hits = 0;
    for (OperatorKind k : dictionary_kinds()) {
        const KindDemo d = demo(k);
        const QuasiTwilled S = build(d.in);
        const bool type1 = map_kind(k) == MapKind::TypeI;
        if (graph_only && !type1) continue;
        const auto maps = sweep_maps(rng, d.in, d.valid_map, 21);
        for (size_t i = 0; i < maps.size(); ++i) {
            const DictionaryReport r = dictionary_check(d.in, S, maps[i]);
            const std::string tag = to_string(k) + " map " + std::to_string(i);
            if (graph_only) {
                const GraphReport g = graph_check(S, maps[i]);
                t.expect(g.closed == r.dmap_zero && g.residual.values == dmap1_residual(S, maps[i]).values, tag);
                continue;
            }
            zero_hits += r.op_zero;
            t.expect(r.agree(), tag + " verdicts differ");
            if (i == 0) t.expect(r.op_zero, tag + " demo map fails its identity");
        }
    }
    if (graph_only) return {t.pass, std::to_string(t.trials) + " type I trials" + t.failures()};

    // D = c id on Vir (+)_M Vir of weight p: a modified r-matrix iff c^2 = p.
    const std::vector<Q> cs = {Q(-3), Q(-2), Q(-1), Q(-1, 2), Q(0), Q(1, 2), Q(1), Q(2), Q(3)};
    for (const Q p : {Q(0), Q(1), Q(4), Q(9), Q(2), Q(1, 4)}) {
        KindDemo d = demo(OperatorKind::ModifiedR);
        d.in.p = p;
        const QuasiTwilled S = build(d.in);
        for (const Q& c : cs) {
            const DictionaryReport r = dictionary_check(d.in, S, scalar_map(d.in.g.M, d.in.g.M, c));
            t.expect(r.op_zero == (c * c == p) && r.agree(), "modified r p=" + format_rational(p) + " c=" + format_rational(c));
        }
    }
    // T = c id is a Reynolds operator as printed iff c in {0, -1}.
    {
        const KindDemo d = demo(OperatorKind::Reynolds);
        const QuasiTwilled S = build(d.in);
        for (const Q& c : cs) {
            const DictionaryReport r = dictionary_check(d.in, S, scalar_map(d.in.g.M, d.in.g.M, c));
            t.expect(r.op_zero == (c == 0 || c == -1) && r.agree(), "Reynolds c=" + format_rational(c));
        }
    }
    return {t.pass, std::to_string(t.trials) + " trials over " + std::to_string(dictionary_kinds().size()) +
                        " kinds, " + std::to_string(zero_hits) + " sweep maps satisfy their identity" + t.failures()};
}

Outcome linf(uint64_t seed) {
    std::mt19937_64 rng(seed);
    Tally t;
    int checked = 0;
    const auto zoo = zoo_structures();
    for (const auto& e : zoo) {
        for (MapKind kind : {MapKind::TypeI, MapKind::TypeII}) {
            const LInfOperators ops = kind == MapKind::TypeI ? curved_l_type1(e.S) : curved_l_type2(e.S);
            std::vector<Cochain> samples;
            for (int a : {1, 2, 1, 2}) samples.push_back(random_k_element(rng, e.S, kind, a, 1));
            const LInfReport r = linf_jacobi_check(ops, 4, samples);
            checked += r.checked;
            t.expect(r.pass(), e.name + (kind == MapKind::TypeI ? " type I" : " type II"));
        }
    }
    return {t.pass, std::to_string(zoo.size()) + " structures, " + std::to_string(checked) + " identities" + t.failures()};
}

Outcome cohomology(uint64_t seed, std::string& sign_note) {
    std::mt19937_64 rng(seed);
    Tally t;
    int shifted = 0, classical = 0, n = 0;
    for (const auto& e : zoo_structures()) {
        const SignSelection sel = select_sign(e.S, e.map, e.kind, rng);
        shifted += sel.shifted_ok;
        classical += sel.classical_ok;
        ++n;
        const CEComplex C = ce_complex(e.S, e.map, e.kind, CESign::Classical);
        t.expect(check_d_squared(C, rng, 1, 3), e.name + " d o d != 0 at p = 1");
        for (int p : {1, 2})
            for (int s = 0; s < 2; ++s)
                t.expect(consistency_l1_vs_d(C, random_ce_cochain(rng, C, p, 1)).equal,
                         e.name + " l1 != (-1)^(p-1) d at p = " + std::to_string(p));
    }
    sign_note = "CE sign: classical (valid on " + std::to_string(classical) + "/" + std::to_string(n) +
                " structures), shifted (valid on " + std::to_string(shifted) + "/" + std::to_string(n) + ")";
    return {t.pass, std::to_string(n) + " structures under the classical sign" + t.failures()};
}

Outcome twisted_mc(uint64_t seed) {
    std::mt19937_64 rng(seed);
    Tally t;
    int vanish[2] = {0, 0}, total[2] = {0, 0};
    const auto zoo = zoo_structures();
    for (MapKind kind : {MapKind::TypeI, MapKind::TypeII}) {
        std::vector<const ZooEntry*> es;
        for (const auto& e : zoo)
            if (e.kind == kind) es.push_back(&e);
        const int ki = kind == MapKind::TypeI ? 0 : 1;
        for (int trial = 0; trial < 20; ++trial) {
            const ZooEntry& e = *es[trial % es.size()];
            const bool type1 = kind == MapKind::TypeI;
            const ModulePtr from = type1 ? e.S.g : e.S.h, to = type1 ? e.S.h : e.S.g;
            // Multiples of the map hit both outcomes; random perturbations mostly break the identity.
            static const Q scales[] = {Q(0), Q(-2), Q(-1), Q(1)};
            const HModuleMap P = trial % 5 == 4 ? random_map(rng, from, to, 1) : e.map * scales[trial % 5 % 4];
            const LInfOperators ops = type1 ? twisted_l_type1(e.S, e.map) : twisted_l_type2(e.S, e.map);
            const Cochain twisted = mc_residual(ops, lift_map(e.S.G, P, type1));
            const ComponentMap direct = type1 ? dmap1_residual(e.S, e.map + P) : dmap2_residual(e.S, e.map + P);
            ++total[ki];
            vanish[ki] += direct.values.empty();
            t.expect(twisted.is_zero() == direct.values.empty(), e.name + " trial " + std::to_string(trial));
            t.expect(twisted == lift(e.S.G, direct), e.name + " residuals differ, trial " + std::to_string(trial));
        }
        t.expect(vanish[ki] > 0 && vanish[ki] < total[ki], std::string(type_name(kind)) + " sample hits one outcome only");
    }
    return {t.pass, "type I: " + std::to_string(vanish[0]) + "/" + std::to_string(total[0]) + " vanish, type II: " +
                        std::to_string(vanish[1]) + "/" + std::to_string(total[1]) + " vanish" + t.failures()};
}

Outcome rank2(uint64_t seed) {
    const Rank2Report r = rank2_search(2, seed);
    std::map<std::string, int> counts;
    std::string example;
    for (const auto& f : r.families) {
        const std::string key = std::string(f.mu_virasoro ? "mu=Vir " : "mu=0 ") + to_string(f.type);
        ++counts[key];
        if (!f.mu_virasoro && f.type == Rank2Type::Other && example.empty()) {
            for (const auto& [tuple, v] : rho_map(f.sample).values) example = "rho = " + format_pt(f.sample.H(), *f.sample.h, v);
            for (const auto& [tuple, v] : pi_map(f.sample).values) example += ", pi = " + format_pt(f.sample.H(), *f.sample.g, v);
        }
    }
    std::string d = std::to_string(r.unknowns.size()) + " unknowns, " + std::to_string(r.equations) + " equations, " +
                    std::to_string(r.families.size()) + " families (";
    bool first = true;
    for (const auto& [k, n] : counts) {
        d += (first ? "" : ", ") + k + ": " + std::to_string(n);
        first = false;
    }
    d += "); eta-only family " + std::string(r.eta_only_matches ? "recovered" : "NOT recovered");
    d += r.complete() ? "; search complete" : "; search INCOMPLETE";
    if (!r.only_known_types()) d += "; outside Types (i)-(iii): " + example;
    return {r.only_known_types() && r.eta_only_matches && r.complete(), d};
}

Outcome cli_contract() {
    const fs::path dir = fs::temp_directory_path() / ("pa_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto path = [&](const std::string& n) { return (dir / n).string(); };
    auto run = [](const std::vector<std::string>& args, std::string* out = nullptr) {
        std::ostringstream o, e;
        const int code = run_cli(args, o, e);
        if (out) *out = o.str();
        return code;
    };
    Tally t;
    for (const auto& n : builtin_names()) {
        std::string emitted;
        const int code = run({"zoo", n}, &emitted);
        const Builtin b = builtin(n);
        t.expect(code == (b.valid ? 0 : 1), n + " zoo exit code");
        const io::json j = io::json::parse(emitted);
        const std::string again = b.structure ? io::dump(io::structure_to_json(io::structure_from_json(j, false)))
                                              : io::dump(io::algebra_to_json(io::algebra_from_json(j)));
        t.expect(again == emitted, n + " round trip");
    }
    run({"zoo", "rank2_type_ii", "-o", path("rank2_type_ii.json")});
    t.expect(run({"check-qt", path("rank2_type_ii.json")}) == 0, "check-qt Type (ii)");
    run({"zoo", "modified_r_demo", "-o", path("modified_r_p4.json"), "--map-out", path("d_eq_2id.json")});
    t.expect(run({"dmap", "--type", "I", path("modified_r_p4.json"), path("d_eq_2id.json")}) == 0, "D = 2 id");
    io::json m = io::read_file(path("d_eq_2id.json"));
    m["matrix"][0][0][0]["c"] = "1";
    io::write_file(path("d_eq_id.json"), m);
    std::string rep;
    t.expect(run({"--json", "dmap", "--type", "I", path("modified_r_p4.json"), path("d_eq_id.json")}, &rep) == 1, "D = id");
    {
        const HopfPtr H = hopf_polynomial();
        const PTElem vir = pt_from_raw(*H, {MultiIndex::unit(0), {}}, {}, 0) - pt_from_raw(*H, {{}, MultiIndex::unit(0)}, {}, 0);
        const io::json res = io::json::parse(rep)["checks"][0]["residuals"];
        t.expect(res.size() == 1 && io::pt_from_json(*H, res[0]["value"], 2, 1) == vir * Q(3), "D = id residual is 3[x*x]");
    }
    io::json s = io::read_file(path("rank2_type_ii.json"));
    s["maps"]["eta"][0]["value"][0]["c"] = "1/0";
    io::write_file(path("den0.json"), s);
    t.expect(run({"check-qt", path("den0.json")}) == 2, "den = 0");
    t.expect(run({"check-qt", path("absent.json")}) == 2, "missing file");
    t.expect(run({"zoo", "rank2_type_iii", "-o", path("t3.json")}) == 1 && run({"check-qt", path("t3.json")}) == 1, "Type (iii) as displayed");
    t.expect(run({"twist", "--type", "III", "a", "b"}) == 2, "bad flag");
    for (OperatorKind k : dictionary_kinds()) {
        run({"zoo", "--ingredients", to_string(k), "-o", path("in.json"), "--map-out", path("map.json")});
        t.expect(run({"dictionary", "--kind", to_string(k), path("in.json"), path("map.json")}) == 0, to_string(k) + " dictionary");
    }
    const std::vector<std::vector<std::string>> cmds = {
        {"--json", "check-qt", path("rank2_type_ii.json")},
        {"--json", "--seed", "3", "linf", "--type", "I", path("modified_r_p4.json"), "--max-arity", "3"},
        {"--json", "dmap", "--type", "I", path("modified_r_p4.json"), path("d_eq_id.json")},
        {"--json", "cohomology", "--type", "I", path("modified_r_p4.json"), path("d_eq_2id.json"), "--degree", "1", "--max-pbw", "1"}};
    for (const auto& c : cmds) {
        std::string a, b;
        run(c, &a);
        run(c, &b);
        t.expect(a == b && !a.empty(), "nondeterministic report: " + c[c.size() > 2 ? 2 : 1]);
    }
    fs::remove_all(dir);
    return {t.pass, std::to_string(t.trials) + " contract checks" + t.failures()};
}

// Conventions this build validates: PC flags that make [Omega,Omega] match the PC residuals region by
// region, and which type II twist form matches the exponential series.
std::string conventions_note(uint64_t seed) {
    std::mt19937_64 rng(seed);
    HopfPtr H = hopf_polynomial();
    ModulePtr g = make_module(H, "g", {"x", "y"}), h = make_module(H, "h", {"v", "w"});
    std::vector<QuasiTwilled> samples;
    for (int i = 0; i < 4; ++i) samples.push_back(random_structure(rng, g, h, 1));
    std::string valid;
    for (const PCFlags& f : all_pc_flags()) {
        bool ok = true;
        for (const auto& S : samples) ok = ok && check_mc_omega(S, f).table_ok;
        if (ok) valid += (valid.empty() ? "" : " | ") + f.str();
    }
    int printed = 0, reordered = 0;
    for (const auto& S : samples) {
        const HModuleMap T = random_map(rng, S.h, S.g, 1);
        printed += twist2(S, T, Twist2Form::Printed).matches_exp;
        reordered += twist2(S, T, Twist2Form::Reordered).matches_exp;
    }
    return "PC flags matching NR: " + (valid.empty() ? std::string("none") : valid) + "\ntwist2 closed form: reordered " +
           std::to_string(reordered) + "/4, as printed " + std::to_string(printed) + "/4 match the series";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance suite"};
    uint64_t seed = 20240601;
    std::vector<int> only, expect_fail;
    app.add_option("--seed", seed)->capture_default_str();
    app.add_option("--only", only, "Run only these criteria");
    app.add_option("--expect-fail", expect_fail, "Criteria known to fail; exit 0 iff exactly these fail");
    CLI11_PARSE(app, argc, argv);

    std::string sign_note;
    const std::vector<Criterion> all = {
        {1, "Hopf axioms over Q[d] and U(b2)", 5, [&] { return hopf_axioms(seed); }},
        {2, "Virasoro skew-symmetry and Jacobi", 1, [] { return virasoro_validity(); }},
        {3, "PC <=> [Omega,Omega] = 0, region by region", 60, [&] { return pc_vs_nr(seed); }},
        {4, "twist closed forms = exponential series", 30, [&] { return twist_closed_forms(seed); }},
        {5, "operator identity <=> deformation map <=> MC", 60, [&] { return dictionary(seed, false); }},
        {6, "graph criterion", 10, [&] { return dictionary(seed, true); }},
        {7, "L-infinity identities up to arity 4", 120, [&] { return linf(seed); }},
        {8, "d o d = 0 and l1 = (-1)^(p-1) d", 60, [&] { return cohomology(seed, sign_note); }},
        {9, "twisted MC <=> MC of the sum", 30, [&] { return twisted_mc(seed); }},
        {10, "rank-2 classification at degree <= 2", 300, [&] { return rank2(seed); }},
        {11, "CLI contract", 10, [] { return cli_contract(); }},
    };

    std::cout << "seed " << seed << "\n" << conventions_note(seed) << "\n";
    std::set<int> failed;
    for (const auto& c : all) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.limit_s;
        const bool pass = o.pass && in_time;
        if (!pass) failed.insert(c.id);
        std::printf("criterion %2d %s  %s: %s [%.2f s, limit %.0f s%s]\n", c.id, pass ? "PASS" : "FAIL", c.name.c_str(),
                    o.detail.c_str(), secs, c.limit_s, in_time ? "" : ", TOO SLOW");
        if (c.id == 8 && !sign_note.empty()) std::cout << "             " << sign_note << "\n";
        std::cout.flush();
    }
    const std::set<int> expected(expect_fail.begin(), expect_fail.end());
    std::cout << "failed:";
    for (int f : failed) std::cout << " " << f;
    if (failed.empty()) std::cout << " none";
    std::cout << "\n";
    if (!expected.empty()) {
        std::set<int> want;
        for (int e : expected)
            if (only.empty() || std::find(only.begin(), only.end(), e) != only.end()) want.insert(e);
        std::cout << "expected failures:";
        for (int e : want) std::cout << " " << e;
        std::cout << (failed == want ? " (match)" : " (MISMATCH)") << "\n";
        return failed == want ? 0 : 1;
    }
    return failed.empty() ? 0 : 1;
}
