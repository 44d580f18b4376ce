#include "pa/zoo.hpp"

#include <algorithm>
#include <map>

namespace pa {

namespace {

const std::map<OperatorKind, std::string>& kind_names() {
    static const std::map<OperatorKind, std::string> names = {
        {OperatorKind::ModifiedR, "ModifiedR"},
        {OperatorKind::CrossedHom, "CrossedHom"},
        {OperatorKind::Derivation, "Derivation"},
        {OperatorKind::Homomorphism, "Homomorphism"},
        {OperatorKind::RelativeRB, "RelativeRB"},
        {OperatorKind::OOperator, "OOperator"},
        {OperatorKind::TwistedRB, "TwistedRB"},
        {OperatorKind::Reynolds, "Reynolds"},
        {OperatorKind::ReynoldsClassical, "ReynoldsClassical"},
        {OperatorKind::MatchedPairDef, "MatchedPairDef"},
    };
    return names;
}

ModulePtr copy_module(const ModulePtr& m, const std::string& name) { return make_module(m->H, name, m->basis); }

LiePseudoalgebra rehome(const LiePseudoalgebra& L, const ModulePtr& M) {
    return {M, Cochain::from_full(2, M, M, L.bracket.values)};
}

ComponentMap pi_of(const LiePseudoalgebra& g) { return {2, 0, false, g.bracket.sorted_values()}; }
ComponentMap mu_of(const LiePseudoalgebra& h, const Q& p = 1) {
    ComponentMap m{0, 2, true, {}};
    if (p == 0) return m;
    for (const auto& [t, v] : h.bracket.sorted_values()) m.values.emplace(t, v * p);
    return m;
}

std::string failing_labels(const PCReport& rep) {
    std::string s;
    for (int k = 1; k <= 8; ++k)
        if (!rep.label_pass(k)) s += " PC" + std::to_string(k);
    return s;
}

void require_lie(const LiePseudoalgebra& L, const char* what) {
    CheckReport r = check_lie(L);
    if (!r.pass())
        throw ValidationError(std::string(what) + " is not a Lie pseudoalgebra (" + r.failures.front().label + " fails)");
}

QuasiTwilled validated(QuasiTwilled S, const char* what) {
    PCReport rep = check_pc(S);
    if (!rep.pass()) throw ValidationError(std::string(what) + " fails:" + failing_labels(rep));
    return S;
}

// Σ over stored (i, j) of (a_i ⊗ b_j)·v(i, j): a bilinear map on two module elements.
PTElem bil(const HopfAlgebra& H, const ValueTable& tab, const MElem& a, const MElem& b) {
    PTElem out(2);
    for (const auto& [t, v] : tab) {
        const HElem& ha = a.coords[t[0]];
        const HElem& hb = b.coords[t[1]];
        if (ha.is_zero() || hb.is_zero()) continue;
        HTensor c;
        c.arity = 2;
        for (const auto& [ma, qa] : ha.terms)
            for (const auto& [mb, qb] : hb.terms) c.terms.push_back({{ma, mb}, qa * qb});
        c.normalize();
        out = out + act(H, c, v);
    }
    return out;
}

ValueTable full_table(const ComponentMap& c, const ModulePtr& src, const ModulePtr& dst) {
    if (c.k + c.l == 2 && (c.k == 2 || c.l == 2)) return Cochain::from_values(2, src, dst, c.values).values;
    return c.values;
}

MElem image(const HModuleMap& m, int i) { return MElem{m.matrix[i]}; }

void check_map(const Ingredients& in, const HModuleMap& m) {
    const bool type1 = map_kind(in.kind) == MapKind::TypeI;
    const bool single = in.kind == OperatorKind::ModifiedR || in.kind == OperatorKind::Reynolds ||
                        in.kind == OperatorKind::ReynoldsClassical;
    const int ng = in.g.M->rank();
    const int nh = single ? ng : in.h.M->rank();
    const int from = type1 ? ng : nh, to = type1 ? nh : ng;
    bool ok = static_cast<int>(m.matrix.size()) == from;
    for (const auto& row : m.matrix) ok = ok && static_cast<int>(row.size()) == to;
    if (!ok) throw InputError(type1 ? "map must go from g to h" : "map must go from h to g");
}

PTElem vir_value(const HopfAlgebra& H) {
    return pt_from_raw(H, {MultiIndex::unit(0), MultiIndex()}, {}, 0) -
           pt_from_raw(H, {MultiIndex(), MultiIndex::unit(0)}, {}, 0);
}

HModuleMap scalar_map(const ModulePtr& from, const ModulePtr& to, const Q& c) {
    HModuleMap m = HModuleMap::zero(from, to);
    if (c != 0)
        for (int i = 0; i < std::min(from->rank(), to->rank()); ++i) m.matrix[i][i] = HElem::one() * c;
    return m;
}

}  // namespace

std::string to_string(OperatorKind k) { return kind_names().at(k); }

OperatorKind operator_kind_from_string(const std::string& s) {
    for (const auto& [k, n] : kind_names())
        if (n == s) return k;
    throw InputError("unknown operator kind '" + s + "'");
}

MapKind map_kind(OperatorKind k) {
    switch (k) {
        case OperatorKind::ModifiedR:
        case OperatorKind::CrossedHom:
        case OperatorKind::Derivation:
        case OperatorKind::Homomorphism: return MapKind::TypeI;
        default: return MapKind::TypeII;
    }
}

const std::vector<OperatorKind>& dictionary_kinds() {
    static const std::vector<OperatorKind> v = {
        OperatorKind::ModifiedR,  OperatorKind::CrossedHom, OperatorKind::Derivation,
        OperatorKind::Homomorphism, OperatorKind::RelativeRB, OperatorKind::OOperator,
        OperatorKind::TwistedRB,  OperatorKind::Reynolds,   OperatorKind::MatchedPairDef};
    return v;
}

const std::vector<OperatorKind>& all_operator_kinds() {
    static const std::vector<OperatorKind> v = [] {
        std::vector<OperatorKind> r = dictionary_kinds();
        r.insert(r.end() - 1, OperatorKind::ReynoldsClassical);
        return r;
    }();
    return v;
}

ComponentMap adjoint_action(const LiePseudoalgebra& g) { return {1, 1, true, g.bracket.values}; }

ComponentMap flip_eta(const HopfAlgebra& H, const ComponentMap& eta) {
    ComponentMap out{1, 1, false, {}};
    for (const auto& [t, v] : eta.values) {
        PTElem w = -permute(H, {1, 0}, v);
        if (!w.is_zero()) out.values[{t[1], t[0]}] = w;
    }
    return out;
}

QuasiTwilled modified_r_double(const LiePseudoalgebra& g, const Q& p) {
    require_lie(g, "g");
    ModulePtr gm = copy_module(g.M, "g"), hm = copy_module(g.M, "h");
    LiePseudoalgebra h = rehome(g, hm);
    ComponentMap theta{2, 0, true, {}};
    if (p != 0)
        for (const auto& [t, v] : g.bracket.sorted_values()) theta.values.emplace(t, v * p);
    return validated(make_quasi_twilled(gm, hm, {2, 0, false, {}}, {1, 1, true, {}}, mu_of(h),
                                        {1, 1, false, g.bracket.values}, theta, "modified_r"),
                     "g (+)_M g");
}

QuasiTwilled action_algebra(const LiePseudoalgebra& g, const LiePseudoalgebra& h, const ComponentMap& rho,
                            const Q& p) {
    require_lie(g, "g");
    require_lie(h, "h");
    // The action axioms are PC5 (representation) and PC7 (ρ acts by derivations) of the assembled structure.
    return validated(make_quasi_twilled(g.M, h.M, pi_of(g), rho, mu_of(h, p), {1, 1, false, {}}, {2, 0, true, {}},
                                        "action"),
                     "action");
}

QuasiTwilled semidirect(const LiePseudoalgebra& g, const ModulePtr& M, const ComponentMap& rho) {
    require_lie(g, "g");
    return validated(make_quasi_twilled(g.M, M, pi_of(g), rho, {0, 2, true, {}}, {1, 1, false, {}},
                                        {2, 0, true, {}}, "semidirect"),
                     "representation");
}

QuasiTwilled direct_product(const LiePseudoalgebra& g, const LiePseudoalgebra& h) {
    require_lie(g, "g");
    require_lie(h, "h");
    return make_quasi_twilled(g.M, h.M, pi_of(g), {1, 1, true, {}}, mu_of(h), {1, 1, false, {}}, {2, 0, true, {}},
                              "direct_product");
}

QuasiTwilled cocycle_extension(const LiePseudoalgebra& g, const ModulePtr& M, const ComponentMap& rho,
                               const ComponentMap& omega) {
    require_lie(g, "g");
    semidirect(g, M, rho);
    // With ρ a representation, the remaining condition PC3 is the cocycle condition on ω.
    return validated(make_quasi_twilled(g.M, M, pi_of(g), rho, {0, 2, true, {}}, {1, 1, false, {}}, omega,
                                        "cocycle_extension"),
                     "2-cocycle");
}

QuasiTwilled adjoint_extension(const LiePseudoalgebra& g, const Q& c) {
    ModulePtr gm = copy_module(g.M, "g"), hm = copy_module(g.M, "h");
    LiePseudoalgebra gg = rehome(g, gm);
    ComponentMap omega{2, 0, true, {}};
    if (c != 0)
        for (const auto& [t, v] : g.bracket.sorted_values()) omega.values.emplace(t, v * c);
    QuasiTwilled S = cocycle_extension(gg, hm, adjoint_action(gg), omega);
    S.name = "adjoint_extension";
    return S;
}

QuasiTwilled matched_pair(const LiePseudoalgebra& g, const LiePseudoalgebra& h, const ComponentMap& rho,
                          const ComponentMap& eta_hg) {
    require_lie(g, "g");
    require_lie(h, "h");
    return build_matched_pair(g, h, rho, flip_eta(*g.M->H, eta_hg), "matched_pair");
}

QuasiTwilled build(const Ingredients& in) {
    switch (in.kind) {
        case OperatorKind::ModifiedR: return modified_r_double(in.g, in.p);
        case OperatorKind::CrossedHom:
        case OperatorKind::RelativeRB: return action_algebra(in.g, in.h, in.rho, in.p);
        case OperatorKind::Derivation:
        case OperatorKind::OOperator: return semidirect(in.g, in.h.M, in.rho);
        case OperatorKind::Homomorphism: return direct_product(in.g, in.h);
        case OperatorKind::TwistedRB: return cocycle_extension(in.g, in.h.M, in.rho, in.omega);
        case OperatorKind::Reynolds: return adjoint_extension(in.g, 1);
        case OperatorKind::ReynoldsClassical: return adjoint_extension(in.g, -1);
        case OperatorKind::MatchedPairDef: return matched_pair(in.g, in.h, in.rho, in.eta);
    }
    throw InternalError("build: unhandled kind");
}

ValueTable operator_residual(const Ingredients& in, const HModuleMap& m) {
    check_map(in, m);
    const HopfAlgebra& H = *in.g.M->H;
    const ValueTable& bg = in.g.bracket.values;
    const ModulePtr hm = in.h.M ? in.h.M : in.g.M;
    const ValueTable bh = in.h.M ? in.h.bracket.values : ValueTable{};
    const ValueTable rho = in.rho.values;
    const ValueTable eta = in.eta.values;
    const ValueTable omega = in.omega.values.empty() ? ValueTable{} : full_table(in.omega, in.g.M, hm);
    auto sw = [&](const PTElem& e) { return permute(H, {1, 0}, e); };
    auto M = [&](const PTElem& e) { return apply_module_map(H, m.matrix, e); };

    const int n = static_cast<int>(m.matrix.size());
    ValueTable out;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const MElem a = MElem::basis(n, i), b = MElem::basis(n, j);
            const MElem Ma = image(m, i), Mb = image(m, j);
            PTElem r;
            switch (in.kind) {
                case OperatorKind::ModifiedR:
                    r = bil(H, bg, Ma, Mb) - M(bil(H, bg, Ma, b) + bil(H, bg, a, Mb)) + bil(H, bg, a, b) * in.p;
                    break;
                case OperatorKind::CrossedHom:
                    r = M(bil(H, bg, a, b)) - bil(H, rho, a, Mb) + sw(bil(H, rho, b, Ma)) - bil(H, bh, Ma, Mb) * in.p;
                    break;
                case OperatorKind::Derivation:
                    r = M(bil(H, bg, a, b)) - bil(H, rho, a, Mb) + sw(bil(H, rho, b, Ma));
                    break;
                case OperatorKind::Homomorphism: r = M(bil(H, bg, a, b)) - bil(H, bh, Ma, Mb); break;
                case OperatorKind::RelativeRB:
                    r = bil(H, bg, Ma, Mb) - M(bil(H, rho, Ma, b) - sw(bil(H, rho, Mb, a)) + bil(H, bh, a, b) * in.p);
                    break;
                case OperatorKind::OOperator:
                    r = bil(H, bg, Ma, Mb) - M(bil(H, rho, Ma, b) - sw(bil(H, rho, Mb, a)));
                    break;
                case OperatorKind::TwistedRB:
                    r = bil(H, bg, Ma, Mb) - M(bil(H, rho, Ma, b) - sw(bil(H, rho, Mb, a)) + bil(H, omega, Ma, Mb));
                    break;
                case OperatorKind::Reynolds:
                case OperatorKind::ReynoldsClassical: {
                    const Q s = in.kind == OperatorKind::Reynolds ? 1 : -1;
                    r = bil(H, bg, Ma, Mb) - M(bil(H, bg, Ma, b) + bil(H, bg, a, Mb) + bil(H, bg, Ma, Mb) * s);
                    break;
                }
                case OperatorKind::MatchedPairDef:
                    r = bil(H, bg, Ma, Mb) + bil(H, eta, a, Mb) - sw(bil(H, eta, b, Ma)) -
                        M(bil(H, bh, a, b) + bil(H, rho, Ma, b) - sw(bil(H, rho, Mb, a)));
                    break;
            }
            if (!r.is_zero()) out[{i, j}] = r;
        }
    return out;
}

DictionaryReport dictionary_check(const Ingredients& in, const HModuleMap& m) {
    return dictionary_check(in, build(in), m);
}

DictionaryReport dictionary_check(const Ingredients& in, const QuasiTwilled& S, const HModuleMap& m) {
    DictionaryReport rep;
    rep.kind = in.kind;
    rep.op = operator_residual(in, m);
    const bool type1 = map_kind(in.kind) == MapKind::TypeI;
    rep.dmap = type1 ? dmap1_residual(S, m) : dmap2_residual(S, m);
    rep.op_zero = rep.op.empty();
    rep.dmap_zero = rep.dmap.values.empty();
    rep.mc_zero = (type1 ? mc_residual_type1(S, m) : mc_residual_type2(S, m)).is_zero();
    rep.graph_closed = type1 && graph_check(S, m).closed;
    ValueTable sorted;
    for (const auto& [t, v] : rep.op)
        if (t[0] <= t[1]) sorted.emplace(t, v);
    rep.same_values = sorted == rep.dmap.values;
    return rep;
}

LiePseudoalgebra virasoro(const HopfPtr& H, const std::string& name) {
    ModulePtr M = make_module(H, name, {"x"});
    return {M, Cochain::from_values(2, M, M, {{{0, 0}, vir_value(*H)}})};
}

LiePseudoalgebra current_algebra(const HopfPtr& H, const BaseLieAlgebra& a, const std::string& name) {
    ModulePtr M = make_module(H, name, a.names);
    ValueTable vals;
    for (int i = 0; i < a.dim; ++i)
        for (int j = i + 1; j < a.dim; ++j) {
            PTElem v(2);
            for (const auto& [k, c] : a.bracket[i][j]) v = v + pt_from_raw(*H, {{}, {}}, {}, k, c);
            if (!v.is_zero()) vals[{i, j}] = v;
        }
    return {M, Cochain::from_values(2, M, M, vals)};
}

BaseLieAlgebra sl2() {
    BaseLieAlgebra a = BaseLieAlgebra::abelian(3, {"e", "f", "h"});
    a.set_bracket(0, 1, {{2, Q(1)}});
    a.set_bracket(2, 0, {{0, Q(2)}});
    a.set_bracket(2, 1, {{1, Q(-2)}});
    return a;
}

BaseLieAlgebra two_dim_nonabelian() {
    BaseLieAlgebra a = BaseLieAlgebra::abelian(2, {"a", "b"});
    a.set_bracket(0, 1, {{1, Q(1)}});
    return a;
}

KindDemo demo(OperatorKind k) {
    HopfPtr H = hopf_polynomial();
    LiePseudoalgebra g = virasoro(H, "g"), h = virasoro(H, "h");
    Ingredients in;
    in.kind = k;
    in.g = g;
    in.rho = adjoint_action(g);
    in.eta = {1, 1, false, {}};
    in.omega = {2, 0, true, {}};
    Q c = 0;
    HElem unit = HElem::one();
    switch (k) {
        case OperatorKind::ModifiedR: in.p = 4, c = 2; break;
        case OperatorKind::CrossedHom: in.h = h, in.p = 1, c = -1; break;
        case OperatorKind::Derivation: in.h = {h.M, Cochain(2, h.M, h.M)}; break;
        case OperatorKind::Homomorphism: in.h = h, in.rho = {1, 1, true, {}}, c = 1; break;
        case OperatorKind::RelativeRB: in.h = h, in.p = 1, c = -1; break;
        case OperatorKind::OOperator: in.h = {h.M, Cochain(2, h.M, h.M)}; break;
        case OperatorKind::TwistedRB:
            in.h = {h.M, Cochain(2, h.M, h.M)};
            in.omega.values[{0, 0}] = vir_value(*H) * 2;
            c = Q(-1, 2);
            break;
        case OperatorKind::Reynolds: c = -1; break;
        case OperatorKind::ReynoldsClassical: c = 1; break;
        case OperatorKind::MatchedPairDef: in.h = h, c = -1; break;
    }
    const bool single = k == OperatorKind::ModifiedR || k == OperatorKind::Reynolds ||
                        k == OperatorKind::ReynoldsClassical;
    ModulePtr other = single ? g.M : in.h.M;
    KindDemo d{in, map_kind(k) == MapKind::TypeI ? scalar_map(g.M, other, c) : scalar_map(other, g.M, c)};
    // The derivation x ↦ ∂x of Virasoro is inner-like and nonzero.
    if (k == OperatorKind::Derivation) d.valid_map.matrix[0][0] = HElem::mono(MultiIndex::unit(0));
    return d;
}

std::vector<HModuleMap> sweep_maps(std::mt19937_64& rng, const Ingredients& in, const HModuleMap& valid, int count) {
    const HopfAlgebra& H = *in.g.M->H;
    static const std::vector<Q> scalars = {Q(-2), Q(-1), Q(-1, 2), Q(0), Q(1, 2), Q(1), Q(2)};
    std::vector<HModuleMap> out;
    out.push_back(valid);
    std::uniform_int_distribution<size_t> pick(0, scalars.size() - 1);
    for (int k = 1; k < count; ++k) {
        HModuleMap m = HModuleMap::zero(valid.from, valid.to);
        const int rows = static_cast<int>(m.matrix.size());
        const int cols = rows ? static_cast<int>(m.matrix[0].size()) : 0;
        if (k % 3 == 1 && rows == cols) {
            m = scalar_map(valid.from, valid.to, scalars[pick(rng)]);
        } else {
            for (auto& row : m.matrix)
                for (auto& e : row) e = random_helem(rng, H, 1, 2);
            if (k % 3 == 0) m = m * Q(1, 4) + valid;
        }
        out.push_back(std::move(m));
    }
    return out;
}

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = {
        "virasoro",      "cur_sl2",        "cur_2dim_nonabelian", "rank2_type_i",  "rank2_type_ii",
        "rank2_type_iii", "modified_r_demo", "reynolds_demo"};
    return names;
}

Builtin builtin(const std::string& name) {
    HopfPtr H = hopf_polynomial();
    Builtin b;
    b.name = name;
    if (name == "virasoro") {
        b.description = "rank-1 Virasoro pseudoalgebra over Q[d], [x*x] = (d(x)1 - 1(x)d) (x)_H x";
        b.algebra = virasoro(H, "g");
        b.valid = check_lie(*b.algebra).pass();
        return b;
    }
    if (name == "cur_sl2") {
        b.description = "current pseudoalgebra Cur sl2 over Q[d]";
        b.algebra = current_algebra(H, sl2(), "g");
        b.valid = check_lie(*b.algebra).pass();
        return b;
    }
    if (name == "cur_2dim_nonabelian") {
        b.description = "current pseudoalgebra of [a,b] = b over U(b2), the 2-dim non-abelian enveloping algebra";
        b.algebra = current_algebra(hopf_two_dim_nonabelian(), two_dim_nonabelian(), "g");
        b.valid = check_lie(*b.algebra).pass();
        return b;
    }
    if (name.rfind("rank2_type_", 0) == 0) {
        // G = Hu ⊕ Hx with g = Hu, h = Hx abelian.
        ModulePtr g = make_module(H, "g", {"u"}), h = make_module(H, "h", {"x"});
        const PTElem vir = vir_value(*H);
        const PTElem one = pt_from_raw(*H, {{}, {}}, {}, 0);
        ComponentMap pi{2, 0, false, {}}, rho{1, 1, true, {}}, eta{1, 1, false, {}};
        if (name == "rank2_type_i") {
            b.description = "Type (i): Virasoro (+) abelian rank one";
            pi.values[{0, 0}] = vir;
        } else if (name == "rank2_type_ii") {
            b.description = "Type (ii): eta(u(x)x) = (1(x)1) (x)_H u";
            eta.values[{0, 0}] = one;
        } else if (name == "rank2_type_iii") {
            // α = b(C − (12)C) with b = 1 and C = −1⊗∂, so α = ∂⊗1 − 1⊗∂.
            b.description = "Type (iii) as displayed: pi = alpha, rho = bC, eta = C with b = 1, C = -1(x)d";
            const PTElem C = -pt_from_raw(*H, {{}, MultiIndex::unit(0)}, {}, 0);
            pi.values[{0, 0}] = vir;
            rho.values[{0, 0}] = C;
            eta.values[{0, 0}] = C;
        } else {
            throw InputError("unknown builtin '" + name + "'");
        }
        b.structure = make_quasi_twilled(g, h, pi, rho, {0, 2, true, {}}, eta, {2, 0, true, {}}, name);
        b.map = HModuleMap::zero(g, h);
        b.kind = MapKind::TypeI;
        b.valid = check_pc(*b.structure).pass();
        return b;
    }
    if (name == "modified_r_demo") {
        b.description = "Vir (+)_M Vir with p = 4 and the modified r-matrix D = 2 id";
        KindDemo d = demo(OperatorKind::ModifiedR);
        b.structure = build(d.in);
        b.map = d.valid_map;
        b.kind = MapKind::TypeI;
        return b;
    }
    if (name == "reynolds_demo") {
        b.description = "Vir ad-extension by its own bracket with the Reynolds operator T = -id";
        KindDemo d = demo(OperatorKind::Reynolds);
        b.structure = build(d.in);
        b.map = d.valid_map;
        b.kind = MapKind::TypeII;
        return b;
    }
    throw InputError("unknown builtin '" + name + "'");
}

std::vector<ZooEntry> zoo_structures() {
    std::vector<ZooEntry> out;
    for (OperatorKind k : all_operator_kinds()) {
        KindDemo d = demo(k);
        out.push_back({to_string(k), build(d.in), d.valid_map, map_kind(k)});
    }
    for (const std::string n : {"rank2_type_i", "rank2_type_ii"}) {
        Builtin b = builtin(n);
        out.push_back({n, *b.structure, *b.map, b.kind});
    }
    return out;
}

}  // namespace pa
