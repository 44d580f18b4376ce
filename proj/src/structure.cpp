#include "pa/structure.hpp"

#include <algorithm>

#include "pa/parallel.hpp"

namespace pa {

std::string PCFlags::str() const {
    std::string s = perm == PermConvention::Image ? "perm=image" : "perm=inverse";
    s += pc67 == PC67Variant::Printed23 ? ",pc67=(23)" : ",pc67=(123)";
    s += pc3 == PC3Sign::Printed ? ",pc3=printed" : ",pc3=proof";
    return s;
}

std::vector<PCFlags> all_pc_flags() {
    std::vector<PCFlags> out;
    for (auto p : {PermConvention::Inverse, PermConvention::Image})
        for (auto v : {PC67Variant::Printed23, PC67Variant::Proof123})
            for (auto s : {PC3Sign::Printed, PC3Sign::ProofExpansion}) out.push_back({p, v, s});
    return out;
}

std::vector<int> cycle123(PermConvention c) {
    std::vector<int> cyc = perm_from_cycle(3, {1, 2, 3});
    return c == PermConvention::Inverse ? cyc : perm_inverse(cyc);
}

PTElem jacobiator(const Cochain& b, const Tuple& t) {
    const HopfAlgebra& H = *b.target->H;
    const int x = t[0], y = t[1], z = t[2];
    PTElem r = compose_value(b, 1, b.at({y, z}), {x});
    r = r - compose_value(b, 0, b.at({x, y}), {z});
    r = r - permute(H, {1, 0, 2}, compose_value(b, 1, b.at({x, z}), {y}));
    return r;
}

CheckReport check_lie(const LiePseudoalgebra& L) {
    CheckReport rep;
    for (auto& v : skew_check(L.bracket)) rep.failures.push_back({"skew", v.tuple, v.residual});
    const auto triples = all_tuples(L.M->rank(), 3);
    std::vector<PTElem> jac(triples.size());
    parallel_for(triples.size(), [&](size_t i) { jac[i] = jacobiator(L.bracket, triples[i]); });
    for (size_t i = 0; i < triples.size(); ++i)
        if (!jac[i].is_zero()) rep.failures.push_back({"jacobi", triples[i], jac[i]});
    return rep;
}

Cochain QuasiTwilled::component(const std::string& n) const {
    if (n == "pi") return pi;
    if (n == "rho") return rho;
    if (n == "mu") return mu;
    if (n == "eta") return eta;
    if (n == "theta") return theta;
    throw InputError("unknown component " + n);
}

namespace {

void expect_shape(const ComponentMap& c, int k, int l, bool to_h, const char* what) {
    if (c.values.empty()) return;
    if (c.k != k || c.l != l || c.to_h != to_h) throw InputError(std::string("component ") + what + " has the wrong signature");
}

ComponentMap shaped(ComponentMap c, int k, int l, bool to_h) {
    c.k = k;
    c.l = l;
    c.to_h = to_h;
    return c;
}

}  // namespace

QuasiTwilled make_quasi_twilled(const ModulePtr& g, const ModulePtr& h, const ComponentMap& pi, const ComponentMap& rho,
                                const ComponentMap& mu, const ComponentMap& eta, const ComponentMap& theta,
                                std::string name, ModulePtr G) {
    expect_shape(pi, 2, 0, false, "pi");
    expect_shape(rho, 1, 1, true, "rho");
    expect_shape(mu, 0, 2, true, "mu");
    expect_shape(eta, 1, 1, false, "eta");
    expect_shape(theta, 2, 0, true, "theta");
    QuasiTwilled S;
    S.name = std::move(name);
    S.g = g;
    S.h = h;
    if (G && (G->split != g->rank() || G->rank() != g->rank() + h->rank()))
        throw InputError("module " + G->name + " is not g ⊞ h");
    S.G = G ? G : direct_sum(g, h);
    S.pi = lift(S.G, shaped(pi, 2, 0, false));
    S.rho = lift(S.G, shaped(rho, 1, 1, true));
    S.mu = lift(S.G, shaped(mu, 0, 2, true));
    S.eta = lift(S.G, shaped(eta, 1, 1, false));
    S.theta = lift(S.G, shaped(theta, 2, 0, true));
    return S;
}

ComponentMap pi_map(const QuasiTwilled& S) { return restrict_component(S.pi, 2, 0, false); }
ComponentMap rho_map(const QuasiTwilled& S) { return restrict_component(S.rho, 1, 1, true); }
ComponentMap mu_map(const QuasiTwilled& S) { return restrict_component(S.mu, 0, 2, true); }
ComponentMap eta_map(const QuasiTwilled& S) { return restrict_component(S.eta, 1, 1, false); }
ComponentMap theta_map(const QuasiTwilled& S) { return restrict_component(S.theta, 2, 0, true); }

QuasiTwilled from_omega(const ModulePtr& g, const ModulePtr& h, const ModulePtr& G, const Cochain& omega,
                        std::string name) {
    if (omega.arity != 2) throw InputError("bracket must have arity 2");
    if (!restrict_component(omega, 0, 2, false).values.empty())
        throw InputError("h is not a subalgebra: [h*h] has a g-component");
    QuasiTwilled S = make_quasi_twilled(g, h, restrict_component(omega, 2, 0, false), restrict_component(omega, 1, 1, true),
                                        restrict_component(omega, 0, 2, true), restrict_component(omega, 1, 1, false),
                                        restrict_component(omega, 2, 0, true), std::move(name), G);
    if (!(S.omega() == omega)) throw InputError("bracket on G is not skew-symmetric");
    return S;
}

namespace {
LiePseudoalgebra block_algebra(const QuasiTwilled& S, bool on_h) {
    const ModulePtr& M = on_h ? S.h : S.g;
    ComponentMap c = on_h ? mu_map(S) : pi_map(S);
    return {M, Cochain::from_values(2, M, M, c.values)};
}
}  // namespace

LiePseudoalgebra h_algebra(const QuasiTwilled& S) { return block_algebra(S, true); }
LiePseudoalgebra g_algebra(const QuasiTwilled& S) { return block_algebra(S, false); }

const std::array<PCRegion, 7>& pc_regions() {
    static const std::array<PCRegion, 7> r = {{{2, 3, 0, false},
                                               {3, 3, 0, true},
                                               {4, 2, 1, false},
                                               {5, 2, 1, true},
                                               {6, 1, 2, false},
                                               {7, 1, 2, true},
                                               {8, 0, 3, true}}};
    return r;
}

PTElem pc_residual(const QuasiTwilled& S, int label, const Tuple& t, const PCFlags& flags) {
    const HopfAlgebra& H = S.H();
    const std::vector<int> p12 = {1, 0, 2}, p23 = {0, 2, 1}, p123 = cycle123(flags.perm);
    auto C = [](const Cochain& f, int pos, const PTElem& in, int other) { return compose_value(f, pos, in, {other}); };
    auto P = [&](const std::vector<int>& s, const PTElem& e) { return permute(H, s, e); };
    const Cochain &pi = S.pi, &rho = S.rho, &mu = S.mu, &eta = S.eta, &th = S.theta;
    const int a = t.at(0), b = t.at(1), c = t.at(2);
    switch (label) {
        case 2: {
            const int x = a, y = b, z = c;
            PTElem lhs = C(pi, 1, pi.at({y, z}), x) - C(pi, 0, pi.at({x, y}), z) - P(p12, C(pi, 1, pi.at({x, z}), y));
            PTElem rhs = P(p12, C(eta, 1, th.at({x, z}), y)) - C(eta, 1, th.at({y, z}), x) -
                         P(p123, C(eta, 1, th.at({x, y}), z));
            return lhs - rhs;
        }
        case 3: {
            const int x = a, y = b, z = c;
            PTElem cyc = P(p123, C(rho, 1, th.at({x, y}), z));
            if (flags.pc3 == PC3Sign::ProofExpansion) cyc = -cyc;
            PTElem lhs = C(rho, 1, th.at({y, z}), x) + cyc - P(p12, C(rho, 1, th.at({x, z}), y));
            PTElem rhs = P(p12, C(th, 1, pi.at({x, z}), y)) + C(th, 0, pi.at({x, y}), z) - C(th, 1, pi.at({y, z}), x);
            return lhs - rhs;
        }
        case 4: {
            const int x = a, y = b, w = c;
            return C(pi, 1, eta.at({y, w}), x) + C(eta, 1, rho.at({y, w}), x) - C(eta, 0, pi.at({x, y}), w) -
                   P(p12, C(pi, 1, eta.at({x, w}), y)) - P(p12, C(eta, 1, rho.at({x, w}), y));
        }
        case 5: {
            const int x = a, y = b, w = c;
            return C(rho, 1, rho.at({y, w}), x) + C(th, 1, eta.at({y, w}), x) - C(rho, 0, pi.at({x, y}), w) -
                   C(mu, 0, th.at({x, y}), w) - P(p12, C(rho, 1, rho.at({x, w}), y)) -
                   P(p12, C(th, 1, eta.at({x, w}), y));
        }
        case 6: {
            const int x = a, v = b, w = c;
            const auto& s = flags.pc67 == PC67Variant::Printed23 ? p23 : p123;
            return C(eta, 1, mu.at({v, w}), x) - C(eta, 0, eta.at({x, v}), w) + P(s, C(eta, 0, eta.at({x, w}), v));
        }
        case 7: {
            const int x = a, v = b, w = c;
            const auto& s = flags.pc67 == PC67Variant::Printed23 ? p23 : p123;
            return C(rho, 1, mu.at({v, w}), x) - C(rho, 0, eta.at({x, v}), w) - C(mu, 0, rho.at({x, v}), w) +
                   P(s, C(rho, 0, eta.at({x, w}), v)) - P(p12, C(mu, 1, rho.at({x, w}), v));
        }
        case 8: return jacobiator(mu, t);
        default: throw InternalError("pc_residual: label out of range");
    }
}

namespace {

std::vector<Tuple> region_tuples(const FreeModule& G, const PCRegion& r) {
    const int ng = G.split, nh = G.rank() - G.split;
    std::vector<Tuple> out;
    for (const auto& gt : all_tuples(ng, r.n_g))
        for (const auto& ht : all_tuples(nh, r.n_h)) {
            Tuple t = gt;
            for (int v : ht) t.push_back(v + ng);
            out.push_back(t);
        }
    return out;
}

PTElem side(const FreeModule& G, const PTElem& e, bool out_h) {
    return out_h ? restrict_basis(e, G.split, G.rank()) : restrict_basis(e, 0, G.split);
}

}  // namespace

bool PCReport::pass() const {
    for (int k = 1; k <= 8; ++k)
        if (!by_label[k].empty()) return false;
    return true;
}

PCReport check_pc(const QuasiTwilled& S, const PCFlags& flags) {
    PCReport rep;
    for (auto& v : skew_check(h_algebra(S).bracket)) rep.by_label[1].push_back({"PC1", v.tuple, v.residual});
    for (const auto& r : pc_regions()) {
        const auto tuples = region_tuples(*S.G, r);
        std::vector<PTElem> res(tuples.size());
        parallel_for(tuples.size(), [&](size_t i) { res[i] = pc_residual(S, r.label, tuples[i], flags); });
        for (size_t i = 0; i < tuples.size(); ++i)
            if (!res[i].is_zero())
                rep.by_label[r.label].push_back({"PC" + std::to_string(r.label), tuples[i], res[i]});
    }
    return rep;
}

MCReport check_mc_omega(const QuasiTwilled& S, const PCFlags& flags) {
    MCReport rep;
    const Cochain omega = S.omega();
    rep.bracket = nr_bracket(omega, omega);
    rep.bracket_zero = rep.bracket.is_zero();
    const Cochain &pi = S.pi, &rho = S.rho, &mu = S.mu, &eta = S.eta, &th = S.theta;
    for (const auto& r : pc_regions()) {
        MCRegion m;
        m.label = r.label;
        const int k = r.out_h ? r.n_g : r.n_g - 1;
        const int l = r.out_h ? r.n_h - 1 : r.n_h;
        m.bidegree = std::to_string(k) + "|" + std::to_string(l);
        Cochain bullet;
        switch (r.label) {
            case 2: bullet = nr_bracket(pi, pi) + circle(eta, th) * 2; m.bullet_factor = 1; break;
            case 3: bullet = nr_bracket(rho, th) + nr_bracket(pi, th); m.bullet_factor = Q(1, 2); break;
            case 4: bullet = nr_bracket(pi, eta) + circle(eta, rho); m.bullet_factor = Q(1, 2); break;
            case 5:
                bullet = nr_bracket(rho, rho) * Q(1, 2) + circle(th, eta) + nr_bracket(mu, th) + nr_bracket(pi, rho);
                m.bullet_factor = Q(1, 2);
                break;
            case 6: bullet = nr_bracket(mu, eta) * 2 + nr_bracket(eta, eta); m.bullet_factor = 1; break;
            case 7: bullet = nr_bracket(rho, mu) + circle(rho, eta); m.bullet_factor = Q(1, 2); break;
            default: bullet = nr_bracket(mu, mu); m.bullet_factor = 1; break;
        }
        for (const auto& t : region_tuples(*S.G, r)) {
            const PTElem br = side(*S.G, rep.bracket.at(t), r.out_h);
            if (!br.is_zero()) m.bracket_zero = false;
            const PTElem pc = side(*S.G, pc_residual(S, r.label, t, flags), r.out_h);
            if (!(br == pc * Q(-2))) m.matches_pc = false;
            const PTElem bu = side(*S.G, bullet.at(t), r.out_h);
            if (!(bu == br * m.bullet_factor)) m.bullet_matches = false;
        }
        rep.table_ok = rep.table_ok && m.matches_pc;
        rep.bullets_ok = rep.bullets_ok && m.bullet_matches;
        rep.regions.push_back(m);
    }
    return rep;
}

QuasiTwilled build_matched_pair(const LiePseudoalgebra& g, const LiePseudoalgebra& h, const ComponentMap& rho,
                                const ComponentMap& eta, std::string name) {
    ComponentMap pi{2, 0, false, g.bracket.sorted_values()};
    ComponentMap mu{0, 2, true, h.bracket.sorted_values()};
    QuasiTwilled S = make_quasi_twilled(g.M, h.M, pi, rho, mu, eta, ComponentMap{2, 0, true, {}}, std::move(name));
    PCReport rep = check_pc(S);
    if (!rep.pass()) {
        std::string labels;
        for (int k = 1; k <= 8; ++k)
            if (!rep.label_pass(k)) labels += " PC" + std::to_string(k);
        throw ValidationError("matched-pair identities fail:" + labels);
    }
    return S;
}

CheckReport check_representation(const LiePseudoalgebra& g, const ModulePtr& M, const ComponentMap& rho) {
    ComponentMap pi{2, 0, false, g.bracket.sorted_values()};
    QuasiTwilled S = make_quasi_twilled(g.M, M, pi, rho, {0, 2, true, {}}, {1, 1, false, {}}, {2, 0, true, {}});
    CheckReport rep;
    for (const auto& t : region_tuples(*S.G, pc_regions()[3])) {
        PTElem r = pc_residual(S, 5, t);
        if (!r.is_zero()) rep.failures.push_back({"representation", t, r});
    }
    return rep;
}

QuasiTwilled random_structure(std::mt19937_64& rng, const ModulePtr& g, const ModulePtr& h, int max_deg) {
    const HopfAlgebra& H = *g->H;
    auto comp = [&](int k, int l, bool to_h) {
        ComponentMap c{k, l, to_h, {}};
        if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) return c;
        const int ng = g->rank(), nh = h->rank();
        const int tr = to_h ? nh : ng;
        for (const auto& gt : sorted_tuples(ng, k))
            for (const auto& ht : sorted_tuples(nh, l)) {
                Tuple t = gt;
                t.insert(t.end(), ht.begin(), ht.end());
                PTElem v = random_pt(rng, H, 2, tr, max_deg, 2);
                if (k == 2 || l == 2) v = skew_project(H, t, v);
                if (!v.is_zero()) c.values.emplace(t, v);
            }
        return c;
    };
    return make_quasi_twilled(g, h, comp(2, 0, false), comp(1, 1, true), comp(0, 2, true), comp(1, 1, false),
                              comp(2, 0, true), "random");
}

}  // namespace pa
