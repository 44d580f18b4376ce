#include "pa/deformation.hpp"

#include <algorithm>

namespace pa {

namespace {

const std::vector<int> kSwap = {1, 0};

void check_orientation(const QuasiTwilled& S, const HModuleMap& M, MapKind kind) {
    const int from = kind == MapKind::TypeI ? S.g->rank() : S.h->rank();
    const int to = kind == MapKind::TypeI ? S.h->rank() : S.g->rank();
    bool ok = static_cast<int>(M.matrix.size()) == from;
    for (const auto& row : M.matrix) ok = ok && static_cast<int>(row.size()) == to;
    if (!ok)
        throw InputError(kind == MapKind::TypeI ? "type I map must go from g to h" : "type II map must go from h to g");
}

// Evaluation context on G: basis vectors, the lifted map, and its action on elements and values.
struct Ctx {
    const QuasiTwilled& S;
    const HopfAlgebra& H;
    int n, ng;
    HModuleMap M;  // G → G

    Ctx(const QuasiTwilled& s, const HModuleMap& m, MapKind kind)
        : S(s), H(s.H()), n(s.G->rank()), ng(s.g->rank()), M{s.G, s.G, lifted_matrix(s, m, kind)} {}

    MElem e(int i) const { return MElem::basis(n, i); }
    MElem Me(int i) const { return M.apply(e(i)); }
    PTElem out(const PTElem& v) const { return apply_module_map(H, M.matrix, v); }
    PTElem sw(const PTElem& v) const { return permute(H, kSwap, v); }
    PTElem ev(const Cochain& f, const MElem& a, const MElem& b) const { return eval(f, {a, b}); }
};

// a + b where a zero summand may carry a different arity.
Cochain add(const Cochain& a, const Cochain& b) {
    if (b.is_zero()) return a;
    if (a.is_zero() && a.arity != b.arity) return b;
    return a + b;
}

}  // namespace

HMatrix lifted_matrix(const QuasiTwilled& S, const HModuleMap& M, MapKind kind) {
    check_orientation(S, M, kind);
    const int n = S.G->rank(), ng = S.g->rank();
    HMatrix L(n, std::vector<HElem>(n));
    for (size_t i = 0; i < M.matrix.size(); ++i)
        for (size_t j = 0; j < M.matrix[i].size(); ++j) {
            if (kind == MapKind::TypeI)
                L[i][ng + j] = M.matrix[i][j];
            else
                L[ng + i][j] = M.matrix[i][j];
        }
    return L;
}

ComponentMap dmap1_residual(const QuasiTwilled& S, const HModuleMap& D) {
    Ctx c(S, D, MapKind::TypeI);
    ValueTable vals;
    for (const auto& t : sorted_tuples(c.ng, 2)) {
        MElem x = c.e(t[0]), y = c.e(t[1]), Dx = c.Me(t[0]), Dy = c.Me(t[1]);
        PTElem lhs = c.out(c.ev(S.pi, x, y) + c.ev(S.eta, x, Dy) - c.sw(c.ev(S.eta, y, Dx)));
        PTElem rhs = c.ev(S.mu, Dx, Dy) + c.ev(S.rho, x, Dy) - c.sw(c.ev(S.rho, y, Dx)) + c.ev(S.theta, x, y);
        PTElem r = rhs - lhs;
        if (!r.is_zero()) vals.emplace(t, r);
    }
    return restrict_component(Cochain::from_values(2, S.G, S.G, vals), 2, 0, true);
}

ComponentMap dmap2_residual(const QuasiTwilled& S, const HModuleMap& T) {
    Ctx c(S, T, MapKind::TypeII);
    ValueTable vals;
    for (const auto& lt : sorted_tuples(S.h->rank(), 2)) {
        const Tuple t = {lt[0] + c.ng, lt[1] + c.ng};
        MElem u = c.e(t[0]), v = c.e(t[1]), Tu = c.Me(t[0]), Tv = c.Me(t[1]);
        PTElem lhs = c.ev(S.pi, Tu, Tv) + c.ev(S.eta, Tu, v) - c.sw(c.ev(S.eta, Tv, u));
        PTElem rhs =
            c.out(c.ev(S.rho, Tu, v) - c.sw(c.ev(S.rho, Tv, u)) + c.ev(S.mu, u, v) + c.ev(S.theta, Tu, Tv));
        PTElem r = lhs - rhs;
        if (!r.is_zero()) vals.emplace(t, r);
    }
    return restrict_component(Cochain::from_values(2, S.G, S.G, vals), 0, 2, false);
}

GraphReport graph_check(const QuasiTwilled& S, const HModuleMap& D) {
    Ctx c(S, D, MapKind::TypeI);
    const Cochain omega = S.omega();
    ValueTable vals;
    for (const auto& t : sorted_tuples(c.ng, 2)) {
        MElem a = c.e(t[0]), b = c.e(t[1]);
        MElem ga = c.Me(t[0]), gb = c.Me(t[1]);
        for (int k = 0; k < c.n; ++k) {
            a.coords[k] = a.coords[k] + ga.coords[k];
            b.coords[k] = b.coords[k] + gb.coords[k];
        }
        PTElem v = eval(omega, {a, b});
        PTElem r = restrict_basis(v, c.ng, c.n) - c.out(restrict_basis(v, 0, c.ng));
        if (!r.is_zero()) vals.emplace(t, r);
    }
    GraphReport rep;
    rep.closed = vals.empty();
    rep.residual = restrict_component(Cochain::from_values(2, S.G, S.G, vals), 2, 0, true);
    return rep;
}

TwistSeries exp_twist(const QuasiTwilled& S, const HModuleMap& M, MapKind kind) {
    Ctx c(S, M, kind);
    const Cochain Mhat = lift_map(S.G, M, kind == MapKind::TypeI);
    TwistSeries out;
    Cochain term = S.omega();
    out.series = term;
    out.terms = term.is_zero() ? 0 : 1;
    for (int n = 1;; ++n) {
        term = nr_bracket(term, Mhat) * Q(1, n);
        if (term.is_zero()) break;
        if (n >= 4) throw InternalError("twist series did not terminate within 4 terms");
        out.series = out.series + term;
        ++out.terms;
    }

    const Cochain omega = S.omega();
    ValueTable vals;
    for (const auto& t : all_tuples(c.n, 2)) {
        MElem a = c.e(t[0]), b = c.e(t[1]);
        MElem ma = c.Me(t[0]), mb = c.Me(t[1]);
        for (int k = 0; k < c.n; ++k) {
            a.coords[k] = a.coords[k] + ma.coords[k];
            b.coords[k] = b.coords[k] + mb.coords[k];
        }
        PTElem v = eval(omega, {a, b});
        v = v - c.out(v);
        if (!v.is_zero()) vals.emplace(t, v);
    }
    out.conjugated = Cochain::from_full(2, S.G, S.G, vals);
    out.conjugated.skew = true;
    return out;
}

Twist1Result twist1(const QuasiTwilled& S, const HModuleMap& D) {
    Ctx c(S, D, MapKind::TypeI);
    ValueTable vals;
    for (const auto& t : sorted_tuples(c.n, 2)) {
        const bool gi = t[0] < c.ng, gj = t[1] < c.ng;
        MElem a = c.e(t[0]), b = c.e(t[1]), Da = c.Me(t[0]), Db = c.Me(t[1]);
        PTElem v;
        if (gi && gj) {
            PTElem piD = c.ev(S.pi, a, b) + c.ev(S.eta, a, Db) - c.sw(c.ev(S.eta, b, Da));
            PTElem thD = c.ev(S.theta, a, b) + c.ev(S.rho, a, Db) - c.sw(c.ev(S.rho, b, Da)) - c.out(c.ev(S.pi, a, b)) +
                         c.ev(S.mu, Da, Db) - c.out(c.ev(S.eta, a, Db)) + c.sw(c.out(c.ev(S.eta, b, Da)));
            v = piD + thD;
        } else if (gi) {
            PTElem rhoD = c.ev(S.rho, a, b) + c.ev(S.mu, Da, b) - c.out(c.ev(S.eta, a, b));
            v = rhoD + c.ev(S.eta, a, b);
        } else {
            v = c.ev(S.mu, a, b);
        }
        if (!v.is_zero()) vals.emplace(t, v);
    }
    Twist1Result r;
    r.twisted = from_omega(S.g, S.h, S.G, Cochain::from_values(2, S.G, S.G, vals), S.name + "^D");
    r.matches_exp = exp_twist(S, D, MapKind::TypeI).series == r.twisted.omega();
    r.is_dmap = r.twisted.theta.is_zero();
    return r;
}

Twist2Result twist2(const QuasiTwilled& S, const HModuleMap& T, Twist2Form form) {
    Ctx c(S, T, MapKind::TypeII);
    const bool printed = form == Twist2Form::Printed;
    ValueTable vals;
    for (const auto& t : sorted_tuples(c.n, 2)) {
        const bool gi = t[0] < c.ng, gj = t[1] < c.ng;
        MElem a = c.e(t[0]), b = c.e(t[1]), Ta = c.Me(t[0]), Tb = c.Me(t[1]);
        PTElem v;
        if (gi && gj) {
            v = c.ev(S.pi, a, b) - c.out(c.ev(S.theta, a, b)) + c.ev(S.theta, a, b);
        } else if (gi) {
            // x = a ∈ g, v = b ∈ h.
            PTElem th_vx = c.ev(S.theta, Tb, a), pi_vx = c.ev(S.pi, Tb, a);
            PTElem th = printed ? -th_vx : -c.sw(th_vx);
            PTElem pi = printed ? -pi_vx : -c.sw(pi_vx);
            PTElem rhoT = c.ev(S.rho, a, b) + th;
            PTElem etaT = c.ev(S.eta, a, b) + pi - c.out(c.ev(S.rho, a, b)) + c.out(c.sw(th_vx));
            v = rhoT + etaT;
        } else {
            PTElem muT = c.ev(S.mu, a, b) + c.ev(S.rho, Ta, b) - c.sw(c.ev(S.rho, Tb, a)) + c.ev(S.theta, Ta, Tb);
            PTElem xiT = c.ev(S.pi, Ta, Tb) + c.ev(S.eta, Ta, b) - c.sw(c.ev(S.eta, Tb, a)) -
                         c.out(c.ev(S.mu, a, b) + c.ev(S.rho, Ta, b) - c.sw(c.ev(S.rho, Tb, a)) +
                               c.ev(S.theta, Ta, Tb));
            v = muT + xiT;
        }
        if (!v.is_zero()) vals.emplace(t, v);
    }
    Twist2Result r;
    r.omega = Cochain::from_values(2, S.G, S.G, vals);
    r.pi = restrict_component(r.omega, 2, 0, false);
    r.theta = restrict_component(r.omega, 2, 0, true);
    r.rho = restrict_component(r.omega, 1, 1, true);
    r.eta = restrict_component(r.omega, 1, 1, false);
    r.mu = restrict_component(r.omega, 0, 2, true);
    r.xi = restrict_component(r.omega, 0, 2, false);
    r.matches_exp = exp_twist(S, T, MapKind::TypeII).series == r.omega;
    r.is_dmap = r.xi.values.empty();
    return r;
}

Cochain LInfOperators::project(const Cochain& f) const {
    return kind == MapKind::TypeI ? bidegree_component(f, f.arity, -1) : bidegree_component(f, -1, f.arity);
}

Cochain LInfOperators::untwisted(const std::vector<Cochain>& xs) const {
    Cochain acc = delta;
    for (const auto& x : xs) {
        acc = nr_bracket(acc, x);
        if (acc.is_zero()) break;
    }
    return project(acc);
}

Cochain LInfOperators::l(const std::vector<Cochain>& xs) const {
    if (twist.empty()) return untwisted(xs);
    const int k = static_cast<int>(xs.size());
    Cochain sum = untwisted(xs);
    Q fact = 1;
    for (int n = 1; k + n <= max_k; ++n) {
        fact *= n;
        std::vector<Cochain> args(n, twist.front());
        args.insert(args.end(), xs.begin(), xs.end());
        sum = add(sum, untwisted(args) * (Q(1) / fact));
    }
    return sum;
}

LInfOperators curved_l_type1(const QuasiTwilled& S) { return {MapKind::TypeI, S.G, S.omega(), 2, {}}; }
LInfOperators curved_l_type2(const QuasiTwilled& S) { return {MapKind::TypeII, S.G, S.omega(), 3, {}}; }

LInfOperators twisted(const LInfOperators& ops, const Cochain& x) {
    if (!ops.twist.empty()) throw InputError("operators are already twisted");
    LInfOperators t = ops;
    t.twist = {x};
    return t;
}

Cochain mc_residual(const LInfOperators& ops, const Cochain& x) {
    Cochain sum = ops.l({});
    Q fact = 1;
    for (int k = 1; k <= ops.max_k; ++k) {
        fact *= k;
        sum = add(sum, ops.l(std::vector<Cochain>(k, x)) * (Q(1) / fact));
    }
    return sum;
}

bool mc_strict(const LInfOperators& ops, const Cochain& x) {
    for (int k = 0; k <= ops.max_k; ++k)
        if (!ops.l(std::vector<Cochain>(k, x)).is_zero()) return false;
    return true;
}

Cochain mc_residual_type1(const QuasiTwilled& S, const HModuleMap& D) {
    check_orientation(S, D, MapKind::TypeI);
    return mc_residual(curved_l_type1(S), lift_map(S.G, D, true));
}

Cochain mc_residual_type2(const QuasiTwilled& S, const HModuleMap& T) {
    check_orientation(S, T, MapKind::TypeII);
    return mc_residual(curved_l_type2(S), lift_map(S.G, T, false));
}

LInfOperators twisted_l_type1(const QuasiTwilled& S, const HModuleMap& D) {
    if (!dmap1_residual(S, D).values.empty()) throw ValidationError("map is not a type I deformation map");
    return twisted(curved_l_type1(S), lift_map(S.G, D, true));
}

LInfOperators twisted_l_type2(const QuasiTwilled& S, const HModuleMap& T) {
    if (!dmap2_residual(S, T).values.empty()) throw ValidationError("map is not a type II deformation map");
    return twisted(curved_l_type2(S), lift_map(S.G, T, false));
}

namespace {

// Koszul sign of moving the picked elements (in order) in front of the rest.
int koszul(const std::vector<int>& deg, const std::vector<bool>& picked) {
    int s = 0;
    const int n = static_cast<int>(deg.size());
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (!picked[a] && picked[b]) s += deg[a] * deg[b];
    return s % 2 ? -1 : 1;
}

}  // namespace

LInfReport linf_jacobi_check(const LInfOperators& ops, int max_arity, const std::vector<Cochain>& samples,
                             int per_arity) {
    if (max_arity < 0 || max_arity > 4) throw InputError("linf_jacobi_check: max arity must be in 0..4");
    LInfReport rep;
    const int m = static_cast<int>(samples.size());
    for (int n = 0; n <= max_arity; ++n) {
        const int rounds = n == 0 ? 1 : std::min(per_arity, std::max(m, 1));
        if (n > 0 && m == 0) break;
        for (int r = 0; r < rounds; ++r) {
            std::vector<int> idx(n);
            std::vector<Cochain> xs(n);
            std::vector<int> deg(n);
            for (int i = 0; i < n; ++i) {
                idx[i] = (r + i) % m;
                xs[i] = samples[idx[i]];
                deg[i] = xs[i].arity - 1;
            }
            Cochain total;
            bool have = false;
            for (int i = 0; i <= n; ++i) {
                std::vector<bool> pick(n, false);
                std::fill(pick.begin(), pick.begin() + i, true);
                do {
                    std::vector<Cochain> in, rest;
                    for (int j = 0; j < n; ++j) (pick[j] ? in : rest).push_back(xs[j]);
                    Cochain inner = ops.l(in);
                    if (inner.is_zero()) continue;
                    std::vector<Cochain> args = {inner};
                    args.insert(args.end(), rest.begin(), rest.end());
                    Cochain term = ops.l(args) * Q(koszul(deg, pick));
                    if (term.is_zero()) continue;
                    total = have ? add(total, term) : term;
                    have = true;
                } while (std::prev_permutation(pick.begin(), pick.end()));
            }
            ++rep.checked;
            if (have && !total.is_zero()) rep.failures.push_back({n, idx, total});
        }
    }
    return rep;
}

Cochain random_k_element(std::mt19937_64& rng, const QuasiTwilled& S, MapKind kind, int arity, int max_deg) {
    const HopfAlgebra& H = S.H();
    const bool t1 = kind == MapKind::TypeI;
    ComponentMap c{t1 ? arity : 0, t1 ? 0 : arity, t1, {}};
    const int src = t1 ? S.g->rank() : S.h->rank();
    const int tgt = t1 ? S.h->rank() : S.g->rank();
    // Skew projection can kill a draw on repeated indices; redraw a few times.
    for (int attempt = 0; attempt < 8 && c.values.empty(); ++attempt)
        for (const auto& t : sorted_tuples(src, arity)) {
            PTElem v = skew_project(H, t, random_pt(rng, H, arity, tgt, max_deg, 2));
            if (!v.is_zero()) c.values.emplace(t, v);
        }
    return lift(S.G, c);
}

HModuleMap random_map(std::mt19937_64& rng, const ModulePtr& from, const ModulePtr& to, int max_deg) {
    HModuleMap m = HModuleMap::zero(from, to);
    const HopfAlgebra& H = *from->H;
    for (auto& row : m.matrix)
        for (auto& h : row)
            if (std::uniform_int_distribution<int>(0, 3)(rng) != 0) h = random_helem(rng, H, max_deg, 2);
    return m;
}

}  // namespace pa
