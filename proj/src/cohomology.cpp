#include "pa/cohomology.hpp"

#include <algorithm>
#include <map>

namespace pa {

std::string to_string(CESign s) { return s == CESign::Shifted ? "shifted" : "classical"; }

namespace {

const std::vector<int> kSwap = {1, 0};

// f(a, b) for pseudotensor arguments a, b on G: arity a.arity + b.arity.
PTElem comp2(const Cochain& f, const PTElem& a, const PTElem& b) {
    if (a.is_zero() || b.is_zero()) return PTElem(a.arity + b.arity);
    Cochain outer(1 + b.arity, f.source, f.target);
    const Tuple pad(b.arity, 0);
    for (const auto& [k, c] : a.terms) {
        Tuple z = {k.basis()};
        z.insert(z.end(), pad.begin(), pad.end());
        if (outer.values.count(z)) continue;
        PTElem w = compose_value(f, 1, b, {k.basis()});
        if (!w.is_zero()) outer.values.emplace(z, std::move(w));
    }
    return compose_value(outer, 0, a, pad);
}

// f(a) for an arity-1 cochain, or f(a) with a filling all slots of an arity-2 f.
PTElem comp1(const Cochain& f, const PTElem& a) {
    if (a.is_zero()) return PTElem(a.arity + f.arity - 1);
    return compose_value(f, 0, a, Tuple(f.arity - 1, 0));
}

PTElem as_pt(const MElem& m) { return pt_from_melem(1, m); }

int sgn(int e) { return e % 2 == 0 ? 1 : -1; }

struct Expander {
    const CEComplex& C;
    const QuasiTwilled& S;
    const HopfAlgebra& H;
    int n;
    HMatrix M;  // lifted map on G

    explicit Expander(const CEComplex& c)
        : C(c), S(c.base), H(c.base.H()), n(c.G->rank()), M(lifted_matrix(c.base, c.map, c.kind)) {}

    PTElem e(int i) const { return as_pt(MElem::basis(n, i)); }
    PTElem Me(int i) const { return as_pt(HModuleMap{C.G, C.G, M}.apply(MElem::basis(n, i))); }
    PTElem out(const PTElem& v) const { return apply_module_map(H, M, v); }
    PTElem sw(const PTElem& v) const { return permute(H, kSwap, v); }
};

MElem embed(const CEComplex& C, const MElem& local) {
    if (static_cast<int>(local.coords.size()) != C.mod_rank()) throw InputError("element has the wrong rank");
    MElem m = MElem::zero(C.G->rank());
    for (int i = 0; i < C.mod_rank(); ++i) m.coords[C.mod_lo + i] = local.coords[i];
    return m;
}

void require_shape(const CEComplex& C, const Cochain& f) {
    if (f.source != C.G || f.target != C.G) throw InputError("cochain is not defined on the complex's module");
    for (const auto& [t, v] : f.values) {
        for (int i : t)
            if (i < C.alg_lo || i >= C.alg_hi) throw InputError("cochain has arguments outside the algebra");
        for (const auto& [k, c] : v.terms)
            if (k.basis() < C.mod_lo || k.basis() >= C.mod_hi) throw InputError("cochain has values outside the module");
    }
}

std::vector<MultiIndex> monomials_upto(int dim, int cap) {
    std::vector<MultiIndex> out;
    std::vector<int> e(dim, 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == dim) {
            out.push_back(MultiIndex::from_vector(e));
            return;
        }
        for (int k = 0; k <= left; ++k) {
            e[i] = k;
            rec(i + 1, left - k);
        }
        e[i] = 0;
    };
    rec(0, cap);
    return out;
}

std::vector<Tuple> alg_tuples(const CEComplex& C, int p) {
    std::vector<Tuple> ts = sorted_tuples(C.alg_rank(), p);
    for (auto& t : ts)
        for (int& i : t) i += C.alg_lo;
    return ts;
}

}  // namespace

CEComplex ce_complex(const QuasiTwilled& S, const HModuleMap& map, MapKind kind, CESign sign) {
    CEComplex C;
    C.kind = kind;
    C.base = S;
    C.map = map;
    C.G = S.G;
    C.sign = sign;
    const int ng = S.g->rank(), n = S.G->rank();
    if (kind == MapKind::TypeI) {
        if (!dmap1_residual(S, map).values.empty()) throw ValidationError("map is not a type I deformation map");
        Twist1Result tw = twist1(S, map);
        C.alg_lo = 0, C.alg_hi = ng, C.mod_lo = ng, C.mod_hi = n;
        C.bracket = tw.twisted.pi;
        C.action = tw.twisted.rho;
    } else {
        if (!dmap2_residual(S, map).values.empty()) throw ValidationError("map is not a type II deformation map");
        Twist2Result tw = twist2(S, map);
        C.alg_lo = ng, C.alg_hi = n, C.mod_lo = 0, C.mod_hi = ng;
        C.bracket = lift(S.G, tw.mu);
        C.action = lift(S.G, tw.eta);  // value at (v, x) is −(12)η^T(x⊗v) = ζ(v⊗x)
    }
    return C;
}

InducedRep induced_rep_type1(const QuasiTwilled& S, const HModuleMap& D) {
    CEComplex C = ce_complex(S, D, MapKind::TypeI);
    Expander X(C);
    const int ng = S.g->rank(), nh = S.h->rank();
    InducedRep r;
    r.module = S.h;
    r.algebra = {S.g, Cochain::from_values(2, S.g, S.g, restrict_component(C.bracket, 2, 0, false).values)};
    r.action = restrict_component(C.action, 1, 1, true);
    // ρ^D(x⊗u) = ρ(x⊗u) + μ(D(x)⊗u) − D(η(x⊗u)).
    for (int x = 0; x < ng; ++x)
        for (int u = 0; u < nh; ++u) {
            PTElem cf = comp2(S.rho, X.e(x), X.e(ng + u)) + comp2(S.mu, X.Me(x), X.e(ng + u)) -
                        X.out(comp2(S.eta, X.e(x), X.e(ng + u)));
            if (!(cf == C.action.at({x, ng + u}))) r.matches_closed_form = false;
        }
    r.lie = check_lie(r.algebra);
    r.rep = check_representation(r.algebra, r.module, r.action);
    return r;
}

InducedRep induced_rep_type2(const QuasiTwilled& S, const HModuleMap& T) {
    CEComplex C = ce_complex(S, T, MapKind::TypeII);
    Expander X(C);
    const int ng = S.g->rank(), nh = S.h->rank();
    InducedRep r;
    r.module = S.g;
    r.algebra = {S.h, Cochain::from_values(2, S.h, S.h, restrict_component(C.bracket, 0, 2, true).values)};
    r.action.k = 1, r.action.l = 1, r.action.to_h = true;
    for (int v = 0; v < nh; ++v)
        for (int x = 0; x < ng; ++x) {
            PTElem z = C.action.at({ng + v, x});
            if (!z.is_zero()) r.action.values.emplace(Tuple{v, x}, z);
            // The displayed ζ(v⊗x) = −η(x⊗v) − π(x⊗T(v)) + T(ρ(x⊗v)) − T((12)θ(T(v)⊗x)) is written in the slot
            // order (x, v); swapping back gives the value at (v, x).
            PTElem shown = -comp2(S.eta, X.e(x), X.e(ng + v)) - comp2(S.pi, X.e(x), X.Me(ng + v)) +
                           X.out(comp2(S.rho, X.e(x), X.e(ng + v))) - X.out(X.sw(comp2(S.theta, X.Me(ng + v), X.e(x))));
            if (!(X.sw(shown) == z)) r.matches_closed_form = false;
        }
    r.lie = check_lie(r.algebra);
    r.rep = check_representation(r.algebra, r.module, r.action);
    return r;
}

Cochain ce_diff(const CEComplex& C, const Cochain& f) {
    require_shape(C, f);
    const int p = f.arity;
    if (p < 1) throw InputError("ce_diff: use ce_diff0 for degree 0");
    if (p + 1 > kMaxArity) throw ResourceError("ce_diff: arity exceeds limit");
    const HopfAlgebra& H = C.base.H();
    const bool shifted = C.sign == CESign::Shifted;
    ValueTable out;
    for (const auto& t : alg_tuples(C, p + 1)) {
        RawPT acc(p + 1);
        for (int i = 0; i <= p; ++i) {
            Tuple rest;
            for (int k = 0; k <= p; ++k)
                if (k != i) rest.push_back(t[k]);
            PTElem fv = value(f, rest);
            if (fv.is_zero()) continue;
            PTElem r = compose_value(C.action, 1, fv, {t[i]});
            std::vector<int> perm(p + 1);
            perm[0] = i;
            for (int k = 1; k <= p; ++k) perm[k] = k - 1 < i ? k - 1 : k;
            acc.add_canonical(permute(H, perm, r), sgn(shifted ? p + i + 1 : i));
        }
        for (int i = 0; i <= p; ++i)
            for (int j = i + 1; j <= p; ++j) {
                PTElem b = value(C.bracket, {t[i], t[j]});
                if (b.is_zero()) continue;
                Tuple rest;
                for (int k = 0; k <= p; ++k)
                    if (k != i && k != j) rest.push_back(t[k]);
                PTElem r = compose_value(f, 0, b, rest);
                std::vector<int> perm(p + 1);
                perm[0] = i, perm[1] = j;
                for (int k = 0, slot = 2; k <= p; ++k)
                    if (k != i && k != j) perm[slot++] = k;
                acc.add_canonical(permute(H, perm, r), sgn(shifted ? p + i + j + 1 : i + j));
            }
        PTElem v = acc.canonical(H);
        if (!v.is_zero()) out.emplace(t, std::move(v));
    }
    return Cochain::from_values(p + 1, C.G, C.G, out);
}

std::vector<PTElem> ce_diff0(const CEComplex& C, const MElem& m) {
    const MElem g = embed(C, m);
    const int sign = C.sign == CESign::Shifted ? -1 : 1;
    std::vector<PTElem> out;
    for (int a = C.alg_lo; a < C.alg_hi; ++a)
        out.push_back(comp2(C.action, as_pt(MElem::basis(C.G->rank(), a)), as_pt(g)) * Q(sign));
    return out;
}

ConsistencyReport consistency_l1_vs_d(const CEComplex& C, const Cochain& f) {
    ConsistencyReport rep;
    rep.p = f.arity;
    LInfOperators ops = C.kind == MapKind::TypeI ? twisted_l_type1(C.base, C.map) : twisted_l_type2(C.base, C.map);
    rep.l1 = ops.l({f});
    rep.d = ce_diff(C, f);
    rep.equal = rep.l1 == rep.d * Q(sgn(rep.p - 1));
    return rep;
}

Cochain random_ce_cochain(std::mt19937_64& rng, const CEComplex& C, int p, int max_deg) {
    return random_k_element(rng, C.base, C.kind, p, max_deg);
}

bool check_d_squared(const CEComplex& C, std::mt19937_64& rng, int p, int samples, int max_deg) {
    for (int s = 0; s < samples; ++s)
        if (!ce_diff(C, ce_diff(C, random_ce_cochain(rng, C, p, max_deg))).is_zero()) return false;
    return true;
}

SignSelection select_sign(const QuasiTwilled& S, const HModuleMap& map, MapKind kind, std::mt19937_64& rng,
                          int samples) {
    SignSelection sel;
    CEComplex shifted = ce_complex(S, map, kind, CESign::Shifted);
    CEComplex classical = shifted;
    classical.sign = CESign::Classical;
    sel.shifted_ok = sel.classical_ok = true;
    for (int p = 1; p <= 2; ++p)
        for (int s = 0; s < samples; ++s) {
            Cochain f = random_ce_cochain(rng, shifted, p, 1);
            sel.shifted_ok = sel.shifted_ok && consistency_l1_vs_d(shifted, f).equal;
            sel.classical_ok = sel.classical_ok && consistency_l1_vs_d(classical, f).equal;
        }
    sel.chosen = sel.classical_ok || !sel.shifted_ok ? CESign::Classical : CESign::Shifted;
    return sel;
}

CocycleCertificate cocycle_check1(const CEComplex& C, const MElem& m) {
    Expander X(C);
    const QuasiTwilled& S = C.base;
    const PTElem w = as_pt(embed(C, m));
    CocycleCertificate cert;
    cert.n = 1;
    std::vector<PTElem> d = ce_diff0(C, m);
    for (int a = C.alg_lo; a < C.alg_hi; ++a) {
        PTElem r;
        if (C.kind == MapKind::TypeI) {
            // ρ(x⊗u) + μ(D(x)⊗u) − D(η(x⊗u)), x = a, u = m.
            r = comp2(S.rho, X.e(a), w) + comp2(S.mu, X.Me(a), w) - X.out(comp2(S.eta, X.e(a), w));
        } else {
            // −(12)η(x⊗u) + π(T(u)⊗x) + (12)T(ρ(x⊗u)) − T(θ(T(u)⊗x)), u = a, x = m.
            r = -X.sw(comp2(S.eta, w, X.e(a))) + comp2(S.pi, X.Me(a), w) + X.sw(X.out(comp2(S.rho, w, X.e(a)))) -
                X.out(comp2(S.theta, X.Me(a), w));
        }
        if (!r.is_zero()) cert.closed_form.push_back({"closed-form", {a}, r});
        if (!d[a - C.alg_lo].is_zero()) cert.via_diff.push_back({"d", {a}, d[a - C.alg_lo]});
    }
    return cert;
}

CocycleCertificate cocycle_check2(const CEComplex& C, const Cochain& f) {
    require_shape(C, f);
    if (f.arity != 1) throw InputError("cocycle_check2: expects a cochain of degree 1");
    Expander X(C);
    const QuasiTwilled& S = C.base;
    CocycleCertificate cert;
    cert.n = 2;
    Cochain d = ce_diff(C, f);
    for (const auto& t : alg_tuples(C, 2)) {
        const int a = t[0], b = t[1];
        const PTElem fa = value(f, {a}), fb = value(f, {b});
        PTElem r;
        if (C.kind == MapKind::TypeI) {
            PTElem x = X.e(a), y = X.e(b), Dx = X.Me(a), Dy = X.Me(b);
            r = comp2(S.rho, x, fb) - X.sw(comp2(S.rho, y, fa)) + comp2(S.mu, Dx, fb) - X.sw(comp2(S.mu, Dy, fa)) -
                X.out(comp2(S.eta, x, fb)) + X.sw(X.out(comp2(S.eta, y, fa))) -
                comp1(f, comp2(S.pi, x, y) + comp2(S.eta, x, Dy) - X.sw(comp2(S.eta, y, Dx)));
        } else {
            PTElem u = X.e(a), v = X.e(b), Tu = X.Me(a), Tv = X.Me(b);
            r = -X.sw(comp2(S.eta, fb, u)) + comp2(S.eta, fa, v) + comp2(S.pi, Tu, fb) - X.sw(comp2(S.pi, Tv, fa)) +
                X.sw(X.out(comp2(S.rho, fb, u))) - X.out(comp2(S.rho, fa, v)) - X.out(comp2(S.theta, Tu, fb)) +
                X.sw(X.out(comp2(S.theta, Tv, fa))) -
                comp1(f, comp2(S.mu, u, v) + comp2(S.theta, Tu, Tv) + comp2(S.rho, Tu, v) - X.sw(comp2(S.rho, Tv, u)));
        }
        if (!r.is_zero()) cert.closed_form.push_back({"closed-form", t, r});
        if (const PTElem* dv = d.find(t)) cert.via_diff.push_back({"d", t, *dv});
    }
    return cert;
}

std::vector<Cochain> truncated_basis(const CEComplex& C, int p, int cap) {
    const HopfAlgebra& H = C.base.H();
    std::vector<Cochain> out;
    if (cap < 0 || p < 1) return out;
    const auto monos = monomials_upto(H.dim(), cap);
    for (const auto& t : alg_tuples(C, p)) {
        // Slots 0..p−2 and the module coefficient carry monomials; the last slot is 1.
        std::vector<MultiIndex> slots(p);
        std::function<void(int, int)> rec = [&](int s, int left) {
            if (s == p - 1) {
                for (const auto& K : monos) {
                    if (K.degree() > left) continue;
                    for (int m = C.mod_lo; m < C.mod_hi; ++m) {
                        PTElem v = skew_project(H, t, pt_from_raw(H, slots, K, m));
                        if (!v.is_zero()) out.push_back(Cochain::from_values(p, C.G, C.G, {{t, v}}));
                    }
                }
                return;
            }
            for (const auto& mono : monos) {
                if (mono.degree() > left) continue;
                slots[s] = mono;
                rec(s + 1, left - mono.degree());
            }
            slots[s] = MultiIndex{};
        };
        rec(0, cap);
    }
    return out;
}

std::vector<std::vector<Q>> coordinate_matrix(const std::vector<Cochain>& fs) {
    std::map<std::pair<Tuple, TKey>, size_t> index;
    for (const auto& f : fs)
        for (const auto& [t, v] : f.sorted_values())
            for (const auto& [k, c] : v.terms) index.emplace(std::make_pair(t, k), 0);
    size_t col = 0;
    for (auto& [key, i] : index) i = col++;
    std::vector<std::vector<Q>> rows(fs.size(), std::vector<Q>(col));
    for (size_t r = 0; r < fs.size(); ++r)
        for (const auto& [t, v] : fs[r].sorted_values())
            for (const auto& [k, c] : v.terms) rows[r][index.at({t, k})] = c;
    return rows;
}

long rank_bareiss(const std::vector<std::vector<Q>>& rows) {
    if (rows.empty()) return 0;
    const size_t m = rows.size(), n = rows[0].size();
    std::vector<std::vector<mpz_class>> A(m, std::vector<mpz_class>(n));
    for (size_t i = 0; i < m; ++i) {
        mpz_class l = 1;
        for (const auto& q : rows[i]) l = lcm(l, mpz_class(q.get_den()));
        for (size_t j = 0; j < n; ++j) A[i][j] = mpz_class(rows[i][j] * l);
    }
    mpz_class prev = 1;
    size_t r = 0;
    for (size_t c = 0; c < n && r < m; ++c) {
        size_t piv = r;
        while (piv < m && A[piv][c] == 0) ++piv;
        if (piv == m) continue;
        std::swap(A[piv], A[r]);
        for (size_t i = r + 1; i < m; ++i) {
            for (size_t j = c + 1; j < n; ++j) {
                A[i][j] = A[r][c] * A[i][j] - A[i][c] * A[r][j];
                mpz_divexact(A[i][j].get_mpz_t(), A[i][j].get_mpz_t(), prev.get_mpz_t());
            }
            A[i][c] = 0;
        }
        prev = A[r][c];
        ++r;
    }
    return static_cast<long>(r);
}

long rank_rref(const std::vector<std::vector<Q>>& rows) {
    std::vector<std::vector<Q>> A = rows;
    const size_t m = A.size(), n = m ? A[0].size() : 0;
    size_t r = 0;
    for (size_t c = 0; c < n && r < m; ++c) {
        size_t piv = r;
        while (piv < m && A[piv][c] == 0) ++piv;
        if (piv == m) continue;
        std::swap(A[piv], A[r]);
        const Q inv = 1 / A[r][c];
        for (size_t j = c; j < n; ++j) A[r][j] *= inv;
        for (size_t i = 0; i < m; ++i) {
            if (i == r || A[i][c] == 0) continue;
            const Q f = A[i][c];
            for (size_t j = c; j < n; ++j) A[i][j] -= f * A[r][j];
        }
        ++r;
    }
    return static_cast<long>(r);
}

namespace {

long checked_rank(const std::vector<Cochain>& fs) {
    auto rows = coordinate_matrix(fs);
    const long a = rank_bareiss(rows), b = rank_rref(rows);
    if (a != b) throw InternalError("rank mismatch between Bareiss and RREF elimination");
    return a;
}

}  // namespace

CohomologyDims truncated_cohomology(const CEComplex& C, int p, int cap, long max_basis) {
    if (p < 1) throw InputError("truncated_cohomology: degree must be at least 1");
    if (cap < 0) throw InputError("truncated_cohomology: degree cap must be nonnegative");
    CohomologyDims out;
    out.p = p;
    out.cap = cap;
    for (const Cochain* s : {&C.bracket, &C.action})
        for (const auto& [t, v] : s->values) out.growth = std::max(out.growth, v.max_degree());

    std::vector<Cochain> basis = truncated_basis(C, p, cap);
    if (static_cast<long>(basis.size()) > max_basis) throw ResourceError("truncated_cohomology: basis too large");
    out.dim_c = checked_rank(basis);
    std::vector<Cochain> images;
    images.reserve(basis.size());
    for (const auto& f : basis) images.push_back(ce_diff(C, f));
    out.dim_z = out.dim_c - checked_rank(images);

    if (p >= 2 && cap - out.growth >= 0) {
        std::vector<Cochain> lower = truncated_basis(C, p - 1, cap - out.growth);
        if (static_cast<long>(lower.size()) > max_basis) throw ResourceError("truncated_cohomology: basis too large");
        std::vector<Cochain> b;
        for (const auto& f : lower) b.push_back(ce_diff(C, f));
        out.dim_b = checked_rank(b);
    }
    out.dim_h = out.dim_z - out.dim_b;
    return out;
}

}  // namespace pa
