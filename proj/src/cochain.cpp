#include "pa/cochain.hpp"

#include <algorithm>
#include <numeric>

#include "pa/parallel.hpp"

namespace pa {

namespace {

const HopfAlgebra& hopf_of(const Cochain& f) { return *f.target->H; }

void check_compatible(const Cochain& a, const Cochain& b) {
    if (a.arity != b.arity || a.source != b.source || a.target != b.target)
        throw InternalError("cochain shape mismatch");
}

// Distinct arrangements of a sorted tuple with the index map π: t[j] = s[π[j]].
void arrangements(const Tuple& s, const std::function<void(const Tuple&, const std::vector<int>&)>& fn) {
    std::vector<int> pi(s.size());
    std::iota(pi.begin(), pi.end(), 0);
    Tuple t(s.size());
    // Permutations of positions; skip those that reorder equal entries (keeps the first representative).
    do {
        bool canonical = true;
        for (size_t a = 0; a < pi.size() && canonical; ++a)
            for (size_t b = a + 1; b < pi.size(); ++b)
                if (s[pi[a]] == s[pi[b]] && pi[a] > pi[b]) {
                    canonical = false;
                    break;
                }
        if (!canonical) continue;
        for (size_t j = 0; j < s.size(); ++j) t[j] = s[pi[j]];
        fn(t, pi);
    } while (std::next_permutation(pi.begin(), pi.end()));
}

}  // namespace

std::vector<Tuple> all_tuples(int rank, int p) {
    std::vector<Tuple> out;
    if (p == 0) return {Tuple{}};
    if (rank == 0) return out;
    Tuple t(p, 0);
    while (true) {
        out.push_back(t);
        int i = p - 1;
        while (i >= 0 && ++t[i] == rank) t[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

std::vector<Tuple> sorted_tuples(int rank, int p) {
    std::vector<Tuple> out;
    for (auto& t : all_tuples(rank, p))
        if (std::is_sorted(t.begin(), t.end())) out.push_back(t);
    return out;
}

Cochain Cochain::from_values(int p, ModulePtr s, ModulePtr t, const ValueTable& sorted) {
    Cochain f(p, std::move(s), std::move(t));
    const HopfAlgebra& H = *f.target->H;
    for (const auto& [tuple, v] : sorted) {
        if (!std::is_sorted(tuple.begin(), tuple.end())) throw InternalError("from_values: unsorted tuple");
        if (static_cast<int>(tuple.size()) != p || v.arity != p) throw InternalError("from_values: arity mismatch");
        if (v.is_zero()) continue;
        arrangements(tuple, [&](const Tuple& arr, const std::vector<int>& pi) {
            PTElem w = permute(H, perm_inverse(pi), v);
            if (perm_sign(pi) < 0) w = -w;
            if (!w.is_zero()) f.values[arr] = std::move(w);
        });
    }
    return f;
}

Cochain Cochain::from_full(int p, ModulePtr s, ModulePtr t, ValueTable all) {
    Cochain f(p, std::move(s), std::move(t));
    f.skew = false;
    for (auto& [tuple, v] : all)
        if (!v.is_zero()) f.values.emplace(tuple, std::move(v));
    return f;
}

const PTElem* Cochain::find(const Tuple& t) const {
    auto it = values.find(t);
    return it == values.end() ? nullptr : &it->second;
}

PTElem Cochain::at(const Tuple& t) const {
    const PTElem* v = find(t);
    return v ? *v : PTElem(arity);
}

ValueTable Cochain::sorted_values() const {
    ValueTable out;
    for (const auto& [t, v] : values)
        if (std::is_sorted(t.begin(), t.end())) out.emplace(t, v);
    return out;
}

Cochain Cochain::operator+(const Cochain& o) const {
    check_compatible(*this, o);
    Cochain r = *this;
    r.skew = skew && o.skew;
    for (const auto& [t, v] : o.values) {
        auto it = r.values.find(t);
        if (it == r.values.end()) {
            r.values.emplace(t, v);
        } else {
            it->second = it->second + v;
            if (it->second.is_zero()) r.values.erase(it);
        }
    }
    return r;
}

Cochain Cochain::operator-(const Cochain& o) const { return *this + (-o); }

Cochain Cochain::operator*(const Q& c) const {
    Cochain r(arity, source, target);
    r.skew = skew;
    if (sgn(c) == 0) return r;
    for (const auto& [t, v] : values) r.values.emplace(t, v * c);
    return r;
}

PTElem eval(const Cochain& f, const std::vector<MElem>& args) {
    const int p = f.arity;
    if (static_cast<int>(args.size()) != p) throw InputError("eval: argument count mismatch");
    const HopfAlgebra& H = hopf_of(f);
    for (const auto& a : args)
        if (static_cast<int>(a.coords.size()) != f.source->rank()) throw InputError("eval: argument module mismatch");
    PTElem out(p);
    for (const auto& t : all_tuples(f.source->rank(), p)) {
        const PTElem* v = f.find(t);
        if (!v) continue;
        HTensor c;
        c.arity = p;
        c.terms.emplace_back(std::vector<MultiIndex>(p), Q(1));
        bool zero = false;
        for (int i = 0; i < p && !zero; ++i) {
            const HElem& h = args[i].coords[t[i]];
            if (h.is_zero()) {
                zero = true;
                break;
            }
            decltype(c.terms) next;
            for (const auto& [slots, q] : c.terms)
                for (const auto& [m, r] : h.terms) {
                    auto s = slots;
                    s[i] = m;
                    next.emplace_back(std::move(s), q * r);
                }
            c.terms = std::move(next);
        }
        if (zero) continue;
        if (p == 0) {
            out = out + *v;
            continue;
        }
        c.normalize();
        out = out + act(H, c, *v);
    }
    return out;
}

std::vector<SkewViolation> skew_check(const Cochain& f) {
    std::vector<SkewViolation> out;
    const HopfAlgebra& H = hopf_of(f);
    const int p = f.arity;
    for (const auto& t : all_tuples(f.source->rank(), p)) {
        const PTElem a = f.at(t);
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j) {
                Tuple s = t;
                std::swap(s[i], s[j]);
                if (s < t) continue;  // each unordered pair once
                std::vector<int> tau = perm_identity(p);
                std::swap(tau[i], tau[j]);
                PTElem r = a + permute(H, tau, f.at(s));
                if (!r.is_zero()) out.push_back({t, i, j, std::move(r)});
            }
    }
    return out;
}

PTElem skew_project(const HopfAlgebra& H, const Tuple& t, const PTElem& v) {
    const int p = static_cast<int>(t.size());
    std::vector<int> sigma = perm_identity(p);
    PTElem acc(p);
    int count = 0;
    do {
        bool stab = true;
        for (int j = 0; j < p; ++j) stab = stab && t[sigma[j]] == t[j];
        if (!stab) continue;
        PTElem w = permute(H, sigma, v);
        acc = acc + (perm_sign(sigma) < 0 ? -w : w);
        ++count;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return acc * Q(1, count);
}

namespace {

// Adds (f⊚g)(t) into acc.
void circle_at(const HopfAlgebra& H, const Cochain& f, const Cochain& g, const Tuple& t, RawPT& acc) {
    const int p = f.arity, q = g.arity, n = p + q - 1;
    std::vector<int> pick(n, 0);
    std::fill(pick.begin(), pick.begin() + q, 1);  // first combination in prev_permutation order
    Tuple y(q), z(p);
    std::vector<int> sigma(n);
    TKey key = make_key(n);
    do {
        int a = 0, b = q, inv = 0;
        for (int pos = 0; pos < n; ++pos) {
            if (pick[pos]) {
                inv += pos - a;
                sigma[a++] = pos;
            } else {
                sigma[b++] = pos;
            }
        }
        const Q sign = (inv & 1) ? Q(-1) : Q(1);
        for (int j = 0; j < q; ++j) y[j] = t[sigma[j]];
        const PTElem* gv = g.find(y);
        if (!gv) continue;
        for (int j = 1; j < p; ++j) z[j] = t[sigma[q + j - 1]];
        for (const auto& [gk, gq] : gv->terms) {
            z[0] = gk.basis();
            const PTElem* fv = f.find(z);
            if (!fv) continue;
            const MultiIndex K = gk.coeff();
            for (const auto& [fk, fq] : fv->terms) {
                for (int j = 1; j < p; ++j) key.set_slot(sigma[q + j - 1], fk.slot(j));
                key.set_coeff(fk.coeff());
                key.set_basis(fk.basis());
                const Q base = sign * gq * fq;
                H.mul_mono_into(K, fk.slot(0), base, [&](MultiIndex m, const Q& c) {
                    for (const auto& L : H.splits(m, q)) {
                        // slot j of g's value times leg j of Δ^{q−1}(a^K c₁), placed at σ(j)
                        std::function<void(int, const Q&)> rec = [&](int j, const Q& cc) {
                            if (j == q) {
                                acc.add(key, cc);
                                return;
                            }
                            H.mul_mono_into(gk.slot(j), L[j], cc, [&](MultiIndex s, const Q& c2) {
                                key.set_slot(sigma[j], s);
                                rec(j + 1, c2);
                            });
                        };
                        rec(0, c);
                    }
                });
            }
        }
    } while (std::prev_permutation(pick.begin(), pick.end()));
}

}  // namespace

Cochain circle(const Cochain& f, const Cochain& g, bool all_tuples_mode) {
    if (f.source != g.target && f.source->rank() != g.target->rank())
        throw InputError("circle: modules are not composable");
    const int n = f.arity + g.arity - 1;
    if (f.arity < 1 || g.arity < 0 || n < 0) throw InternalError("circle: bad arities");
    if (n > kMaxArity) throw ResourceError("circle: arity exceeds limit");
    const HopfAlgebra& H = hopf_of(f);
    const bool skew_mode = !all_tuples_mode && f.skew && g.skew;
    if (f.is_zero() || g.is_zero()) {
        Cochain r(n, g.source, f.target);
        r.skew = skew_mode;
        return r;
    }
    if (g.arity == 0) throw InternalError("circle: inner arity 0 is not supported");
    const auto tuples = skew_mode ? sorted_tuples(g.source->rank(), n) : all_tuples(g.source->rank(), n);
    std::vector<PTElem> out(tuples.size());
    parallel_for(tuples.size(), [&](size_t i) {
        RawPT acc(n);
        circle_at(H, f, g, tuples[i], acc);
        out[i] = acc.canonical(H);
    });
    ValueTable table;
    for (size_t i = 0; i < tuples.size(); ++i)
        if (!out[i].is_zero()) table.emplace(tuples[i], std::move(out[i]));
    if (skew_mode) return Cochain::from_values(n, g.source, f.target, table);
    return Cochain::from_full(n, g.source, f.target, std::move(table));
}

Cochain nr_bracket(const Cochain& f, const Cochain& g, bool all_tuples_mode) {
    const int p = f.arity, q = g.arity;
    Cochain a = circle(f, g, all_tuples_mode);
    Cochain b = circle(g, f, all_tuples_mode);
    return ((p - 1) * (q - 1)) % 2 == 0 ? a - b : a + b;
}

std::string Bidegree::str() const {
    switch (kind) {
        case Zero: return "inhomogeneous-zero";
        case Inhomogeneous: return "inhomogeneous";
        default: return std::to_string(k) + "|" + std::to_string(l);
    }
}

std::pair<int, int> tuple_profile(const FreeModule& G, const Tuple& t) {
    int ng = 0;
    for (int x : t) ng += G.in_g(x) ? 1 : 0;
    return {ng, static_cast<int>(t.size()) - ng};
}

namespace {
// Bidegree candidate of a single nonzero value.
std::pair<int, int> term_bidegree(const Cochain& f, const Tuple& t, int out_basis) {
    auto [ng, nh] = tuple_profile(*f.source, t);
    if (f.target->in_g(out_basis)) return {ng - 1, nh};
    return {ng, nh - 1};
}
}  // namespace

Bidegree bidegree_of(const Cochain& f) {
    if (!f.source->has_split() || !f.target->has_split()) throw InputError("bidegree_of: source has no g ⊞ h split");
    Bidegree b;
    for (const auto& [t, v] : f.values)
        for (const auto& [k, c] : v.terms) {
            auto kl = term_bidegree(f, t, k.basis());
            if (b.kind == Bidegree::Zero) {
                b.kind = Bidegree::Homogeneous;
                b.k = kl.first;
                b.l = kl.second;
            } else if (b.k != kl.first || b.l != kl.second) {
                b.kind = Bidegree::Inhomogeneous;
                return b;
            }
        }
    return b;
}

Cochain bidegree_component(const Cochain& f, int k, int l) {
    Cochain r(f.arity, f.source, f.target);
    r.skew = f.skew;
    for (const auto& [t, v] : f.values) {
        PTElem part(v.arity);
        for (const auto& term : v.terms)
            if (term_bidegree(f, t, term.first.basis()) == std::make_pair(k, l)) part.terms.push_back(term);
        if (!part.is_zero()) r.values.emplace(t, std::move(part));
    }
    return r;
}

Cochain lift(const ModulePtr& G, const ComponentMap& kappa) {
    if (!G->has_split()) throw InputError("lift: module has no split");
    const int p = kappa.k + kappa.l;
    const int sh = G->split;
    ValueTable sorted;
    for (const auto& [t, v] : kappa.values) {
        if (static_cast<int>(t.size()) != p) throw InputError("lift: component tuple has wrong length");
        if (!std::is_sorted(t.begin(), t.begin() + kappa.k) || !std::is_sorted(t.begin() + kappa.k, t.end()))
            throw InputError("lift: component tuple blocks must be non-decreasing");
        Tuple s = t;
        for (int j = kappa.k; j < p; ++j) s[j] += sh;
        PTElem w = kappa.to_h ? shift_basis(v, sh) : v;
        auto [it, fresh] = sorted.emplace(s, w);
        if (!fresh) it->second = it->second + w;
    }
    return Cochain::from_values(p, G, G, sorted);
}

ComponentMap restrict_component(const Cochain& F, int k, int l, bool to_h) {
    const FreeModule& G = *F.source;
    const int sh = G.split;
    ComponentMap c;
    c.k = k;
    c.l = l;
    c.to_h = to_h;
    for (const auto& [t, v] : F.values) {
        if (static_cast<int>(t.size()) != k + l) continue;
        bool ok = true;
        for (int j = 0; j < k + l && ok; ++j) ok = (j < k) == G.in_g(t[j]);
        if (!ok) continue;
        if (!std::is_sorted(t.begin(), t.begin() + k) || !std::is_sorted(t.begin() + k, t.end())) continue;
        PTElem w = to_h ? restrict_basis(v, sh, G.rank(), -sh) : restrict_basis(v, 0, sh);
        if (w.is_zero()) continue;
        Tuple s = t;
        for (int j = k; j < k + l; ++j) s[j] -= sh;
        c.values.emplace(s, std::move(w));
    }
    return c;
}

HModuleMap HModuleMap::zero(ModulePtr from, ModulePtr to) {
    HModuleMap m;
    m.matrix.assign(from->rank(), std::vector<HElem>(to->rank()));
    m.from = std::move(from);
    m.to = std::move(to);
    return m;
}

HModuleMap HModuleMap::scalar(ModulePtr mod, const Q& c) {
    HModuleMap m = zero(mod, mod);
    for (int i = 0; i < mod->rank(); ++i) m.matrix[i][i] = sgn(c) ? HElem::one() * c : HElem();
    return m;
}

HModuleMap HModuleMap::operator+(const HModuleMap& o) const {
    if (matrix.size() != o.matrix.size()) throw InternalError("module map shape mismatch");
    HModuleMap r = *this;
    for (size_t i = 0; i < matrix.size(); ++i)
        for (size_t j = 0; j < matrix[i].size(); ++j) r.matrix[i][j] = matrix[i][j] + o.matrix[i][j];
    return r;
}

HModuleMap HModuleMap::operator*(const Q& c) const {
    HModuleMap r = *this;
    for (auto& row : r.matrix)
        for (auto& h : row) h = h * c;
    return r;
}

MElem HModuleMap::apply(const MElem& m) const {
    const HopfAlgebra& H = *from->H;
    MElem r = MElem::zero(to->rank());
    for (size_t i = 0; i < matrix.size(); ++i) {
        if (m.coords[i].is_zero()) continue;
        for (size_t j = 0; j < matrix[i].size(); ++j)
            if (!matrix[i][j].is_zero()) r.coords[j] = r.coords[j] + H.mul(m.coords[i], matrix[i][j]);
    }
    return r;
}

bool HModuleMap::is_zero() const {
    for (const auto& row : matrix)
        for (const auto& h : row)
            if (!h.is_zero()) return false;
    return true;
}

HModuleMap compose(const HModuleMap& a, const HModuleMap& b) {
    HModuleMap r = HModuleMap::zero(b.from, a.to);
    const HopfAlgebra& H = *a.from->H;
    for (size_t i = 0; i < b.matrix.size(); ++i)
        for (size_t k = 0; k < b.matrix[i].size(); ++k) {
            if (b.matrix[i][k].is_zero()) continue;
            for (size_t j = 0; j < a.matrix[k].size(); ++j)
                if (!a.matrix[k][j].is_zero())
                    r.matrix[i][j] = r.matrix[i][j] + H.mul(b.matrix[i][k], a.matrix[k][j]);
        }
    return r;
}

Cochain as_cochain(const HModuleMap& m) {
    ValueTable vals;
    for (int i = 0; i < static_cast<int>(m.matrix.size()); ++i) {
        PTElem v = pt_from_melem(1, MElem{m.matrix[i]});
        if (!v.is_zero()) vals.emplace(Tuple{i}, std::move(v));
    }
    return Cochain::from_values(1, m.from, m.to, vals);
}

Cochain lift_map(const ModulePtr& G, const HModuleMap& m, bool g_to_h) {
    ComponentMap c;
    c.k = g_to_h ? 1 : 0;
    c.l = g_to_h ? 0 : 1;
    c.to_h = g_to_h;
    for (int i = 0; i < static_cast<int>(m.matrix.size()); ++i) {
        PTElem v = pt_from_melem(1, MElem{m.matrix[i]});
        if (!v.is_zero()) c.values.emplace(Tuple{i}, std::move(v));
    }
    return lift(G, c);
}

Cochain post_compose(const HModuleMap& m, const Cochain& f) {
    const HopfAlgebra& H = *m.from->H;
    Cochain r(f.arity, f.source, m.to);
    r.skew = f.skew;
    for (const auto& [t, v] : f.values) {
        PTElem w = apply_module_map(H, m.matrix, v);
        if (!w.is_zero()) r.values.emplace(t, std::move(w));
    }
    return r;
}

Cochain transpose_last(const Cochain& f) {
    const int n = f.arity;
    if (n < 2) throw InputError("transpose_last: arity must be at least 2");
    const HopfAlgebra& H = hopf_of(f);
    Cochain r(n, f.source, f.target);
    r.skew = false;
    for (const auto& t : all_tuples(f.source->rank(), n)) {
        Tuple s = t;
        std::swap(s[n - 2], s[n - 1]);
        const PTElem* v = f.find(s);
        if (!v) continue;
        // g₁⊗…⊗g_{n−1} ⊗ e  ↦  −g₁h₍₋₁₎⊗…⊗g_{n−2}h₍₋₍ₙ₋₂₎₎⊗h₍₋₍ₙ₋₁₎₎ ⊗ h₍ₙ₎e  with h = g_{n−1}
        std::vector<std::pair<TKey, Q>> raw;
        for (const auto& [k, c] : v->terms) {
            HTensor legs = H.sweedler_legs(HElem::mono(k.slot(n - 2)), n - 1, 1);
            for (const auto& [L, lc] : legs.terms) {
                std::vector<std::vector<HTerm>> parts(n);
                for (int i = 0; i < n - 2; ++i) parts[i] = H.mul_mono(k.slot(i), L[i]).terms;
                parts[n - 2] = {{L[n - 2], Q(1)}};
                parts[n - 1] = H.mul_mono(L[n - 1], k.coeff()).terms;
                std::vector<size_t> idx(n, 0);
                bool empty = false;
                for (auto& p : parts) empty = empty || p.empty();
                if (empty) continue;
                while (true) {
                    TKey key = make_key(n);
                    Q coef = -c * lc;
                    for (int i = 0; i < n - 1; ++i) {
                        key.set_slot(i, parts[i][idx[i]].first);
                        coef *= parts[i][idx[i]].second;
                    }
                    key.set_coeff(parts[n - 1][idx[n - 1]].first);
                    coef *= parts[n - 1][idx[n - 1]].second;
                    key.set_basis(k.basis());
                    raw.emplace_back(key, coef);
                    int i = 0;
                    while (i < n && ++idx[i] == parts[i].size()) idx[i++] = 0;
                    if (i == n) break;
                }
            }
        }
        PTElem w = canonicalize(H, raw, n);
        if (!w.is_zero()) r.values.emplace(t, std::move(w));
    }
    return r;
}

std::string format_cochain(const Cochain& f) {
    const HopfAlgebra& H = hopf_of(f);
    std::string s;
    for (const auto& [t, v] : f.values) {
        if (f.skew && !std::is_sorted(t.begin(), t.end())) continue;
        s += "f(";
        for (size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + f.source->basis.at(t[i]);
        s += ") = " + format_pt(H, *f.target, v) + "\n";
    }
    return s.empty() ? "0\n" : s;
}

}  // namespace pa

namespace pa {

namespace {
MultiIndex random_mono(std::mt19937_64& rng, const HopfAlgebra& H, int max_deg) {
    int left = std::uniform_int_distribution<int>(0, max_deg)(rng);
    std::vector<int> e(H.dim(), 0);
    while (left-- > 0) e[std::uniform_int_distribution<int>(0, H.dim() - 1)(rng)]++;
    return MultiIndex::from_vector(e);
}
Q random_coeff(std::mt19937_64& rng) {
    int c = 0;
    while (c == 0) c = std::uniform_int_distribution<int>(-2, 2)(rng);
    return Q(c);
}
}  // namespace

HElem random_helem(std::mt19937_64& rng, const HopfAlgebra& H, int max_deg, int max_terms) {
    std::vector<HTerm> t;
    const int n = std::uniform_int_distribution<int>(1, max_terms)(rng);
    for (int i = 0; i < n; ++i) t.emplace_back(random_mono(rng, H, max_deg), random_coeff(rng));
    return HElem::from_terms(std::move(t));
}

PTElem random_pt(std::mt19937_64& rng, const HopfAlgebra& H, int n, int rank, int max_deg, int max_terms) {
    PTElem e(n);
    if (rank == 0) return e;
    const int cnt = std::uniform_int_distribution<int>(1, max_terms)(rng);
    for (int i = 0; i < cnt; ++i) {
        std::vector<MultiIndex> slots(n);
        for (int j = 0; j + 1 < n; ++j) slots[j] = random_mono(rng, H, max_deg);
        const int b = std::uniform_int_distribution<int>(0, rank - 1)(rng);
        e = e + pt_from_raw(H, slots, random_mono(rng, H, max_deg), b, random_coeff(rng));
    }
    return e;
}

Cochain random_cochain(std::mt19937_64& rng, int p, ModulePtr s, ModulePtr t, int max_deg, int max_terms) {
    const HopfAlgebra& H = *t->H;
    ValueTable vals;
    for (const auto& tu : sorted_tuples(s->rank(), p)) {
        if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) continue;
        PTElem v = skew_project(H, tu, random_pt(rng, H, p, t->rank(), max_deg, max_terms));
        if (!v.is_zero()) vals.emplace(tu, std::move(v));
    }
    return Cochain::from_values(p, std::move(s), std::move(t), vals);
}

}  // namespace pa

namespace pa {

PTElem value(const Cochain& f, const Tuple& t) { return f.at(t); }

PTElem compose_value(const Cochain& f, int pos, const PTElem& inner, const Tuple& others) {
    const int p = f.arity, q = inner.arity, n = p + q - 1;
    if (static_cast<int>(others.size()) != p - 1 || pos < 0 || pos >= p)
        throw InternalError("compose_value: bad arguments");
    if (n > kMaxArity) throw ResourceError("compose_value: arity exceeds limit");
    const HopfAlgebra& H = hopf_of(f);
    RawPT acc(n);
    if (inner.is_zero()) return PTElem(n);
    Tuple z(p);
    for (int j = 0, o = 0; j < p; ++j)
        if (j != pos) z[j] = others[o++];
    TKey key = make_key(n);
    for (const auto& [gk, gq] : inner.terms) {
        z[pos] = gk.basis();
        const PTElem* fv = f.find(z);
        if (!fv) continue;
        for (const auto& [fk, fq] : fv->terms) {
            for (int j = 0; j < p; ++j) {
                if (j < pos) key.set_slot(j, fk.slot(j));
                if (j > pos) key.set_slot(j + q - 1, fk.slot(j));
            }
            key.set_coeff(fk.coeff());
            key.set_basis(fk.basis());
            H.mul_mono_into(gk.coeff(), fk.slot(pos), gq * fq, [&](MultiIndex m, const Q& c) {
                for (const auto& L : H.splits(m, q)) {
                    std::function<void(int, const Q&)> rec = [&](int j, const Q& cc) {
                        if (j == q) {
                            acc.add(key, cc);
                            return;
                        }
                        H.mul_mono_into(gk.slot(j), L[j], cc, [&](MultiIndex s, const Q& c2) {
                            key.set_slot(pos + j, s);
                            rec(j + 1, c2);
                        });
                    };
                    rec(0, c);
                }
            });
        }
    }
    return acc.canonical(H);
}

}  // namespace pa
