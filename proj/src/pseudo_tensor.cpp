#include "pa/pseudo_tensor.hpp"

#include <algorithm>
#include <sstream>

namespace pa {

ModulePtr make_module(HopfPtr H, std::string name, std::vector<std::string> basis) {
    auto m = std::make_shared<FreeModule>();
    m->H = std::move(H);
    m->name = std::move(name);
    m->basis = std::move(basis);
    return m;
}

ModulePtr direct_sum(const ModulePtr& g, const ModulePtr& h, std::string name) {
    if (g->H != h->H) throw InputError("direct sum of modules over different Hopf algebras");
    auto m = std::make_shared<FreeModule>();
    m->H = g->H;
    m->name = std::move(name);
    m->basis = g->basis;
    m->basis.insert(m->basis.end(), h->basis.begin(), h->basis.end());
    m->split = g->rank();
    return m;
}

MElem MElem::basis(int rank, int k, const HElem& h) {
    MElem m = zero(rank);
    m.coords.at(k) = h;
    return m;
}

bool MElem::is_zero() const {
    return std::all_of(coords.begin(), coords.end(), [](const HElem& h) { return h.is_zero(); });
}

TKey make_key(int n) {
    if (n < 0 || n > kMaxArity) throw ResourceError("pseudotensor arity " + std::to_string(n) + " exceeds limit");
    TKey k;
    k.n = static_cast<uint8_t>(n);
    return k;
}

namespace {

using Acc = std::unordered_map<TKey, Q, TKeyHash>;

void acc_add(Acc& acc, const TKey& k, const Q& c) {
    if (sgn(c) == 0) return;
    auto [it, fresh] = acc.try_emplace(k, c);
    if (!fresh) it->second += c;
}

PTElem from_acc(const Acc& acc, int n) {
    PTElem out(n);
    out.terms.reserve(acc.size());
    for (const auto& [k, c] : acc)
        if (sgn(c) != 0) out.terms.emplace_back(k, c);
    std::sort(out.terms.begin(), out.terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

// Emits every term of the product f_0 ⊗ … ⊗ f_{n-1} ⊗_H (f_n e_basis).
void expand_factors(const std::vector<std::vector<HTerm>>& f, int n, int basis, const Q& c, Acc& acc) {
    for (const auto& v : f)
        if (v.empty()) return;
    std::vector<size_t> idx(f.size(), 0);
    TKey k = make_key(n);
    k.set_basis(basis);
    while (true) {
        Q coef = c;
        for (size_t i = 0; i < f.size(); ++i) {
            const auto& [m, q] = f[i][idx[i]];
            coef *= q;
            k.w[i] = m.bits();
        }
        acc_add(acc, k, coef);
        size_t i = 0;
        while (i < f.size() && ++idx[i] == f[i].size()) idx[i++] = 0;
        if (i == f.size()) break;
    }
}

void canonical_term_into(const HopfAlgebra& H, const TKey& key, const Q& c, int n, Acc& acc) {
    if (n == 0 || key.slot(n - 1).zero()) {
        acc_add(acc, key, c);
        return;
    }
    const MultiIndex last = key.slot(n - 1);
    const MultiIndex K = key.coeff();
    const int basis = key.basis();
    const auto& sp = H.splits(last, n);
    if (H.abelian()) {
        const int d = H.dim();
        TKey k = make_key(n);
        k.set_basis(basis);
        for (const auto& L : sp) {
            Q coef = c;
            int sign_deg = 0;
            for (int i = 0; i + 1 < n; ++i) {
                const MultiIndex I = key.slot(i);
                for (int g = 0; g < d; ++g)
                    if (I[g] && L[i][g]) coef *= binomial(I[g] + L[i][g], I[g]);
                sign_deg += L[i].degree();
                k.set_slot(i, I + L[i]);
            }
            for (int g = 0; g < d; ++g)
                if (K[g] && L[n - 1][g]) coef *= binomial(K[g] + L[n - 1][g], K[g]);
            k.set_slot(n - 1, MultiIndex{});
            k.set_coeff(L[n - 1] + K);
            if (sign_deg & 1) coef = -coef;
            acc_add(acc, k, coef);
        }
        return;
    }
    std::vector<std::vector<HTerm>> f(n + 1);
    for (const auto& L : sp) {
        for (int i = 0; i + 1 < n; ++i)
            f[i] = H.mul(HElem::mono(key.slot(i)), H.antipode_mono(L[i])).terms;
        f[n - 1] = {{MultiIndex{}, Q(1)}};
        f[n] = H.mul_mono(L[n - 1], K).terms;
        expand_factors(f, n, basis, c, acc);
    }
}

}  // namespace

int PTElem::max_degree() const {
    int best = -1;
    for (const auto& [k, c] : terms) {
        int d = k.coeff().degree();
        for (int i = 0; i < arity; ++i) d += k.slot(i).degree();
        best = std::max(best, d);
    }
    return best;
}

PTElem PTElem::operator+(const PTElem& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (arity != o.arity) throw InternalError("adding pseudotensors of different arity");
    PTElem r(arity);
    r.terms.reserve(terms.size() + o.terms.size());
    size_t i = 0, j = 0;
    while (i < terms.size() || j < o.terms.size()) {
        if (j == o.terms.size() || (i < terms.size() && terms[i].first < o.terms[j].first)) {
            r.terms.push_back(terms[i++]);
        } else if (i == terms.size() || o.terms[j].first < terms[i].first) {
            r.terms.push_back(o.terms[j++]);
        } else {
            Q s = terms[i].second + o.terms[j].second;
            if (sgn(s) != 0) r.terms.emplace_back(terms[i].first, s);
            ++i;
            ++j;
        }
    }
    return r;
}

PTElem PTElem::operator-(const PTElem& o) const { return *this + (-o); }

PTElem PTElem::operator-() const {
    PTElem r = *this;
    for (auto& t : r.terms) t.second = -t.second;
    return r;
}

PTElem PTElem::operator*(const Q& c) const {
    if (sgn(c) == 0) return PTElem(arity);
    PTElem r = *this;
    for (auto& t : r.terms) t.second *= c;
    return r;
}

void RawPT::add(const TKey& k, const Q& c) {
    if (k.n != n_) throw InternalError("raw term arity mismatch");
    acc_add(acc_, k, c);
}

void RawPT::add_canonical(const PTElem& e, const Q& c) {
    if (e.is_zero()) return;
    if (e.arity != n_) throw InternalError("raw term arity mismatch");
    for (const auto& [k, q] : e.terms) acc_add(acc_, k, q * c);
}

PTElem RawPT::canonical(const HopfAlgebra& H) const {
    Acc out;
    for (const auto& [k, c] : acc_)
        if (sgn(c) != 0) canonical_term_into(H, k, c, n_, out);
    return from_acc(out, n_);
}

PTElem canonicalize(const HopfAlgebra& H, const std::vector<std::pair<TKey, Q>>& raw, int n) {
    Acc out;
    for (const auto& [k, c] : raw) canonical_term_into(H, k, c, n, out);
    return from_acc(out, n);
}

PTElem pt_from_raw(const HopfAlgebra& H, const std::vector<MultiIndex>& slots, MultiIndex K, int basis,
                   const Q& c) {
    const int n = static_cast<int>(slots.size());
    TKey k = make_key(n);
    for (int i = 0; i < n; ++i) k.set_slot(i, slots[i]);
    k.set_coeff(K);
    k.set_basis(basis);
    return canonicalize(H, {{k, c}}, n);
}

PTElem pt_from_melem(int n, const MElem& m) {
    Acc acc;
    TKey k = make_key(n);
    for (int b = 0; b < static_cast<int>(m.coords.size()); ++b) {
        k.set_basis(b);
        for (const auto& [mi, c] : m.coords[b].terms) {
            k.set_coeff(mi);
            acc_add(acc, k, c);
        }
    }
    return from_acc(acc, n);
}

PTElem pt_from_tensor(const HopfAlgebra& H, const HTensor& t, const MElem& m) {
    const int n = t.arity;
    Acc acc;
    TKey k = make_key(n);
    for (const auto& [slots, c] : t.terms) {
        for (int i = 0; i < n; ++i) k.set_slot(i, slots[i]);
        for (int b = 0; b < static_cast<int>(m.coords.size()); ++b) {
            k.set_basis(b);
            for (const auto& [mi, q] : m.coords[b].terms) {
                k.set_coeff(mi);
                canonical_term_into(H, k, c * q, n, acc);
            }
        }
    }
    return from_acc(acc, n);
}

PTElem act(const HopfAlgebra& H, const HTensor& c, const PTElem& e) {
    if (e.is_zero()) return PTElem(c.arity);
    if (c.arity != e.arity) throw InternalError("act: arity mismatch");
    const int n = e.arity;
    Acc raw;
    std::vector<std::vector<HTerm>> f(n + 1);
    for (const auto& [slots, q] : c.terms) {
        for (const auto& [k, v] : e.terms) {
            for (int i = 0; i < n; ++i) f[i] = H.mul_mono(slots[i], k.slot(i)).terms;
            f[n] = {{k.coeff(), Q(1)}};
            expand_factors(f, n, k.basis(), q * v, raw);
        }
    }
    Acc out;
    for (const auto& [k, v] : raw)
        if (sgn(v) != 0) canonical_term_into(H, k, v, n, out);
    return from_acc(out, n);
}

PTElem permute(const HopfAlgebra& H, const std::vector<int>& perm, const PTElem& e) {
    const int n = e.arity;
    if (static_cast<int>(perm.size()) != n) throw InternalError("permute: size mismatch");
    bool ident = true;
    for (int i = 0; i < n; ++i) ident = ident && perm[i] == i;
    if (ident || e.is_zero()) return e;
    Acc out;
    for (const auto& [k, c] : e.terms) {
        TKey r = k;
        for (int j = 0; j < n; ++j) r.w[perm[j]] = k.w[j];
        canonical_term_into(H, r, c, n, out);
    }
    return from_acc(out, n);
}

PTElem linear_combine(const std::vector<std::pair<Q, PTElem>>& pairs) {
    PTElem r;
    bool first = true;
    for (const auto& [c, e] : pairs) {
        if (first) {
            r = PTElem(e.arity);
            first = false;
        }
        r = r + e * c;
    }
    return r;
}

PTElem apply_module_map(const HopfAlgebra& H, const HMatrix& D, const PTElem& e) {
    Acc acc;
    for (const auto& [k, c] : e.terms) {
        const auto& row = D.at(k.basis());
        for (int j = 0; j < static_cast<int>(row.size()); ++j) {
            if (row[j].is_zero()) continue;
            TKey r = k;
            r.set_basis(j);
            for (const auto& [m, q] : row[j].terms) {
                H.mul_mono_into(k.coeff(), m, c * q, [&](MultiIndex x, const Q& v) {
                    r.set_coeff(x);
                    acc_add(acc, r, v);
                });
            }
        }
    }
    return from_acc(acc, e.arity);
}

PTElem restrict_basis(const PTElem& e, int lo, int hi, int shift) {
    PTElem r(e.arity);
    for (const auto& [k, c] : e.terms) {
        const int b = k.basis();
        if (b < lo || b >= hi) continue;
        TKey nk = k;
        nk.set_basis(b + shift);
        r.terms.emplace_back(nk, c);
    }
    std::sort(r.terms.begin(), r.terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return r;
}

PTElem shift_basis(const PTElem& e, int shift) {
    return restrict_basis(e, 0, 1 << 30, shift);
}

MElem pt_to_melem(const PTElem& e, int rank) {
    if (e.arity > 1) throw InternalError("pt_to_melem: arity > 1");
    std::vector<std::vector<HTerm>> parts(rank);
    for (const auto& [k, c] : e.terms) parts.at(k.basis()).emplace_back(k.coeff(), c);
    MElem m = MElem::zero(rank);
    for (int b = 0; b < rank; ++b) m.coords[b] = HElem::from_terms(std::move(parts[b]));
    return m;
}

std::string format_mono(const HopfAlgebra& H, MultiIndex m) {
    if (m.zero()) return "1";
    std::string s;
    const auto& names = H.base().names;
    for (int i = 0; i < H.dim(); ++i) {
        const int e = m[i];
        if (!e) continue;
        s += names.at(i);
        if (e > 1) s += "^(" + std::to_string(e) + ")";
    }
    return s;
}

namespace {
std::string coeff_prefix(const Q& c, bool first) {
    std::string s;
    Q a = abs(c);
    if (first) {
        if (sgn(c) < 0) s = "-";
    } else {
        s = sgn(c) < 0 ? " - " : " + ";
    }
    if (a != 1) s += a.get_str();
    return s;
}
}  // namespace

std::string format_helem(const HopfAlgebra& H, const HElem& h) {
    if (h.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, c] : h.terms) {
        s += coeff_prefix(c, first);
        const bool unit = abs(c) == 1;
        if (!m.zero()) {
            if (!unit) s += "*";
            s += format_mono(H, m);
        } else if (unit) {
            s += "1";
        }
        first = false;
    }
    return s;
}

std::string format_pt(const HopfAlgebra& H, const FreeModule& M, const PTElem& e) {
    if (e.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [k, c] : e.terms) {
        s += coeff_prefix(c, first);
        if (abs(c) != 1) s += "*";
        if (e.arity > 0) {
            s += "(";
            for (int i = 0; i < e.arity; ++i) {
                if (i) s += "⊗";
                s += format_mono(H, k.slot(i));
            }
            s += ")⊗_H ";
        }
        if (!k.coeff().zero()) s += format_mono(H, k.coeff()) + " ";
        s += M.basis.at(k.basis());
        first = false;
    }
    return s;
}

std::vector<int> perm_identity(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    return p;
}

std::vector<int> perm_inverse(const std::vector<int>& p) {
    std::vector<int> q(p.size());
    for (size_t i = 0; i < p.size(); ++i) q[p[i]] = static_cast<int>(i);
    return q;
}

std::vector<int> perm_compose(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> r(b.size());
    for (size_t i = 0; i < b.size(); ++i) r[i] = a[b[i]];
    return r;
}

int perm_sign(const std::vector<int>& p) {
    int s = 1;
    std::vector<bool> seen(p.size(), false);
    for (size_t i = 0; i < p.size(); ++i) {
        if (seen[i]) continue;
        size_t j = i;
        int len = 0;
        while (!seen[j]) {
            seen[j] = true;
            j = static_cast<size_t>(p[j]);
            ++len;
        }
        if (len % 2 == 0) s = -s;
    }
    return s;
}

std::vector<int> perm_from_cycle(int n, const std::vector<int>& cycle) {
    std::vector<int> p = perm_identity(n);
    const size_t m = cycle.size();
    for (size_t i = 0; i < m; ++i) p.at(cycle[i] - 1) = cycle[(i + 1) % m] - 1;
    return p;
}

}  // namespace pa
