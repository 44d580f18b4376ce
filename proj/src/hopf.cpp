#include "pa/hopf.hpp"

#include <algorithm>
#include <map>

namespace pa {

MultiIndex MultiIndex::unit(int i, int k) {
    MultiIndex m;
    m.set(i, k);
    return m;
}

MultiIndex MultiIndex::from_vector(const std::vector<int>& e) {
    if (static_cast<int>(e.size()) > kMaxGenerators)
        throw InputError("multi-index longer than " + std::to_string(kMaxGenerators));
    MultiIndex m;
    for (size_t i = 0; i < e.size(); ++i) m.set(static_cast<int>(i), e[i]);
    return m;
}

void MultiIndex::set(int i, int v) {
    if (i < 0 || i >= kMaxGenerators) throw InputError("generator index out of range");
    if (v < 0) throw InputError("negative exponent");
    if (v > kMaxExponent) throw ResourceError("PBW exponent exceeds 255");
    bits_ &= ~(uint64_t{0xFF} << (8 * i));
    bits_ |= uint64_t(v) << (8 * i);
}

int MultiIndex::degree() const {
    int d = 0;
    for (int i = 0; i < kMaxGenerators; ++i) d += (*this)[i];
    return d;
}

std::vector<int> MultiIndex::to_vector(int dim) const {
    std::vector<int> v(dim);
    for (int i = 0; i < dim; ++i) v[i] = (*this)[i];
    return v;
}

MultiIndex MultiIndex::operator+(MultiIndex o) const {
    if (o.bits_ == 0) return *this;
    if (bits_ == 0) return o;
    MultiIndex r;
    for (int i = 0; i < kMaxGenerators; ++i) {
        int s = (*this)[i] + o[i];
        if (s) r.set(i, s);
    }
    return r;
}

MultiIndex MultiIndex::operator-(MultiIndex o) const {
    MultiIndex r;
    for (int i = 0; i < kMaxGenerators; ++i) {
        int s = (*this)[i] - o[i];
        if (s < 0) throw InternalError("multi-index subtraction underflow");
        if (s) r.set(i, s);
    }
    return r;
}

bool MultiIndex::divides(MultiIndex o) const {
    for (int i = 0; i < kMaxGenerators; ++i)
        if ((*this)[i] > o[i]) return false;
    return true;
}

// ---------------------------------------------------------------- BaseLieAlgebra

BaseLieAlgebra BaseLieAlgebra::abelian(int dim, std::vector<std::string> names) {
    if (dim < 1 || dim > kMaxGenerators)
        throw InputError("dim(b) must be in [1, " + std::to_string(kMaxGenerators) + "]");
    BaseLieAlgebra b;
    b.dim = dim;
    if (names.empty())
        for (int i = 0; i < dim; ++i) names.push_back("a" + std::to_string(i + 1));
    if (static_cast<int>(names.size()) != dim) throw InputError("generator name count != dim");
    b.names = std::move(names);
    b.bracket.assign(dim, std::vector<std::vector<std::pair<int, Q>>>(dim));
    return b;
}

void BaseLieAlgebra::set_bracket(int i, int j, std::vector<std::pair<int, Q>> coeffs) {
    if (i < 0 || j < 0 || i >= dim || j >= dim) throw InputError("bracket index out of range");
    std::map<int, Q> merged;
    for (auto& [k, c] : coeffs) {
        if (k < 0 || k >= dim) throw InputError("bracket coefficient index out of range");
        merged[k] += c;
    }
    std::vector<std::pair<int, Q>> pos, neg;
    for (auto& [k, c] : merged)
        if (c != 0) {
            pos.emplace_back(k, c);
            neg.emplace_back(k, -c);
        }
    if (i == j && !pos.empty()) throw InputError("[a_i, a_i] must vanish");
    bracket[i][j] = pos;
    bracket[j][i] = neg;
}

bool BaseLieAlgebra::is_abelian() const {
    for (auto& row : bracket)
        for (auto& e : row)
            if (!e.empty()) return false;
    return true;
}

void BaseLieAlgebra::validate() const {
    if (dim < 1 || dim > kMaxGenerators) throw InputError("dim(b) out of range");
    if (static_cast<int>(bracket.size()) != dim) throw InputError("bracket table size mismatch");
    auto coeff = [&](int i, int j, int k) -> Q {
        for (auto& [kk, c] : bracket[i][j])
            if (kk == k) return c;
        return 0;
    };
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k)
                if (coeff(i, j, k) != -coeff(j, i, k))
                    throw InputError("structure constants of b are not antisymmetric");
    // [a_i,[a_j,a_k]] + cyclic = 0
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k)
                for (int m = 0; m < dim; ++m) {
                    Q s = 0;
                    for (int l = 0; l < dim; ++l) {
                        s += coeff(j, k, l) * coeff(i, l, m);
                        s += coeff(k, i, l) * coeff(j, l, m);
                        s += coeff(i, j, l) * coeff(k, l, m);
                    }
                    if (s != 0) throw InputError("structure constants of b violate Jacobi");
                }
}

// ---------------------------------------------------------------- HElem

HElem HElem::mono(MultiIndex m, const Q& c) {
    HElem h;
    if (c != 0) h.terms.emplace_back(m, c);
    return h;
}

HElem HElem::from_terms(std::vector<HTerm> t) {
    std::sort(t.begin(), t.end(), [](const HTerm& a, const HTerm& b) { return a.first < b.first; });
    HElem h;
    for (auto& [m, c] : t) {
        if (!h.terms.empty() && h.terms.back().first == m)
            h.terms.back().second += c;
        else
            h.terms.emplace_back(m, std::move(c));
    }
    std::erase_if(h.terms, [](const HTerm& x) { return x.second == 0; });
    return h;
}

int HElem::degree() const {
    int d = -1;
    for (auto& [m, c] : terms) d = std::max(d, m.degree());
    return d;
}

Q HElem::coeff(MultiIndex m) const {
    auto it = std::lower_bound(terms.begin(), terms.end(), m,
                               [](const HTerm& t, MultiIndex k) { return t.first < k; });
    if (it != terms.end() && it->first == m) return it->second;
    return 0;
}

HElem HElem::operator+(const HElem& o) const {
    std::vector<HTerm> t = terms;
    t.insert(t.end(), o.terms.begin(), o.terms.end());
    return from_terms(std::move(t));
}

HElem HElem::operator-(const HElem& o) const { return *this + (-o); }

HElem HElem::operator-() const {
    HElem h = *this;
    for (auto& t : h.terms) t.second = -t.second;
    return h;
}

HElem HElem::operator*(const Q& c) const {
    if (c == 0) return {};
    HElem h = *this;
    for (auto& t : h.terms) t.second *= c;
    return h;
}

void HTensor::normalize() {
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<std::vector<MultiIndex>, Q>> out;
    for (auto& t : terms) {
        if (!out.empty() && out.back().first == t.first)
            out.back().second += t.second;
        else
            out.push_back(std::move(t));
    }
    std::erase_if(out, [](const auto& x) { return x.second == 0; });
    terms = std::move(out);
}

// ---------------------------------------------------------------- binomials

const mpz_class& binomial(int n, int k) {
    constexpr int kTable = 160;
    static const std::vector<std::vector<mpz_class>> table = [] {
        std::vector<std::vector<mpz_class>> t(kTable);
        for (int i = 0; i < kTable; ++i) {
            t[i].resize(i + 1);
            t[i][0] = t[i][i] = 1;
            for (int j = 1; j < i; ++j) t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
        }
        return t;
    }();
    static const mpz_class zero = 0;
    if (k < 0 || k > n) return zero;
    if (n < kTable) return table[n][k];
    thread_local std::map<std::pair<int, int>, mpz_class> extra;
    auto it = extra.find({n, k});
    if (it == extra.end()) {
        mpz_class r;
        mpz_bin_uiui(r.get_mpz_t(), n, k);
        it = extra.emplace(std::make_pair(n, k), r).first;
    }
    return it->second;
}

namespace {

mpz_class factorial_of(MultiIndex m) {
    mpz_class f = 1;
    for (int i = 0; i < kMaxGenerators; ++i)
        for (int k = 2; k <= m[i]; ++k) f *= k;
    return f;
}

}  // namespace

// ---------------------------------------------------------------- HopfAlgebra

HopfAlgebra::HopfAlgebra(BaseLieAlgebra b) : base_(std::move(b)) {
    base_.validate();
    abelian_ = base_.is_abelian();
}

const HopfAlgebra::OrdPoly& HopfAlgebra::gen_times(int i, MultiIndex m) const {
    std::pair<uint64_t, uint64_t> key{uint64_t(i), m.bits()};
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = gen_memo_.find(key);
        if (it != gen_memo_.end()) return it->second;
    }
    OrdPoly result;
    int j = -1;
    for (int k = 0; k < base_.dim; ++k)
        if (m[k] > 0) {
            j = k;
            break;
        }
    if (j < 0 || i <= j) {
        result.emplace_back(m + MultiIndex::unit(i), Q(1));
    } else {
        // a_i a_j a^rest = a_j (a_i a^rest) + [a_i, a_j] a^rest
        MultiIndex rest = m - MultiIndex::unit(j);
        std::map<MultiIndex, Q> acc;
        OrdPoly first = gen_times(i, rest);
        for (auto& [mm, q] : first)
            for (auto& [m2, q2] : gen_times(j, mm)) acc[m2] += q * q2;
        for (auto& [l, c] : base_.bracket[i][j])
            for (auto& [m2, q2] : gen_times(l, rest)) acc[m2] += c * q2;
        for (auto& [mm, q] : acc)
            if (q != 0) result.emplace_back(mm, q);
    }
    std::lock_guard<std::mutex> lock(mu_);
    return gen_memo_.emplace(key, std::move(result)).first->second;
}

HopfAlgebra::OrdPoly HopfAlgebra::straighten_word(const std::vector<int>& word,
                                                  MultiIndex tail) const {
    std::map<MultiIndex, Q> cur{{tail, Q(1)}};
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        std::map<MultiIndex, Q> next;
        for (auto& [m, q] : cur)
            for (auto& [m2, q2] : gen_times(*it, m)) next[m2] += q * q2;
        std::erase_if(next, [](const auto& x) { return x.second == 0; });
        cur = std::move(next);
    }
    return OrdPoly(cur.begin(), cur.end());
}

HElem HopfAlgebra::mul_mono(MultiIndex a, MultiIndex b) const {
    if (abelian_) {
        HElem out;
        mul_mono_into(a, b, Q(1), [&](MultiIndex m, const Q& c) { out.terms.emplace_back(m, c); });
        return out;
    }
    std::pair<uint64_t, uint64_t> key{a.bits(), b.bits()};
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = mul_memo_.find(key);
        if (it != mul_memo_.end()) return it->second;
    }
    std::vector<int> word;
    for (int g = 0; g < base_.dim; ++g)
        for (int k = 0; k < a[g]; ++k) word.push_back(g);
    OrdPoly ord = straighten_word(word, b);
    Q scale(1);
    scale /= factorial_of(a) * factorial_of(b);
    std::vector<HTerm> t;
    for (auto& [m, q] : ord) t.emplace_back(m, q * scale * Q(factorial_of(m)));
    HElem r = HElem::from_terms(std::move(t));
    std::lock_guard<std::mutex> lock(mu_);
    return mul_memo_.emplace(key, std::move(r)).first->second;
}

HElem HopfAlgebra::mul(const HElem& a, const HElem& b) const {
    std::vector<HTerm> t;
    for (auto& [ma, ca] : a.terms)
        for (auto& [mb, cb] : b.terms)
            mul_mono_into(ma, mb, ca * cb, [&](MultiIndex m, const Q& c) { t.emplace_back(m, c); });
    return HElem::from_terms(std::move(t));
}

HElem HopfAlgebra::antipode_mono(MultiIndex a) const {
    int deg = a.degree();
    Q sign = (deg % 2) ? Q(-1) : Q(1);
    if (abelian_) return HElem::mono(a, sign);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = antipode_memo_.find(a.bits());
        if (it != antipode_memo_.end()) return it->second;
    }
    // S(a_1^{k1}...a_n^{kn}) = (-1)^{|k|} a_n^{kn}...a_1^{k1}
    std::vector<int> word;
    for (int g = base_.dim - 1; g >= 0; --g)
        for (int k = 0; k < a[g]; ++k) word.push_back(g);
    OrdPoly ord = straighten_word(word, MultiIndex{});
    Q scale = sign / Q(factorial_of(a));
    std::vector<HTerm> t;
    for (auto& [m, q] : ord) t.emplace_back(m, q * scale * Q(factorial_of(m)));
    HElem r = HElem::from_terms(std::move(t));
    std::lock_guard<std::mutex> lock(mu_);
    return antipode_memo_.emplace(a.bits(), std::move(r)).first->second;
}

HElem HopfAlgebra::antipode(const HElem& a) const {
    std::vector<HTerm> t;
    for (auto& [m, c] : a.terms)
        for (auto& [m2, c2] : antipode_mono(m).terms) t.emplace_back(m2, c * c2);
    return HElem::from_terms(std::move(t));
}

const std::vector<std::vector<MultiIndex>>& HopfAlgebra::splits(MultiIndex I, int n) const {
    std::pair<uint64_t, uint64_t> key{I.bits(), uint64_t(n)};
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = split_memo_.find(key);
        if (it != split_memo_.end()) return it->second;
    }
    std::vector<std::vector<MultiIndex>> cur{std::vector<MultiIndex>(n)};
    for (int g = 0; g < base_.dim; ++g) {
        int e = I[g];
        if (!e) continue;
        // compositions of e into n non-negative parts
        std::vector<std::vector<int>> comps;
        std::vector<int> c(n, 0);
        auto rec = [&](auto&& self, int pos, int left) -> void {
            if (pos == n - 1) {
                c[pos] = left;
                comps.push_back(c);
                return;
            }
            for (int v = 0; v <= left; ++v) {
                c[pos] = v;
                self(self, pos + 1, left - v);
            }
        };
        rec(rec, 0, e);
        std::vector<std::vector<MultiIndex>> next;
        next.reserve(cur.size() * comps.size());
        for (auto& base : cur)
            for (auto& comp : comps) {
                auto v = base;
                for (int k = 0; k < n; ++k)
                    if (comp[k]) v[k].set(g, comp[k]);
                next.push_back(std::move(v));
            }
        cur = std::move(next);
    }
    std::lock_guard<std::mutex> lock(mu_);
    return split_memo_.emplace(key, std::move(cur)).first->second;
}

HTensor HopfAlgebra::coproduct_iter(const HElem& a, int p) const {
    if (p < 0) throw InputError("coproduct_iter needs p >= 0");
    HTensor t;
    t.arity = p + 1;
    for (auto& [m, c] : a.terms)
        for (auto& legs : splits(m, p + 1)) t.terms.emplace_back(legs, c);
    t.normalize();
    return t;
}

HTensor HopfAlgebra::antipode_on_leg(const HTensor& t, int leg) const {
    HTensor out;
    out.arity = t.arity;
    for (auto& [legs, c] : t.terms)
        for (auto& [m, q] : antipode_mono(legs[leg]).terms) {
            auto l = legs;
            l[leg] = m;
            out.terms.emplace_back(std::move(l), c * q);
        }
    out.normalize();
    return out;
}

HTensor HopfAlgebra::sweedler_legs(const HElem& a, int p, int q) const {
    if (p < 0 || q < 1) throw InputError("sweedler_legs needs p >= 0 and q >= 1");
    HTensor t = coproduct_iter(a, p + q - 1);
    for (int leg = 0; leg < p; ++leg) t = antipode_on_leg(t, leg);
    return t;
}

HTensor HopfAlgebra::tensor_mul(const HTensor& a, const HTensor& b) const {
    if (a.arity != b.arity) throw InputError("tensor arity mismatch");
    HTensor out;
    out.arity = a.arity;
    for (auto& [la, ca] : a.terms)
        for (auto& [lb, cb] : b.terms) {
            std::vector<std::pair<std::vector<MultiIndex>, Q>> partial{{{}, ca * cb}};
            for (int k = 0; k < a.arity; ++k) {
                std::vector<std::pair<std::vector<MultiIndex>, Q>> next;
                for (auto& [pre, c] : partial)
                    mul_mono_into(la[k], lb[k], c, [&](MultiIndex m, const Q& q) {
                        auto v = pre;
                        v.push_back(m);
                        next.emplace_back(std::move(v), q);
                    });
                partial = std::move(next);
            }
            for (auto& x : partial) out.terms.push_back(std::move(x));
        }
    out.normalize();
    return out;
}

HElem HopfAlgebra::multiply_legs(const HTensor& t) const {
    HElem total;
    for (auto& [legs, c] : t.terms) {
        HElem prod = HElem::mono(MultiIndex{}, c);
        for (auto& l : legs) prod = mul(prod, HElem::mono(l));
        total = total + prod;
    }
    return total;
}

HopfPtr hopf_polynomial(const std::string& gen) {
    return std::make_shared<HopfAlgebra>(BaseLieAlgebra::abelian(1, {gen}));
}

HopfPtr hopf_two_dim_nonabelian() {
    BaseLieAlgebra b = BaseLieAlgebra::abelian(2, {"a1", "a2"});
    b.set_bracket(0, 1, {{1, Q(1)}});
    return std::make_shared<HopfAlgebra>(b);
}

}  // namespace pa
