#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "pa/hopf.hpp"

namespace pa {

// Maximum number of tensor slots of a pseudotensor.
constexpr int kMaxArity = 10;

struct FreeModule {
    std::string name;
    std::vector<std::string> basis;
    int split = -1;  // for g ⊞ h: number of leading basis elements that belong to g
    HopfPtr H;

    int rank() const { return static_cast<int>(basis.size()); }
    bool has_split() const { return split >= 0; }
    bool in_g(int k) const { return k < split; }
};
using ModulePtr = std::shared_ptr<const FreeModule>;

ModulePtr make_module(HopfPtr H, std::string name, std::vector<std::string> basis);
// g ⊞ h with basis of g first; basis names are kept.
ModulePtr direct_sum(const ModulePtr& g, const ModulePtr& h, std::string name = "G");

// Element of a free module: one H-coefficient per basis vector.
struct MElem {
    std::vector<HElem> coords;

    static MElem zero(int rank) { return MElem{std::vector<HElem>(rank)}; }
    static MElem basis(int rank, int k, const HElem& h = HElem::one());
    bool is_zero() const;
    friend bool operator==(const MElem&, const MElem&) = default;
};

// Key of a pseudotensor term: n slot monomials, module coefficient K, basis index.
struct TKey {
    uint8_t n = 0;
    std::array<uint64_t, kMaxArity + 2> w{};

    MultiIndex slot(int i) const { return MultiIndex::from_bits(w[i]); }
    void set_slot(int i, MultiIndex m) { w[i] = m.bits(); }
    MultiIndex coeff() const { return MultiIndex::from_bits(w[n]); }
    void set_coeff(MultiIndex m) { w[n] = m.bits(); }
    int basis() const { return static_cast<int>(w[n + 1]); }
    void set_basis(int k) { w[n + 1] = static_cast<uint64_t>(k); }

    friend bool operator==(const TKey& a, const TKey& b) {
        if (a.n != b.n) return false;
        for (int i = 0; i < a.n + 2; ++i)
            if (a.w[i] != b.w[i]) return false;
        return true;
    }
    friend bool operator<(const TKey& a, const TKey& b) {
        if (a.n != b.n) return a.n < b.n;
        for (int i = 0; i < a.n + 2; ++i)
            if (a.w[i] != b.w[i]) return a.w[i] < b.w[i];
        return false;
    }
};

struct TKeyHash {
    size_t operator()(const TKey& k) const {
        uint64_t h = 0x84222325cbf29ce4ULL ^ k.n;
        for (int i = 0; i < k.n + 2; ++i) {
            h ^= k.w[i] + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<size_t>(h);
    }
};

TKey make_key(int n);

// Element of H^{⊗n} ⊗_H M in canonical form: slot n is 1, the H-coefficient sits on the
// module element.  Terms are sorted by key with no zero coefficients.
class PTElem {
public:
    int arity = 0;
    std::vector<std::pair<TKey, Q>> terms;

    PTElem() = default;
    explicit PTElem(int n) : arity(n) {}

    bool is_zero() const { return terms.empty(); }
    int max_degree() const;  // total PBW degree over slots and coefficient
    PTElem operator+(const PTElem& o) const;
    PTElem operator-(const PTElem& o) const;
    PTElem operator-() const;
    PTElem operator*(const Q& c) const;
    friend bool operator==(const PTElem& a, const PTElem& b) {
        return a.arity == b.arity && a.terms == b.terms;
    }
};

// Accumulator of not-necessarily-canonical terms of H^{⊗n} ⊗_H M.
class RawPT {
public:
    explicit RawPT(int n) : n_(n) {}
    int arity() const { return n_; }
    void add(const TKey& k, const Q& c);
    void add_canonical(const PTElem& e, const Q& c = 1);
    bool empty() const { return acc_.empty(); }
    PTElem canonical(const HopfAlgebra& H) const;

private:
    int n_;
    std::unordered_map<TKey, Q, TKeyHash> acc_;
};

// Builds a canonical element from a (possibly non-canonical) single term.
PTElem pt_from_raw(const HopfAlgebra& H, const std::vector<MultiIndex>& slots, MultiIndex K, int basis,
                   const Q& c = 1);
// (1⊗…⊗1) ⊗_H m.
PTElem pt_from_melem(int n, const MElem& m);
// Sum of (t ⊗_H m) over the terms of an H-tensor, canonicalized.
PTElem pt_from_tensor(const HopfAlgebra& H, const HTensor& t, const MElem& m);
// Straightening (h₁⊗…⊗h_n)⊗_H m = (h₁S(h_n(1))⊗…⊗h_{n−1}S(h_n(n−1))⊗1)⊗_H h_n(n)m.
PTElem canonicalize(const HopfAlgebra& H, const std::vector<std::pair<TKey, Q>>& raw, int n);

// Left multiplication of the n slots by c, then canonicalization.
PTElem act(const HopfAlgebra& H, const HTensor& c, const PTElem& e);
// Moves the content of slot j to slot perm[j] (0-based), i.e. slot i receives slot σ⁻¹(i).
PTElem permute(const HopfAlgebra& H, const std::vector<int>& perm, const PTElem& e);
PTElem linear_combine(const std::vector<std::pair<Q, PTElem>>& pairs);

// (id ⊗_H D) for an H-linear map given by a matrix of H-coefficients (rows: source basis).
using HMatrix = std::vector<std::vector<HElem>>;
PTElem apply_module_map(const HopfAlgebra& H, const HMatrix& D, const PTElem& e);
// Keeps terms with basis index in [lo, hi) and shifts them by `shift`.
PTElem restrict_basis(const PTElem& e, int lo, int hi, int shift = 0);
PTElem shift_basis(const PTElem& e, int shift);

// The module element of an arity-1 pseudotensor.
MElem pt_to_melem(const PTElem& e, int rank);

std::string format_mono(const HopfAlgebra& H, MultiIndex m);
std::string format_helem(const HopfAlgebra& H, const HElem& h);
std::string format_pt(const HopfAlgebra& H, const FreeModule& M, const PTElem& e);

// Permutation helpers (0-based, perm[j] = image of j).
std::vector<int> perm_identity(int n);
std::vector<int> perm_inverse(const std::vector<int>& p);
std::vector<int> perm_compose(const std::vector<int>& a, const std::vector<int>& b);  // a∘b
int perm_sign(const std::vector<int>& p);
// Cycle notation on 1-based labels, e.g. {1,2,3} -> 1→2→3→1, as a map on n points.
std::vector<int> perm_from_cycle(int n, const std::vector<int>& cycle);

}  // namespace pa
