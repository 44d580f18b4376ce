#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pa/pseudo_tensor.hpp"

namespace pa {

using Tuple = std::vector<int>;
using ValueTable = std::map<Tuple, PTElem>;

// Conformal p-linear map source^p -> H^{⊗p} ⊗_H target, stored on all basis tuples.
class Cochain {
public:
    int arity = 0;
    ModulePtr source, target;
    bool skew = true;  // built from sorted tuples by the skew-symmetric extension
    ValueTable values;  // zero values are not stored

    Cochain() = default;
    Cochain(int p, ModulePtr s, ModulePtr t) : arity(p), source(std::move(s)), target(std::move(t)) {}

    // Extends values given on non-decreasing tuples by f(t) = (−1)^π (π⁻¹ ⊗_H id) f(sorted).
    static Cochain from_values(int p, ModulePtr s, ModulePtr t, const ValueTable& sorted);
    // Arbitrary table on all tuples; no symmetry assumed.
    static Cochain from_full(int p, ModulePtr s, ModulePtr t, ValueTable all);

    const PTElem* find(const Tuple& t) const;
    PTElem at(const Tuple& t) const;
    ValueTable sorted_values() const;
    bool is_zero() const { return values.empty(); }

    Cochain operator+(const Cochain& o) const;
    Cochain operator-(const Cochain& o) const;
    Cochain operator-() const { return *this * Q(-1); }
    Cochain operator*(const Q& c) const;
    friend bool operator==(const Cochain& a, const Cochain& b) {
        return a.arity == b.arity && a.values == b.values;
    }
};

// All tuples in [0, rank)^p, lexicographic; and the non-decreasing ones.
std::vector<Tuple> all_tuples(int rank, int p);
std::vector<Tuple> sorted_tuples(int rank, int p);

PTElem eval(const Cochain& f, const std::vector<MElem>& args);

struct SkewViolation {
    Tuple tuple;
    int i = 0, j = 0;
    PTElem residual;
};
std::vector<SkewViolation> skew_check(const Cochain& f);
// Averages (−1)^σ σ·v over the stabilizer of a tuple with repeated entries.
PTElem skew_project(const HopfAlgebra& H, const Tuple& t, const PTElem& v);

Cochain circle(const Cochain& f, const Cochain& g, bool all_tuples_mode = false);
Cochain nr_bracket(const Cochain& f, const Cochain& g, bool all_tuples_mode = false);

struct Bidegree {
    enum Kind { Zero, Homogeneous, Inhomogeneous } kind = Zero;
    int k = 0, l = 0;
    std::string str() const;
    friend bool operator==(const Bidegree&, const Bidegree&) = default;
};
Bidegree bidegree_of(const Cochain& f);
// Counts (#g, #h) arguments of a tuple over a split module.
std::pair<int, int> tuple_profile(const FreeModule& G, const Tuple& t);
// Part of f of bidegree k|l.
Cochain bidegree_component(const Cochain& f, int k, int l);

// Component map g^{⊗k} ⊗ h^{⊗l} -> H^{⊗(k+l)} ⊗_H (g or h); tuples list g-indices then h-indices,
// each block non-decreasing, indices local to g and h.
struct ComponentMap {
    int k = 0, l = 0;
    bool to_h = false;
    ValueTable values;
};
Cochain lift(const ModulePtr& G, const ComponentMap& kappa);
ComponentMap restrict_component(const Cochain& F, int k, int l, bool to_h);

// H-linear map between free modules given by its matrix of H-coefficients.
struct HModuleMap {
    ModulePtr from, to;
    HMatrix matrix;  // matrix[i][j]: coefficient of e_j in the image of e_i

    static HModuleMap zero(ModulePtr from, ModulePtr to);
    static HModuleMap scalar(ModulePtr m, const Q& c);
    HModuleMap operator+(const HModuleMap& o) const;
    HModuleMap operator*(const Q& c) const;
    MElem apply(const MElem& m) const;
    bool is_zero() const;
    friend bool operator==(const HModuleMap& a, const HModuleMap& b) { return a.matrix == b.matrix; }
};
HModuleMap compose(const HModuleMap& a, const HModuleMap& b);  // a∘b
Cochain as_cochain(const HModuleMap& m);
// D̂ on G = g ⊞ h for D: g -> h (or h -> g).
Cochain lift_map(const ModulePtr& G, const HModuleMap& m, bool g_to_h);
// Applies (id ⊗_H m) to every value of f.
Cochain post_compose(const HModuleMap& m, const Cochain& f);

// f(others[0..pos), inner, others[pos..)) with inner's q slots occupying positions pos..pos+q−1.
PTElem compose_value(const Cochain& f, int pos, const PTElem& inner, const Tuple& others);
// f evaluated on basis tuple t (zero if absent).
PTElem value(const Cochain& f, const Tuple& t);

// (n−1,n)·f using the antipode formula on H^{⊗(n−1)} ⊗ M with the signed action.
Cochain transpose_last(const Cochain& f);

std::string format_cochain(const Cochain& f);

// Seeded random data for property suites: slot monomials of degree ≤ max_deg, coefficients in [−2, 2].
PTElem random_pt(std::mt19937_64& rng, const HopfAlgebra& H, int n, int rank, int max_deg, int max_terms = 2);
Cochain random_cochain(std::mt19937_64& rng, int p, ModulePtr s, ModulePtr t, int max_deg = 2, int max_terms = 2);
HElem random_helem(std::mt19937_64& rng, const HopfAlgebra& H, int max_deg, int max_terms = 2);

}  // namespace pa
