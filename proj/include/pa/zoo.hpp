#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pa/deformation.hpp"

namespace pa {

enum class OperatorKind {
    ModifiedR,
    CrossedHom,
    Derivation,
    Homomorphism,
    RelativeRB,
    OOperator,
    TwistedRB,
    Reynolds,           // [Tu*Tv] = T([Tu*v] + [u*Tv] + [Tu*Tv])
    ReynoldsClassical,  // same with −[Tu*Tv] inside T
    MatchedPairDef,
};
std::string to_string(OperatorKind k);
OperatorKind operator_kind_from_string(const std::string& s);  // InputError on unknown names
MapKind map_kind(OperatorKind k);
// The nine kinds of the operator dictionary (ReynoldsClassical excluded).
const std::vector<OperatorKind>& dictionary_kinds();
const std::vector<OperatorKind>& all_operator_kinds();

// Data of one example construction.  `h` is the second algebra, or the module M with a zero bracket.
// ModifiedR, Reynolds and ReynoldsClassical only read `g`.
struct Ingredients {
    OperatorKind kind = OperatorKind::ModifiedR;
    Q p = 0;              // weight of ModifiedR, CrossedHom, RelativeRB
    LiePseudoalgebra g, h;
    ComponentMap rho;     // g ⊗ h → h, tuples (g index, h index)
    ComponentMap eta;     // h ⊗ g → g in the matched-pair orientation, tuples (h index, g index)
    ComponentMap omega;   // g ⊗ g → h, sorted tuples
};

// g ⊕_M g: π = ρ = 0, η = μ = [·*·], θ = p[·*·].
QuasiTwilled modified_r_double(const LiePseudoalgebra& g, const Q& p);
// g ⋉_ρ h with μ = p[·*·]_h.
QuasiTwilled action_algebra(const LiePseudoalgebra& g, const LiePseudoalgebra& h, const ComponentMap& rho, const Q& p);
QuasiTwilled semidirect(const LiePseudoalgebra& g, const ModulePtr& M, const ComponentMap& rho);
QuasiTwilled direct_product(const LiePseudoalgebra& g, const LiePseudoalgebra& h);
QuasiTwilled cocycle_extension(const LiePseudoalgebra& g, const ModulePtr& M, const ComponentMap& rho,
                               const ComponentMap& omega);
// g ⋉^ω_ad g with ω = c[·*·]; c = 1 is the printed example.
QuasiTwilled adjoint_extension(const LiePseudoalgebra& g, const Q& c = 1);
// g ⋈ h from η in the h ⊗ g orientation; η(y ⊗ u) = −((12) ⊗_H id) η(u ⊗ y) on the g ⊗ h side.
QuasiTwilled matched_pair(const LiePseudoalgebra& g, const LiePseudoalgebra& h, const ComponentMap& rho,
                          const ComponentMap& eta_hg);

// ρ = ad: g ⊗ g → g as a (1,1) component.
ComponentMap adjoint_action(const LiePseudoalgebra& g);
ComponentMap flip_eta(const HopfAlgebra& H, const ComponentMap& eta);  // between the two orientations

// Assembles the structure of a kind.  Ingredient failures (Lie axioms, action, cocycle, matched pair)
// throw ValidationError naming the failing checks.
QuasiTwilled build(const Ingredients& in);

// LHS − RHS of the kind's defining operator identity on every ordered basis pair of the source,
// evaluated directly from the ingredients.  Zero values are omitted.
ValueTable operator_residual(const Ingredients& in, const HModuleMap& map);

struct DictionaryReport {
    OperatorKind kind = OperatorKind::ModifiedR;
    ValueTable op;
    ComponentMap dmap;     // dmap1_residual or dmap2_residual
    bool op_zero = false, dmap_zero = false, mc_zero = false;
    bool graph_closed = false;  // type I only
    bool same_values = false;   // operator residual equals the deformation-map residual on sorted pairs
    bool agree() const { return op_zero == dmap_zero && dmap_zero == mc_zero; }
};
DictionaryReport dictionary_check(const Ingredients& in, const HModuleMap& map);
DictionaryReport dictionary_check(const Ingredients& in, const QuasiTwilled& S, const HModuleMap& map);

// Demo ingredients over Q[∂] built from the Virasoro algebra, with a map known to satisfy the identity.
struct KindDemo {
    Ingredients in;
    HModuleMap valid_map;
};
KindDemo demo(OperatorKind k);

// Seeded maps for the dictionary sweep: scalar multiples near the demo roots, the valid map, and random
// H-linear maps of PBW degree ≤ 1.
std::vector<HModuleMap> sweep_maps(std::mt19937_64& rng, const Ingredients& in, const HModuleMap& valid, int count);

LiePseudoalgebra virasoro(const HopfPtr& H, const std::string& name = "g");
// Cur 𝔞 = H ⊗ 𝔞 with [a*b] = (1⊗1) ⊗_H [a,b].
LiePseudoalgebra current_algebra(const HopfPtr& H, const BaseLieAlgebra& a, const std::string& name = "g");
BaseLieAlgebra sl2();
BaseLieAlgebra two_dim_nonabelian();  // [a, b] = b

struct Builtin {
    std::string name, description;
    std::optional<LiePseudoalgebra> algebra;
    std::optional<QuasiTwilled> structure;
    std::optional<HModuleMap> map;
    MapKind kind = MapKind::TypeI;
    bool valid = true;  // load-time checks (check_lie or check_pc) passed
};
const std::vector<std::string>& builtin_names();
Builtin builtin(const std::string& name);  // InputError on unknown names

// Structures used by the property suites, each with a deformation map that satisfies its identity.
struct ZooEntry {
    std::string name;
    QuasiTwilled S;
    HModuleMap map;
    MapKind kind = MapKind::TypeI;
};
std::vector<ZooEntry> zoo_structures();

// Quadratic polynomial system over Q: c + Σ lin_i x_i + Σ_{i≤j} quad_ij x_i x_j = 0.
struct QuadPoly {
    Q c;
    std::vector<Q> lin;
    std::map<std::pair<int, int>, Q> quad;
};
// x = base + Σ_k t_k dirs[k]; every affine form in `nonzero` (constant first, then one entry per t_k)
// is nonzero on the family.  `unresolved` lists equations left when no case split applies.
struct AffineFamily {
    std::vector<Q> base;
    std::vector<std::vector<Q>> dirs;
    std::vector<std::vector<Q>> nonzero;
    std::vector<QuadPoly> unresolved;
    std::vector<int> normalized;  // variables set to 1 by a scaling
    std::vector<int> pinned;      // variables set to Scaling::pin; the family is then a slice, not complete
};
// Torus action x_i ↦ (Π_k t_k^{weights[i][k]}) x_i under which every equation is homogeneous.  `gens` are
// integer generators of the acting subtorus (rows of the same length as the weights).
struct Scaling {
    std::vector<std::vector<int>> weights;
    std::vector<std::vector<int>> gens;
    Q pin = 0;  // nonzero: when nothing else applies, split a variable into {0, pin} instead of giving up
};
// Linear elimination, splitting on equations that factor into affine forms, and splitting a variable of
// unit weight into {x = 0} and {x = 1} (a slice meeting every orbit with x ≠ 0).  Exact and complete up to
// the scaling whenever no family is returned with unresolved equations or pinned variables.
std::vector<AffineFamily> solve_quadratic(int nvars, const std::vector<QuadPoly>& eqs, const Scaling& scaling = {});

// Rank-2 search over Q[∂]: G = Hu ⊕ Hx with g = Hu, h = Hx and μ(x⊗x) ∈ {0, Virasoro}.  Unknowns are the
// coefficients of π(u⊗u), ρ(u⊗x), η(u⊗x), θ(u⊗u) of total PBW degree ≤ max_deg.  Families are tagged on
// generic members, up to u ↦ λu + f·x, x ↦ κx.  With μ ≠ 0 only Type (i) applies (the types assume Hx
// abelian); other members there are tagged Other.
enum class Rank2Type { I, II, III, Other, Unresolved };
std::string to_string(Rank2Type t);

struct Rank2Unknown {
    std::string component;  // pi, rho, eta, theta
    PTElem value;
};

struct Rank2Family {
    bool mu_virasoro = false;
    AffineFamily family;
    Rank2Type type = Rank2Type::Other;
    QuasiTwilled sample;  // a generic member
    bool sample_valid = false;
};

struct Rank2Report {
    int max_deg = 0;
    std::vector<Rank2Unknown> unknowns;
    std::vector<Rank2Family> families;
    int equations = 0;
    // μ Virasoro with π = ρ = θ = 0: the solutions for η(u⊗x) = C ⊗_H u.
    std::vector<Rank2Family> eta_only_families;
    bool eta_only_matches = false;  // exactly {0} ∪ {∂⊗1 − λ(1⊗∂) + c₀(1⊗1)}
    bool only_known_types() const;  // over the μ = 0 families
    bool complete() const;          // no unresolved equations and no pinned variables
};
// Throws InputError if max_deg < 0.
Rank2Report rank2_search(int max_deg, uint64_t seed = 1);
// Tag of one rank-2 structure, searching f·x of degree ≤ max_deg.  InputError unless g, h have rank 1.
Rank2Type rank2_classify(const QuasiTwilled& S, int max_deg = 2, uint64_t seed = 1);
// Members of a family at parameters t, as a structure.
QuasiTwilled rank2_member(const Rank2Report& r, const Rank2Family& f, const std::vector<Q>& t);

}  // namespace pa
