#pragma once

#include <vector>

#include "pa/structure.hpp"

namespace pa {

// Type I maps D: g → h, type II maps T: h → g.
enum class MapKind { TypeI, TypeII };

// RHS − LHS of the type I identity on sorted pairs of g; equals θ^D.
ComponentMap dmap1_residual(const QuasiTwilled& S, const HModuleMap& D);
// LHS − RHS of the type II identity on sorted pairs of h; equals ξ^T.
ComponentMap dmap2_residual(const QuasiTwilled& S, const HModuleMap& T);

struct GraphReport {
    bool closed = true;
    ComponentMap residual;  // h-part of Ω on Gr(D) minus D applied to its g-part
};
GraphReport graph_check(const QuasiTwilled& S, const HModuleMap& D);

// D̂ or T̂ as an endomorphism matrix of G.
HMatrix lifted_matrix(const QuasiTwilled& S, const HModuleMap& M, MapKind kind);

struct TwistSeries {
    Cochain series;      // Σ_n (1/n!) [..[Ω, M̂], .., M̂]
    Cochain conjugated;  // e^{−M̂} ∘ Ω ∘ (e^{M̂} ⊗ e^{M̂})
    int terms = 0;       // nonzero terms of the series, Ω included
    bool agree() const { return series == conjugated; }
};
// Throws InternalError if the fifth term of the series is nonzero.
TwistSeries exp_twist(const QuasiTwilled& S, const HModuleMap& M, MapKind kind);

struct Twist1Result {
    QuasiTwilled twisted;
    bool matches_exp = false;
    bool is_dmap = false;  // θ^D ≡ 0
};
Twist1Result twist1(const QuasiTwilled& S, const HModuleMap& D);

// Printed reads θ(T(v)⊗x) and π(T(v)⊗x) in ρ^T, η^T without reordering the slots back to (x, v).
enum class Twist2Form { Reordered, Printed };
struct Twist2Result {
    Cochain omega;
    ComponentMap pi, rho, mu, eta, theta, xi;
    bool matches_exp = false;
    bool is_dmap = false;  // ξ^T ≡ 0
};
Twist2Result twist2(const QuasiTwilled& S, const HModuleMap& T, Twist2Form form = Twist2Form::Reordered);

// Derived brackets l_k(x_1..x_k) = P[..[Δ, x_1], .., x_k] on K = C(g,h) (type I) or C(h,g) (type II),
// optionally twisted by x: l^x_k = Σ_n (1/n!) l_{k+n}(x, .., x, ·).  Elements of K are cochains on G;
// an arity-p cochain has degree p − 1.
struct LInfOperators {
    MapKind kind = MapKind::TypeI;
    ModulePtr G;
    Cochain delta;
    int max_k = 2;  // l_k = 0 for k > max_k
    std::vector<Cochain> twist;  // empty or one MC element

    Cochain project(const Cochain& f) const;
    Cochain l(const std::vector<Cochain>& xs) const;  // l_0 for empty xs
    Cochain untwisted(const std::vector<Cochain>& xs) const;
};

LInfOperators curved_l_type1(const QuasiTwilled& S);
LInfOperators curved_l_type2(const QuasiTwilled& S);
LInfOperators twisted(const LInfOperators& ops, const Cochain& x);

// Σ_k (1/k!) l_k(x, .., x).
Cochain mc_residual(const LInfOperators& ops, const Cochain& x);
// Per-arity variant: every l_k(x, .., x) vanishes.
bool mc_strict(const LInfOperators& ops, const Cochain& x);

Cochain mc_residual_type1(const QuasiTwilled& S, const HModuleMap& D);
Cochain mc_residual_type2(const QuasiTwilled& S, const HModuleMap& T);
// Twisted operators at a valid map; throws ValidationError if it is not a deformation map.
LInfOperators twisted_l_type1(const QuasiTwilled& S, const HModuleMap& D);
LInfOperators twisted_l_type2(const QuasiTwilled& S, const HModuleMap& T);

struct JacobiFailure {
    int n;
    std::vector<int> inputs;  // indices into the sample list
    Cochain residual;
};
struct LInfReport {
    std::vector<JacobiFailure> failures;
    int checked = 0;
    bool pass() const { return failures.empty(); }
};
// Σ_{i=0..n} Σ_{σ ∈ Sh(i,n−i)} ε(σ) l_{n−i+1}(l_i(x_σ(1..i)), x_σ(i+1..n)) = 0 for n = 0..max_arity,
// on `per_arity` rotations of the sample list.
LInfReport linf_jacobi_check(const LInfOperators& ops, int max_arity, const std::vector<Cochain>& samples,
                             int per_arity = 2);

// Random element of K of the given arity, lifted to G.
Cochain random_k_element(std::mt19937_64& rng, const QuasiTwilled& S, MapKind kind, int arity, int max_deg);
HModuleMap random_map(std::mt19937_64& rng, const ModulePtr& from, const ModulePtr& to, int max_deg);

}  // namespace pa
