#pragma once

#include <array>
#include <string>
#include <vector>

#include "pa/cochain.hpp"

namespace pa {

// How a printed cycle (123) acts on three slots.
//   Inverse: position i receives the content of position σ⁻¹(i) (the symmetric-group action).
//   Image:   position i receives the content of position σ(i).
// Transpositions agree under both readings.
enum class PermConvention { Inverse, Image };
enum class PC67Variant { Printed23, Proof123 };
enum class PC3Sign { Printed, ProofExpansion };

struct PCFlags {
    PermConvention perm = PermConvention::Image;
    PC67Variant pc67 = PC67Variant::Printed23;
    PC3Sign pc3 = PC3Sign::Printed;
    std::string str() const;
    friend bool operator==(const PCFlags&, const PCFlags&) = default;
};
std::vector<PCFlags> all_pc_flags();

// Slot permutation realizing the printed cycle (1 2 3) under a convention.
std::vector<int> cycle123(PermConvention c);

struct Residual {
    std::string label;
    Tuple tuple;
    PTElem value;
};

struct LiePseudoalgebra {
    ModulePtr M;
    Cochain bracket;
};

// [a*[b*c]] − [[a*b]*c] − ((12)⊗_H id)[b*[a*c]]
PTElem jacobiator(const Cochain& bracket, const Tuple& abc);

struct CheckReport {
    std::vector<Residual> failures;
    bool pass() const { return failures.empty(); }
};
CheckReport check_lie(const LiePseudoalgebra& L);

struct QuasiTwilled {
    std::string name;
    ModulePtr g, h, G;
    // Components lifted to G = g ⊞ h.
    Cochain pi, rho, mu, eta, theta;

    const HopfAlgebra& H() const { return *G->H; }
    Cochain omega() const { return pi + rho + mu + eta + theta; }
    Cochain component(const std::string& name) const;
};

QuasiTwilled make_quasi_twilled(const ModulePtr& g, const ModulePtr& h, const ComponentMap& pi, const ComponentMap& rho,
                                const ComponentMap& mu, const ComponentMap& eta, const ComponentMap& theta,
                                std::string name = "", ModulePtr G = nullptr);
// Splits a bracket on G into its five components; throws InputError if it has a g-part on h⊗h.
QuasiTwilled from_omega(const ModulePtr& g, const ModulePtr& h, const ModulePtr& G, const Cochain& omega,
                        std::string name = "");
// Component maps on g and h blocks, local indices.
ComponentMap pi_map(const QuasiTwilled& S);
ComponentMap rho_map(const QuasiTwilled& S);
ComponentMap mu_map(const QuasiTwilled& S);
ComponentMap eta_map(const QuasiTwilled& S);
ComponentMap theta_map(const QuasiTwilled& S);
// (h, μ) as a pseudoalgebra on h alone.
LiePseudoalgebra h_algebra(const QuasiTwilled& S);
LiePseudoalgebra g_algebra(const QuasiTwilled& S);  // (g, π)

// Input profile and output side of each condition PC2..PC8.
struct PCRegion {
    int label;  // 2..8
    int n_g, n_h;
    bool out_h;
};
const std::array<PCRegion, 7>& pc_regions();

// LHS − RHS of condition PC<label> on an ordered G-tuple.
PTElem pc_residual(const QuasiTwilled& S, int label, const Tuple& t, const PCFlags& flags = {});

struct PCReport {
    std::array<std::vector<Residual>, 9> by_label;  // index 1..8
    bool pass() const;
    bool label_pass(int k) const { return by_label[k].empty(); }
};
PCReport check_pc(const QuasiTwilled& S, const PCFlags& flags = {});

struct MCRegion {
    int label;
    std::string bidegree;         // bidegree of the region, e.g. "2|0"
    bool bracket_zero = true;     // [Ω,Ω] vanishes on the region
    bool matches_pc = true;       // [Ω,Ω] = −2·(PC residual) on every tuple of the region
    bool bullet_matches = true;   // bullet expression = factor·[Ω,Ω] on the region
    Q bullet_factor;
};
struct MCReport {
    Cochain bracket;
    bool bracket_zero = true;
    bool table_ok = true;
    bool bullets_ok = true;
    std::vector<MCRegion> regions;
    bool pass() const { return bracket_zero && table_ok; }
};
MCReport check_mc_omega(const QuasiTwilled& S, const PCFlags& flags = {});

// Matched pair (g, h, ρ, η): quasi-twilled with θ = 0 and π the bracket of g.  Throws ValidationError
// carrying the failing labels if the matched-pair identities fail.
QuasiTwilled build_matched_pair(const LiePseudoalgebra& g, const LiePseudoalgebra& h, const ComponentMap& rho,
                                const ComponentMap& eta, std::string name = "");

// Representation check of ρ: g⊗M → M over (g, π).
CheckReport check_representation(const LiePseudoalgebra& g, const ModulePtr& M, const ComponentMap& rho);

// Random rank-(1,1)-style structure data for the PC ⟺ NR suite.
QuasiTwilled random_structure(std::mt19937_64& rng, const ModulePtr& g, const ModulePtr& h, int max_deg);

}  // namespace pa
