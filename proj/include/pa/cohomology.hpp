#pragma once

#include <string>
#include <vector>

#include "pa/deformation.hpp"

namespace pa {

// Sign pattern of the CE differential.  Shifted: (−1)^{p+i}, (−1)^{p+i+j−1}; Classical: (−1)^{i+1}, (−1)^{i+j}.
// They differ by (−1)^{p−1} in degree p.
enum class CESign { Shifted, Classical };
std::string to_string(CESign s);

// Lie pseudoalgebra A with a representation on M, both embedded in G = g ⊞ h.  Type I: A = g, M = h,
// bracket π^D, action ρ^D.  Type II: A = h, M = g, bracket μ^T, action ζ.
struct CEComplex {
    MapKind kind = MapKind::TypeI;
    QuasiTwilled base;
    HModuleMap map;
    ModulePtr G;
    int alg_lo = 0, alg_hi = 0, mod_lo = 0, mod_hi = 0;
    Cochain bracket;  // on G, supported on A⊗A
    Cochain action;   // on G; value at the ordered pair (a, m) is the action of a on m
    CESign sign = CESign::Classical;

    int alg_rank() const { return alg_hi - alg_lo; }
    int mod_rank() const { return mod_hi - mod_lo; }
};

struct InducedRep {
    LiePseudoalgebra algebra;  // on g (type I) or h (type II), local indices
    ModulePtr module;
    ComponentMap action;       // algebra ⊗ module → module, local indices
    CheckReport lie, rep;
    bool matches_closed_form = true;  // action equals the displayed closed form
    bool pass() const { return lie.pass() && rep.pass() && matches_closed_form; }
};

// Throw ValidationError if the map is not a deformation map of its type.
InducedRep induced_rep_type1(const QuasiTwilled& S, const HModuleMap& D);
InducedRep induced_rep_type2(const QuasiTwilled& S, const HModuleMap& T);

CEComplex ce_complex(const QuasiTwilled& S, const HModuleMap& map, MapKind kind, CESign sign = CESign::Classical);

// d: C^p(A, M) → C^{p+1}(A, M) for p ≥ 1; f lives on G, supported on A-tuples with M-values.
Cochain ce_diff(const CEComplex& C, const Cochain& f);
// d(m)(a) = ±action(a ⊗ m) ∈ H^{⊗2} ⊗_H M for m ∈ M = C^0, one entry per basis element of A.
std::vector<PTElem> ce_diff0(const CEComplex& C, const MElem& m);

struct ConsistencyReport {
    int p = 0;
    bool equal = false;  // l₁^map(f) = (−1)^{p−1} d(f)
    Cochain l1, d;
};
ConsistencyReport consistency_l1_vs_d(const CEComplex& C, const Cochain& f);

// Random element of C^p(A, M) lifted to G.
Cochain random_ce_cochain(std::mt19937_64& rng, const CEComplex& C, int p, int max_deg);
// d(d(f)) = 0 on `samples` random f of degree p.
bool check_d_squared(const CEComplex& C, std::mt19937_64& rng, int p, int samples, int max_deg = 1);

// Which sign convention makes l₁ = (−1)^{p−1} d on random cochains for p = 1, 2.
struct SignSelection {
    bool shifted_ok = false, classical_ok = false;
    CESign chosen = CESign::Classical;
};
SignSelection select_sign(const QuasiTwilled& S, const HModuleMap& map, MapKind kind, std::mt19937_64& rng,
                          int samples = 3);

struct CocycleCertificate {
    int n = 0;
    std::vector<Residual> closed_form;  // nonzero residuals of the expanded condition
    std::vector<Residual> via_diff;     // nonzero values of d(f)
    bool closed_form_ok() const { return closed_form.empty(); }
    bool diff_ok() const { return via_diff.empty(); }
    bool agree() const { return closed_form_ok() == diff_ok(); }
};
// n = 1: m ∈ M given by local coordinates.
CocycleCertificate cocycle_check1(const CEComplex& C, const MElem& m);
// n = 2: f ∈ C^1(A, M) on G.
CocycleCertificate cocycle_check2(const CEComplex& C, const Cochain& f);

struct CohomologyDims {
    int p = 0, cap = 0, growth = 0;
    long dim_c = 0, dim_z = 0, dim_b = 0, dim_h = 0;
    bool image_within_truncation = true;  // B is d of C^{p−1} truncated at cap − growth
};
// Exact base-field dimensions on the subcomplex of cochains whose coefficients have total PBW degree ≤ cap.
// Throws ResourceError beyond `max_basis` basis cochains.
CohomologyDims truncated_cohomology(const CEComplex& C, int p, int cap, long max_basis = 4000);

// Basis of truncated C^p(A, M); exposed for the dense oracle in tests.
std::vector<Cochain> truncated_basis(const CEComplex& C, int p, int cap);

// Ranks over Q: fraction-free Bareiss elimination and plain reduced row echelon form.
long rank_bareiss(const std::vector<std::vector<Q>>& rows);
long rank_rref(const std::vector<std::vector<Q>>& rows);
// Coordinates of cochains in a common sparse basis (sorted tuple, term key).
std::vector<std::vector<Q>> coordinate_matrix(const std::vector<Cochain>& fs);

}  // namespace pa
