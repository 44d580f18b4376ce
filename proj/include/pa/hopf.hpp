#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pa/rational.hpp"

namespace pa {

// Exponent vectors are packed one byte per generator.
constexpr int kMaxGenerators = 8;
constexpr int kMaxExponent = 255;

class MultiIndex {
public:
    MultiIndex() = default;
    static MultiIndex from_bits(uint64_t b) {
        MultiIndex m;
        m.bits_ = b;
        return m;
    }
    static MultiIndex unit(int i, int k = 1);
    static MultiIndex from_vector(const std::vector<int>& e);

    int operator[](int i) const { return static_cast<int>((bits_ >> (8 * i)) & 0xFF); }
    void set(int i, int v);
    int degree() const;
    bool zero() const { return bits_ == 0; }
    uint64_t bits() const { return bits_; }
    std::vector<int> to_vector(int dim) const;

    // Componentwise sum; throws ResourceError on exponent overflow.
    MultiIndex operator+(MultiIndex o) const;
    // Componentwise difference; requires o <= *this componentwise.
    MultiIndex operator-(MultiIndex o) const;
    bool divides(MultiIndex o) const;  // componentwise *this <= o

    friend bool operator==(MultiIndex a, MultiIndex b) { return a.bits_ == b.bits_; }
    friend auto operator<=>(MultiIndex a, MultiIndex b) { return a.bits_ <=> b.bits_; }

private:
    uint64_t bits_ = 0;
};

struct BaseLieAlgebra {
    int dim = 0;
    std::vector<std::string> names;
    // bracket[i][j] lists (k, c) with [a_i, a_j] = sum c a_k.
    std::vector<std::vector<std::vector<std::pair<int, Q>>>> bracket;

    static BaseLieAlgebra abelian(int dim, std::vector<std::string> names = {});
    // Sets [a_i, a_j] = sum coeffs and [a_j, a_i] = -sum coeffs.
    void set_bracket(int i, int j, std::vector<std::pair<int, Q>> coeffs);
    bool is_abelian() const;
    // Throws InputError on a failed antisymmetry or Jacobi check.
    void validate() const;
};

using HTerm = std::pair<MultiIndex, Q>;

// Sparse element of U(b) in divided-power PBW coordinates, sorted, no zero coefficients.
class HElem {
public:
    std::vector<HTerm> terms;

    HElem() = default;
    static HElem one() { return mono(MultiIndex{}); }
    static HElem mono(MultiIndex m, const Q& c = 1);
    static HElem from_terms(std::vector<HTerm> t);  // sums duplicates

    bool is_zero() const { return terms.empty(); }
    int degree() const;  // -1 for zero
    Q coeff(MultiIndex m) const;

    HElem operator+(const HElem& o) const;
    HElem operator-(const HElem& o) const;
    HElem operator-() const;
    HElem operator*(const Q& c) const;
    friend bool operator==(const HElem& a, const HElem& b) { return a.terms == b.terms; }
};

// Element of H^{⊗n}; each term is a tuple of PBW monomials.
struct HTensor {
    int arity = 0;
    std::vector<std::pair<std::vector<MultiIndex>, Q>> terms;

    void normalize();  // sort, merge, drop zeros
    friend bool operator==(const HTensor& a, const HTensor& b) {
        return a.arity == b.arity && a.terms == b.terms;
    }
};

class HopfAlgebra {
public:
    explicit HopfAlgebra(BaseLieAlgebra b);

    const BaseLieAlgebra& base() const { return base_; }
    int dim() const { return base_.dim; }
    bool abelian() const { return abelian_; }

    HElem generator(int i) const { return HElem::mono(MultiIndex::unit(i)); }

    HElem mul(const HElem& a, const HElem& b) const;
    HElem mul_mono(MultiIndex a, MultiIndex b) const;
    // Adds c * a^(x) a^(y) into acc.
    template <class Acc>
    void mul_mono_into(MultiIndex x, MultiIndex y, const Q& c, Acc&& emit) const;

    HElem antipode(const HElem& a) const;
    HElem antipode_mono(MultiIndex a) const;
    Q counit(const HElem& a) const { return a.coeff(MultiIndex{}); }

    HTensor coproduct_iter(const HElem& a, int p) const;          // Δ^p, arity p+1
    HTensor sweedler_legs(const HElem& a, int p, int q) const;    // (S^{⊗p}⊗1^{⊗q})Δ^{p+q-1}
    HTensor tensor_mul(const HTensor& a, const HTensor& b) const;  // componentwise
    HElem multiply_legs(const HTensor& t) const;                  // m^{(n)}
    HTensor antipode_on_leg(const HTensor& t, int leg) const;

    // All ways to write a^(I) legs of Δ^{n-1}: tuples (L_1..L_n) with sum I.
    const std::vector<std::vector<MultiIndex>>& splits(MultiIndex I, int n) const;

private:
    using OrdPoly = std::vector<std::pair<MultiIndex, Q>>;  // ordinary (non-divided) PBW monomials
    const OrdPoly& gen_times(int i, MultiIndex m) const;
    OrdPoly straighten_word(const std::vector<int>& word, MultiIndex tail) const;

    BaseLieAlgebra base_;
    bool abelian_;

    struct PairHash {
        size_t operator()(const std::pair<uint64_t, uint64_t>& p) const {
            return std::hash<uint64_t>()(p.first * 0x9E3779B97F4A7C15ULL ^ p.second);
        }
    };
    mutable std::mutex mu_;
    mutable std::unordered_map<std::pair<uint64_t, uint64_t>, OrdPoly, PairHash> gen_memo_;
    mutable std::unordered_map<std::pair<uint64_t, uint64_t>, HElem, PairHash> mul_memo_;
    mutable std::unordered_map<uint64_t, HElem> antipode_memo_;
    mutable std::unordered_map<std::pair<uint64_t, uint64_t>, std::vector<std::vector<MultiIndex>>,
                               PairHash>
        split_memo_;
};

using HopfPtr = std::shared_ptr<const HopfAlgebra>;

// Binomial coefficient C(n, k) as an exact integer.
const mpz_class& binomial(int n, int k);

// H = Q[∂] and U of the 2-dimensional non-abelian algebra [a1, a2] = a2.
HopfPtr hopf_polynomial(const std::string& gen = "d");
HopfPtr hopf_two_dim_nonabelian();

template <class Acc>
void HopfAlgebra::mul_mono_into(MultiIndex x, MultiIndex y, const Q& c, Acc&& emit) const {
    if (abelian_) {
        Q coef = c;
        for (int i = 0; i < base_.dim; ++i) {
            int a = x[i], b = y[i];
            if (a && b) coef *= binomial(a + b, a);
        }
        emit(x + y, coef);
        return;
    }
    if (x.zero()) {
        emit(y, c);
        return;
    }
    if (y.zero()) {
        emit(x, c);
        return;
    }
    for (const auto& [m, q] : mul_mono(x, y).terms) emit(m, c * q);
}

}  // namespace pa
