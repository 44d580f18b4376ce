#include <gtest/gtest.h>

#include <random>

#include "pa/pseudo_tensor.hpp"

using namespace pa;

namespace {

MultiIndex d(int k) { return MultiIndex::unit(0, k); }

PTElem raw(const HopfAlgebra& H, std::vector<MultiIndex> slots, MultiIndex K = {}, Q c = 1, int basis = 0) {
    return pt_from_raw(H, slots, K, basis, c);
}

HTensor single(std::vector<MultiIndex> slots, Q c = 1) {
    HTensor t;
    t.arity = static_cast<int>(slots.size());
    t.terms.emplace_back(std::move(slots), c);
    return t;
}

PTElem random_pt(const HopfAlgebra& H, std::mt19937& rng, int n, int rank) {
    std::uniform_int_distribution<int> coef(-2, 2), deg(0, 2), bas(0, rank - 1), cnt(1, 4);
    PTElem e(n);
    for (int t = cnt(rng); t > 0; --t) {
        std::vector<MultiIndex> s(n);
        for (auto& m : s) {
            std::vector<int> v(H.dim());
            for (auto& x : v) x = deg(rng) / H.dim();
            m = MultiIndex::from_vector(v);
        }
        e = e + pt_from_raw(H, s, MultiIndex::unit(0, deg(rng)), bas(rng), coef(rng));
    }
    return e;
}

HTensor random_tensor(const HopfAlgebra& H, std::mt19937& rng, int n) {
    std::uniform_int_distribution<int> coef(-2, 2), deg(0, 2);
    HTensor t;
    t.arity = n;
    for (int k = 0; k < 2; ++k) {
        std::vector<MultiIndex> s(n);
        for (auto& m : s) {
            std::vector<int> v(H.dim());
            for (auto& x : v) x = deg(rng) / H.dim();
            m = MultiIndex::from_vector(v);
        }
        t.terms.emplace_back(s, coef(rng));
    }
    t.normalize();
    return t;
}

}  // namespace

TEST(PseudoTensor, CanonicalizeExample) {
    auto H = hopf_polynomial();
    PTElem got = raw(*H, {d(0), d(1)});
    PTElem want = raw(*H, {d(1), d(0)}, {}, -1) + raw(*H, {d(0), d(0)}, d(1));
    EXPECT_EQ(got, want);
    EXPECT_EQ(want.terms.size(), 2u);
    PTElem already = raw(*H, {d(2), d(0)}, d(1));
    EXPECT_EQ(canonicalize(*H, already.terms, 2), already);
}

TEST(PseudoTensor, ActExamples) {
    auto H = hopf_polynomial();
    PTElem one = raw(*H, {d(0), d(0)});
    EXPECT_EQ(act(*H, single({d(0), d(0)}), one), one);
    EXPECT_EQ(act(*H, single({d(1), d(0)}), one), raw(*H, {d(1), d(0)}));
    EXPECT_EQ(act(*H, single({d(0), d(1)}), one), raw(*H, {d(0), d(1)}));
}

TEST(PseudoTensor, PermuteExamples) {
    auto H = hopf_polynomial();
    PTElem e = raw(*H, {d(1), d(0)});
    PTElem want = raw(*H, {d(1), d(0)}, {}, -1) + raw(*H, {d(0), d(0)}, d(1));
    EXPECT_EQ(permute(*H, {1, 0}, e), want);
    EXPECT_EQ(permute(*H, {0, 1}, e), e);
    EXPECT_EQ(permute(*H, {1, 0}, permute(*H, {1, 0}, e)), e);
}

TEST(PseudoTensor, VirasoroValue) {
    auto H = hopf_polynomial();
    PTElem vir = raw(*H, {d(1), d(0)}) - raw(*H, {d(0), d(1)});
    EXPECT_EQ(vir, raw(*H, {d(1), d(0)}, {}, 2) - raw(*H, {d(0), d(0)}, d(1)));
    EXPECT_EQ(vir, -permute(*H, {1, 0}, vir));
}

TEST(PseudoTensor, LinearCombine) {
    auto H = hopf_polynomial();
    PTElem e = raw(*H, {d(1), d(0)}, d(2), 3);
    EXPECT_TRUE(linear_combine({{1, e}, {-1, e}}).is_zero());
    EXPECT_EQ(linear_combine({{2, e}, {-1, e}}), e);
}

TEST(PseudoTensor, RandomLaws) {
    std::mt19937 rng(11);
    const std::vector<std::vector<int>> s3 = {{0, 1, 2}, {1, 0, 2}, {0, 2, 1}, {2, 0, 1}, {1, 2, 0}, {2, 1, 0}};
    for (auto H : {hopf_polynomial(), hopf_two_dim_nonabelian()}) {
        for (int trial = 0; trial < 20; ++trial) {
            PTElem e = random_pt(*H, rng, 3, 2);
            EXPECT_EQ(canonicalize(*H, e.terms, 3), e);
            for (const auto& s : s3)
                for (const auto& t : s3)
                    EXPECT_EQ(permute(*H, perm_compose(s, t), e), permute(*H, s, permute(*H, t, e)));
            HTensor c = random_tensor(*H, rng, 3), c2 = random_tensor(*H, rng, 3);
            EXPECT_EQ(act(*H, H->tensor_mul(c, c2), e), act(*H, c, act(*H, c2, e)));
            for (const auto& s : s3) {
                HTensor sc;
                sc.arity = 3;
                for (const auto& [slots, q] : c.terms) {
                    std::vector<MultiIndex> m(3);
                    for (int j = 0; j < 3; ++j) m[s[j]] = slots[j];
                    sc.terms.emplace_back(m, q);
                }
                sc.normalize();
                EXPECT_EQ(permute(*H, s, act(*H, c, e)), act(*H, sc, permute(*H, s, e)));
            }
        }
    }
}

TEST(PseudoTensor, Permutations) {
    EXPECT_EQ(perm_sign({1, 2, 0}), 1);
    EXPECT_EQ(perm_sign({1, 0, 2}), -1);
    EXPECT_EQ(perm_from_cycle(3, {1, 2, 3}), (std::vector<int>{1, 2, 0}));
    EXPECT_EQ(perm_compose(perm_inverse({1, 2, 0}), {1, 2, 0}), perm_identity(3));
}
