#include <gtest/gtest.h>

#include <random>

#include "pa/hopf.hpp"

using namespace pa;

namespace {

MultiIndex d(int k) { return MultiIndex::unit(0, k); }
MultiIndex a(int i, int j) { return MultiIndex::from_vector({i, j}); }

HElem random_elem(std::mt19937& rng, int dim, int max_deg) {
    std::uniform_int_distribution<int> coef(-3, 3), expo(0, max_deg), count(1, 4);
    std::vector<HTerm> t;
    for (int n = count(rng); n > 0; --n) {
        std::vector<int> e(dim);
        int left = max_deg;
        for (int i = 0; i < dim; ++i) {
            e[i] = std::uniform_int_distribution<int>(0, left)(rng);
            left -= e[i];
        }
        (void)expo;
        t.emplace_back(MultiIndex::from_vector(e), Q(coef(rng)));
    }
    return HElem::from_terms(std::move(t));
}

HTensor single(std::vector<MultiIndex> slots, Q c = 1) {
    HTensor t;
    t.arity = static_cast<int>(slots.size());
    t.terms.emplace_back(std::move(slots), c);
    return t;
}

HTensor sum(std::vector<HTensor> parts) {
    HTensor r;
    r.arity = parts.front().arity;
    for (auto& p : parts)
        for (auto& term : p.terms) r.terms.push_back(term);
    r.normalize();
    return r;
}

// Applies Δ to leg `leg` of t.
HTensor coproduct_on_leg(const HopfAlgebra& H, const HTensor& t, int leg) {
    HTensor r;
    r.arity = t.arity + 1;
    for (const auto& [slots, c] : t.terms) {
        for (const auto& sp : H.splits(slots[leg], 2)) {
            std::vector<MultiIndex> s = slots;
            s[leg] = sp[0];
            s.insert(s.begin() + leg + 1, sp[1]);
            r.terms.emplace_back(std::move(s), c);
        }
    }
    r.normalize();
    return r;
}

}  // namespace

TEST(Hopf, DividedPowerProduct) {
    auto H = hopf_polynomial();
    EXPECT_EQ(H->mul(HElem::mono(d(1)), HElem::mono(d(2))), HElem::mono(d(3), 3));
    HElem x = HElem::from_terms({{d(0), 2}, {d(1), 5}});
    EXPECT_EQ(H->mul(HElem::one(), x), x);
    EXPECT_EQ(H->mul(x, HElem::one()), x);
}

TEST(Hopf, NonAbelianStraightening) {
    auto H = hopf_two_dim_nonabelian();
    HElem got = H->mul(HElem::mono(a(0, 1)), HElem::mono(a(1, 0)));
    EXPECT_EQ(got, HElem::from_terms({{a(1, 1), 1}, {a(0, 1), -1}}));
    EXPECT_EQ(H->antipode(HElem::mono(a(1, 1))), HElem::from_terms({{a(1, 1), 1}, {a(0, 1), -1}}));
}

TEST(Hopf, CoproductExamples) {
    auto H = hopf_polynomial();
    HTensor got = H->coproduct_iter(HElem::mono(d(2)), 1);
    HTensor want = sum({single({d(2), d(0)}), single({d(1), d(1)}), single({d(0), d(2)})});
    EXPECT_EQ(got, want);
    EXPECT_EQ(H->coproduct_iter(HElem::one(), 1), single({d(0), d(0)}));
    HTensor d2 = H->coproduct_iter(HElem::mono(d(1)), 2);
    EXPECT_EQ(d2, sum({single({d(1), d(0), d(0)}), single({d(0), d(1), d(0)}), single({d(0), d(0), d(1)})}));
}

TEST(Hopf, AntipodeAndCounit) {
    auto H = hopf_polynomial();
    EXPECT_EQ(H->antipode(HElem::mono(d(2))), HElem::mono(d(2)));
    EXPECT_EQ(H->antipode(HElem::one()), HElem::one());
    EXPECT_EQ(H->counit(HElem::mono(d(3))), 0);
    EXPECT_EQ(H->counit(HElem::one()), 1);
    EXPECT_EQ(H->counit(HElem::from_terms({{d(0), 2}, {d(1), 5}})), 2);
}

TEST(Hopf, SweedlerLegs) {
    auto H = hopf_polynomial();
    HElem dd = HElem::mono(d(1));
    EXPECT_EQ(H->sweedler_legs(dd, 0, 2), H->coproduct_iter(dd, 1));
    EXPECT_EQ(H->sweedler_legs(dd, 1, 1), sum({single({d(1), d(0)}, -1), single({d(0), d(1)})}));
    EXPECT_EQ(H->sweedler_legs(HElem::one(), 2, 1), single({d(0), d(0), d(0)}));
}

TEST(Hopf, RandomAxioms) {
    std::mt19937 rng(7);
    for (auto H : {hopf_polynomial(), hopf_two_dim_nonabelian()}) {
        const int dim = H->dim();
        for (int trial = 0; trial < 25; ++trial) {
            HElem x = random_elem(rng, dim, 4), y = random_elem(rng, dim, 4), z = random_elem(rng, dim, 4);
            EXPECT_EQ(H->mul(H->mul(x, y), z), H->mul(x, H->mul(y, z)));
            EXPECT_EQ(H->mul(x, y + z), H->mul(x, y) + H->mul(x, z));
            EXPECT_EQ(H->counit(H->mul(x, y)), H->counit(x) * H->counit(y));
            HTensor dx = H->coproduct_iter(x, 1);
            // counit laws and antipode law
            HElem left, right;
            for (const auto& [s, c] : dx.terms) {
                left = left + HElem::mono(s[1], c * (s[0].zero() ? 1 : 0));
                right = right + HElem::mono(s[0], c * (s[1].zero() ? 1 : 0));
            }
            EXPECT_EQ(left, x);
            EXPECT_EQ(right, x);
            EXPECT_EQ(H->multiply_legs(H->antipode_on_leg(dx, 0)), HElem::one() * H->counit(x));
            EXPECT_EQ(H->antipode(H->antipode(x)), x);
            EXPECT_EQ(H->antipode(H->mul(x, y)), H->mul(H->antipode(y), H->antipode(x)));
            EXPECT_EQ(coproduct_on_leg(*H, dx, 0), coproduct_on_leg(*H, dx, 1));
            EXPECT_EQ(coproduct_on_leg(*H, dx, 0), H->coproduct_iter(x, 2));
            EXPECT_EQ(H->coproduct_iter(H->mul(x, y), 1),
                      H->tensor_mul(dx, H->coproduct_iter(y, 1)));
        }
    }
}

TEST(Hopf, ValidateRejectsBadBrackets) {
    BaseLieAlgebra b = BaseLieAlgebra::abelian(3);
    b.set_bracket(0, 1, {{2, 1}});
    b.set_bracket(1, 2, {{0, 1}});
    b.set_bracket(0, 2, {{0, 1}});
    EXPECT_THROW(b.validate(), InputError);
}
