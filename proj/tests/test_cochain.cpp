#include <gtest/gtest.h>

#include "pa/cochain.hpp"

using namespace pa;

namespace {

MultiIndex d(int k) { return MultiIndex::unit(0, k); }

struct Fixture {
    HopfPtr H = hopf_polynomial();
    ModulePtr M = make_module(H, "L", {"x"});
    PTElem vir_value() const { return pt_from_raw(*H, {d(1), d(0)}, {}, 0) - pt_from_raw(*H, {d(0), d(1)}, {}, 0); }
    Cochain vir() const { return Cochain::from_values(2, M, M, {{{0, 0}, vir_value()}}); }
    Cochain scalar(Q c) const { return as_cochain(HModuleMap::scalar(M, c)); }
};

}  // namespace

TEST(Cochain, SkewCheck) {
    Fixture F;
    EXPECT_TRUE(skew_check(F.vir()).empty());
    Cochain beta = Cochain::from_full(2, F.M, F.M, {{{0, 0}, pt_from_raw(*F.H, {d(0), d(0)}, {}, 0)}});
    auto viol = skew_check(beta);
    ASSERT_EQ(viol.size(), 1u);
    EXPECT_EQ(viol[0].residual, pt_from_raw(*F.H, {d(0), d(0)}, {}, 0, 2));
    EXPECT_TRUE(skew_check(Cochain(2, F.M, F.M)).empty());
}

TEST(Cochain, Eval) {
    Fixture F;
    MElem x = MElem::basis(1, 0), dx = MElem::basis(1, 0, HElem::mono(d(1)));
    HTensor c;
    c.arity = 2;
    c.terms.push_back({{d(0), d(1)}, 1});
    EXPECT_EQ(eval(F.vir(), {x, dx}), act(*F.H, c, F.vir_value()));
    MElem hx = MElem::basis(1, 0, HElem::from_terms({{d(2), 1}, {d(0), 3}}));
    EXPECT_EQ(eval(F.scalar(5), {hx}), pt_from_melem(1, hx) * 5);
    EXPECT_TRUE(eval(Cochain(2, F.M, F.M), {x, x}).is_zero());
}

TEST(Cochain, CircleExamples) {
    Fixture F;
    EXPECT_EQ(circle(F.scalar(3), F.scalar(5)), F.scalar(15));
    EXPECT_EQ(circle(F.vir(), F.scalar(3)).at({0, 0}), F.vir_value() * 6);
    EXPECT_TRUE(circle(F.vir(), Cochain(1, F.M, F.M)).is_zero());
    EXPECT_TRUE(nr_bracket(F.vir(), F.vir()).is_zero());
}

TEST(Cochain, TransposeLast) {
    Fixture F;
    EXPECT_EQ(transpose_last(F.vir()).values, F.vir().values);
    std::mt19937_64 rng(3);
    auto H = hopf_two_dim_nonabelian();
    auto M = make_module(H, "M", {"e1", "e2"});
    for (int trial = 0; trial < 5; ++trial) {
        ValueTable all;
        for (const auto& t : all_tuples(2, 3)) all[t] = random_pt(rng, *H, 3, 2, 2);
        Cochain f = Cochain::from_full(3, M, M, all);
        Cochain t1 = transpose_last(f);
        EXPECT_EQ(transpose_last(t1).values, f.values);
        for (const auto& [t, v] : t1.values) {
            Tuple s = t;
            std::swap(s[1], s[2]);
            EXPECT_EQ(v, -permute(*H, {0, 2, 1}, f.at(s)));
        }
    }
}

TEST(Cochain, NRGradedLaws) {
    std::mt19937_64 rng(5);
    for (auto H : {hopf_polynomial(), hopf_two_dim_nonabelian()}) {
        auto M = make_module(H, "M", {"e1", "e2"});
        for (int trial = 0; trial < 4; ++trial) {
            for (int p = 1; p <= 3; ++p)
                for (int q = 1; q + p <= 4; ++q) {
                    Cochain f = random_cochain(rng, p, M, M, 1), g = random_cochain(rng, q, M, M, 1);
                    Cochain fg = nr_bracket(f, g), gf = nr_bracket(g, f);
                    const int s = ((p - 1) * (q - 1)) % 2 ? 1 : -1;
                    EXPECT_EQ(fg, gf * s);
                    Cochain full = nr_bracket(f, g, true);
                    EXPECT_EQ(full.values, fg.values);
                    EXPECT_TRUE(skew_check(full).empty());
                }
            Cochain f = random_cochain(rng, 2, M, M, 1), g = random_cochain(rng, 1, M, M, 1),
                    h = random_cochain(rng, 2, M, M, 1);
            // [f,[g,h]] = [[f,g],h] + (−1)^{|f||g|}[g,[f,h]] with |f| = arity − 1
            Cochain lhs = nr_bracket(f, nr_bracket(g, h));
            Cochain rhs = nr_bracket(nr_bracket(f, g), h) + nr_bracket(g, nr_bracket(f, h));
            EXPECT_EQ(lhs, rhs);
            Cochain f2 = random_cochain(rng, 2, M, M, 1), g2 = random_cochain(rng, 2, M, M, 1);
            Cochain lhs2 = nr_bracket(f2, nr_bracket(g2, h));
            Cochain rhs2 = nr_bracket(nr_bracket(f2, g2), h) - nr_bracket(g2, nr_bracket(f2, h));
            EXPECT_EQ(lhs2, rhs2);
        }
    }
}

TEST(Cochain, LiftsAndBidegrees) {
    auto H = hopf_polynomial();
    auto g = make_module(H, "g", {"x"});
    auto h = make_module(H, "h", {"u"});
    auto G = direct_sum(g, h);
    std::mt19937_64 rng(9);
    PTElem a = random_pt(rng, *H, 2, 1, 2, 3);
    ComponentMap alpha{1, 1, false, {{{0, 0}, a}}};
    Cochain ah = lift(G, alpha);
    EXPECT_EQ(ah.at({0, 1}), a);
    EXPECT_EQ(ah.at({1, 0}), -permute(*H, {1, 0}, a));
    EXPECT_TRUE(ah.at({0, 0}).is_zero());
    EXPECT_EQ(bidegree_of(ah).str(), "0|1");
    ComponentMap theta{2, 0, true, {{{0, 0}, pt_from_raw(*H, {d(1), d(0)}, {}, 0) - pt_from_raw(*H, {d(0), d(1)}, {}, 0)}}};
    Cochain th = lift(G, theta);
    EXPECT_EQ(bidegree_of(th).str(), "2|-1");
    EXPECT_EQ(restrict_component(th, 2, 0, true).values, theta.values);
    EXPECT_EQ(bidegree_of(Cochain(2, G, G)).kind, Bidegree::Zero);
    EXPECT_EQ(bidegree_of(th + ah).kind, Bidegree::Inhomogeneous);
    // additivity on homogeneous inputs
    Cochain Dh = lift_map(G, HModuleMap{g, h, {{HElem::mono(d(1))}}}, true);
    EXPECT_EQ(bidegree_of(Dh).str(), "1|-1");
    Cochain br = nr_bracket(ah, Dh);
    if (!br.is_zero()) EXPECT_EQ(bidegree_of(br).str(), "1|0");
    Cochain Th = lift_map(G, HModuleMap{h, g, {{HElem::one()}}}, false);
    EXPECT_EQ(bidegree_of(Th).str(), "-1|1");
    ComponentMap kappa{0, 2, false, {{{0, 0}, random_pt(rng, *H, 2, 1, 2, 2)}}};
    kappa.values.begin()->second = skew_project(*H, {0, 0}, kappa.values.begin()->second);
    EXPECT_TRUE(nr_bracket(Th, lift(G, kappa)).is_zero());  // −1|l with −1|k vanishes
}
