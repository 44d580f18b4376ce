#include <gtest/gtest.h>

#include "pa/deformation.hpp"

using namespace pa;

namespace {

MultiIndex d(int k) { return MultiIndex::unit(0, k); }

struct Fixture {
    HopfPtr H = hopf_polynomial();
    ModulePtr g = make_module(H, "g", {"x"});
    ModulePtr h = make_module(H, "h", {"u"});

    PTElem vir(const Q& c = 1) const {
        return (pt_from_raw(*H, {d(1), d(0)}, {}, 0) - pt_from_raw(*H, {d(0), d(1)}, {}, 0)) * c;
    }
    ComponentMap comp(int k, int l, bool to_h, const Q& c) const {
        ComponentMap m{k, l, to_h, {}};
        if (c != 0) m.values[{0, 0}] = vir(c);
        return m;
    }
    QuasiTwilled build(const Q& pi, const Q& rho, const Q& mu, const Q& eta, const Q& theta) const {
        return make_quasi_twilled(g, h, comp(2, 0, false, pi), comp(1, 1, true, rho), comp(0, 2, true, mu),
                                  comp(1, 1, false, eta), comp(2, 0, true, theta));
    }
    QuasiTwilled modified_r(const Q& p) const { return build(0, 0, 1, 1, p); }
    QuasiTwilled reynolds() const { return build(1, 1, 0, 0, 1); }
    QuasiTwilled action(const Q& p) const { return build(1, 1, p, 0, 0); }

    HModuleMap D(const Q& c) const { return scalar(g, h, c); }
    HModuleMap T(const Q& c) const { return scalar(h, g, c); }
    static HModuleMap scalar(const ModulePtr& from, const ModulePtr& to, const Q& c) {
        HModuleMap m = HModuleMap::zero(from, to);
        m.matrix[0][0] = HElem::one() * c;
        return m;
    }
};

PTElem only_value(const ComponentMap& c) {
    if (c.values.empty()) return PTElem(2);
    EXPECT_EQ(c.values.size(), 1u);
    return c.values.begin()->second;
}

}  // namespace

TEST(Deformation, ModifiedRScalarMaps) {
    Fixture s;
    for (int p : {1, 4}) {
        QuasiTwilled S = s.modified_r(p);
        for (int c = -3; c <= 3; ++c) {
            ComponentMap r = dmap1_residual(S, s.D(c));
            EXPECT_EQ(only_value(r), s.vir(p - c * c)) << "p=" << p << " c=" << c;
            GraphReport gr = graph_check(S, s.D(c));
            EXPECT_EQ(gr.closed, c * c == p);
            EXPECT_EQ(gr.residual.values, r.values);
            EXPECT_EQ(mc_residual_type1(S, s.D(c)), lift(S.G, r));
            Twist1Result tw = twist1(S, s.D(c));
            EXPECT_TRUE(tw.matches_exp);
            EXPECT_EQ(tw.is_dmap, c * c == p);
            EXPECT_EQ(theta_map(tw.twisted).values, r.values);
            // π^D = 2c[·,·] and ρ^D = [Dx*u] − D[x*u] = 0 here since ρ = 0 and μ(Dx,u) = c·η(x,u).
            EXPECT_EQ(only_value(pi_map(tw.twisted)), s.vir(2 * c));
            EXPECT_TRUE(tw.twisted.rho.is_zero());
            EXPECT_EQ(tw.twisted.mu, S.mu);
            EXPECT_EQ(tw.twisted.eta, S.eta);
        }
    }
}

TEST(Deformation, OrientationErrors) {
    Fixture s;
    QuasiTwilled S = s.modified_r(1);
    auto G2 = make_module(s.H, "two", {"a", "b"});
    EXPECT_THROW(dmap1_residual(S, Fixture::scalar(G2, s.h, 1)), InputError);
    EXPECT_THROW(dmap2_residual(S, Fixture::scalar(s.h, G2, 1)), InputError);
    EXPECT_THROW(twisted_l_type1(S, s.D(2)), ValidationError);
    EXPECT_THROW(twisted_l_type2(s.reynolds(), s.T(1)), ValidationError);
}

TEST(Deformation, ReynoldsScalarMaps) {
    Fixture s;
    QuasiTwilled S = s.reynolds();
    for (int c = -3; c <= 2; ++c) {
        ComponentMap r = dmap2_residual(S, s.T(c));
        EXPECT_EQ(only_value(r), s.vir(-c * c * (1 + c))) << "c=" << c;
        Twist2Result tw = twist2(S, s.T(c));
        EXPECT_TRUE(tw.matches_exp);
        EXPECT_EQ(tw.xi.values, r.values);
        EXPECT_EQ(tw.is_dmap, c == 0 || c == -1);
        EXPECT_EQ(tw.theta.values, theta_map(S).values);
        EXPECT_EQ(mc_residual_type2(S, s.T(c)), lift(S.G, r));
    }
}

TEST(Deformation, ExponentialSeriesAgreesWithConjugation) {
    std::mt19937_64 rng(11);
    for (auto H : {hopf_polynomial(), hopf_two_dim_nonabelian()}) {
        auto g = make_module(H, "g", {"x"});
        auto h = make_module(H, "h", {"u"});
        for (int trial = 0; trial < 6; ++trial) {
            QuasiTwilled S = random_structure(rng, g, h, 1);
            HModuleMap D = random_map(rng, g, h, 1), T = random_map(rng, h, g, 1);

            TwistSeries e1 = exp_twist(S, D, MapKind::TypeI);
            EXPECT_TRUE(e1.agree());
            EXPECT_LE(e1.terms, 3);
            Twist1Result t1 = twist1(S, D);
            EXPECT_TRUE(t1.matches_exp);
            EXPECT_EQ(theta_map(t1.twisted).values, dmap1_residual(S, D).values);
            EXPECT_EQ(graph_check(S, D).residual.values, dmap1_residual(S, D).values);

            TwistSeries e2 = exp_twist(S, T, MapKind::TypeII);
            EXPECT_TRUE(e2.agree());
            EXPECT_LE(e2.terms, 4);
            Twist2Result t2 = twist2(S, T);
            EXPECT_TRUE(t2.matches_exp);
            EXPECT_EQ(t2.xi.values, dmap2_residual(S, T).values);
        }
    }
}

TEST(Deformation, ZeroMapsLeaveOmegaUnchanged) {
    Fixture s;
    QuasiTwilled S = s.reynolds();
    EXPECT_EQ(exp_twist(S, s.T(0), MapKind::TypeII).series, S.omega());
    EXPECT_EQ(exp_twist(S, s.D(0), MapKind::TypeI).series, S.omega());
    EXPECT_EQ(twist1(S, s.D(0)).twisted.omega(), S.omega());
}

TEST(Deformation, PrintedTypeTwoFormsMissTheSwap) {
    // ρ^T and η^T read literally without reordering the slots differ from the series.
    Fixture s;
    QuasiTwilled S = s.reynolds();
    Twist2Result printed = twist2(S, s.T(1), Twist2Form::Printed);
    Twist2Result fixed = twist2(S, s.T(1), Twist2Form::Reordered);
    EXPECT_TRUE(fixed.matches_exp);
    EXPECT_FALSE(printed.matches_exp);
    EXPECT_EQ(printed.pi.values, fixed.pi.values);
    EXPECT_EQ(printed.mu.values, fixed.mu.values);
    EXPECT_EQ(printed.xi.values, fixed.xi.values);
    EXPECT_NE(printed.rho.values, fixed.rho.values);
}

TEST(Deformation, CurvedOperatorsTypeOne) {
    Fixture s;
    for (int p : {0, 3}) {
        QuasiTwilled S = s.modified_r(p);
        LInfOperators ops = curved_l_type1(S);
        EXPECT_EQ(ops.l({}), S.theta);
        Cochain D = lift_map(S.G, s.D(2), true);
        // l₁ = [π+ρ, ·] vanishes for π = ρ = 0.
        EXPECT_TRUE(ops.l({D}).is_zero());
        EXPECT_EQ(ops.l({D, D}) * Q(1, 2), lift(S.G, s.comp(2, 0, true, 4)) - lift(S.G, s.comp(2, 0, true, 8)));
        EXPECT_TRUE(ops.untwisted({D, D, D}).is_zero());
    }
    std::mt19937_64 rng(5);
    QuasiTwilled S = s.action(2);
    LInfOperators ops = curved_l_type1(S);
    for (int a : {1, 2}) {
        Cochain x = random_k_element(rng, S, MapKind::TypeI, a, 1);
        Cochain y = random_k_element(rng, S, MapKind::TypeI, 1, 1);
        EXPECT_TRUE(ops.untwisted({x, y, y}).is_zero());
        EXPECT_EQ(ops.l({x}), ops.project(nr_bracket(S.pi + S.rho, x)));
    }
}

TEST(Deformation, CurvedOperatorsTypeTwo) {
    Fixture s;
    QuasiTwilled S = s.reynolds();
    LInfOperators ops = curved_l_type2(S);
    EXPECT_TRUE(ops.l({}).is_zero());
    Cochain T = lift_map(S.G, s.T(1), false);
    EXPECT_EQ(ops.l({T}), ops.project(nr_bracket(S.mu + S.eta, T)));
    EXPECT_EQ(ops.l({T, T}), ops.project(nr_bracket(nr_bracket(S.pi + S.rho, T), T)));
    EXPECT_EQ(ops.l({T, T, T}), ops.project(nr_bracket(nr_bracket(nr_bracket(S.theta, T), T), T)));
    EXPECT_TRUE(ops.untwisted({T, T, T, T}).is_zero());
}

TEST(Deformation, HigherJacobi) {
    Fixture s;
    std::mt19937_64 rng(3);
    struct Case {
        QuasiTwilled S;
        MapKind kind;
    };
    std::vector<Case> cases = {{s.modified_r(4), MapKind::TypeI},
                               {s.action(2), MapKind::TypeI},
                               {s.reynolds(), MapKind::TypeII},
                               {s.action(2), MapKind::TypeII}};
    for (const auto& c : cases) {
        LInfOperators ops = c.kind == MapKind::TypeI ? curved_l_type1(c.S) : curved_l_type2(c.S);
        std::vector<Cochain> samples;
        for (int a : {1, 2, 1, 2}) samples.push_back(random_k_element(rng, c.S, c.kind, a, 1));
        for (const auto& x : samples) ASSERT_FALSE(x.is_zero());
        LInfReport rep = linf_jacobi_check(ops, 4, samples, 2);
        EXPECT_TRUE(rep.pass()) << c.S.name << " failures " << rep.failures.size();
        EXPECT_GT(rep.checked, 0);
    }
}

TEST(Deformation, JacobiDetectsBrokenStructure) {
    // Type (iii)-like data with a nonzero [Ω,Ω] region breaks the identity at n = 0 or 1.
    Fixture s;
    QuasiTwilled S = s.build(1, 1, 1, 0, 1);
    ASSERT_FALSE(check_mc_omega(S).bracket_zero);
    std::mt19937_64 rng(9);
    std::vector<Cochain> samples = {random_k_element(rng, S, MapKind::TypeI, 1, 1),
                                    random_k_element(rng, S, MapKind::TypeI, 2, 1)};
    EXPECT_FALSE(linf_jacobi_check(curved_l_type1(S), 2, samples).pass());
}

TEST(Deformation, TwistedMaurerCartan) {
    Fixture s;
    QuasiTwilled S = s.modified_r(4);
    LInfOperators ops = twisted_l_type1(S, s.D(2));
    EXPECT_TRUE(mc_residual(ops, lift_map(S.G, s.D(-4), true)).is_zero());
    Cochain bad = mc_residual(ops, lift_map(S.G, s.D(1), true));
    EXPECT_EQ(bad, lift(S.G, s.comp(2, 0, true, -5)));
    EXPECT_EQ(bad, lift(S.G, dmap1_residual(S, s.D(3))));
    EXPECT_TRUE(mc_residual(ops, lift_map(S.G, s.D(0), true)).is_zero());

    QuasiTwilled R = s.reynolds();
    LInfOperators rops = twisted_l_type2(R, s.T(-1));
    EXPECT_TRUE(mc_residual(rops, lift_map(R.G, s.T(0), false)).is_zero());
    EXPECT_TRUE(mc_residual(rops, lift_map(R.G, s.T(1), false)).is_zero());  // T + T′ = 0
    Cochain r2 = mc_residual(rops, lift_map(R.G, s.T(-1), false));
    EXPECT_EQ(r2, lift(R.G, dmap2_residual(R, s.T(-2))));
    EXPECT_EQ(r2, lift(R.G, s.comp(0, 2, false, 4)));
}

TEST(Deformation, TwistedOperatorsSatisfyJacobi) {
    Fixture s;
    std::mt19937_64 rng(21);
    QuasiTwilled S = s.modified_r(4);
    LInfOperators ops = twisted_l_type1(S, s.D(2));
    EXPECT_TRUE(ops.l({}).is_zero());
    std::vector<Cochain> samples;
    for (int a : {1, 2, 1}) samples.push_back(random_k_element(rng, S, MapKind::TypeI, a, 1));
    EXPECT_TRUE(linf_jacobi_check(ops, 3, samples).pass());

    QuasiTwilled R = s.reynolds();
    LInfOperators rops = twisted_l_type2(R, s.T(-1));
    samples.clear();
    for (int a : {1, 2, 1}) samples.push_back(random_k_element(rng, R, MapKind::TypeII, a, 1));
    EXPECT_TRUE(linf_jacobi_check(rops, 3, samples).pass());
}
