#include "symdet/momint.hpp"
#include "symdet/parse.hpp"

#include <gtest/gtest.h>

using namespace symdet;

namespace {

Expr P(const std::string& s) { return parse_expr(s); }

void expect_same(const Expr& got, const std::string& want) {
    EXPECT_TRUE(equal_canonical(got, P(want))) << to_text(got) << "\n  vs " << want;
}

}  // namespace

TEST(Mellin, Rule) {
    expect_same(mellin_rule(field("V"), 1), "V^(-s)");
    expect_same(mellin_rule(field("V"), 3), "s*(s+1)/2*V^(-s-2)");
    expect_same(mellin_prefactor(4), "s*(s+1)*(s+2)/6");
}

TEST(Mellin, FinitePart) {
    RatFunc t = RatFunc::x();
    RatFunc k = RatFunc(Poly::linear(2, -1));
    EXPECT_EQ(hadamard_fp(t * t / k.pow(4)), Expr(Rational(-1, 3)));
    EXPECT_EQ(hadamard_fp(RatFunc(Rational(1)) / k.pow(2)), Expr(-1));
    EXPECT_EQ(hadamard_fp(t * t), Expr(Rational(1, 3)));
    EXPECT_THROW(hadamard_fp(RatFunc(Rational(1)) / t), Error);
    expect_same(fp_integrate(P("3*t^2*phi*(2*t-1)^(-4)")), "-phi");
}

TEST(Mellin, FeynmanCombine) {
    Base A = Base::dirac(), Ac = Base::dirac_conj();
    Word w{Expr(1), {Fac::res(A, -3), Fac::res(Ac, -1)}};
    Symbol c = feynman_combine(w);
    ASSERT_EQ(c.size(), 1u);
    auto cw = c.words()[0];
    expect_same(cw.coeff, "3*t^2");
    ASSERT_EQ(cw.f.size(), 1u);
    EXPECT_EQ(cw.f[0].n(), -4);
    expect_same(cw.f[0].base.slash, "2*t-1");
}

TEST(Mellin, GammaPass) {
    Base A = Base::dirac();
    Word w{field("phi", {"a", "b"}), {Fac::res(A, -3), Fac::gamma("a"), Fac::res(A, -1), Fac::gamma("b")}};
    Symbol g = gamma_pass(w);
    EXPECT_EQ(g.size(), 3u) << g;
    for (auto& x : g.words()) EXPECT_FALSE(has_sandwich(x));
}

TEST(Mellin, OperatorIdentityWithShift) {
    Base A = Base::dirac(), Ac = Base::dirac_conj();
    Symbol m = mellin_epsilon(operator_identity_decompose(Word{Expr(1), {Fac::res(A, -3), Fac::res(Ac, -1)}}));
    Symbol want;
    want.add(Word{P("-i/8*p2^(-2)"), {Fac::pslash(), Fac::pw(A, Affine(0, -1))}});
    want.add(Word{P("i/8*p2^(-2)"), {Fac::pslash(), Fac::pw(Ac, Affine(0, -1))}});
    want.add(Word{P("s/4*p2^(-1)"), {Fac::pw(A, Affine(-1, -1))}});
    want.add(Word{P("i*s*(s+1)/4*p2^(-1)"), {Fac::pslash(), Fac::pw(A, Affine(-2, -1))}});
    EXPECT_EQ(m, want) << m;
}

TEST(MomInt, TensorReduce) {
    expect_same(tensor_reduce(P("p_{a}*p_{b}*V_{a,b}"), Affine(4)), "p2*lap(V)/4");
    expect_same(tensor_reduce(P("p_{a}*p_{b}*p_{c}*p_{e}*delta_{a,b}*delta_{c,e}"), Affine(4)), "p2^2");
    EXPECT_EQ(tensor_reduce(P("p_{a}*V_{a}"), Affine(4)), Expr(0));
    EXPECT_THROW(tensor_reduce(P("p_{a}*p_{b}*p_{c}*p_{e}*p_{f}*p_{g}*V_{a,b}*V_{c,e}*V_{f,g}"), Affine(4)), Error);
}

TEST(MomInt, Masters) {
    expect_same(limit_d4(scalar_master_term(field("V"), Affine(0, 1), dim_symbolic())), "V^(2-s)/(16*pi^2*(s-1)*(s-2))");
    expect_same(dirac_power_trace_d4(field("phi"), Affine(0, 1)), "3*phi^(4-s)*gamma(s-4)/(pi^2*gamma(s))");
    Symbol pw = Symbol::factor(Fac::pw(Base::dirac(), Affine(0, -1)));
    expect_same(dirac_momentum_integral(pw), "3*phi^(4-s)*gamma(s-4)/(pi^2*gamma(s))");
    EXPECT_THROW(dirac_power_trace_d4(field("phi"), Affine(3)), Error);
    // the d-dimensional formula itself is regular at d = 4 for generic s
    expect_same(simplify(substitute_param(dirac_power_trace(field("phi"), Affine(0, 1)), "d", Expr(4))),
                "3*phi^(4-s)*gamma(s-4)/(pi^2*gamma(s))");
}

TEST(MomInt, BosonZetaBothRoutes) {
    auto r = resolvent_expand(OperatorSpec::boson(), 2);
    Expr direct, mellin_first;
    std::vector<Expr> a, b;
    for (auto& t : r.terms) {
        if (t.zero()) continue;
        a.push_back(direct_zeta(t, r.op));
        b.push_back(boson_momentum_integral(mellin(t)));
    }
    std::string want = "(V^(2-s)/((s-1)*(s-2)) - V^(-s)*lap(V)/6 + s*V^(-s-1)*V_{a}*V_{a}/12)/(16*pi^2)";
    expect_same(sum(a), want);
    expect_same(sum(b), want);
}

TEST(MomInt, DiracDirectPowerTrace) {
    auto r = resolvent_expand(OperatorSpec::dirac(), 2);
    expect_same(direct_zeta(r.terms[0], r.op), "3*phi^(4-s)*gamma(s-4)/(pi^2*gamma(s))");
    EXPECT_EQ(direct_zeta(r.terms[1], r.op), Expr(0));
    expect_same(direct_zeta(r.terms[2], r.op), "phi^(1-s)*lap(phi)/(16*pi^2*(s-1))");
}
