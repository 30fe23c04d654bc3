#include "symdet/parse.hpp"
#include "symdet/resolvent.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace symdet;

namespace {

Expr P(const std::string& s) { return parse_expr(s); }

// canonical Symbol built from (coefficient text, factors)
Symbol sym(std::initializer_list<std::pair<std::string, FacList>> ws) {
    Symbol r;
    for (auto& [c, f] : ws) r.add(Word{P(c), f});
    return r;
}

}  // namespace

TEST(Clifford, Traces) {
    using CE = CliffElem;
    EXPECT_EQ(clifford_trace({CE::gamma("a")}), Expr(0));
    EXPECT_EQ(clifford_trace({CE::gamma("a"), CE::gamma("b")}), simplify(Expr(4) * delta("a", "b")));
    EXPECT_EQ(clifford_trace({CE::pslash(), CE::gamma("b")}), simplify(Expr(4) * momentum("b")));
    Expr four = clifford_trace({CE::gamma("a"), CE::gamma("b"), CE::gamma("c"), CE::gamma("e")});
    Expr want = P("4*(delta_{a,b}*delta_{c,e} - delta_{a,c}*delta_{b,e} + delta_{a,e}*delta_{b,c})");
    EXPECT_TRUE(equal_canonical(four, want));
}

TEST(Clifford, Reduce) {
    using CE = CliffElem;
    auto r = gamma_reduce({CE::gamma("a"), CE::gamma("a")});
    ASSERT_EQ(r.size(), 1u);
    EXPECT_TRUE(r[0].str.empty());
    EXPECT_EQ(r[0].coeff, sym_d());
    auto s = gamma_reduce({CE::pslash(), CE::pslash()});
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].coeff, momentum_sq());
    auto ab = gamma_reduce({CE::gamma("b"), CE::gamma("a")});
    ASSERT_EQ(ab.size(), 2u);
    EXPECT_LT(gamma_rep().clifford_residual(), 1e-14);
}

TEST(PhaseSpace, BosonBrackets) {
    auto op = OperatorSpec::boson();
    Symbol r0 = Symbol::factor(Fac::res(op.base(), -1));
    EXPECT_TRUE(poisson_bracket(r0, op.shifted_symbol(), 1).zero());
    Symbol b2 = poisson_bracket(r0, op.shifted_symbol(), 2);
    Base B = op.base();
    Symbol want = sym({{"4*V_{a}*V_{a}", {Fac::res(B, -3)}},
                       {"8*p_{a}*p_{b}*V_{a,b}", {Fac::res(B, -3)}},
                       {"-4*lap(V)", {Fac::res(B, -2)}}});
    EXPECT_EQ(b2, want) << b2;
}

TEST(PhaseSpace, StarProductOrderOne) {
    // p_mu o f(x) = p_mu f - (i hbar/2) f_mu
    Symbol a(momentum("m"));
    Symbol f(field("V"));
    Symbol r = star_product(a, f, 1);
    Symbol want(P("p_{m}*V - i*hbar/2*V_{m}"));
    EXPECT_EQ(r, want) << r;
    EXPECT_EQ(star_product(Symbol(Expr(1)), f, 3), f);
}

TEST(PhaseSpace, BracketSymmetry) {
    std::mt19937_64 rng(11);
    std::vector<std::string> pool{"V", "V*p_{a}*p_{a}", "V^2*p_{b}", "p2*p_{c}", "V_{a}*p_{a}", "p2^2", "V^3"};
    for (int t = 0; t < 10; ++t) {
        Symbol a(P(pool[rng() % pool.size()])), b(P(pool[rng() % pool.size()]));
        for (int n = 0; n <= 3; ++n) {
            Symbol ab = poisson_bracket(a, b, n), ba = poisson_bracket(b, a, n);
            EXPECT_EQ(ab, n % 2 ? -ba : ba) << n;
        }
    }
}

TEST(Resolvent, Boson) {
    auto e = resolvent_expand(OperatorSpec::boson(), 2);
    EXPECT_TRUE(e.terms[1].zero());
    Base B = Base::boson();
    Symbol want = sym({{"-1/2*lap(V)", {Fac::res(B, -3)}},
                       {"1/2*V_{a}*V_{a}", {Fac::res(B, -4)}},
                       {"p_{a}*p_{b}*V_{a,b}", {Fac::res(B, -4)}}});
    EXPECT_EQ(e.terms[2], want) << e.terms[2];
    auto rep = verify_resolvent(e);
    EXPECT_TRUE(rep.ok) << rep.message;
}

TEST(Resolvent, DiracPublished) {
    auto e = resolvent_expand(OperatorSpec::dirac(), 2);
    Base A = Base::dirac();
    Symbol want = sym({{"-1/4*phi_{x,y}", {Fac::res(A, -3), Fac::gamma("x"), Fac::res(A, -1), Fac::gamma("y")}}});
    EXPECT_EQ(e.terms[2], want) << e.terms[2];
    EXPECT_TRUE(phase_space_trace(e.terms[1]).zero());
    EXPECT_FALSE(e.terms[1].zero());
}

TEST(Resolvent, DiracCompleteSatisfiesDefiningEquation) {
    auto e = resolvent_expand(OperatorSpec::dirac(), 2, Convention::Complete);
    auto rep = verify_resolvent(e);
    EXPECT_TRUE(rep.ok) << rep.message;
    auto pub = resolvent_expand(OperatorSpec::dirac(), 2, Convention::Published);
    EXPECT_FALSE(verify_resolvent(pub).ok);
}

TEST(Resolvent, ConstantFieldHasNoCorrections) {
    auto e = resolvent_expand(OperatorSpec::boson(), 2);
    for (size_t n = 1; n < e.terms.size(); ++n)
        for (auto& w : e.terms[n].words()) EXPECT_TRUE(contains_kind(w.coeff, Kind::Field));
}
