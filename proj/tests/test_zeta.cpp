#include "symdet/parse.hpp"
#include "symdet/yukawa.hpp"

#include <gtest/gtest.h>

using namespace symdet;

namespace {

Expr P(const std::string& s) { return parse_expr(s); }

void expect_same(const Expr& got, const std::string& want) {
    EXPECT_TRUE(equal_canonical(got, P(want))) << to_text(got) << "\n  vs " << want;
}

const char* kBosonZeta = "(V^(2-s)/((s-1)*(s-2)) - V^(-s)*lap(V)/6 + s*V^(-s-1)*V_{a}*V_{a}/12)/(16*pi^2)";
const char* kDiracZeta = "(3*phi^(4-s)/((s-1)*(s-2)*(s-3)*(s-4)) + phi^(1-s)*lap(phi)/(16*(s-1)))/pi^2";

}  // namespace

TEST(Zeta, Boson) {
    auto z = zeta_density(OperatorSpec::boson());
    expect_same(z.total(), kBosonZeta);
    ZetaOptions d;
    d.path = DiracPath::Direct;
    expect_same(zeta_density(OperatorSpec::boson(), d).total(), kBosonZeta);
}

TEST(Zeta, BosonConstantPotential) {
    ZetaOptions o;
    o.order = 0;
    auto det = ds_at_zero(zeta_density(OperatorSpec::boson(), o).total(), OperatorSpec::boson());
    expect_same(det.total, "V^2*ln(e^(-3/2)*V/mu^2)/(32*pi^2)");
}

TEST(Zeta, DiracPaths) {
    for (auto p : {DiracPath::FeynmanFP, DiracPath::OperatorIdentity, DiracPath::Direct}) {
        ZetaOptions o;
        o.path = p;
        auto z = zeta_density(OperatorSpec::dirac(), o);
        expect_same(z.by_order[2], "phi^(1-s)*lap(phi)/(16*pi^2*(s-1))");
        expect_same(z.total(), kDiracZeta);
    }
}

TEST(Zeta, DiracPieces) {
    ZetaOptions o;
    auto fp = zeta_density(OperatorSpec::dirac(), o);
    std::vector<std::string> want{"1/8", "-1/32", "-1/32"};
    std::vector<Expr> got;
    for (auto& pc : fp.pieces)
        if (pc.order == 2) got.push_back(simplify(pc.value / P("phi^(1-s)*lap(phi)/(pi^2*(s-1))")));
    ASSERT_EQ(got.size(), 3u);
    for (auto& w : want) {
        bool found = std::any_of(got.begin(), got.end(), [&](const Expr& g) { return equal_canonical(g, P(w)); });
        EXPECT_TRUE(found) << w;
    }
}

TEST(Zeta, BosonDeterminant) {
    auto op = OperatorSpec::boson();
    auto det = integrate_by_parts_normalize(ds_at_zero(zeta_density(op).total(), op));
    expect_same(det.total, "(V^2*ln(e^(-3/2)*V/mu^2) + V_{a}*V_{a}/(6*V))/(32*pi^2)");
    auto ts = log_terms(det.total);
    ASSERT_EQ(ts.size(), 2u);
    expect_same(ts[0].coeff, "V^2/(32*pi^2)");
    ASSERT_TRUE(ts[0].log_arg);
    expect_same(*ts[0].log_arg, "e^(-3/2)*V*mu^(-2)");
    EXPECT_FALSE(ts[1].log_arg);
    expect_same(presentation(ts), "(V^2*ln(e^(-3/2)*V/mu^2) + V_{a}*V_{a}/(6*V))/(32*pi^2)");
}

TEST(Zeta, PhiFourthSubstitution) {
    auto op = OperatorSpec::boson();
    auto det = integrate_by_parts_normalize(ds_at_zero(zeta_density(op).total(), op));
    Expr sub = integrate_by_parts_normalize(substitute_field(det.total, "V", P("lc*phi^2/2")), "phi");
    auto ts = log_terms(sub);
    bool found = false;
    for (auto& t : ts)
        if (t.log_arg && equal_canonical(t.coeff, P("lc^2*phi^4/(128*pi^2)"))) {
            found = true;
            expect_same(*t.log_arg, "e^(-3/2)*lc*phi^2/(2*mu^2)");
        }
    EXPECT_TRUE(found);
}

TEST(Zeta, DiracDeterminant) {
    auto op = OperatorSpec::dirac();
    auto det = integrate_by_parts_normalize(ds_at_zero(zeta_density(op).total(), op));
    expect_same(det.total, "(phi^4*ln(phi^2*e^(-25/6)/mu^2) + ln(phi^2/mu^2)*phi_{a}*phi_{a}/2)/(16*pi^2)");
    auto ts = log_terms(det.total);
    ASSERT_EQ(ts.size(), 2u);
    for (auto& t : ts) EXPECT_TRUE(t.log_arg);
}

TEST(Zeta, IntegrationByParts) {
    expect_same(integrate_by_parts_normalize(P("V^(-s)*lap(V)"), "V"), "s*V^(-s-1)*V_{a}*V_{a}");
    expect_same(integrate_by_parts_normalize(P("V_{a}*V_{a}"), "V"), "V_{a}*V_{a}");
}

TEST(Zeta, Dimensions) {
    EXPECT_TRUE(dimension_consistent(P(kBosonZeta), OperatorSpec::boson()));
    EXPECT_FALSE(dimension_consistent(P("V^(1-s)"), OperatorSpec::boson()));
    EXPECT_THROW(ds_at_zero(P("V^(2-s)/s"), OperatorSpec::boson()), Error);
}

TEST(Yukawa, EffectiveAction) {
    auto op = OperatorSpec::dirac();
    auto act = effective_action(ds_at_zero(zeta_density(op).total(), op));
    expect_same(act.zeff, "1/gt^2 - ln(phi^2/mu^2)/(16*pi^2)");
    expect_same(act.potential, "V[phi^2/gt^2] - phi^4*ln(phi^2*e^(-25/6)/mu^2)/(16*pi^2)");
    EXPECT_EQ(act.rescalings.size(), 3u);
    DetDensity none{op, Expr(0), {}};
    auto classical = effective_action(none);
    expect_same(classical.zeff, "gt^(-2)");
}

TEST(Yukawa, KineticCoefficient) {
    auto op = OperatorSpec::boson();
    auto det = integrate_by_parts_normalize(ds_at_zero(zeta_density(op).total(), op));
    EXPECT_THROW(z_eff_first_term(det), Error);
    auto sub = substitute_potential(det, P("m^2 + lc*phi^2/2"));
    expect_same(z_eff_first_term(sub), "lc^2*phi^2/(6*(4*pi)^2*(2*m^2 + lc*phi^2))");
}
