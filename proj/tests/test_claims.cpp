#include "symdet/symdet.hpp"

#include <gtest/gtest.h>

using namespace symdet;
using namespace symdet::oracle;

namespace {

ClaimReport run_one(const std::string& id, std::uint64_t seed = kDefaultSeed) {
    auto r = run_claims({find_claim(id)}, seed);
    return r.at(0);
}

}  // namespace

TEST(Config, RoundTrip) {
    RunConfig c;
    c.op = "dirac";
    c.order = 1;
    c.substitute = "V=m^2 + lc*phi^2/2";
    c.format = "json";
    c.path = "both";
    c.seed = 12345678901ULL;
    c.tol = 1.25e-9;
    EXPECT_EQ(RunConfig::parse(c.to_string()), c);
    RunConfig d;
    EXPECT_EQ(RunConfig::parse(d.to_string()), d);
    EXPECT_EQ(RunConfig::parse("# comment\n order = 0 \n\n").order, 0);
    EXPECT_THROW(RunConfig::parse("colour = red"), Error);
    EXPECT_THROW(RunConfig::parse("order = two"), Error);
    EXPECT_THROW(RunConfig::parse("order"), Error);
}

TEST(Oracle, Quadrature) {
    auto q = integrate([](double l) { return cplx(std::pow(l, -0.5) / ((l + 1) * (l + 1))); }, 0, 1).value +
             integrate([](double l) { return cplx(std::pow(l, -0.5) / ((l + 1) * (l + 1))); }, 1, std::numeric_limits<double>::infinity()).value;
    EXPECT_NEAR(q.real(), M_PI / 2, 1e-10);
    EXPECT_NEAR(integrate([](double t) { return cplx(t * t); }, 0, 1).value.real(), 1.0 / 3, 1e-14);
    cplx fp = fp_quadrature([](cplx t) { return t * t / std::pow(2.0 * t - 1.0, 4); }, 0, 1, 0.5, 4);
    EXPECT_NEAR(fp.real(), -1.0 / 3, 1e-8);
}

TEST(Oracle, SamplerIsSeeded) {
    Sampler a(3), b(3), c(4);
    for (int i = 0; i < 10; ++i) {
        double x = a.unit();
        EXPECT_EQ(x, b.unit());
        EXPECT_GE(x, 0.0);
        EXPECT_LT(x, 1.0);
    }
    EXPECT_NE(Sampler(3).unit(), c.unit());
}

TEST(Oracle, DesignIsAFiveDesign) {
    // second and fourth moments of the uniform measure on S^3
    double m2 = 0, m4 = 0, m22 = 0;
    for (auto& v : design24()) {
        m2 += v[0] * v[0];
        m4 += std::pow(v[0], 4);
        m22 += v[0] * v[0] * v[1] * v[1];
    }
    double n = static_cast<double>(design24().size());
    EXPECT_NEAR(m2 / n, 0.25, 1e-15);
    EXPECT_NEAR(m4 / n, 1.0 / 8, 1e-15);
    EXPECT_NEAR(m22 / n, 1.0 / 24, 1e-15);
}

TEST(Claims, RegistryIsSortedAndUnique) {
    auto all = all_claims();
    ASSERT_GT(all.size(), 20u);
    for (size_t i = 1; i < all.size(); ++i) EXPECT_LT(all[i - 1].id, all[i].id);
    EXPECT_THROW(find_claim("no-such-claim"), Error);
    EXPECT_THROW(suite("nonsense"), Error);
    EXPECT_FALSE(suite("golden").empty());
}

TEST(Claims, Cheap) {
    for (auto id : {"dirac-power-trace", "fp-quadrature", "grg-identity", "mellin-rule", "scalar-master", "ibp-bump",
                    "golden-boson-zeta", "golden-boson-det", "golden-phi4", "dimension-check"}) {
        auto r = run_one(id);
        EXPECT_TRUE(r.pass) << id << ": " << r.detail;
        EXPECT_FALSE(r.cases.empty()) << id;
    }
}

TEST(Claims, SameSeedSameBytes) {
    auto a = run_one("grg-identity", 11).to_json().dump();
    auto b = run_one("grg-identity", 11).to_json().dump();
    EXPECT_EQ(a, b);
    EXPECT_NE(a, run_one("grg-identity", 12).to_json().dump());
}

TEST(Claims, BosonResidual) {
    auto r = run_one("resolvent-residual-boson-order2");
    EXPECT_TRUE(r.pass) << r.detail;
    EXPECT_EQ(r.cases.size(), 51u);
}

TEST(Claims, FailureIsReported) {
    // a deliberately wrong golden must fail and keep its sample
    Claim bad{"bad", "", [](std::uint64_t) {
                  ClaimReport r;
                  r.cases.push_back(compare(1.0, 1.1, 1e-8, "x=1"));
                  r.pass = r.cases[0].pass;
                  return r;
              }};
    auto r = run_claims({bad}, 1).at(0);
    EXPECT_FALSE(r.pass);
    ASSERT_NE(r.worst(), nullptr);
    EXPECT_EQ(r.worst()->bindings, "x=1");
}

TEST(Rules, TableMatchesRegisteredForms) {
    auto t = dirac_rule_table();
    ASSERT_EQ(t.size(), 10u);
    for (auto& r : t) {
        EXPECT_TRUE(equal_canonical(r.result, r.expected)) << r.id << ": " << to_text(r.result);
        EXPECT_FALSE(r.stamp.verified);
        EXPECT_FALSE(r.validity.empty());
    }
    auto pt = std::find_if(t.begin(), t.end(), [](auto& r) { return r.id == "dirac-power-trace"; });
    ASSERT_NE(pt, t.end());
    EXPECT_EQ(pt->s_min, 4.0);
}

TEST(Rules, PowerTraceStamp) {
    auto t = dirac_rule_table();
    auto pt = std::find_if(t.begin(), t.end(), [](auto& r) { return r.id == "dirac-power-trace"; });
    auto rep = verify_rule(*pt, kDefaultSeed);
    EXPECT_TRUE(rep.pass);
    EXPECT_TRUE(pt->stamp.verified);
    EXPECT_EQ(pt->stamp.points, 5);
    EXPECT_LE(pt->stamp.worst, 1e-8);
}
