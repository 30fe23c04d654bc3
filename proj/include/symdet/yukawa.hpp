#pragma once

// Large-N Yukawa effective action from the Dirac determinant, and the kinetic coefficient
// generated by a boson determinant.

#include "symdet/zeta.hpp"

namespace symdet {

struct ActionDensity {
    std::string bilinear = "-psibar (gamma.d + phi) psi";
    Expr zeff;       // coefficient of (1/2)(d phi)^2
    Expr potential;  // V[phi^2/gt^2] plus the determinant's potential part
    std::vector<std::string> rescalings;

    Expr total(const std::string& f = "phi") const {
        std::string a = nf::fresh_index();
        return simplify(sum({product({zeff, Expr(Rational(1, 2)), field(f, {a}), field(f, {a})}), potential}));
    }
};

namespace detail {

// split a normalised density into the coefficient of F_a F_a and the remainder
inline std::pair<Expr, Expr> gradient_split(const Expr& e, const std::string& F) {
    std::vector<Expr> grad, pot;
    for (auto& [mono, c] : nf::to_nf(e).terms) {
        nf::Mono rest;
        int hits = 0, others = 0;
        for (auto& f : mono) {
            const Node& n = f.base.node();
            if (n.kind == Kind::Field && n.name == F && n.indices.size() == 1 && n.laplacians == 0) {
                hits += static_cast<int>(to_ll(f.exp.c));
                continue;
            }
            if (detail::is_derivative_atom(f.base)) ++others;
            rest.push_back(f);
        }
        if (hits == 0 && others == 0) pot.push_back(nf::term_tree(mono, c));
        else if (hits == 2 && others == 0) grad.push_back(nf::term_tree(rest, c));
        else throw Error(ErrorCode::NoRule, "derivative structure beyond (d" + F + ")^2: " + to_text(nf::term_tree(mono, c)));
    }
    return {simplify(sum(grad)), simplify(sum(pot))};
}

}  // namespace detail

// L = -psibar(gamma.d + phi)psi + (1/2) Z (d phi)^2 + V[phi^2/gt^2] - ln det(gamma.d + phi)
// after phi -> phi/g, psi -> sqrt(N) psi and gt^2 = g^2 N; the fermion loop enters once per flavour.
inline ActionDensity effective_action(const DetDensity& det, const std::string& coupling = "gt", const std::string& potential = "V") {
    if (det.op.kind != OperatorKind::DiracScalar) throw Error(ErrorCode::Domain, "effective action needs the Dirac determinant");
    const std::string& F = det.op.field;
    Expr d = integrate_by_parts_normalize(det.total, F);
    auto [g, v] = detail::gradient_split(d, F);
    ActionDensity a;
    Expr gt = param(coupling);
    a.zeff = simplify(power(gt, Affine(-2)) - Expr(2) * g);
    a.potential = simplify(func(potential, power(field(F), Affine(2)) / power(gt, Affine(2))) - v);
    a.rescalings = {F + " -> " + F + "/g", "psi -> sqrt(N) psi", coupling + "^2 = g^2 N held fixed"};
    return a;
}

// Z from a boson determinant: the one-loop action is (1/2) ln det, so the coefficient of
// (1/2)(d phi)^2 equals the coefficient of (d phi)^2 in ln det.
inline Expr z_eff_first_term(const DetDensity& boson_det, const std::string& F = "phi") {
    if (contains_field(boson_det.total, boson_det.op.field) && boson_det.op.field != F)
        throw Error(ErrorCode::SubstitutionMissing, "density still depends on " + boson_det.op.field);
    Expr d = integrate_by_parts_normalize(boson_det.total, F);
    Expr g = detail::gradient_split(d, F).first;
    if (g.is_zero()) throw Error(ErrorCode::SubstitutionMissing, "no gradient of " + F);
    return g;
}

// boson determinant with V replaced by a function of phi, normalised in phi
inline DetDensity substitute_potential(const DetDensity& det, const Expr& v, const std::string& F = "phi") {
    DetDensity r = det;
    r.total = integrate_by_parts_normalize(substitute_field(det.total, det.op.field, v), F);
    r.notes.push_back(det.op.field + " -> " + to_text(v));
    return r;
}

}  // namespace symdet
