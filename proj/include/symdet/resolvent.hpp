#pragma once

// hbar-graded resolvent symbol from R o (lambda + A) = 1:
//   R_0 = (lambda + A)^-1,  R_n = -[sum_{k=1..n} (i/2)^k/k! {R_{n-k}, lambda + A}_k] (lambda + A)^-1

#include "symdet/phasespace.hpp"

namespace symdet {

enum class OperatorKind : std::uint8_t { BosonScalar, DiracScalar };

struct OperatorSpec {
    OperatorKind kind = OperatorKind::BosonScalar;
    std::string field;

    static OperatorSpec boson(std::string f = "V") { return {OperatorKind::BosonScalar, std::move(f)}; }
    static OperatorSpec dirac(std::string f = "phi") { return {OperatorKind::DiracScalar, std::move(f)}; }

    Base base() const { return kind == OperatorKind::BosonScalar ? Base::boson(field) : Base::dirac(field); }
    // symbol of lambda + A
    Symbol shifted_symbol() const { return Symbol::factor(Fac::res(base(), 1)); }
    // symbol of A itself: p^2 + V or phi + i pslash
    Symbol symbol() const {
        Symbol r(field_of());
        if (kind == OperatorKind::BosonScalar) r.add(Word{momentum_sq(), {}});
        else r.add(Word{imag_unit(), {Fac::pslash()}});
        return r;
    }
    Expr field_of() const { return symdet::field(field); }
    std::string name() const { return kind == OperatorKind::BosonScalar ? "boson" : "dirac"; }
};

// Published: the Dirac R_2 keeps only the second bracket of R_0 (the first-order feedback is dropped)
// and is rotated under the trace. Complete: every bracket of the recursion, no cyclic rotation.
enum class Convention : std::uint8_t { Published, Complete };

struct ResolventExpansion {
    OperatorSpec op;
    Convention convention = Convention::Published;
    bool cyclic = false;
    std::vector<Symbol> terms;
    std::vector<std::string> notes;

    Symbol total(const Expr& h = hbar()) const {
        Symbol r;
        for (size_t n = 0; n < terms.size(); ++n) r.add(scale(terms[n], power(h, Affine(static_cast<long long>(n)))));
        return r;
    }
};

inline Symbol resolvent_order(const OperatorSpec& op, const std::vector<Symbol>& lower, int n, bool skip_feedback) {
    Symbol d = op.shifted_symbol();
    Symbol acc;
    for (int k = 1; k <= n; ++k) {
        if (skip_feedback && k < n) continue;
        Expr w = product({power(imag_unit() / Expr(2), Affine(k)), Expr(Rational(1) / Rational(factorial(k)))});
        acc.add(scale(poisson_bracket(lower[static_cast<size_t>(n - k)], d, k), w));
    }
    return -(acc * Symbol::factor(Fac::res(op.base(), -1)));
}

inline ResolventExpansion resolvent_expand(const OperatorSpec& op, int max_order, Convention conv = Convention::Published,
                                           bool extended = false) {
    if (max_order < 0) throw Error(ErrorCode::Domain, "negative order");
    if (max_order > 2 && !extended) throw Error(ErrorCode::OrderTooLarge, "orders above 2 need extended mode");
    ResolventExpansion r;
    r.op = op;
    r.convention = conv;
    r.terms.push_back(Symbol::factor(Fac::res(op.base(), -1)));
    bool dirac = op.kind == OperatorKind::DiracScalar;
    for (int n = 1; n <= max_order; ++n) {
        bool skip = dirac && conv == Convention::Published && n == 2;
        r.terms.push_back(resolvent_order(op, r.terms, n, skip));
    }
    if (dirac && conv == Convention::Published && max_order >= 2) {
        r.terms[2] = trace_canonical(r.terms[2]);
        r.cyclic = true;
        r.notes.push_back("R_2 keeps only {R_0, lambda+A}_2 and is rotated under the spinor trace");
    }
    return r;
}

// Residual of the defining equation, order by order: element n is
// sum_{j+k=n} (i/2)^k/k! {R_j, lambda+A}_k minus the unit at n = 0.
inline std::vector<Symbol> resolvent_residual(const ResolventExpansion& e) {
    Symbol d = e.op.shifted_symbol();
    std::vector<Symbol> out;
    int n_max = static_cast<int>(e.terms.size()) - 1;
    for (int n = 0; n <= n_max; ++n) {
        Symbol acc;
        for (int k = 0; k <= n; ++k) {
            Expr w = product({power(imag_unit() / Expr(2), Affine(k)), Expr(Rational(1) / Rational(factorial(k)))});
            acc.add(scale(poisson_bracket(e.terms[static_cast<size_t>(n - k)], d, k), w));
        }
        if (n == 0) acc.add(Symbol(Expr(-1)));
        out.push_back(acc);
    }
    return out;
}

struct ResolventReport {
    bool ok = true;
    std::vector<Symbol> residual;
    std::string message;
};

inline ResolventReport verify_resolvent(const ResolventExpansion& e, bool throw_on_fail = false) {
    ResolventReport r;
    r.residual = resolvent_residual(e);
    for (size_t n = 0; n < r.residual.size(); ++n)
        if (!r.residual[n].zero()) {
            r.ok = false;
            r.message = "order " + std::to_string(n) + " residual: " + render(r.residual[n], Format::Text);
            break;
        }
    if (!r.ok && throw_on_fail) throw Error(ErrorCode::VerificationFailed, r.message);
    return r;
}

}  // namespace symdet
