#pragma once

// Euclidean Clifford algebra {gamma^a, gamma^b} = 2 delta^ab, tr 1 = 4.

#include "symdet/canonical.hpp"

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace symdet {

// An element of a Clifford string: gamma^index, or pslash when index is empty.
struct CliffElem {
    std::string index;
    bool slash() const { return index.empty(); }
    static CliffElem gamma(std::string i) { return {std::move(i)}; }
    static CliffElem pslash() { return {}; }
    friend bool operator==(const CliffElem& a, const CliffElem& b) { return a.index == b.index; }
};

using CliffString = std::vector<CliffElem>;

// symmetric pairing (a.b) appearing in {a, b} = 2 (a.b)
inline Expr clifford_pair(const CliffElem& a, const CliffElem& b) {
    if (a.slash() && b.slash()) return momentum_sq();
    if (a.slash()) return momentum(b.index);
    if (b.slash()) return momentum(a.index);
    return delta(a.index, b.index);
}

namespace detail {

inline Expr trace_raw(const CliffString& v, size_t from, std::vector<bool>& used, size_t remaining) {
    if (remaining == 0) return Expr(4);
    if (remaining % 2) return Expr(0);
    size_t first = from;
    while (used[first]) ++first;
    used[first] = true;
    std::vector<Expr> terms;
    int sign = 1;
    for (size_t k = first + 1; k < v.size(); ++k) {
        if (used[k]) continue;
        used[k] = true;
        Expr rest = trace_raw(v, first + 1, used, remaining - 2);
        used[k] = false;
        if (!rest.is_zero()) terms.push_back(product({Expr(sign), clifford_pair(v[first], v[k]), rest}));
        sign = -sign;
    }
    used[first] = false;
    return sum(std::move(terms));
}

}  // namespace detail

// tr(v1 ... vn) by the recursive pairing rule
inline Expr clifford_trace(const CliffString& v) {
    if (v.size() % 2) return Expr(0);
    std::vector<bool> used(v.size(), false);
    return simplify(detail::trace_raw(v, 0, used, v.size()));
}

struct CliffTerm {
    Expr coeff;
    CliffString str;
};

// Canonical Clifford form: pslash first, gammas sorted by index, repeated elements contracted.
inline std::vector<CliffTerm> gamma_reduce(const CliffString& input, const Expr& coeff = Expr(1)) {
    auto key_less = [](const CliffElem& a, const CliffElem& b) {
        if (a.slash() != b.slash()) return a.slash();
        return a.index < b.index;
    };
    std::vector<CliffTerm> work{{coeff, input}}, done;
    while (!work.empty()) {
        CliffTerm t = std::move(work.back());
        work.pop_back();
        bool moved = false;
        for (size_t i = 0; i + 1 < t.str.size(); ++i) {
            const CliffElem& a = t.str[i];
            const CliffElem& b = t.str[i + 1];
            if (a == b) {
                // gamma^a gamma^a = d, pslash pslash = p^2
                CliffTerm r{simplify(t.coeff * (a.slash() ? momentum_sq() : sym_d())), {}};
                r.str.insert(r.str.end(), t.str.begin(), t.str.begin() + static_cast<long>(i));
                r.str.insert(r.str.end(), t.str.begin() + static_cast<long>(i) + 2, t.str.end());
                work.push_back(std::move(r));
                moved = true;
                break;
            }
            if (key_less(b, a)) {
                CliffTerm swapped{simplify(-t.coeff), t.str};
                std::swap(swapped.str[i], swapped.str[i + 1]);
                CliffTerm contracted{simplify(Expr(2) * clifford_pair(a, b) * t.coeff), {}};
                contracted.str.insert(contracted.str.end(), t.str.begin(), t.str.begin() + static_cast<long>(i));
                contracted.str.insert(contracted.str.end(), t.str.begin() + static_cast<long>(i) + 2, t.str.end());
                work.push_back(std::move(swapped));
                work.push_back(std::move(contracted));
                moved = true;
                break;
            }
        }
        if (!moved) done.push_back(std::move(t));
    }
    // combine equal strings
    std::vector<CliffTerm> out;
    for (auto& t : done) {
        auto it = std::find_if(out.begin(), out.end(), [&](const CliffTerm& o) { return o.str == t.str; });
        if (it == out.end()) out.push_back(t);
        else it->coeff = simplify(it->coeff + t.coeff);
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const CliffTerm& t) { return t.coeff.is_zero(); }), out.end());
    return out;
}

// ---- explicit representation ----

using Mat4 = Eigen::Matrix<std::complex<double>, 4, 4>;

// Hermitian Euclidean gamma matrices in the chiral basis.
class GammaRep {
public:
    GammaRep() {
        using C = std::complex<double>;
        const C i(0, 1);
        Eigen::Matrix2cd s[3];
        s[0] << 0, 1, 1, 0;
        s[1] << 0, -i, i, 0;
        s[2] << 1, 0, 0, -1;
        for (int k = 0; k < 3; ++k) {
            g_[k].setZero();
            g_[k].block<2, 2>(0, 2) = -i * s[k];
            g_[k].block<2, 2>(2, 0) = i * s[k];
        }
        g_[3].setZero();
        g_[3].block<2, 2>(0, 2) = Eigen::Matrix2cd::Identity();
        g_[3].block<2, 2>(2, 0) = Eigen::Matrix2cd::Identity();
    }
    const Mat4& operator[](int a) const { return g_[a]; }

    template <class V>
    Mat4 slash(const V& p) const {
        Mat4 r = Mat4::Zero();
        for (int a = 0; a < 4; ++a) r += p[a] * g_[a];
        return r;
    }

    // max deviation from {g^a, g^b} = 2 delta^ab
    double clifford_residual() const {
        double worst = 0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                Mat4 ac = g_[a] * g_[b] + g_[b] * g_[a];
                if (a == b) ac -= 2 * Mat4::Identity();
                worst = std::max(worst, ac.cwiseAbs().maxCoeff());
            }
        return worst;
    }

private:
    Mat4 g_[4];
};

inline const GammaRep& gamma_rep() {
    static const GammaRep rep;
    return rep;
}

}  // namespace symdet
