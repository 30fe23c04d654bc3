#pragma once

// Numeric side: quadrature with finite-part excision, contour derivatives, explicit gamma matrices,
// Monte Carlo moments and the seeded sampler shared by all checks.

#include "symdet/yukawa.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <random>

namespace symdet::oracle {

constexpr std::uint64_t kDefaultSeed = 7;

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : g_(seed) {}
    // 53 random bits in [0, 1)
    double unit() { return static_cast<double>(g_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * unit(); }
    double normal() {
        double u = unit(), v = unit();
        while (u <= 0) u = unit();
        return std::sqrt(-2 * std::log(u)) * std::cos(2 * M_PI * v);
    }
    std::uint64_t next() { return g_(); }

private:
    std::mt19937_64 g_;
};

struct QuadResult {
    cplx value;
    double error = 0;
};

// adaptive quadrature of a complex integrand on [a, b]; b may be +infinity
inline QuadResult integrate(const std::function<cplx(double)>& f, double a, double b, double tol = 1e-12) {
    QuadResult r;
    double er = 0, ei = 0;
    auto re = [&](double x) { return f(x).real(); };
    auto im = [&](double x) { return f(x).imag(); };
    double vr, vi;
    if (std::isinf(b)) {
        boost::math::quadrature::exp_sinh<double> q;
        vr = q.integrate([&](double x) { return re(x + a); }, tol, &er);
        vi = q.integrate([&](double x) { return im(x + a); }, tol, &ei);
    } else {
        boost::math::quadrature::tanh_sinh<double> q;
        vr = q.integrate(re, a, b, tol, &er);
        vi = q.integrate(im, a, b, tol, &ei);
    }
    r.value = cplx(vr, vi);
    r.error = std::hypot(er, ei);
    double scale = std::max(std::abs(r.value), 1e-300);
    if (!std::isfinite(vr) || !std::isfinite(vi) || r.error > 1e3 * tol * std::max(scale, 1.0))
        throw Error(ErrorCode::NonConvergent, "quadrature error estimate " + std::to_string(r.error));
    return r;
}

// Taylor/Laurent coefficients c_j, j = -m..K, of f around z0 from N samples on |z - z0| = rad
inline std::map<int, cplx> laurent(const std::function<cplx(cplx)>& f, cplx z0, double rad, int m, int K, int N = 128) {
    std::vector<cplx> vals(static_cast<size_t>(N));
    for (int j = 0; j < N; ++j) vals[static_cast<size_t>(j)] = f(z0 + std::polar(rad, 2 * M_PI * j / N));
    std::map<int, cplx> c;
    for (int k = -m; k <= K; ++k) {
        cplx acc = 0;
        for (int j = 0; j < N; ++j) acc += vals[static_cast<size_t>(j)] * std::polar(std::pow(rad, -k), -2 * M_PI * j * k / N);
        c[k] = acc / static_cast<double>(N);
    }
    return c;
}

// FP int_lo^hi f for f analytic near [lo, hi] apart from a pole of order <= m at r in (lo, hi).
// The principal part is read off a contour, subtracted away from r, and its finite part added back;
// the excised window around r is integrated from the Taylor series.
inline cplx fp_quadrature(const std::function<cplx(cplx)>& f, double lo, double hi, double r, int m, double tol = 1e-13) {
    double rad = 0.5 * std::min(r - lo, hi - r);
    auto c = laurent(f, r, rad, m, 40);
    double delta = rad / 2;
    auto principal = [&](double t) {
        cplx s = 0;
        for (int j = 1; j <= m; ++j) s += c[-j] * std::pow(t - r, -j);
        return s;
    };
    auto reg = [&](double t) { return f(cplx(t, 0)) - principal(t); };
    cplx total = integrate(reg, lo, r - delta, tol).value + integrate(reg, r + delta, hi, tol).value;
    for (int k = 0; k <= 40; k += 2) total += 2.0 * c[k] * std::pow(delta, k + 1) / static_cast<double>(k + 1);
    for (int j = 1; j <= m; ++j) {
        if (j == 1) total += c[-1] * std::log((hi - r) / (r - lo));
        else total += c[-j] * (std::pow(hi - r, 1 - j) - std::pow(lo - r, 1 - j)) / static_cast<double>(1 - j);
    }
    return total;
}

// first and second derivative of g at 0 along a circle of radius rad
template <class T>
std::pair<T, T> contour_derivatives(const std::function<T(cplx)>& g, double rad = 0.05, int N = 16) {
    T d1 = g(cplx(rad, 0)) * 0.0, d2 = d1;
    for (int j = 0; j < N; ++j) {
        cplx z = std::polar(rad, 2 * M_PI * j / N);
        T v = g(z);
        d1 += v / z;
        d2 += v / (z * z);
    }
    return {d1 / static_cast<double>(N), d2 * (2.0 / N)};
}

// ---- smooth field profiles with exact derivatives at complex points ----

struct Profile {
    double v0 = 1;
    std::vector<double> amp;
    std::vector<std::array<double, 4>> k;

    static Profile random(Sampler& rng, double lo, double hi) {
        Profile p;
        p.v0 = rng.uniform(lo, hi);
        for (int j = 0; j < 2; ++j) {
            p.amp.push_back(rng.uniform(-0.2, 0.2));
            std::array<double, 4> kk;
            for (auto& x : kk) x = rng.uniform(-0.8, 0.8);
            p.k.push_back(kk);
        }
        return p;
    }

    cplx operator()(const std::array<cplx, 4>& x, const std::vector<int>& idx, int lap) const {
        cplx r = idx.empty() && lap == 0 ? cplx(v0) : cplx(0);
        for (size_t j = 0; j < amp.size(); ++j) {
            cplx kx = 0;
            double k2 = 0;
            for (int a = 0; a < 4; ++a) {
                kx += k[j][static_cast<size_t>(a)] * x[static_cast<size_t>(a)];
                k2 += k[j][static_cast<size_t>(a)] * k[j][static_cast<size_t>(a)];
            }
            cplx t = amp[j] * std::exp(kx) * std::pow(k2, lap);
            for (int i : idx) t *= k[j][static_cast<size_t>(i)];
            r += t;
        }
        return r;
    }
};

// ---- numeric star-product residual ----

struct PhasePoint {
    std::array<cplx, 4> x{}, p{};
    cplx lambda;
};

inline Bindings bind_point(const PhasePoint& pt, const std::string& fname, const Profile& prof) {
    Bindings b;
    b.params["lambda"] = pt.lambda;
    b.params["hbar"] = 1;
    b.p = pt.p;
    b.has_p = true;
    std::array<cplx, 4> x = pt.x;
    b.field = [x, fname, prof](const std::string& n, const std::vector<int>& idx, int lap) -> cplx {
        if (n != fname) throw Error(ErrorCode::UnboundSymbol, "field " + n);
        return prof(x, idx, lap);
    };
    return b;
}

// max |entry| of the order-n residual of R o (lambda + A) = 1, with every derivative of R taken
// numerically on contours in complex x and p
inline std::vector<double> numeric_residual(const ResolventExpansion& e, const PhasePoint& pt, const Profile& prof) {
    const std::string& F = e.op.field;
    Symbol D = e.op.shifted_symbol();
    int nmax = static_cast<int>(e.terms.size()) - 1;
    auto eval_all = [&](const PhasePoint& q) {
        std::vector<Mat4> v;
        Bindings b = bind_point(q, F, prof);
        for (auto& t : e.terms) v.push_back(eval_symbol(t, b));
        return v;
    };
    // direction in (x, p): 8 components
    using Dir = std::array<double, 8>;
    std::map<Dir, std::pair<std::vector<Mat4>, std::vector<Mat4>>> cache;
    auto along = [&](const Dir& w) -> const std::pair<std::vector<Mat4>, std::vector<Mat4>>& {
        auto it = cache.find(w);
        if (it != cache.end()) return it->second;
        std::vector<Mat4> d1(e.terms.size(), Mat4::Zero()), d2 = d1;
        const int N = 16;
        const double rad = 0.05;
        for (int j = 0; j < N; ++j) {
            cplx z = std::polar(rad, 2 * M_PI * j / N);
            PhasePoint q = pt;
            for (int a = 0; a < 4; ++a) {
                q.x[static_cast<size_t>(a)] += z * w[static_cast<size_t>(a)];
                q.p[static_cast<size_t>(a)] += z * w[static_cast<size_t>(a + 4)];
            }
            auto v = eval_all(q);
            for (size_t t = 0; t < v.size(); ++t) {
                d1[t] += v[t] / z;
                d2[t] += v[t] / (z * z);
            }
        }
        for (size_t t = 0; t < d1.size(); ++t) {
            d1[t] /= static_cast<double>(N);
            d2[t] *= 2.0 / N;
        }
        return cache.emplace(w, std::make_pair(d1, d2)).first->second;
    };
    auto axis = [](int slot) {
        Dir w{};
        w[static_cast<size_t>(slot)] = 1;
        return w;
    };
    // d_u d_v of every R_j, slots 0..3 = x, 4..7 = p
    auto second = [&](int u, int v) {
        if (u == v) return along(axis(u)).second;
        Dir a{}, b{};
        a[static_cast<size_t>(u)] = a[static_cast<size_t>(v)] = 1;
        b[static_cast<size_t>(u)] = 1;
        b[static_cast<size_t>(v)] = -1;
        auto& pa = along(a).second;
        auto& pb = along(b).second;
        std::vector<Mat4> r;
        for (size_t t = 0; t < pa.size(); ++t) r.push_back((pa[t] - pb[t]) / 4.0);
        return r;
    };
    Bindings b0 = bind_point(pt, F, prof);
    std::vector<Mat4> R0 = eval_all(pt);
    // derivatives of lambda + A: the field part carries the x-derivatives, p^2 or i pslash the p-derivatives
    bool boson = e.op.kind == OperatorKind::BosonScalar;
    auto d_of_D = [&](const std::vector<int>& xs, const std::vector<int>& ps) -> Mat4 {
        if (!xs.empty() && !ps.empty()) return Mat4::Zero();
        if (!xs.empty()) return prof(pt.x, xs, 0) * Mat4::Identity();
        if (ps.empty()) return eval_symbol(D, b0);
        if (ps.size() == 1) return boson ? Mat4(2.0 * pt.p[static_cast<size_t>(ps[0])] * Mat4::Identity())
                                         : Mat4(cplx(0, 1) * gamma_rep()[ps[0]]);
        if (ps.size() == 2 && boson && ps[0] == ps[1]) return 2.0 * Mat4::Identity();
        return Mat4::Zero();
    };
    std::vector<std::vector<Mat4>> brackets(3, std::vector<Mat4>(e.terms.size(), Mat4::Zero()));
    for (size_t t = 0; t < e.terms.size(); ++t) brackets[0][t] = R0[t] * eval_symbol(D, b0);
    for (int n = 1; n <= std::min(nmax, 2); ++n) {
        for (int k = 0; k <= n; ++k) {
            double w = static_cast<double>(binomial(n, k).convert_to<long long>()) * ((n - k) % 2 ? -1 : 1);
            // R gets d_x^k d_p^(n-k), D gets d_p^k d_x^(n-k), indices paired
            int combos = n == 1 ? 4 : 16;
            for (int ci = 0; ci < combos; ++ci) {
                std::vector<int> id{ci % 4};
                if (n == 2) id.push_back(ci / 4);
                std::vector<int> rx(id.begin(), id.begin() + k), rp(id.begin() + k, id.end());
                Mat4 dd = d_of_D(std::vector<int>(id.begin() + k, id.end()), std::vector<int>(id.begin(), id.begin() + k));
                if (dd.cwiseAbs().maxCoeff() == 0) continue;
                std::vector<int> slots;
                for (int v : rx) slots.push_back(v);
                for (int v : rp) slots.push_back(v + 4);
                std::vector<Mat4> dr = n == 1 ? along(axis(slots[0])).first : second(slots[0], slots[1]);
                for (size_t t = 0; t < e.terms.size(); ++t) brackets[static_cast<size_t>(n)][t] += w * dr[t] * dd;
            }
        }
    }
    std::vector<double> out;
    for (int n = 0; n <= std::min(nmax, 2); ++n) {
        Mat4 acc = n == 0 ? Mat4(-Mat4::Identity()) : Mat4(Mat4::Zero());
        for (int k = 0; k <= n; ++k) {
            cplx c = std::pow(cplx(0, 0.5), k) / static_cast<double>(factorial(k).convert_to<long long>());
            acc += c * brackets[static_cast<size_t>(k)][static_cast<size_t>(n - k)];
        }
        out.push_back(acc.cwiseAbs().maxCoeff());
    }
    return out;
}

// ---- Monte Carlo and angular designs ----

// vertices of the 24-cell: an exact angular average for polynomials of degree <= 5 on S^3
inline const std::vector<std::array<double, 4>>& design24() {
    static const std::vector<std::array<double, 4>> v = [] {
        std::vector<std::array<double, 4>> r;
        for (int a = 0; a < 4; ++a)
            for (int s : {1, -1}) {
                std::array<double, 4> x{};
                x[static_cast<size_t>(a)] = s;
                r.push_back(x);
            }
        for (int m = 0; m < 16; ++m) {
            std::array<double, 4> x;
            for (int a = 0; a < 4; ++a) x[static_cast<size_t>(a)] = (m >> a & 1) ? -0.5 : 0.5;
            r.push_back(x);
        }
        return r;
    }();
    return v;
}

// sample average of n_a n_b n_c n_e over uniform directions on S^3
inline double mc_moment4(Sampler& rng, std::array<int, 4> ix, long n) {
    double acc = 0;
    for (long i = 0; i < n; ++i) {
        std::array<double, 4> p;
        double r2 = 0;
        for (auto& x : p) {
            x = rng.normal();
            r2 += x * x;
        }
        double v = 1;
        for (int a : ix) v *= p[static_cast<size_t>(a)];
        acc += v / (r2 * r2);
    }
    return acc / static_cast<double>(n);
}

}  // namespace symdet::oracle
