#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace symdet {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return den(r) == 1; }

inline Integer floor_int(const Rational& r) {
    Integer q = num(r) / den(r);
    if (num(r) < 0 && q * den(r) != num(r)) q -= 1;
    return q;
}

inline Rational frac(const Rational& r) { return r - Rational(floor_int(r)); }

inline long long to_ll(const Rational& r) {
    if (!is_integer(r)) throw std::domain_error("rational is not an integer");
    return num(r).convert_to<long long>();
}

inline double to_double(const Rational& r) {
    return num(r).convert_to<double>() / den(r).convert_to<double>();
}

inline Rational rpow(Rational b, long long e) {
    if (e < 0) {
        if (b == 0) throw std::domain_error("zero to a negative power");
        b = 1 / b;
        e = -e;
    }
    Rational r = 1;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

inline std::string to_string(const Rational& r) {
    if (is_integer(r)) return num(r).str();
    return num(r).str() + "/" + den(r).str();
}

inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(Integer(s));
    return Rational(Integer(s.substr(0, slash)), Integer(s.substr(slash + 1)));
}

inline Integer factorial(long long n) {
    Integer r = 1;
    for (long long k = 2; k <= n; ++k) r *= k;
    return r;
}

inline Integer binomial(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    Integer r = 1;
    for (long long j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
}

// trial division, fine for the small integers that show up here
inline std::vector<std::pair<Integer, long long>> factor_integer(Integer n) {
    std::vector<std::pair<Integer, long long>> out;
    if (n < 0) n = -n;
    for (Integer p = 2; p * p <= n; ++p) {
        long long k = 0;
        while (n % p == 0) {
            n /= p;
            ++k;
        }
        if (k) out.emplace_back(p, k);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

// Dense univariate polynomial, c[i] multiplies x^i.
class Poly {
public:
    Poly() = default;
    Poly(Rational c) {
        if (c != 0) c_.push_back(std::move(c));
    }
    static Poly x() { return Poly(std::vector<Rational>{0, 1}); }
    static Poly linear(const Rational& a, const Rational& b) { return Poly(std::vector<Rational>{b, a}); }
    explicit Poly(std::vector<Rational> c) : c_(std::move(c)) { trim(); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool zero() const { return c_.empty(); }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational operator[](int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : Rational(0); }
    Rational lead() const { return c_.empty() ? Rational(0) : c_.back(); }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()));
        for (size_t i = 0; i < r.size(); ++i) r[i] = a[static_cast<int>(i)] + b[static_cast<int>(i)];
        return Poly(std::move(r));
    }
    friend Poly operator-(const Poly& a) {
        Poly r = a;
        for (auto& c : r.c_) c = -c;
        return r;
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.zero() || b.zero()) return {};
        std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(r));
    }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
        if (b.zero()) throw std::domain_error("polynomial division by zero");
        std::vector<Rational> r = a.c_;
        std::vector<Rational> q(a.degree() >= b.degree() ? a.degree() - b.degree() + 1 : 0);
        for (int i = a.degree() - b.degree(); i >= 0; --i) {
            Rational f = r[i + b.degree()] / b.lead();
            q[i] = f;
            for (int j = 0; j <= b.degree(); ++j) r[i + j] -= f * b.c_[j];
        }
        return {Poly(std::move(q)), Poly(std::move(r))};
    }

    static Poly gcd(Poly a, Poly b) {
        while (!b.zero()) {
            auto r = divmod(a, b).second;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    Poly monic() const {
        if (zero()) return *this;
        Poly r = *this;
        Rational l = lead();
        for (auto& c : r.c_) c /= l;
        return r;
    }

    Poly derivative() const {
        std::vector<Rational> r;
        for (size_t i = 1; i < c_.size(); ++i) r.push_back(c_[i] * Rational(static_cast<long long>(i)));
        return Poly(std::move(r));
    }

    Rational eval(const Rational& x) const {
        Rational r = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
        return r;
    }

    Poly pow(int n) const {
        Poly r(Rational(1)), b = *this;
        while (n) {
            if (n & 1) r = r * b;
            b = b * b;
            n >>= 1;
        }
        return r;
    }

    // Rational roots with multiplicity; returns the roots and the leftover monic cofactor.
    std::pair<std::vector<std::pair<Rational, int>>, Poly> rational_roots() const {
        std::vector<std::pair<Rational, int>> roots;
        Poly p = monic();
        if (p.degree() <= 0) return {roots, p};
        bool progress = true;
        while (progress && p.degree() >= 1) {
            progress = false;
            if (p[0] == 0) {
                int m = 0;
                while (p[0] == 0 && p.degree() >= 1) {
                    p = divmod(p, x()).first;
                    ++m;
                }
                roots.emplace_back(0, m);
                progress = true;
                continue;
            }
            Integer l = 1;
            for (auto& c : p.c_) l = boost::multiprecision::lcm(l, den(c));
            std::vector<Integer> ic;
            for (auto& c : p.c_) ic.push_back(num(c * Rational(l)));
            auto divisors = [](Integer n) {
                std::vector<Integer> d;
                if (n < 0) n = -n;
                for (Integer k = 1; k * k <= n; ++k)
                    if (n % k == 0) {
                        d.push_back(k);
                        if (k * k != n) d.push_back(n / k);
                    }
                return d;
            };
            auto a0 = ic.front(), an = ic.back();
            if (boost::multiprecision::abs(a0) > Integer(1000000) || boost::multiprecision::abs(an) > Integer(1000000)) break;
            for (auto& u : divisors(a0)) {
                for (auto& v : divisors(an)) {
                    for (int sg : {1, -1}) {
                        Rational r(sg * u, v);
                        if (p.eval(r) == 0) {
                            int m = 0;
                            Poly lin = linear(1, -r);
                            while (p.degree() >= 1 && p.eval(r) == 0) {
                                p = divmod(p, lin).first;
                                ++m;
                            }
                            roots.emplace_back(r, m);
                            progress = true;
                            break;
                        }
                    }
                    if (progress) break;
                }
                if (progress) break;
            }
        }
        return {roots, p};
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rational> c_;
};

// Reduced univariate rational function num/den with monic denominator.
class RatFunc {
public:
    RatFunc() : n_(Rational(0)), d_(Rational(1)) {}
    RatFunc(Rational c) : n_(std::move(c)), d_(Rational(1)) {}
    RatFunc(Poly n) : n_(std::move(n)), d_(Rational(1)) {}
    RatFunc(Poly n, Poly d) : n_(std::move(n)), d_(std::move(d)) { normalize(); }
    static RatFunc x() { return RatFunc(Poly::x()); }

    const Poly& numer() const { return n_; }
    const Poly& denom() const { return d_; }
    bool zero() const { return n_.zero(); }
    bool is_constant() const { return n_.degree() <= 0 && d_.degree() == 0; }
    Rational constant() const { return n_[0] / d_[0]; }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        if (a.d_ == b.d_) return RatFunc(a.n_ + b.n_, a.d_);
        return RatFunc(a.n_ * b.d_ + b.n_ * a.d_, a.d_ * b.d_);
    }
    friend RatFunc operator-(const RatFunc& a) { return RatFunc(-a.n_, a.d_); }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        if (a.is_constant() && b.is_constant()) return RatFunc(a.constant() * b.constant());
        return RatFunc(a.n_ * b.n_, a.d_ * b.d_);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.zero()) throw std::domain_error("rational function division by zero");
        return RatFunc(a.n_ * b.d_, a.d_ * b.n_);
    }
    friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.n_ == b.n_ && a.d_ == b.d_; }

    RatFunc pow(long long e) const {
        if (e >= 0) return RatFunc(n_.pow(static_cast<int>(e)), d_.pow(static_cast<int>(e)));
        if (zero()) throw std::domain_error("zero to a negative power");
        return RatFunc(d_.pow(static_cast<int>(-e)), n_.pow(static_cast<int>(-e)));
    }

    RatFunc derivative() const {
        return RatFunc(n_.derivative() * d_ - n_ * d_.derivative(), d_ * d_);
    }

    // value at x; throws on a pole
    Rational eval(const Rational& x) const {
        Rational dv = d_.eval(x);
        if (dv == 0) throw std::domain_error("rational function pole");
        return n_.eval(x) / dv;
    }

    // order of zero (positive) or pole (negative) at x
    int order_at(const Rational& x) const {
        auto count = [&](Poly p) {
            int m = 0;
            Poly lin = Poly::linear(1, -x);
            while (!p.zero() && p.eval(x) == 0) {
                p = Poly::divmod(p, lin).first;
                ++m;
            }
            return m;
        };
        return count(n_) - count(d_);
    }

private:
    void normalize() {
        if (n_.zero()) {
            d_ = Poly(Rational(1));
            return;
        }
        if (d_.zero()) throw std::domain_error("rational function with zero denominator");
        Poly g = Poly::gcd(n_, d_);
        if (g.degree() > 0) {
            n_ = Poly::divmod(n_, g).first;
            d_ = Poly::divmod(d_, g).first;
        }
        Rational l = d_.lead();
        if (l != 1) {
            n_ = n_ * Poly(1 / l);
            d_ = d_ * Poly(1 / l);
        }
    }
    Poly n_, d_;
};

}  // namespace symdet
