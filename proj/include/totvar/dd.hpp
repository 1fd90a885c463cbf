#pragma once

// Double-double arithmetic: an unevaluated sum of two doubles giving a
// ~106-bit significand.  Only the operations needed by the accumulators
// are provided (add/sub/mul/div, exact construction from integers).
// Algorithms are the classical error-free transformations (Dekker/Knuth),
// products use FMA.

#include <cmath>
#include <cstdint>
#include <cstdlib>

namespace totvar {

struct dd {
    double hi = 0.0;
    double lo = 0.0;

    constexpr dd() = default;
    constexpr dd(double h, double l) : hi(h), lo(l) {}
    constexpr dd(double x) : hi(x), lo(0.0) {}

    static dd from_i64(std::int64_t v) {
        // |v| can exceed 2^53; split into two exactly representable halves.
        double h = static_cast<double>(v);
        double l = static_cast<double>(v - static_cast<std::int64_t>(h));
        return dd(h, l);
    }
    static dd from_u64(std::uint64_t v) {
        double h = static_cast<double>(v >> 21 << 21);
        double l = static_cast<double>(v & ((std::uint64_t(1) << 21) - 1));
        dd r(h, l);
        return r.normalized();
    }

    double to_double() const { return hi + lo; }

    dd normalized() const {
        double s = hi + lo;
        double e = lo - (s - hi);
        return dd(s, e);
    }
};

namespace detail {

inline void two_sum(double a, double b, double& s, double& e) {
    s = a + b;
    double bb = s - a;
    e = (a - (s - bb)) + (b - bb);
}

inline void quick_two_sum(double a, double b, double& s, double& e) {
    s = a + b;
    e = b - (s - a);
}

inline void two_prod(double a, double b, double& p, double& e) {
    p = a * b;
    e = std::fma(a, b, -p);
}

} // namespace detail

inline dd operator+(dd a, dd b) {
    double s1, s2, t1, t2;
    detail::two_sum(a.hi, b.hi, s1, s2);
    detail::two_sum(a.lo, b.lo, t1, t2);
    s2 += t1;
    detail::quick_two_sum(s1, s2, s1, s2);
    s2 += t2;
    detail::quick_two_sum(s1, s2, s1, s2);
    return dd(s1, s2);
}

inline dd operator-(dd a) { return dd(-a.hi, -a.lo); }
inline dd operator-(dd a, dd b) { return a + (-b); }

inline dd operator*(dd a, dd b) {
    double p1, p2;
    detail::two_prod(a.hi, b.hi, p1, p2);
    p2 += a.hi * b.lo + a.lo * b.hi;
    detail::quick_two_sum(p1, p2, p1, p2);
    return dd(p1, p2);
}

inline dd operator/(dd a, dd b) {
    double q1 = a.hi / b.hi;
    dd r = a - dd(q1) * b;
    double q2 = r.hi / b.hi;
    r = r - dd(q2) * b;
    double q3 = r.hi / b.hi;
    double s, e;
    detail::quick_two_sum(q1, q2, s, e);
    dd q(s, e);
    return (q + dd(q3)).normalized();
}

inline dd& operator+=(dd& a, dd b) { a = a + b; return a; }
inline dd& operator-=(dd& a, dd b) { a = a - b; return a; }
inline dd& operator*=(dd& a, dd b) { a = a * b; return a; }

// pi to double-double precision (standard hi/lo split of pi).
inline dd dd_pi() { return dd(3.141592653589793116, 1.2246467991473531772e-16); }

// 1/zeta(2) = 6/pi^2, the density of phi(n)/n averages.
inline dd dd_inv_zeta2() {
    dd pi = dd_pi();
    return dd(6.0) / (pi * pi);
}

// zeta(2) = pi^2/6.
inline dd dd_zeta2() {
    dd pi = dd_pi();
    return (pi * pi) / dd(6.0);
}

// Compensated first/second moment accumulator.  Adding N terms of
// magnitude <= M keeps the absolute error below N*M*2^-90.
struct StatAccumulator {
    std::uint64_t count = 0;
    dd sum;
    dd sum_sq;

    void add(dd v) {
        ++count;
        sum += v;
        sum_sq += v * v;
    }

    void merge(const StatAccumulator& o) {
        count += o.count;
        sum += o.sum;
        sum_sq += o.sum_sq;
    }

    double mean() const { return count ? (sum / dd::from_u64(count)).to_double() : 0.0; }
    double mean_sq() const { return count ? (sum_sq / dd::from_u64(count)).to_double() : 0.0; }
};

} // namespace totvar
