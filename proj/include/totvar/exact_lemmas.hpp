#pragma once

// Exact evaluation of the fractional-part summation identities behind the
// interval-variance constants, all in BigRational arithmetic.
//
// Core objects:
//   * period sums  sum_{k=1}^{mn} {a(x0+k)/m} {b(x0+k)/n}  and their
//     closed forms, split by the parity of m and n;
//   * parity-restricted Moebius sums  sum mu(n)/n^2  (binary splitting);
//   * the Chowla-style double sums  sum mu(m)mu(n) gcd(m,n)^2 / (m n)^2,
//     reduced through gcd^2 = sum_{d | gcd} J_2(d) so a cutoff-C truncation
//     costs O(C log C) exact additions instead of O(C^2);
//   * the assembled variance series for the four interval shapes
//     H = x, [x^d], 2[x^d], 2[x^d]+1, whose limits are
//       1/(6 z2) - 1/(6 z2^2),   (same),
//       1/(6 z2) - 2/(9 z2^2),   1/(6 z2) - 1/(9 z2^2),   z2 = zeta(2).

#include <cstdint>
#include <numeric>
#include <vector>

#include "totvar/errors.hpp"
#include "totvar/mobius.hpp"
#include "totvar/rational.hpp"

namespace totvar::lemmas {

enum class Parity { All, Even, Odd };
enum class Shift { None, XDelta, TwoXDelta, TwoXDelta1 };
enum class SeriesVariant { Hx, HxDelta, H2xDelta, H2xDelta1 };

struct FracPairSpec {
    std::int64_t m = 1;
    std::int64_t n = 1;
    int a = 1; // multiplier on the m side, in {1,2}
    int b = 1; // multiplier on the n side, in {1,2}

    void validate() const {
        if (m < 1 || n < 1) throw config_error("moduli must be positive");
        if ((a != 1 && a != 2) || (b != 1 && b != 2))
            throw config_error("pair multipliers must be 1 or 2");
    }
};

// sum_{k=1}^{mn} {a(x0+k)/m} {b(x0+k)/n}, evaluated term by term.  This is
// the brute-force side of the oracle pair; the summand has period dividing
// mn in k, so the value is independent of x0.
inline BigRational frac_pair_period_sum(const FracPairSpec& s, std::int64_t x0) {
    s.validate();
    if (x0 < 0) throw config_error("x0 must be nonnegative");
    u128 acc = 0;
    const std::uint64_t m = static_cast<std::uint64_t>(s.m);
    const std::uint64_t n = static_cast<std::uint64_t>(s.n);
    for (std::uint64_t k = 1; k <= m * n; ++k) {
        std::uint64_t t = static_cast<std::uint64_t>(x0) + k;
        std::uint64_t rm = (static_cast<std::uint64_t>(s.a) * t) % m;
        std::uint64_t rn = (static_cast<std::uint64_t>(s.b) * t) % n;
        acc += u128(rm) * rn;
    }
    // sum (rm/m)(rn/n) = (sum rm*rn) / (mn)
    BigInt num = bigint_from_u64(static_cast<std::uint64_t>(acc >> 64));
    num <<= 64;
    num += bigint_from_u64(static_cast<std::uint64_t>(acc));
    return make_rational(num, bigint_from_u64(m) * bigint_from_u64(n));
}

// Closed forms for the period sums, by branch:
//   (a,b)=(1,1):          (m-1)(n-1)/4 + (d^2-1)/12
//   (a,b)=(2,1), m even:  (m-2)(n-1)/4 + (gcd(m/2,n)^2-1)/6
//   (a,b)=(2,1), m odd:   (m-1)(n-1)/4 + (d^2-1)/24
//   (a,b)=(1,2):          mirror of (2,1) with roles swapped
//   (a,b)=(2,2):          four parity branches, see below
// with d = gcd(m,n).
inline BigRational closed_form_pair_sum(const FracPairSpec& s) {
    s.validate();
    const std::int64_t m = s.m, n = s.n;
    const std::int64_t d = std::gcd(m, n);
    auto q = [](std::int64_t num, long den) {
        BigRational r(static_cast<long>(num), den);
        r.canonicalize();
        return r;
    };
    // (m-c1)(n-c2)/4
    auto lead = [&](std::int64_t c1, std::int64_t c2) {
        BigRational r((m - c1) * (n - c2), 4u);
        r.canonicalize();
        return r;
    };

    if (s.a == 1 && s.b == 1)
        return lead(1, 1) + q(d * d - 1, 12);

    if (s.a == 2 && s.b == 1) {
        if (m % 2 == 0) {
            std::int64_t g = std::gcd(m / 2, n);
            return lead(2, 1) + q(g * g - 1, 6);
        }
        return lead(1, 1) + q(d * d - 1, 24);
    }

    if (s.a == 1 && s.b == 2) {
        if (n % 2 == 0) {
            std::int64_t g = std::gcd(m, n / 2);
            return lead(1, 2) + q(g * g - 1, 6);
        }
        return lead(1, 1) + q(d * d - 1, 24);
    }

    // a == 2 && b == 2
    const bool me = (m % 2 == 0), ne = (n % 2 == 0);
    if (me && ne) return lead(2, 2) + q(d * d - 4, 12);
    if (me && !ne) return lead(2, 1) + q(d * d - 1, 12);
    if (!me && ne) return lead(1, 2) + q(d * d - 1, 12);
    return lead(1, 1) + q(d * d - 1, 12);
}

// Closed form (times mn) of the x-average of {x/m}{(x+s(x))/n} for the
// uncorrelated shifts: (m-1)(n-1)/4, with a +-1/4 correction when both
// moduli are even and the shift fixes the parity of the offset.
inline BigRational closed_form_shifted_pair(std::int64_t m, std::int64_t n, Shift shift) {
    if (m < 1 || n < 1) throw config_error("moduli must be positive");
    BigRational base((m - 1) * (n - 1), 4u);
    base.canonicalize();
    if (shift == Shift::None)
        return closed_form_pair_sum({m, n, 1, 1});
    if (m % 2 == 0 && n % 2 == 0) {
        if (shift == Shift::TwoXDelta) base += BigRational(1, 4);
        if (shift == Shift::TwoXDelta1) base -= BigRational(1, 4);
    }
    return base;
}

namespace detail {

// Balanced-tree exact summation of mu(n)/n^2 over [lo, hi) with a parity
// filter; keeps GMP reductions on similarly sized operands.
inline BigRational mobius_split_sum(const std::vector<signed char>& mu,
                                    std::uint32_t lo, std::uint32_t hi, Parity p) {
    if (hi - lo <= 32) {
        BigRational acc(0);
        for (std::uint32_t n = lo; n < hi; ++n) {
            if (mu[n] == 0) continue;
            if (p == Parity::Odd && n % 2 == 0) continue;
            if (p == Parity::Even && n % 2 == 1) continue;
            BigRational t(static_cast<long>(mu[n]), 1u);
            t /= BigRational(static_cast<unsigned long>(n) * n, 1u);
            acc += t;
        }
        return acc;
    }
    std::uint32_t mid = lo + (hi - lo) / 2;
    return mobius_split_sum(mu, lo, mid, p) + mobius_split_sum(mu, mid, hi, p);
}

} // namespace detail

// sum_{n <= cutoff, n of given parity} mu(n)/n^2, exactly.
// Limits: All -> 1/z2, Odd -> 4/(3 z2), Even -> -1/(3 z2).
inline BigRational mobius_square_sum(Parity p, std::uint32_t cutoff) {
    if (cutoff < 1) throw config_error("cutoff must be >= 1");
    auto mu = mobius_sieve(cutoff);
    return detail::mobius_split_sum(mu, 1, cutoff + 1, p);
}

namespace detail {

inline int parity_index(std::uint32_t n) { return n % 2 == 0 ? 1 : 0; } // 0 odd, 1 even

struct GcdSumParts {
    // G[pm][pn]: truncated sum of mu(m)mu(n) gcd^2/(m n)^2 with m,n
    // restricted to parity pm/pn (0 odd, 1 even).
    BigRational G[2][2];
    // single[p]: truncated sum of mu(n)/n^2 over parity p.
    BigRational single[2];
};

inline GcdSumParts gcd_sum_parts(std::uint32_t cutoff) {
    if (cutoff < 1) throw config_error("cutoff must be >= 1");
    auto mu = mobius_sieve(cutoff);
    auto j2 = jordan2_sieve(cutoff);
    GcdSumParts out;
    // gcd(m,n)^2 = sum_{d | m, d | n} J_2(d) turns the square truncation
    // into sum_d J_2(d) * S_d[pm] * S_d[pn] with
    // S_d[p] = sum_{d | x, x <= cutoff, parity p} mu(x)/x^2.
    for (std::uint32_t d = 1; d <= cutoff; ++d) {
        BigRational s[2] = {BigRational(0), BigRational(0)};
        bool any = false;
        for (std::uint64_t x = d; x <= cutoff; x += d) {
            if (mu[x] == 0) continue;
            any = true;
            BigRational t(static_cast<long>(mu[x]), 1u);
            t /= BigRational(static_cast<unsigned long>(x) * x, 1u);
            s[parity_index(static_cast<std::uint32_t>(x))] += t;
        }
        if (!any) continue;
        BigRational w(bigint_from_u64(j2[d]));
        for (int pm = 0; pm < 2; ++pm)
            for (int pn = 0; pn < 2; ++pn) {
                if (s[pm] == 0 || s[pn] == 0) continue;
                out.G[pm][pn] += w * s[pm] * s[pn];
            }
        if (d == 1) {
            out.single[0] = s[0];
            out.single[1] = s[1];
        }
    }
    return out;
}

inline BigRational select_parity(const BigRational odd, const BigRational even, Parity p) {
    switch (p) {
        case Parity::Odd: return odd;
        case Parity::Even: return even;
        default: return odd + even;
    }
}

} // namespace detail

// Truncated sum_{m,n <= cutoff} mu(m)mu(n) gcd(m,n)^2 / (m^2 n^2) with
// parity restrictions.  Limits: All/All -> 1/z2, Odd/Odd -> 4/(3 z2),
// mixed -> -1/(3 z2), Even/Even -> 1/(3 z2).
inline BigRational gcd_double_sum(Parity pm, Parity pn, std::uint32_t cutoff) {
    auto parts = detail::gcd_sum_parts(cutoff);
    BigRational r(0);
    for (int im = 0; im < 2; ++im) {
        if (pm == Parity::Odd && im == 1) continue;
        if (pm == Parity::Even && im == 0) continue;
        for (int in = 0; in < 2; ++in) {
            if (pn == Parity::Odd && in == 1) continue;
            if (pn == Parity::Even && in == 0) continue;
            r += parts.G[im][in];
        }
    }
    return r;
}

// The assembled variance series at finite cutoff, via the parity-restricted
// gcd sums.  The per-(m,n) coefficient (combined over the four interval
// pair terms) is, with d = gcd(m,n):
//   H = x:          (d^2-1)/12   m,n odd
//                  -(d^2-1)/24   mixed parity
//                   (d^2+2)/12   m,n even
//   H = [x^d]:      (d^2-1)/6    all m,n
//   H = 2[x^d]:     (d^2-1)/6 - [m,n even]/2
//   H = 2[x^d]+1:   (d^2-1)/6 + [m,n even]/2
inline BigRational theorem_series_value(SeriesVariant v, std::uint32_t cutoff) {
    auto parts = detail::gcd_sum_parts(cutoff);
    const BigRational Goo = parts.G[0][0], Geo = parts.G[1][0],
                      Goe = parts.G[0][1], Gee = parts.G[1][1];
    const BigRational so = parts.single[0], se = parts.single[1];
    const BigRational Poo = so * so, Peo = se * so, Poe = so * se, Pee = se * se;
    const BigRational Gall = Goo + Geo + Goe + Gee;
    const BigRational Pall = (so + se) * (so + se);

    switch (v) {
        case SeriesVariant::Hx:
            return (Goo - Poo) / 12 - (Geo - Peo) / 24 - (Goe - Poe) / 24 +
                   (Gee + 2 * Pee) / 12;
        case SeriesVariant::HxDelta:
            return (Gall - Pall) / 6;
        case SeriesVariant::H2xDelta:
            return (Gall - Pall) / 6 - Pee / 2;
        case SeriesVariant::H2xDelta1:
            return (Gall - Pall) / 6 + Pee / 2;
    }
    throw config_error("unknown series variant");
}

// Literal assembly of the same series: loop over m,n <= cutoff and combine
// the four period-sum closed forms per term.  Algebraically identical to
// theorem_series_value at every cutoff; quadratic in the cutoff, so meant
// for cross-checks.
inline BigRational theorem_series_direct(SeriesVariant v, std::uint32_t cutoff) {
    if (cutoff < 1) throw config_error("cutoff must be >= 1");
    auto mu = mobius_sieve(cutoff);
    BigRational acc(0);
    for (std::int64_t m = 1; m <= cutoff; ++m) {
        if (mu[m] == 0) continue;
        for (std::int64_t n = 1; n <= cutoff; ++n) {
            if (mu[n] == 0) continue;
            BigRational combo;
            if (v == SeriesVariant::Hx) {
                combo = closed_form_pair_sum({m, n, 1, 1}) -
                        closed_form_pair_sum({m, n, 1, 2}) -
                        closed_form_pair_sum({m, n, 2, 1}) +
                        closed_form_pair_sum({m, n, 2, 2});
            } else {
                Shift s = v == SeriesVariant::HxDelta    ? Shift::XDelta
                          : v == SeriesVariant::H2xDelta ? Shift::TwoXDelta
                                                         : Shift::TwoXDelta1;
                combo = 2 * closed_form_pair_sum({m, n, 1, 1}) -
                        2 * closed_form_shifted_pair(m, n, s);
            }
            if (combo == 0) continue;
            BigRational w(static_cast<long>(mu[m]) * mu[n], 1u);
            w /= BigRational(static_cast<unsigned long>(m) * m, 1u);
            w /= BigRational(static_cast<unsigned long>(n) * n, 1u);
            acc += w * combo;
        }
    }
    return acc;
}

// Empirical average (1/X) sum_{x<=X} {x/m}{(x+s(x))/n} for the shifted
// pairs, with s(x) one of 0, [x^delta], 2[x^delta], 2[x^delta]+1.
// Converges (under the no-correlation hypothesis) to
// closed_form_shifted_pair(m,n,shift)/(mn).
inline double average_shifted_pair(std::int64_t m, std::int64_t n, Shift shift,
                                   RationalExponent delta, std::uint64_t X) {
    if (m < 1 || n < 1) throw config_error("moduli must be positive");
    if (X < 1) throw config_error("X must be >= 1");
    if (shift != Shift::None && delta.num >= delta.den)
        throw config_error("shifted averages need delta in (0,1)");
    FloorPowerCursor cur(delta);
    u128 acc = 0;
    const std::uint64_t um = static_cast<std::uint64_t>(m);
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    for (std::uint64_t x = 1; x <= X; ++x) {
        std::uint64_t s = 0;
        if (shift != Shift::None) {
            std::uint64_t y = cur.at(x);
            s = shift == Shift::XDelta ? y : shift == Shift::TwoXDelta ? 2 * y : 2 * y + 1;
        }
        acc += u128(x % um) * ((x + s) % un);
    }
    long double v = static_cast<long double>(acc);
    return static_cast<double>(v / (static_cast<long double>(X) * um * un));
}

} // namespace totvar::lemmas
