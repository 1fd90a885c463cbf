#pragma once

// Shared integer-side machinery: Moebius/Jordan sieves and exact integer
// power floors ([x^(p/s)] via monotone bump, no floating point).

#include <cmath>
#include <cstdint>
#include <vector>

#include "totvar/errors.hpp"

namespace totvar {

using u128 = unsigned __int128;

// Linear sieve of mu(n) for n <= limit.
inline std::vector<signed char> mobius_sieve(std::uint32_t limit) {
    std::vector<signed char> mu(static_cast<std::size_t>(limit) + 1, 1);
    std::vector<std::uint32_t> primes;
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    mu[0] = 0;
    for (std::uint32_t i = 2; i <= limit; ++i) {
        if (!composite[i]) {
            primes.push_back(i);
            mu[i] = -1;
        }
        for (std::uint32_t p : primes) {
            std::uint64_t ip = std::uint64_t(i) * p;
            if (ip > limit) break;
            composite[ip] = true;
            if (i % p == 0) {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    return mu;
}

// Jordan totient J_2(n) = n^2 prod_{p|n} (1 - 1/p^2), so that
// sum_{d|n} J_2(d) = n^2.  Values fit in uint64 for n <= ~2^31.
inline std::vector<std::uint64_t> jordan2_sieve(std::uint32_t limit) {
    std::vector<std::uint32_t> spf(static_cast<std::size_t>(limit) + 1, 0);
    for (std::uint32_t i = 2; i <= limit; ++i) {
        if (spf[i]) continue;
        for (std::uint64_t j = i; j <= limit; j += i)
            if (!spf[j]) spf[j] = i;
    }
    std::vector<std::uint64_t> j2(static_cast<std::size_t>(limit) + 1, 0);
    if (limit >= 1) j2[1] = 1;
    for (std::uint32_t n = 2; n <= limit; ++n) {
        std::uint32_t p = spf[n];
        std::uint32_t m = n / p;
        if (m % p == 0)
            j2[n] = j2[m] * p * p;
        else
            j2[n] = j2[m] * (std::uint64_t(p) * p - 1);
    }
    return j2;
}

// base^exp in u128, throwing if the result would not fit.
inline u128 checked_pow_u128(std::uint64_t base, unsigned exp) {
    u128 r = 1;
    for (unsigned i = 0; i < exp; ++i) {
        if (base != 0 && r > ~u128(0) / base)
            throw bound_error("integer power exceeds 128-bit range");
        r *= base;
    }
    return r;
}

// Exponent delta = num/den (a rational in (0,1]).
struct RationalExponent {
    std::uint32_t num = 1;
    std::uint32_t den = 2;

    void validate() const {
        if (num == 0 || den == 0 || num > den)
            throw config_error("delta must be a rational in (0,1]");
    }
};

// Incremental evaluator of y(x) = floor(x^(num/den)) for x = 1,2,3,...
// Maintains y exactly via integer comparisons (y+1)^den <= x^num.
class FloorPowerCursor {
  public:
    explicit FloorPowerCursor(RationalExponent d) : d_(d) { d_.validate(); }

    // Advance to the given x (must be nondecreasing across calls) and
    // return floor(x^delta).
    std::uint64_t at(std::uint64_t x) {
        u128 xp = checked_pow_u128(x, d_.num);
        while (checked_pow_u128(y_ + 1, d_.den) <= xp) ++y_;
        return y_;
    }

  private:
    RationalExponent d_;
    std::uint64_t y_ = 0;
};

// One-shot floor(x^(num/den)): floating seed, then exact integer correction,
// so floor errors at representation boundaries cannot occur.
inline std::uint64_t floor_power(std::uint64_t x, RationalExponent d) {
    d.validate();
    if (x == 0) return 0;
    u128 xp = checked_pow_u128(x, d.num);
    long double approx = powl(static_cast<long double>(x),
                              static_cast<long double>(d.num) / d.den);
    std::uint64_t y = approx < 2.0L ? 1 : static_cast<std::uint64_t>(approx) - 1;
    while (checked_pow_u128(y + 1, d.den) <= xp) ++y;
    while (y > 0 && checked_pow_u128(y, d.den) > xp) --y;
    return y;
}

} // namespace totvar
