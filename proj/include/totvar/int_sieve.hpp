#pragma once

// Streaming computation of phi(n)/n over 1..X and the remainder-term
// statistics built on it:
//
//   R0(x)    = sum_{n<=x} phi(n)/n - x/zeta(2)
//   R0(x;H)  = R0(x+H) - R0(x)      (half-open interval (x, x+H])
//
// The sieve is segmented: each block factors its integers by the primes
// up to sqrt(limit), leaving phi(n)/n as the exact pair
// (prod (p-1), prod p) over the distinct prime divisors.  Memory is
// O(block + sqrt(limit)).  Running sums are kept in double-double.

#include <cstdint>
#include <numeric>
#include <vector>

#include "totvar/dd.hpp"
#include "totvar/errors.hpp"
#include "totvar/mobius.hpp"
#include "totvar/rational.hpp"

namespace totvar::intsieve {

struct TotientValue {
    std::uint64_t n = 0;
    std::uint64_t num = 1; // prod (p-1) over distinct primes p | n
    std::uint64_t den = 1; // prod p       (the radical of n)

    // phi(n)/n in lowest terms.
    BigRational reduced() const {
        std::uint64_t g = std::gcd(num, den);
        return BigRational(bigint_from_u64(num / g), bigint_from_u64(den / g));
    }

    dd ratio() const { return dd::from_u64(num) / dd::from_u64(den); }
};

class TotientStream {
  public:
    explicit TotientStream(std::uint64_t limit, std::uint64_t block_size = 1u << 16)
        : limit_(limit), block_(block_size ? block_size : 1u << 16) {
        if (limit_ < 1) throw config_error("totient sieve over an empty range");
        std::uint64_t root = 1;
        while ((root + 1) * (root + 1) <= limit_) ++root;
        std::vector<bool> comp(root + 1, false);
        for (std::uint64_t i = 2; i <= root; ++i) {
            if (comp[i]) continue;
            primes_.push_back(static_cast<std::uint32_t>(i));
            for (std::uint64_t j = i * i; j <= root; j += i) comp[j] = true;
        }
    }

    std::uint64_t limit() const { return limit_; }

    // Emits n = 1..limit in order; returns false past the end.
    bool next(TotientValue& out) {
        if (pos_ >= limit_) return false;
        std::uint64_t n = pos_ + 1;
        if (n >= seg_lo_ + seg_len_ || seg_len_ == 0) load_segment(n);
        std::size_t k = static_cast<std::size_t>(n - seg_lo_);
        out.n = n;
        out.num = phird_[k];
        out.den = rad_[k];
        ++pos_;
        return true;
    }

  private:
    void load_segment(std::uint64_t lo) {
        seg_lo_ = lo;
        seg_len_ = std::min<std::uint64_t>(block_, limit_ - lo + 1);
        rem_.assign(seg_len_, 0);
        rad_.assign(seg_len_, 1);
        phird_.assign(seg_len_, 1);
        for (std::size_t i = 0; i < seg_len_; ++i) rem_[i] = lo + i;
        const std::uint64_t hi = lo + seg_len_;
        for (std::uint32_t p : primes_) {
            std::uint64_t first = (lo + p - 1) / p * p;
            for (std::uint64_t j = first; j < hi; j += p) {
                std::size_t k = static_cast<std::size_t>(j - lo);
                rad_[k] *= p;
                phird_[k] *= p - 1;
                while (rem_[k] % p == 0) rem_[k] /= p;
            }
        }
        for (std::size_t k = 0; k < seg_len_; ++k) {
            if (rem_[k] > 1) { // one prime factor above sqrt(limit)
                rad_[k] *= rem_[k];
                phird_[k] *= rem_[k] - 1;
            }
        }
    }

    std::uint64_t limit_;
    std::uint64_t block_;
    std::vector<std::uint32_t> primes_;
    std::uint64_t pos_ = 0;
    std::uint64_t seg_lo_ = 0, seg_len_ = 0;
    std::vector<std::uint64_t> rem_, rad_, phird_;
};

// R0(x) given the exact running prefix sum_{n<=x} phi(n)/n.
inline dd remainder_r0(std::uint64_t x, dd prefix) {
    return prefix - dd::from_u64(x) * dd_inv_zeta2();
}

struct R0Stats {
    std::uint64_t X = 0;
    double average = 0.0;     // (1/X) sum R0(x)        ->  1/(2 zeta(2))
    double mean_square = 0.0; // (1/X) sum R0(x)^2      ->  1/(12 z2) + 1/(6 z2^2)
};

inline R0Stats discrete_r0_stats(std::uint64_t X, std::uint64_t block_size = 1u << 16) {
    TotientStream s(X, block_size);
    TotientValue v;
    dd prefix;
    StatAccumulator acc;
    while (s.next(v)) {
        prefix += v.ratio();
        acc.add(remainder_r0(v.n, prefix));
    }
    return {X, acc.mean(), acc.mean_sq()};
}

inline double discrete_average_r0(std::uint64_t X) { return discrete_r0_stats(X).average; }
inline double discrete_meansq_r0(std::uint64_t X) { return discrete_r0_stats(X).mean_square; }

enum class IntervalKind { Hx, HxDelta, H2xDelta, H2xDelta1, HConst };

struct IntervalSpec {
    IntervalKind kind = IntervalKind::Hx;
    RationalExponent delta{1, 2}; // used by the [x^delta] kinds
    std::uint64_t hconst = 1;

    bool uses_delta() const {
        return kind == IntervalKind::HxDelta || kind == IntervalKind::H2xDelta ||
               kind == IntervalKind::H2xDelta1;
    }

    void validate() const {
        if (uses_delta()) delta.validate();
        if (kind == IntervalKind::HConst && hconst < 1)
            throw config_error("constant interval length must be >= 1");
    }

    std::uint64_t length(std::uint64_t x, FloorPowerCursor& cur) const {
        switch (kind) {
            case IntervalKind::Hx: return x;
            case IntervalKind::HxDelta: return cur.at(x);
            case IntervalKind::H2xDelta: return 2 * cur.at(x);
            case IntervalKind::H2xDelta1: return 2 * cur.at(x) + 1;
            case IntervalKind::HConst: return hconst;
        }
        throw config_error("unknown interval kind");
    }

    std::uint64_t sieve_limit(std::uint64_t X) const {
        FloorPowerCursor cur(delta);
        std::uint64_t h = length(X, cur);
        return X + h;
    }
};

struct Checkpoint {
    std::uint64_t X = 0;
    double variance = 0.0;
};

struct IntervalVarianceResult {
    std::uint64_t X = 0;
    double variance = 0.0;              // (1/X) sum_{x<=X} R0(x;H)^2
    std::vector<Checkpoint> checkpoints; // geometric x1.25 emission
};

// Two-cursor streaming pass: one sieve cursor at x, one at x+H(x); the
// interval remainder is the prefix difference minus H/zeta(2).  No prefix
// array is retained.
inline IntervalVarianceResult interval_variance(std::uint64_t X, const IntervalSpec& spec,
                                                std::uint64_t block_size = 1u << 16) {
    spec.validate();
    if (X < 1) throw config_error("X must be >= 1");

    TotientStream low(X, block_size);
    TotientStream high(spec.sieve_limit(X), block_size);
    FloorPowerCursor cur(spec.delta);
    const dd inv_z2 = dd_inv_zeta2();

    dd prefix_low, prefix_high;
    std::uint64_t high_pos = 0;
    StatAccumulator acc;
    IntervalVarianceResult res;
    std::uint64_t next_cp = 1;
    TotientValue v;

    for (std::uint64_t x = 1; x <= X; ++x) {
        low.next(v);
        prefix_low += v.ratio();
        std::uint64_t h = spec.length(x, cur);
        std::uint64_t target = x + h;
        while (high_pos < target) {
            high.next(v);
            prefix_high += v.ratio();
            ++high_pos;
        }
        dd r = prefix_high - prefix_low - dd::from_u64(h) * inv_z2;
        acc.add(r);
        if (x >= next_cp) {
            res.checkpoints.push_back({x, acc.mean_sq()});
            std::uint64_t g = next_cp + (next_cp + 3) / 4; // ceil(*1.25)
            next_cp = g > next_cp ? g : next_cp + 1;
        }
    }
    res.X = X;
    res.variance = acc.mean_sq();
    if (res.checkpoints.empty() || res.checkpoints.back().X != X)
        res.checkpoints.push_back({X, res.variance});
    return res;
}

// Empirical conditional frequencies of [x^delta] mod m given x mod n.
struct AssumptionMatrix {
    std::uint32_t m = 1, n = 1;
    std::uint64_t X = 0;
    std::vector<std::uint64_t> counts; // counts[rm * n + rn]
    std::vector<std::uint64_t> totals; // totals[rn]

    double frequency(std::uint32_t rm, std::uint32_t rn) const {
        return static_cast<double>(counts[std::size_t(rm) * n + rn]) /
               static_cast<double>(totals[rn]);
    }
};

inline AssumptionMatrix assumption_correlation_test(std::uint32_t m, std::uint32_t n,
                                                    RationalExponent delta,
                                                    std::uint64_t X) {
    if (m < 1 || n < 1) throw config_error("moduli must be >= 1");
    delta.validate();
    if (delta.num >= delta.den)
        throw config_error("assumption test needs delta in (0,1)");
    if (X < std::uint64_t(m) * n * 100)
        throw config_error("X too small: need X >= 100*m*n");

    AssumptionMatrix out;
    out.m = m;
    out.n = n;
    out.X = X;
    out.counts.assign(std::size_t(m) * n, 0);
    out.totals.assign(n, 0);
    FloorPowerCursor cur(delta);
    for (std::uint64_t x = 1; x <= X; ++x) {
        std::uint32_t rm = static_cast<std::uint32_t>(cur.at(x) % m);
        std::uint32_t rn = static_cast<std::uint32_t>(x % n);
        ++out.counts[std::size_t(rm) * n + rn];
        ++out.totals[rn];
    }
    return out;
}

} // namespace totvar::intsieve
