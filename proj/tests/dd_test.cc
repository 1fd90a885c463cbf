#include "totvar/dd.hpp"

#include <gtest/gtest.h>
#include <gmpxx.h>

#include <cmath>
#include <random>

namespace {

using totvar::dd;
using totvar::StatAccumulator;

// Exact rational view of a double-double value (doubles are dyadic).
mpq_class to_mpq(dd v) { return mpq_class(v.hi) + mpq_class(v.lo); }

mpq_class parse_decimal(const std::string& s) {
    auto dot = s.find('.');
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    mpz_class num(digits);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, s.size() - dot - 1);
    return mpq_class(num, den);
}

TEST(Dd, IntegerConstructionIsExact) {
    for (std::uint64_t v : {0ull, 1ull, 123456789ull, (1ull << 53) + 1, 0xfedcba9876543210ull}) {
        EXPECT_EQ(to_mpq(dd::from_u64(v)), mpq_class(mpz_class(std::to_string(v))));
    }
    EXPECT_EQ(to_mpq(dd::from_i64(-((std::int64_t(1) << 53) + 7))),
              mpq_class(-(mpz_class(1) << 53) - 7));
}

TEST(Dd, AddMulStayNearExact) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        dd a(dist(rng), 0.0), b(dist(rng), 0.0);
        mpq_class sum = to_mpq(a) + to_mpq(b);
        mpq_class prod = to_mpq(a) * to_mpq(b);
        EXPECT_LT(std::abs(mpq_class(to_mpq(a + b) - sum).get_d()), 1e-31);
        EXPECT_LT(std::abs(mpq_class(to_mpq(a * b) - prod).get_d()), 1e-31);
    }
}

TEST(Dd, DivisionRoundTrips) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(0.25, 4.0);
    for (int i = 0; i < 200; ++i) {
        dd a(dist(rng), 0.0), b(dist(rng), 0.0);
        dd q = a / b;
        double err = std::abs(mpq_class(to_mpq(q * b) - to_mpq(a)).get_d());
        EXPECT_LT(err, 1e-30);
    }
}

TEST(Dd, Zeta2Constants) {
    // zeta(2) = pi^2/6 to 40 digits.
    mpq_class z2 = parse_decimal("1.6449340668482264364724151666460251892189");
    double err = std::abs(mpq_class(to_mpq(totvar::dd_zeta2()) - z2).get_d());
    EXPECT_LT(err, 1e-30);
    mpq_class one = to_mpq(totvar::dd_zeta2()) * to_mpq(totvar::dd_inv_zeta2());
    EXPECT_LT(std::abs(mpq_class(one - 1).get_d()), 1e-30);
}

TEST(Dd, AccumulatorErrorBound) {
    // N terms of magnitude <= 1: absolute error below N * 2^-90.
    const int N = 100000;
    StatAccumulator acc;
    mpq_class exact_sum(0), exact_sq(0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int i = 0; i < N; ++i) {
        double v = dist(rng);
        acc.add(dd(v));
        exact_sum += mpq_class(v);
        exact_sq += mpq_class(v) * mpq_class(v);
    }
    double bound = N * std::pow(2.0, -90);
    EXPECT_LT(std::abs(mpq_class(to_mpq(acc.sum) - exact_sum).get_d()), bound);
    EXPECT_LT(std::abs(mpq_class(to_mpq(acc.sum_sq) - exact_sq).get_d()), bound);
    EXPECT_EQ(acc.count, static_cast<std::uint64_t>(N));
}

TEST(Dd, MergeMatchesSequential) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    StatAccumulator whole, left, right;
    mpq_class exact(0);
    for (int i = 0; i < 5000; ++i) {
        double v = dist(rng);
        exact += mpq_class(v);
        whole.add(dd(v));
        (i < 2500 ? left : right).add(dd(v));
    }
    left.merge(right);
    EXPECT_EQ(left.count, whole.count);
    double bound = 5000 * std::pow(2.0, -90);
    EXPECT_LT(std::abs(mpq_class(to_mpq(left.sum) - exact).get_d()), bound);
    EXPECT_NEAR(left.mean(), whole.mean(), 1e-18);
}

} // namespace
