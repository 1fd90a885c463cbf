#include "totvar/charlfun.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>

namespace {

using namespace totvar;
using namespace totvar::charlfun;

Poly P(std::initializer_list<std::uint32_t> c) { return Poly(std::vector<std::uint32_t>(c)); }

TEST(UnitGroup, OrdersAndCensus) {
    struct Case { std::uint32_t q, m; std::uint64_t order; std::uint64_t prim; };
    const Case cases[] = {
        {3, 2, 6, 2},      // units a+bT, a != 0
        {3, 3, 18, 6},
        {3, 5, 162, 54},
        {5, 4, 500, 100},
        {5, 5, 2500, 500},
        {7, 3, 294, 42},
        {2, 3, 4, 2},
    };
    for (const auto& c : cases) {
        FieldCtx ctx(c.q);
        auto tbl = build_unit_group(ctx, c.m);
        EXPECT_EQ(tbl.group_order(), c.order) << c.q << "," << c.m;
        auto evens = enumerate_even_characters(tbl);
        std::uint64_t total = 1;
        for (std::uint32_t i = 1; i < c.m; ++i) total *= c.q;
        EXPECT_EQ(evens.size(), total); // q^(m-1) even characters
        std::uint64_t prim = 0, principal = 0;
        for (const auto& chi : evens) {
            prim += chi.is_primitive;
            principal += chi.is_principal;
        }
        EXPECT_EQ(prim, c.prim);
        EXPECT_EQ(prim, phi_star_even(c.q, c.m));
        EXPECT_EQ(principal, 1u); // exactly one principal even character
    }
}

TEST(UnitGroup, TableBoundEnforced) {
    EXPECT_THROW(build_unit_group(FieldCtx(101), 5), bound_error);
    EXPECT_THROW(build_unit_group(FieldCtx(3), 1), config_error);
}

TEST(CharValue, BasicProperties) {
    FieldCtx ctx(3);
    auto tbl = build_unit_group(ctx, 4);
    auto evens = enumerate_even_characters(tbl);
    const Character& chi0 = evens[0];
    ASSERT_TRUE(chi0.is_principal);
    EXPECT_NEAR(std::abs(char_value(tbl, chi0, P({1, 1})) - cplx(1, 0)), 0.0, 1e-12);
    for (const auto& chi : evens) {
        // chi(T) = 0: not coprime to the modulus
        EXPECT_EQ(char_value(tbl, chi, P({0, 1})), cplx(0, 0));
        // |chi(f)| is 0 or 1
        Poly f = P({2, 1, 1});
        double mag = std::abs(char_value(tbl, chi, f));
        EXPECT_NEAR(mag, 1.0, 1e-12);
        // evenness: chi(cf) = chi(f) for constants c
        for (std::uint32_t c = 1; c < 3; ++c) {
            Poly cf = ctx.scale(f, c);
            EXPECT_NEAR(std::abs(char_value(tbl, chi, cf) - char_value(tbl, chi, f)),
                        0.0, 1e-12);
        }
    }
}

TEST(CharValue, MultiplicativeAndPeriodic) {
    FieldCtx ctx(5);
    auto tbl = build_unit_group(ctx, 3);
    auto evens = enumerate_even_characters(tbl);
    const Poly mod = P({0, 0, 0, 1}); // T^3
    for (std::size_t i = 0; i < evens.size(); i += 7) {
        const auto& chi = evens[i];
        Poly f = P({1, 2}), g = P({3, 0, 1});
        cplx lhs = char_value(tbl, chi, ctx.mul(f, g));
        cplx rhs = char_value(tbl, chi, f) * char_value(tbl, chi, g);
        EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-12);
        // period T^m
        Poly shifted = ctx.add(f, mod);
        EXPECT_NEAR(std::abs(char_value(tbl, chi, shifted) - char_value(tbl, chi, f)),
                    0.0, 1e-12);
    }
}

// Full character set (odd ones too) for the orthogonality relations.
TEST(CharValue, Orthogonality) {
    FieldCtx ctx(3);
    auto tbl = build_unit_group(ctx, 3);
    std::vector<Character> all;
    for (std::uint32_t ce = 0; ce + 1 < ctx.q; ++ce)
        for (std::uint32_t packed = 0; packed < tbl.u1_size; ++packed)
            all.push_back(make_character(tbl, packed, ce));
    ASSERT_EQ(all.size(), tbl.group_order());

    // Enumerate unit residues as polynomials of degree < m, f(0) != 0.
    std::vector<Poly> units;
    for (std::uint32_t a0 = 1; a0 < 3; ++a0)
        for (std::uint32_t a1 = 0; a1 < 3; ++a1)
            for (std::uint32_t a2 = 0; a2 < 3; ++a2)
                units.push_back(P({a0, a1, a2}));
    ASSERT_EQ(units.size(), tbl.group_order());

    for (std::size_t i = 0; i < all.size(); i += 3)
        for (std::size_t j = 0; j < all.size(); j += 5) {
            cplx acc(0, 0);
            for (const auto& u : units)
                acc += char_value(tbl, all[i], u) * std::conj(char_value(tbl, all[j], u));
            double expect = i == j ? double(tbl.group_order()) : 0.0;
            EXPECT_NEAR(std::abs(acc - cplx(expect, 0)), 0.0, 1e-8)
                << "chars " << i << "," << j;
        }
}

TEST(LPolynomial, StructureAtSmallModulus) {
    // mod T^2 every nontrivial even character has L(u) = 1 - u: the degree-1
    // coefficient sums to -1 and the reduced polynomial P is constant.
    FieldCtx ctx(3);
    auto tbl = build_unit_group(ctx, 2);
    auto evens = enumerate_even_characters(tbl);
    int checked = 0;
    for (const auto& chi : evens) {
        if (chi.is_principal) continue;
        EXPECT_TRUE(chi.is_primitive);
        auto ld = l_polynomial(tbl, chi, 6);
        EXPECT_NEAR(std::abs(ld.c[0] - cplx(1, 0)), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(ld.c[1] - cplx(-1, 0)), 0.0, 1e-12);
        EXPECT_LT(ld.div_remainder, 1e-12);
        EXPECT_EQ(ld.N(), 0);
        EXPECT_TRUE(ld.inverse_zeros.empty());
        ++checked;
    }
    EXPECT_EQ(checked, 2);
}

TEST(LPolynomial, CoefficientsVanishAtModulusDegree) {
    // For non-principal chi, sum over M_k of chi(f) is 0 once k >= m.
    FieldCtx ctx(3);
    auto tbl = build_unit_group(ctx, 3);
    auto evens = enumerate_even_characters(tbl);
    for (std::size_t i = 1; i < evens.size(); i += 2) {
        for (unsigned k = 3; k <= 4; ++k) {
            ffpoly::MonicRange range(ctx, k);
            cplx acc(0, 0);
            for (std::uint64_t idx = 0; idx < range.size(); ++idx)
                acc += char_value(tbl, evens[i], range.at(idx));
            EXPECT_NEAR(std::abs(acc), 0.0, 1e-10) << "k=" << k;
        }
    }
}

TEST(LPolynomial, BatchDftMatchesDirect) {
    for (std::uint32_t q : {2u, 3u, 5u}) {
        FieldCtx ctx(q);
        std::uint32_t m = q == 5 ? 3 : 4;
        auto tbl = build_unit_group(ctx, m);
        auto evens = enumerate_even_characters(tbl);
        auto batch = l_polynomials_all_even(tbl, 8);
        for (std::uint32_t kap = 1; kap < tbl.u1_size; ++kap) {
            auto direct = l_polynomial(tbl, evens[kap], 8);
            ASSERT_EQ(direct.c.size(), batch[kap].c.size());
            for (std::size_t k = 0; k < direct.c.size(); ++k)
                EXPECT_NEAR(std::abs(direct.c[k] - batch[kap].c[k]), 0.0, 1e-9)
                    << "q=" << q << " kap=" << kap << " k=" << k;
            EXPECT_EQ(direct.primitive, batch[kap].primitive);
        }
    }
}

TEST(LPolynomial, RiemannHypothesisAndSeries) {
    FieldCtx ctx(3);
    auto tbl = build_unit_group(ctx, 5);
    auto evens = enumerate_even_characters(tbl);
    const double rq = std::sqrt(3.0);
    for (const auto& chi : evens) {
        if (chi.is_principal) continue;
        auto ld = l_polynomial(tbl, chi, 12);
        // (1-u) divides L
        EXPECT_LT(ld.div_remainder, 1e-9);
        // lambda_0 = S_0 = 1
        EXPECT_NEAR(std::abs(ld.lambda(0) - cplx(1, 0)), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(ld.S(0) - cplx(1, 0)), 0.0, 1e-12);
        // P(u) * (1/P)(u) = 1 through degree 2m
        for (unsigned t = 1; t <= 2 * tbl.m; ++t) {
            cplx conv(0, 0);
            for (std::size_t j = 0; j < ld.p.size() && j <= t; ++j)
                conv += ld.p[j] * ld.s[t - j];
            EXPECT_NEAR(std::abs(conv), 0.0, 1e-8);
        }
        if (chi.is_primitive) {
            ASSERT_EQ(ld.inverse_zeros.size(), 3u); // N = m-2
            for (const auto& a : ld.inverse_zeros)
                EXPECT_LT(std::abs(std::abs(a) - rq) / rq, 1e-6);
            // |lambda_N| = 1
            EXPECT_NEAR(std::abs(ld.lambda(3)), 1.0, 1e-9);
        } else {
            for (const auto& a : ld.inverse_zeros)
                EXPECT_LT(std::abs(a), rq * (1 + 1e-6));
        }
    }
}

TEST(CharSums, DualPathsAgree) {
    FieldCtx ctx(3);
    auto tbl = build_unit_group(ctx, 4);
    auto evens = enumerate_even_characters(tbl);
    const unsigned n = 5; // h = 1
    for (const auto& chi : evens) {
        if (chi.is_principal) continue;
        auto ld = l_polynomial(tbl, chi, n);
        for (unsigned md = 0; md <= n; ++md) {
            cplx d = char_sum_M_direct(tbl, chi, md);
            cplx c = char_sum_M_closed(ld, md);
            EXPECT_LE(std::abs(d - c), 1e-6 * std::max(1.0, std::abs(d)))
                << "chi " << chi.index << " m_deg " << md;
        }
        cplx wd = weighted_sum_S_direct(tbl, chi, n);
        cplx wc = weighted_sum_S_closed(ld, n);
        EXPECT_LE(std::abs(wd - wc), 1e-6 * std::max(1.0, std::abs(wd)));
    }
}

TEST(CharSums, DegreeZeroIsOne) {
    FieldCtx ctx(5);
    auto tbl = build_unit_group(ctx, 3);
    auto evens = enumerate_even_characters(tbl);
    for (std::size_t i = 1; i < evens.size(); i += 6)
        EXPECT_NEAR(std::abs(char_sum_M_direct(tbl, evens[i], 0) - cplx(1, 0)), 0.0,
                    1e-12);
}

TEST(CharSums, PrincipalRejected) {
    FieldCtx ctx(3);
    auto tbl = build_unit_group(ctx, 3);
    auto evens = enumerate_even_characters(tbl);
    EXPECT_THROW(l_polynomial(tbl, evens[0], 4), config_error);
}

} // namespace
