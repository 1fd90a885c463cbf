#pragma once

// Dirichlet characters modulo T^m over F_q and their L-polynomials.
//
// The unit group (F_q[T]/T^m)^x splits as F_q^x times U1, where
// U1 = { v : v = 1 mod T } has order q^(m-1).  Over the prime field,
// (1+x)^q = 1 + x^q, so U1 has the explicit filtration basis
//   { 1 + T^i : 1 <= i < m, q does not divide i },
// the generator 1+T^i having order q^e with e minimal such that
// i q^e >= m.  Discrete logs are tabulated for every U1 residue by
// odometer enumeration of the basis (and the table build verifies the
// basis really enumerates the group exactly once).
//
// A character is an exponent vector against these generators plus an
// exponent against a primitive root of F_q^x; it is even iff the constant
// exponent vanishes, and primitive iff it is nontrivial on
// { 1 + a T^(m-1) }.  For a non-principal character,
//   L(u,chi) = sum_k ( sum_{f in M_k} chi(f) ) u^k,   deg L <= m-1,
// and for even chi, (1-u) divides L; writing P = L/(1-u) with
// coefficients p_j and 1/P = sum s_l u^l, the normalized quantities are
// lambda_j = p_j q^(-j/2) and S_l = s_l q^(-l/2).  The inverse zeros are
// the roots alpha of u^N P(1/u) (companion-matrix eigenvalues); for
// primitive even chi they all satisfy |alpha| = sqrt(q).

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "totvar/errors.hpp"
#include "totvar/ffpoly.hpp"
#include "totvar/parallel.hpp"
#include "totvar/rational.hpp"

namespace totvar::charlfun {

using cplx = std::complex<double>;
using ffpoly::FieldCtx;
using ffpoly::Poly;

struct UnitGroupTable {
    FieldCtx ctx;
    std::uint32_t m = 2; // modulus T^m

    std::uint32_t primitive_root = 1;
    std::vector<std::uint32_t> const_dlog; // size q; dlog of c in F_q^x

    std::vector<std::uint32_t> gen_i;     // basis exponents i (q ∤ i)
    std::vector<std::uint32_t> gen_order; // order of 1+T^i, a power of q
    std::vector<std::uint32_t> stride;    // mixed-radix strides
    std::uint32_t u1_size = 1;            // q^(m-1)
    std::uint32_t even_modulus = 1;       // q^(max e_i): lcm of gen orders
    std::vector<std::uint32_t> dlog_packed; // residue index -> packed exponents

    std::vector<cplx> roots; // e^(2 pi i t / M), M = (q-1)*even_modulus

    std::uint64_t group_order() const {
        return std::uint64_t(ctx.q - 1) * u1_size;
    }

    std::uint32_t root_modulus() const {
        return (ctx.q - 1) * even_modulus;
    }

    // Index of a residue v with v(0) = 1 by its coefficients a_1..a_{m-1}.
    std::uint32_t residue_index(const std::vector<std::uint32_t>& v) const {
        std::uint32_t idx = 0;
        for (std::uint32_t j = m; j-- > 1;)
            idx = idx * ctx.q + (j < v.size() ? v[j] : 0);
        return idx;
    }

    void unpack(std::uint32_t packed, std::vector<std::uint32_t>& digits) const {
        digits.resize(gen_order.size());
        for (std::size_t k = 0; k < gen_order.size(); ++k) {
            digits[k] = packed % gen_order[k];
            packed /= gen_order[k];
        }
    }
};

namespace detail {

// c = a*b truncated mod T^m, coefficients mod q.
inline void mulmod_trunc(const FieldCtx& ctx, const std::vector<std::uint32_t>& a,
                         const std::vector<std::uint32_t>& b, std::uint32_t m,
                         std::vector<std::uint32_t>& out) {
    out.assign(m, 0);
    for (std::uint32_t i = 0; i < m && i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::uint32_t j = 0; i + j < m && j < b.size(); ++j)
            out[i + j] = ctx.add(out[i + j], ctx.mul(a[i], b[j]));
    }
}

inline std::uint32_t find_primitive_root(const FieldCtx& ctx) {
    std::uint32_t n = ctx.q - 1;
    std::vector<std::uint32_t> prime_divs;
    std::uint32_t t = n;
    for (std::uint32_t d = 2; std::uint64_t(d) * d <= t; ++d) {
        if (t % d == 0) {
            prime_divs.push_back(d);
            while (t % d == 0) t /= d;
        }
    }
    if (t > 1) prime_divs.push_back(t);
    for (std::uint32_t g = 1; g < ctx.q; ++g) {
        bool ok = true;
        for (std::uint32_t r : prime_divs)
            if (ctx.pow(g, n / r) == 1) { ok = false; break; }
        if (ok) return g;
    }
    throw check_error("no primitive root found (field size not prime?)");
}

} // namespace detail

inline UnitGroupTable build_unit_group(const FieldCtx& ctx, std::uint32_t m) {
    if (m < 2) throw config_error("modulus degree must be >= 2");
    std::uint64_t u1 = 1;
    for (std::uint32_t i = 1; i < m; ++i) {
        u1 *= ctx.q;
        if (std::uint64_t(ctx.q - 1) * u1 > 10'000'000ull)
            throw bound_error("unit group table bound (q-1) q^(m-1) <= 1e7 exceeded");
    }

    UnitGroupTable tbl{ctx};
    tbl.m = m;
    tbl.u1_size = static_cast<std::uint32_t>(u1);

    tbl.primitive_root = ctx.q == 2 ? 1 : detail::find_primitive_root(ctx);
    tbl.const_dlog.assign(ctx.q, 0);
    {
        std::uint32_t v = 1;
        for (std::uint32_t e = 0; e + 1 < ctx.q; ++e) {
            tbl.const_dlog[v] = e;
            v = ctx.mul(v, tbl.primitive_root);
        }
    }

    // Filtration basis of U1.
    std::uint32_t emax = 0;
    for (std::uint32_t i = 1; i < m; ++i) {
        if (i % ctx.q == 0) continue;
        std::uint32_t e = 0;
        std::uint64_t reach = i;
        while (reach < m) { reach *= ctx.q; ++e; }
        tbl.gen_i.push_back(i);
        std::uint32_t ord = 1;
        for (std::uint32_t k = 0; k < e; ++k) ord *= ctx.q;
        tbl.gen_order.push_back(ord);
        emax = std::max(emax, e);
    }
    tbl.even_modulus = 1;
    for (std::uint32_t k = 0; k < emax; ++k) tbl.even_modulus *= ctx.q;
    tbl.stride.resize(tbl.gen_order.size());
    {
        std::uint32_t s = 1;
        for (std::size_t k = 0; k < tbl.gen_order.size(); ++k) {
            tbl.stride[k] = s;
            s *= tbl.gen_order[k];
        }
        if (s != tbl.u1_size)
            throw check_error("basis order product mismatch");
    }

    // Odometer enumeration of all products of generator powers; each wrap
    // or increment of digit k multiplies by 1+T^(i_k) once, because the
    // generator order divides out.
    constexpr std::uint32_t kUnset = 0xffffffffu;
    tbl.dlog_packed.assign(tbl.u1_size, kUnset);
    std::vector<std::vector<std::uint32_t>> gens;
    for (std::uint32_t i : tbl.gen_i) {
        std::vector<std::uint32_t> g(m, 0);
        g[0] = 1;
        g[i] = 1;
        gens.push_back(std::move(g));
    }
    std::vector<std::uint32_t> cur(m, 0), tmp;
    cur[0] = 1;
    std::vector<std::uint32_t> digits(tbl.gen_order.size(), 0);
    for (std::uint32_t packed = 0;; ++packed) {
        std::uint32_t idx = tbl.residue_index(cur);
        if (tbl.dlog_packed[idx] != kUnset)
            throw check_error("unit-group basis is not independent");
        tbl.dlog_packed[idx] = packed;
        if (packed + 1 == tbl.u1_size) break;
        for (std::size_t k = 0;; ++k) {
            detail::mulmod_trunc(ctx, cur, gens[k], m, tmp);
            cur.swap(tmp);
            if (++digits[k] < tbl.gen_order[k]) break;
            digits[k] = 0;
        }
    }
    for (std::uint32_t v : tbl.dlog_packed)
        if (v == kUnset) throw check_error("unit-group basis does not generate");

    const std::uint32_t M = tbl.root_modulus();
    tbl.roots.resize(M);
    for (std::uint32_t t = 0; t < M; ++t) {
        double ang = 2.0 * 3.14159265358979323846 * t / M;
        tbl.roots[t] = cplx(std::cos(ang), std::sin(ang));
    }
    return tbl;
}

struct Character {
    std::uint32_t index = 0;     // packed exponent vector over the U1 basis
    std::uint32_t const_exp = 0; // exponent against the primitive root, 0..q-2
    std::vector<std::uint32_t> exps;
    bool is_even = false;
    bool is_primitive = false;
    bool is_principal = false;
};

namespace detail {

// Exponent (numerator over even_modulus) of chi on a U1 residue with the
// given packed discrete log.
inline std::uint32_t u1_exponent(const UnitGroupTable& tbl, const Character& chi,
                                 std::uint32_t packed) {
    std::uint64_t t = 0;
    for (std::size_t k = 0; k < tbl.gen_order.size(); ++k) {
        std::uint32_t x = packed % tbl.gen_order[k];
        packed /= tbl.gen_order[k];
        t += std::uint64_t(chi.exps[k]) * x % tbl.gen_order[k] *
             (tbl.even_modulus / tbl.gen_order[k]);
    }
    return static_cast<std::uint32_t>(t % tbl.even_modulus);
}

inline std::uint32_t one_plus_tpow_index(const UnitGroupTable& tbl, std::uint32_t i) {
    std::vector<std::uint32_t> v(tbl.m, 0);
    v[0] = 1;
    v[i] = 1;
    return tbl.residue_index(v);
}

} // namespace detail

inline Character make_character(const UnitGroupTable& tbl, std::uint32_t packed,
                                std::uint32_t const_exp = 0) {
    Character chi;
    chi.index = packed;
    chi.const_exp = const_exp;
    tbl.unpack(packed, chi.exps);
    chi.is_even = const_exp == 0;
    chi.is_principal = packed == 0 && const_exp == 0;
    std::uint32_t probe = tbl.dlog_packed[detail::one_plus_tpow_index(tbl, tbl.m - 1)];
    chi.is_primitive = detail::u1_exponent(tbl, chi, probe) != 0;
    return chi;
}

// All q^(m-1) even characters (trivial on F_q^x), principal included.
inline std::vector<Character> enumerate_even_characters(const UnitGroupTable& tbl) {
    std::vector<Character> out;
    out.reserve(tbl.u1_size);
    for (std::uint32_t packed = 0; packed < tbl.u1_size; ++packed)
        out.push_back(make_character(tbl, packed));
    return out;
}

// Number of primitive even characters mod T^m: q^(m-2) (q-1).
inline std::uint64_t phi_star_even(std::uint32_t q, std::uint32_t m) {
    if (m < 2) throw config_error("phi*_ev needs modulus degree >= 2");
    std::uint64_t r = q - 1;
    for (std::uint32_t i = 0; i + 2 < m; ++i) r *= q;
    return r;
}

// chi(f): 0 when gcd(f, T^m) != 1, a root of unity otherwise.
inline cplx char_value(const UnitGroupTable& tbl, const Character& chi, const Poly& f) {
    if (f.is_zero() || f.coeff(0) == 0) return cplx(0.0, 0.0);
    const FieldCtx& ctx = tbl.ctx;
    std::uint32_t c = f.coeff(0);
    std::uint32_t cinv = ctx.inv(c);
    std::vector<std::uint32_t> v(tbl.m, 0);
    for (std::uint32_t i = 0; i < tbl.m; ++i)
        v[i] = ctx.mul(cinv, f.coeff(i));
    std::uint32_t packed = tbl.dlog_packed[tbl.residue_index(v)];
    std::uint32_t te = detail::u1_exponent(tbl, chi, packed);
    // combined exponent over M = (q-1) * even_modulus
    std::uint64_t t = std::uint64_t(te) * (ctx.q - 1);
    if (chi.const_exp != 0)
        t += std::uint64_t(chi.const_exp) * tbl.const_dlog[c] % (ctx.q - 1) * tbl.even_modulus;
    return tbl.roots[t % tbl.root_modulus()];
}

// --- L-polynomial data -----------------------------------------------------

struct LData {
    std::uint32_t q = 2;
    std::uint32_t m = 2;      // modulus degree
    bool primitive = false;
    std::vector<cplx> c;      // L coefficients c_0..c_{m-1}
    std::vector<cplx> p;      // P = L/(1-u) coefficients p_0..p_{m-2}
    std::vector<cplx> s;      // 1/P power series s_0..s_{len}
    double div_remainder = 0; // |L(1)|, zero when (1-u) divides L
    std::vector<cplx> inverse_zeros; // the alpha_j (companion eigenvalues)

    int N() const { return static_cast<int>(m) - 2; }

    cplx lambda(std::size_t j) const {
        return p[j] / std::pow(std::sqrt(double(q)), double(j));
    }
    cplx S(std::size_t l) const {
        return s[l] / std::pow(std::sqrt(double(q)), double(l));
    }

    double max_abs_zero() const {
        double r = 0;
        for (const auto& a : inverse_zeros) r = std::max(r, std::abs(a));
        return r;
    }
    // max_j | |alpha_j| - sqrt(q) | (meaningful for primitive characters).
    double max_rh_deviation() const {
        double rq = std::sqrt(double(q)), r = 0;
        for (const auto& a : inverse_zeros) r = std::max(r, std::abs(std::abs(a) - rq));
        return r;
    }
};

namespace detail {

inline void finish_ldata(LData& ld, unsigned series_len) {
    const std::uint32_t m = ld.m;
    // P = L/(1-u): partial sums; the full sum is the division remainder.
    ld.p.assign(m - 1, cplx(0, 0));
    cplx run(0, 0);
    for (std::uint32_t k = 0; k < m; ++k) {
        run += ld.c[k];
        if (k + 1 < m) ld.p[k] = run;
    }
    ld.div_remainder = std::abs(run);
    // 1/P as a power series (p_0 = 1).
    unsigned len = std::max(series_len, 2 * m + 1);
    ld.s.assign(len + 1, cplx(0, 0));
    ld.s[0] = cplx(1, 0);
    for (unsigned l = 1; l <= len; ++l) {
        cplx acc(0, 0);
        for (std::size_t j = 1; j < ld.p.size() && j <= l; ++j)
            acc += ld.p[j] * ld.s[l - j];
        ld.s[l] = -acc;
    }
    // Inverse zeros: roots of z^N + p_1 z^(N-1) + ... + p_N.
    int N = ld.N();
    if (N > 0) {
        Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(N, N);
        for (int i = 0; i < N; ++i) comp(0, i) = -ld.p[static_cast<std::size_t>(i) + 1];
        for (int i = 1; i < N; ++i) comp(i, i - 1) = 1.0;
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
        ld.inverse_zeros.assign(es.eigenvalues().data(),
                                es.eigenvalues().data() + N);
    }
}

} // namespace detail

// L-polynomial of a non-principal character by direct coefficient sums
// c_k = sum_{f in M_k} chi(f), k < m.
inline LData l_polynomial(const UnitGroupTable& tbl, const Character& chi,
                          unsigned series_len = 0) {
    if (chi.is_principal)
        throw config_error("L-data is defined here for non-principal characters only");
    LData ld;
    ld.q = tbl.ctx.q;
    ld.m = tbl.m;
    ld.primitive = chi.is_primitive;
    ld.c.assign(tbl.m, cplx(0, 0));
    ld.c[0] = cplx(1, 0);
    for (std::uint32_t k = 1; k < tbl.m; ++k) {
        ffpoly::MonicRange range(tbl.ctx, k);
        for (std::uint64_t i = 0; i < range.size(); ++i)
            ld.c[k] += char_value(tbl, chi, range.at(i));
    }
    detail::finish_ldata(ld, series_len);
    return ld;
}

// L-data for every even character at once.  The coefficient sums over M_k
// are one counting pass plus a mixed-radix DFT over the U1 exponent
// lattice, instead of q^(m-1) independent character sums.
// Output is indexed by the packed character index; entry 0 (principal) is
// left empty.
inline std::vector<LData> l_polynomials_all_even(const UnitGroupTable& tbl,
                                                 unsigned series_len = 0) {
    const FieldCtx& ctx = tbl.ctx;
    const std::uint32_t m = tbl.m;
    const std::uint32_t U = tbl.u1_size;

    std::vector<std::vector<cplx>> hat(m, std::vector<cplx>(U, cplx(0, 0)));
    // Counting pass: each monic f of degree k < m with f(0) != 0 lands on
    // the U1 component of its residue.
    std::vector<std::uint32_t> v(m, 0);
    for (std::uint32_t k = 0; k < m; ++k) {
        ffpoly::MonicRange range(ctx, k);
        std::vector<std::uint32_t> coeffs;
        std::vector<double> bump(U, 0.0);
        for (std::uint64_t i = 0; i < range.size(); ++i) {
            range.decode(i, coeffs);
            if (coeffs[0] == 0) continue;
            std::uint32_t cinv = ctx.inv(coeffs[0]);
            for (std::uint32_t j = 0; j < m; ++j)
                v[j] = ctx.mul(cinv, j < coeffs.size() ? coeffs[j] : 0);
            bump[tbl.dlog_packed[tbl.residue_index(v)]] += 1.0;
        }
        for (std::uint32_t x = 0; x < U; ++x) hat[k][x] = cplx(bump[x], 0.0);
    }

    // Mixed-radix DFT along each basis dimension.
    for (std::uint32_t k = 0; k < m; ++k) {
        auto& a = hat[k];
        for (std::size_t dim = 0; dim < tbl.gen_order.size(); ++dim) {
            const std::uint32_t d = tbl.gen_order[dim];
            if (d == 1) continue;
            const std::uint32_t stride = tbl.stride[dim];
            std::vector<cplx> omega(d);
            for (std::uint32_t t = 0; t < d; ++t)
                omega[t] = tbl.roots[std::uint64_t(t) * (tbl.even_modulus / d) %
                                     tbl.even_modulus * (ctx.q - 1)];
            std::vector<cplx> line(d);
            const std::uint32_t block = stride * d;
            for (std::uint32_t base = 0; base < U; base += block) {
                for (std::uint32_t off = 0; off < stride; ++off) {
                    for (std::uint32_t t = 0; t < d; ++t) line[t] = a[base + off + t * stride];
                    for (std::uint32_t t = 0; t < d; ++t) {
                        cplx acc(0, 0);
                        for (std::uint32_t u = 0; u < d; ++u)
                            acc += line[u] * omega[std::uint64_t(t) * u % d];
                        a[base + off + t * stride] = acc;
                    }
                }
            }
        }
    }

    // Per-character post-processing is independent; slots are disjoint.
    std::vector<LData> out(U);
    parallel_for(1, U, [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t kap = lo; kap < hi; ++kap) {
            LData& ld = out[kap];
            ld.q = ctx.q;
            ld.m = m;
            ld.primitive = make_character(tbl, static_cast<std::uint32_t>(kap)).is_primitive;
            ld.c.resize(m);
            for (std::uint32_t k = 0; k < m; ++k) ld.c[k] = hat[k][kap];
            detail::finish_ldata(ld, series_len);
        }
    }, 1024);
    return out;
}

// --- character sums --------------------------------------------------------

// M(m_deg; beta chi) = sum_{f in M_m} beta(f) chi(f), evaluated directly.
inline cplx char_sum_M_direct(const UnitGroupTable& tbl, const Character& chi,
                              unsigned m_deg) {
    const FieldCtx& ctx = tbl.ctx;
    ffpoly::MonicRange range(ctx, m_deg);
    cplx acc(0, 0);
    for (std::uint64_t i = 0; i < range.size(); ++i) {
        Poly f = range.at(i);
        cplx cv = char_value(tbl, chi, f);
        if (cv == cplx(0, 0)) continue;
        acc += ffpoly::beta(ctx, f).get_d() * cv;
    }
    return acc;
}

namespace detail {

// A(t) = sum_{j+k+l=t, 0<=j<=N, k,l>=0} p_j s_l q^(-k-l)
//      = sum_{j+k+l=t} lambda_j S_l q^(j/2-k-l/2).
inline cplx a_sum(const LData& ld, int t) {
    if (t < 0) return cplx(0, 0);
    if (static_cast<std::size_t>(t) >= ld.s.size())
        throw check_error("L-data series too short for requested degree");
    cplx acc(0, 0);
    const double q = ld.q;
    for (std::size_t j = 0; j < ld.p.size() && static_cast<int>(j) <= t; ++j) {
        for (int l = 0; l + static_cast<int>(j) <= t; ++l) {
            int k = t - static_cast<int>(j) - l;
            acc += ld.p[j] * ld.s[l] * std::pow(q, -double(k + l));
        }
    }
    return acc;
}

} // namespace detail

// The same M(m_deg; beta chi) from the L-data expression
// A(m_deg) - A(m_deg - 1).
inline cplx char_sum_M_closed(const LData& ld, unsigned m_deg) {
    return detail::a_sum(ld, static_cast<int>(m_deg)) -
           detail::a_sum(ld, static_cast<int>(m_deg) - 1);
}

// sum_{m=0}^{n} beta(T^(n-m)) M(m; beta chi), using
// beta(T^j) = 1 - 1/q for j >= 1 and beta(1) = 1; direct evaluation.
inline cplx weighted_sum_S_direct(const UnitGroupTable& tbl, const Character& chi,
                                  unsigned n) {
    const double betaT = 1.0 - 1.0 / tbl.ctx.q;
    cplx acc(0, 0);
    for (unsigned m_deg = 0; m_deg <= n; ++m_deg) {
        double w = m_deg == n ? 1.0 : betaT;
        acc += w * char_sum_M_direct(tbl, chi, m_deg);
    }
    return acc;
}

// Closed form of the same weighted sum: A(n) - A(n-1)/q.
inline cplx weighted_sum_S_closed(const LData& ld, unsigned n) {
    return detail::a_sum(ld, static_cast<int>(n)) -
           detail::a_sum(ld, static_cast<int>(n) - 1) / double(ld.q);
}

} // namespace totvar::charlfun
