#pragma once

// Var(N_beta) two ways.
//
//   Brute force: N_beta(A;h) = sum_{f in I(A;h)} beta(f) depends only on
//   the coefficients of A above degree h, so the q^n monic polynomials of
//   degree n collapse onto q^(n-h-1) interval classes, each hit by q^(h+1)
//   centers A.  With phi sums kept as integers the mean and variance come
//   out as exact rationals.
//
//   Character formula: Var(N_beta) equals
//     (1/phi*_ev(T^(n-h))^2) sum_{chi mod T^(n-h), chi != chi_0 even}
//         | sum_{m=0}^n beta(T^(n-m)) M(m; beta chi) |^2
//   with the inner sum evaluated from each character's L-data.  The two
//   paths agree to float precision; the formula path also exposes the
//   primitive/non-primitive split and the Riemann-hypothesis diagnostics
//   used by the q -> infinity normalization var * q^(h+3) -> 1.

#include <cstdint>
#include <vector>

#include "totvar/charlfun.hpp"
#include "totvar/errors.hpp"
#include "totvar/ffpoly.hpp"
#include "totvar/parallel.hpp"
#include "totvar/rational.hpp"

namespace totvar::variance {

using charlfun::UnitGroupTable;
using ffpoly::FieldCtx;
using ffpoly::Poly;

inline constexpr std::uint64_t kBruteforceBound = 100'000'000ull; // q^n <= 1e8

// Streams phi(f) for monic f of bounded degree: trial division by the
// irreducibles of degree 1 and 2, then the cofactor either is irreducible
// (degree 3..5 with no small factors) or goes to the general factorizer.
class TotientEvaluator {
  public:
    explicit TotientEvaluator(const FieldCtx& ctx) : ctx_(ctx) {
        const std::uint32_t q = ctx.q;
        for (std::uint32_t a = 0; a < q; ++a)
            linear_.push_back({a, 1});
        for (std::uint32_t b = 0; b < q; ++b)
            for (std::uint32_t c = 0; c < q; ++c) {
                bool has_root = false;
                for (std::uint32_t x = 0; x < q && !has_root; ++x)
                    if (ctx.add(ctx.mul(x, ctx.add(x, b)), c) == 0) has_root = true;
                if (!has_root) quadratic_.push_back({c, b, 1});
            }
        qpow_.push_back(1);
        for (int i = 1; i <= 16; ++i) qpow_.push_back(qpow_.back() * q);
    }

    // phi of the monic polynomial with the given coefficients (lowest
    // first); requires q^deg to fit comfortably in uint64.
    std::uint64_t phi(const std::vector<std::uint32_t>& coeffs) {
        buf_.assign(coeffs.begin(), coeffs.end());
        int deg = static_cast<int>(buf_.size()) - 1;
        std::uint64_t phi = 1;
        for (const auto& p : linear_)
            phi *= strip_factor(p, 1, deg);
        if (deg >= 2)
            for (const auto& p : quadratic_) {
                if (deg < 2) break;
                phi *= strip_factor(p, 2, deg);
            }
        if (deg > 0) {
            if (deg <= 5) { // no factors of degree <= 2 left: irreducible
                phi *= qpow_[deg] - 1;
            } else {
                Poly rest(std::vector<std::uint32_t>(buf_.begin(), buf_.begin() + deg + 1));
                auto fac = ffpoly::factorize(ctx_, rest);
                std::uint64_t acc = 1;
                for (const auto& u : fac.factors) {
                    unsigned d = static_cast<unsigned>(u.p.deg());
                    std::uint64_t term = qpow_[d] - 1;
                    for (unsigned e = 1; e < u.mult; ++e) term *= qpow_[d];
                    acc *= term;
                }
                phi *= acc;
            }
        }
        return phi;
    }

  private:
    // Divides out the monic factor p (of degree d) as often as it divides,
    // multiplying in phi(p^mult); updates deg.  Works in buf_ in place.
    std::uint64_t strip_factor(const std::vector<std::uint32_t>& p, int d, int& deg) {
        unsigned mult = 0;
        while (deg >= d && divides(p, d, deg)) ++mult;
        if (mult == 0) return 1;
        std::uint64_t term = qpow_[d] - 1;
        for (unsigned e = 1; e < mult; ++e) term *= qpow_[d];
        return term;
    }

    // One exact-division attempt of buf_[0..deg] by p; on success commits
    // the quotient into buf_ and decreases deg.
    bool divides(const std::vector<std::uint32_t>& p, int d, int& deg) {
        tmp_.assign(buf_.begin(), buf_.begin() + deg + 1);
        for (int i = deg; i >= d; --i) {
            std::uint32_t c = tmp_[i];
            if (c == 0) continue;
            for (int j = 0; j < d; ++j)
                tmp_[i - d + j] = ctx_.sub(tmp_[i - d + j], ctx_.mul(c, p[j]));
        }
        for (int j = 0; j < d; ++j)
            if (tmp_[j] != 0) return false;
        for (int i = d; i <= deg; ++i) buf_[i - d] = tmp_[i];
        deg -= d;
        buf_.resize(deg + 1);
        return true;
    }

    FieldCtx ctx_;
    std::vector<std::vector<std::uint32_t>> linear_;    // monic degree 1
    std::vector<std::vector<std::uint32_t>> quadratic_; // monic irreducible degree 2
    std::vector<std::uint64_t> qpow_;
    std::vector<std::uint32_t> buf_, tmp_;
};

struct BruteforceVariance {
    BigRational mean;     // empirical mean of N_beta over centers A
    BigRational variance; // exact Var(N_beta)
};

inline BruteforceVariance bruteforce_variance(const FieldCtx& ctx, unsigned n, int h) {
    if (n < 2 || h < 0 || h > static_cast<int>(n) - 2)
        throw config_error("need n >= 2 and 0 <= h <= n-2");
    ffpoly::MonicRange range(ctx, n);
    if (range.size() > kBruteforceBound)
        throw bound_error("brute-force enumeration bound q^n <= 1e8 exceeded");

    std::uint64_t class_width = 1; // q^(h+1)
    for (int i = 0; i <= h; ++i) class_width *= ctx.q;
    const std::uint64_t num_classes = range.size() / class_width;

    // Interval classes are independent work units; each chunk owns whole
    // classes, so the exact integer sums merge associatively.
    struct Sums {
        BigInt s1, s2;
    };
    Sums sums = parallel_map_reduce<Sums>(
        0, num_classes, Sums{},
        [&](std::uint64_t cls_lo, std::uint64_t cls_hi) {
            TotientEvaluator eval(ctx);
            std::vector<std::uint32_t> coeffs;
            Sums part;
            for (std::uint64_t cls = cls_lo; cls < cls_hi; ++cls) {
                std::uint64_t class_sum = 0;
                for (std::uint64_t j = 0; j < class_width; ++j) {
                    range.decode(cls * class_width + j, coeffs);
                    class_sum += eval.phi(coeffs);
                }
                BigInt p = bigint_from_u64(class_sum);
                part.s1 += p;
                part.s2 += p * p;
            }
            return part;
        },
        [](Sums& acc, const Sums& part) {
            acc.s1 += part.s1;
            acc.s2 += part.s2;
        },
        512);
    const BigInt& s1 = sums.s1;
    const BigInt& s2 = sums.s2;

    const BigInt K = bigint_from_u64(num_classes);
    const BigInt qn = pow_int(ctx.q, n);
    BruteforceVariance out;
    out.mean = make_rational(s1, K * qn);
    // Var = q^(h+1) (K*S2 - S1^2) / (q^(3n) K)
    BigInt num = pow_int(ctx.q, static_cast<unsigned>(h) + 1) * (K * s2 - s1 * s1);
    BigInt den = qn * qn * qn * K;
    out.variance = make_rational(num, den);
    return out;
}

// Exact rational mean by the intro's centering constant q^h / zeta_q(2).
inline BigRational intro_mean_convention(std::uint32_t q, int h) {
    BigInt qh = pow_int(q, static_cast<unsigned>(h));
    return make_rational(qh * (q - 1), BigInt(q));
}

struct FormulaVariance {
    double var = 0.0;
    double prim_sum_sq = 0.0;    // sum над primitive even of |W(chi)|^2
    double nonprim_sum_sq = 0.0; // same over non-principal non-primitive even
    std::uint64_t count_even = 0;
    std::uint64_t count_primitive_even = 0;
    std::uint64_t count_nonprincipal_even = 0;
    double max_rh_dev_primitive = 0.0; // max ||alpha|-sqrt(q)|/sqrt(q), primitive even
    double max_excess_all = 0.0;       // max (|alpha|-sqrt(q))/sqrt(q), non-principal even
    double sum_lambda_s = 0.0;         // sum_{primitive} |lambda_N|^2 |S_{h+2}|^2
    double max_div_remainder = 0.0;    // max |L(1)| over non-principal even
};

// Evaluates the character-sum variance for intervals of size parameter h
// around monic degree-n polynomials; the table modulus must be T^(n-h).
inline FormulaVariance formula_variance(const UnitGroupTable& tbl, unsigned n) {
    const std::uint32_t m = tbl.m;
    if (m > n) throw config_error("need modulus T^(n-h) with 0 <= h <= n-2");
    const int h = static_cast<int>(n) - static_cast<int>(m);
    const double rq = std::sqrt(double(tbl.ctx.q));

    auto lds = charlfun::l_polynomials_all_even(tbl, n);
    FormulaVariance out;
    out.count_even = tbl.u1_size;
    out.count_nonprincipal_even = tbl.u1_size - 1;
    for (std::uint32_t kap = 1; kap < tbl.u1_size; ++kap) {
        const auto& ld = lds[kap];
        charlfun::cplx w = charlfun::weighted_sum_S_closed(ld, n);
        double w2 = std::norm(w);
        out.max_div_remainder = std::max(out.max_div_remainder, ld.div_remainder);
        for (const auto& a : ld.inverse_zeros)
            out.max_excess_all = std::max(out.max_excess_all, (std::abs(a) - rq) / rq);
        if (ld.primitive) {
            ++out.count_primitive_even;
            out.prim_sum_sq += w2;
            out.max_rh_dev_primitive =
                std::max(out.max_rh_dev_primitive, ld.max_rh_deviation() / rq);
            int N = ld.N();
            double lam = N >= 0 ? std::norm(ld.lambda(static_cast<std::size_t>(N))) : 1.0;
            out.sum_lambda_s += lam * std::norm(ld.S(static_cast<std::size_t>(h) + 2));
        } else {
            out.nonprim_sum_sq += w2;
        }
    }
    // Normalizing by the even-character count q^(m-1); the primitive-even
    // count makes the identity with the brute-force variance fail by
    // (q/(q-1))^2, so the even count is the one the orthogonality step
    // actually produces.
    const double phi_ev = static_cast<double>(tbl.u1_size);
    out.var = (out.prim_sum_sq + out.nonprim_sum_sq) / (phi_ev * phi_ev);
    return out;
}

inline FormulaVariance formula_variance(const FieldCtx& ctx, unsigned n, int h) {
    if (h < 0 || h > static_cast<int>(n) - 2)
        throw config_error("need 0 <= h <= n-2");
    auto tbl = charlfun::build_unit_group(ctx, n - static_cast<unsigned>(h));
    return formula_variance(tbl, n);
}

struct Census {
    std::uint64_t even = 0;
    std::uint64_t primitive_even = 0;
    std::uint64_t nonprincipal_even = 0;
};

struct VarianceReport {
    std::uint32_t q = 0;
    unsigned n = 0;
    int h = 0;
    bool has_bruteforce = false;
    BigRational mean_bruteforce;      // = q^(h+1)(1-1/q) on every grid point
    BigRational mean_intro;           // q^h / zeta_q(2), the intro's constant
    BigRational var_bruteforce;
    double var_formula = 0.0;
    double normalized = 0.0;          // var_formula * q^(h+3)
    Census census;
    double max_rh_violation = 0.0;    // primitive relative RH deviation
    double max_excess_all = 0.0;      // non-principal |alpha| bound excess
    double nonprim_share = 0.0;       // nonprim_sum_sq / prim_sum_sq
    double leading_term_avg = 0.0;    // sum |lambda_N|^2|S_{h+2}|^2 / phi*_ev
    bool katz_hypothesis_ok = true;   // n - h >= 5
};

inline VarianceReport variance_report(const FieldCtx& ctx, unsigned n, int h,
                                      bool with_bruteforce = true) {
    VarianceReport r;
    r.q = ctx.q;
    r.n = n;
    r.h = h;
    r.katz_hypothesis_ok = static_cast<int>(n) - h >= 5;
    r.mean_intro = intro_mean_convention(ctx.q, h);

    auto tbl = charlfun::build_unit_group(ctx, n - static_cast<unsigned>(h));
    auto fv = formula_variance(tbl, n);
    r.var_formula = fv.var;
    double qpow = 1;
    for (int i = 0; i < h + 3; ++i) qpow *= ctx.q;
    r.normalized = fv.var * qpow;
    r.census = {fv.count_even, fv.count_primitive_even, fv.count_nonprincipal_even};
    r.max_rh_violation = fv.max_rh_dev_primitive;
    r.max_excess_all = fv.max_excess_all;
    r.nonprim_share = fv.prim_sum_sq > 0 ? fv.nonprim_sum_sq / fv.prim_sum_sq : 0.0;
    r.leading_term_avg =
        fv.sum_lambda_s / static_cast<double>(charlfun::phi_star_even(ctx.q, tbl.m));

    std::uint64_t qn = 1;
    bool fits = true;
    for (unsigned i = 0; i < n; ++i) {
        qn *= ctx.q;
        if (qn > kBruteforceBound) { fits = false; break; }
    }
    if (with_bruteforce && fits) {
        auto bf = bruteforce_variance(ctx, n, h);
        r.has_bruteforce = true;
        r.mean_bruteforce = bf.mean;
        r.var_bruteforce = bf.variance;
    }
    return r;
}

// The q -> infinity comparison of Theorem th:TH1: normalized variances
// var * q^(h+3) for a list of primes; trends to 1 when n - h >= 5.
inline std::vector<VarianceReport> asymptotic_sweep(const std::vector<std::uint32_t>& primes,
                                                    unsigned n, int h,
                                                    bool with_bruteforce = true) {
    std::vector<VarianceReport> out;
    for (std::uint32_t q : primes)
        out.push_back(variance_report(FieldCtx(q), n, h, with_bruteforce));
    return out;
}

} // namespace totvar::variance
