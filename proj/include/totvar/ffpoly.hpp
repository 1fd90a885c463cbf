#pragma once

// Arithmetic over F_q[T] for prime q: dense polynomials, factorization
// (squarefree decomposition + distinct-degree + equal-degree splitting),
// the polynomial totient phi(f) = #(F_q[T]/f)^x with its normalized form
// beta(f) = phi(f)/||f||, monic enumeration, short intervals
// I(A;h) = { f : ||f - A|| <= q^h }, and the reversal map
// f*(T) = T^deg(f) f(1/T).
//
// Polynomials are coefficient vectors (lowest degree first) with no
// trailing zeros; the zero polynomial is the empty vector.  All operations
// are pure; equal-degree splitting draws from a fixed-seed PRNG so
// factorizations are reproducible.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "totvar/errors.hpp"
#include "totvar/rational.hpp"

namespace totvar::ffpoly {

class Poly {
  public:
    Poly() = default;
    explicit Poly(std::vector<std::uint32_t> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly constant(std::uint32_t v) {
        return v == 0 ? Poly() : Poly(std::vector<std::uint32_t>{v});
    }

    bool is_zero() const { return c_.empty(); }
    int deg() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero
    std::uint32_t coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
    std::uint32_t leading() const { return c_.empty() ? 0 : c_.back(); }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }
    const std::vector<std::uint32_t>& coeffs() const { return c_; }

    friend bool operator==(const Poly&, const Poly&) = default;

    // Degree-then-coefficient order; used only to make factor lists and
    // enumeration output deterministic.
    friend bool operator<(const Poly& a, const Poly& b) {
        if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size();
        for (std::size_t i = a.c_.size(); i-- > 0;)
            if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
        return false;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<std::uint32_t> c_;
};

struct FieldCtx {
    std::uint32_t q;

    explicit FieldCtx(std::uint32_t q_) : q(q_) {
        if (q < 2 || q > (1u << 31) - 1) throw config_error("field size out of range");
        if (!is_prime(q)) throw config_error("field size must be prime");
    }

    static bool is_prime(std::uint32_t n) {
        if (n < 2) return false;
        for (std::uint64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
        std::uint32_t s = a + b;
        return s >= q ? s - q : s;
    }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const {
        return a >= b ? a - b : a + q - b;
    }
    std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : q - a; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        return static_cast<std::uint32_t>((std::uint64_t(a) * b) % q);
    }
    std::uint32_t pow(std::uint32_t a, std::uint64_t e) const {
        std::uint32_t r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    std::uint32_t inv(std::uint32_t a) const {
        if (a == 0) throw config_error("division by zero residue");
        return pow(a, q - 2);
    }

    Poly add(const Poly& a, const Poly& b) const {
        std::vector<std::uint32_t> c(std::max(a.coeffs().size(), b.coeffs().size()));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = add(a.coeff(i), b.coeff(i));
        return Poly(std::move(c));
    }
    Poly sub(const Poly& a, const Poly& b) const {
        std::vector<std::uint32_t> c(std::max(a.coeffs().size(), b.coeffs().size()));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = sub(a.coeff(i), b.coeff(i));
        return Poly(std::move(c));
    }
    Poly mul(const Poly& a, const Poly& b) const {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<std::uint32_t> c(a.coeffs().size() + b.coeffs().size() - 1, 0);
        for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
            if (a.coeff(i) == 0) continue;
            for (std::size_t j = 0; j < b.coeffs().size(); ++j)
                c[i + j] = add(c[i + j], mul(a.coeff(i), b.coeff(j)));
        }
        return Poly(std::move(c));
    }
    Poly scale(const Poly& a, std::uint32_t s) const {
        std::vector<std::uint32_t> c(a.coeffs());
        for (auto& x : c) x = mul(x, s);
        return Poly(std::move(c));
    }

    // Quotient and remainder with deg(rem) < deg(b).
    std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) const {
        if (b.is_zero()) throw config_error("polynomial division by zero");
        if (a.deg() < b.deg()) return {Poly(), a};
        std::vector<std::uint32_t> r(a.coeffs());
        std::vector<std::uint32_t> qc(a.deg() - b.deg() + 1, 0);
        const std::uint32_t lead_inv = inv(b.leading());
        for (int i = a.deg(); i >= b.deg(); --i) {
            std::uint32_t c = mul(r[i], lead_inv);
            if (c == 0) continue;
            qc[i - b.deg()] = c;
            for (int j = 0; j <= b.deg(); ++j)
                r[i - b.deg() + j] = sub(r[i - b.deg() + j], mul(c, b.coeff(j)));
        }
        return {Poly(std::move(qc)), Poly(std::move(r))};
    }
    Poly mod(const Poly& a, const Poly& b) const { return divrem(a, b).second; }

    Poly monicize(const Poly& a) const {
        if (a.is_zero()) return a;
        return a.leading() == 1 ? a : scale(a, inv(a.leading()));
    }

    // Monic gcd.
    Poly gcd(Poly a, Poly b) const {
        while (!b.is_zero()) {
            Poly r = mod(a, b);
            a = std::move(b);
            b = std::move(r);
        }
        return monicize(a);
    }

    Poly derivative(const Poly& a) const {
        if (a.deg() < 1) return Poly();
        std::vector<std::uint32_t> c(a.deg());
        for (int i = 1; i <= a.deg(); ++i)
            c[i - 1] = mul(a.coeff(i), static_cast<std::uint32_t>(i % q));
        return Poly(std::move(c));
    }

    Poly mul_mod(const Poly& a, const Poly& b, const Poly& m) const {
        return mod(mul(a, b), m);
    }

    Poly pow_mod(Poly base, const BigInt& e, const Poly& m) const {
        Poly r = Poly::constant(1);
        base = mod(base, m);
        std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
        if (e == 0) return mod(r, m);
        for (std::size_t i = bits; i-- > 0;) {
            r = mul_mod(r, r, m);
            if (mpz_tstbit(e.get_mpz_t(), i)) r = mul_mod(r, base, m);
        }
        return r;
    }

    std::uint32_t eval(const Poly& a, std::uint32_t x) const {
        std::uint32_t r = 0;
        for (std::size_t i = a.coeffs().size(); i-- > 0;) r = add(mul(r, x), a.coeff(i));
        return r;
    }
};

// --- factorization -------------------------------------------------------

struct FactorUnit {
    Poly p;        // monic irreducible
    unsigned mult; // multiplicity
};

struct Factorization {
    std::uint32_t unit = 1;          // leading coefficient of the input
    std::vector<FactorUnit> factors; // sorted, pairwise distinct
};

namespace detail {

// Fixed seed keeps equal-degree splitting reproducible run to run.
constexpr std::uint64_t kFactorSeed = 0x9e3779b97f4a7c15ull;

struct SplitMix64 {
    std::uint64_t s;
    std::uint64_t next() {
        std::uint64_t z = (s += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
};

inline Poly random_poly(const FieldCtx& ctx, SplitMix64& rng, int max_deg) {
    std::vector<std::uint32_t> c(static_cast<std::size_t>(max_deg) + 1);
    for (auto& x : c) x = static_cast<std::uint32_t>(rng.next() % ctx.q);
    return Poly(std::move(c));
}

// p-th root of g(T) = h(T^p); over the prime field the coefficient map is
// the identity (a^p = a), so h_i = g_{i p}.
inline Poly pth_root(const FieldCtx& ctx, const Poly& g) {
    std::vector<std::uint32_t> h(static_cast<std::size_t>(g.deg() / ctx.q) + 1);
    for (std::size_t i = 0; i < h.size(); ++i)
        h[i] = g.coeff(i * ctx.q);
    return Poly(std::move(h));
}

// Squarefree decomposition in characteristic p: emits pairwise coprime
// squarefree polynomials with their multiplicities.
inline void squarefree_decompose(const FieldCtx& ctx, const Poly& f, unsigned scale,
                                 std::vector<std::pair<Poly, unsigned>>& out) {
    if (f.deg() < 1) return;
    Poly d = ctx.derivative(f);
    if (d.is_zero()) {
        squarefree_decompose(ctx, pth_root(ctx, f), scale * ctx.q, out);
        return;
    }
    Poly c = ctx.gcd(f, d);
    Poly w = ctx.divrem(f, c).first; // product of factors with p∤multiplicity, each once
    unsigned i = 1;
    while (w.deg() > 0) {
        Poly y = ctx.gcd(w, c);
        Poly z = ctx.divrem(w, y).first; // factors of multiplicity exactly i
        if (z.deg() > 0) out.emplace_back(ctx.monicize(z), i * scale);
        w = std::move(y);
        c = ctx.divrem(c, w).first;
        ++i;
    }
    if (c.deg() > 0) // remaining p-th power part
        squarefree_decompose(ctx, pth_root(ctx, c), scale * ctx.q, out);
}

// Equal-degree splitting of a squarefree v all of whose irreducible
// factors have degree d.
inline void equal_degree_split(const FieldCtx& ctx, const Poly& v, int d,
                               SplitMix64& rng, std::vector<Poly>& out) {
    if (v.deg() == d) {
        out.push_back(v);
        return;
    }
    const BigInt qd = pow_int(ctx.q, static_cast<unsigned>(d));
    for (;;) {
        Poly r = random_poly(ctx, rng, v.deg() - 1);
        if (r.deg() < 1) continue;
        Poly g = ctx.gcd(r, v);
        if (g.deg() == 0) {
            if (ctx.q == 2) {
                // trace map sum r^(2^i), i < d
                Poly s;
                Poly t = ctx.mod(r, v);
                for (int i = 0; i < d; ++i) {
                    s = ctx.add(s, t);
                    t = ctx.mul_mod(t, t, v);
                }
                g = ctx.gcd(s, v);
            } else {
                BigInt e = (qd - 1) / 2;
                Poly s = ctx.pow_mod(r, e, v);
                s = ctx.sub(s, Poly::constant(1));
                g = ctx.gcd(s, v);
            }
        }
        if (g.deg() > 0 && g.deg() < v.deg()) {
            equal_degree_split(ctx, g, d, rng, out);
            equal_degree_split(ctx, ctx.divrem(v, g).first, d, rng, out);
            return;
        }
    }
}

} // namespace detail

inline Factorization factorize(const FieldCtx& ctx, const Poly& f) {
    if (f.is_zero()) throw config_error("cannot factor the zero polynomial");
    Factorization out;
    out.unit = f.leading();
    if (f.deg() == 0) return out;

    std::vector<std::pair<Poly, unsigned>> sqf;
    detail::squarefree_decompose(ctx, ctx.monicize(f), 1, sqf);

    detail::SplitMix64 rng{detail::kFactorSeed};
    for (auto& [part, mult] : sqf) {
        // distinct-degree splitting of the squarefree part
        Poly g = part;
        Poly h = ctx.mod(Poly({0, 1}), g); // T mod g
        const BigInt qz(static_cast<unsigned long>(ctx.q));
        for (int d = 1; g.deg() > 0 && 2 * d <= g.deg(); ++d) {
            h = ctx.pow_mod(h, qz, g);
            Poly diff = ctx.sub(h, Poly({0, 1}));
            Poly gd = ctx.gcd(diff, g);
            if (gd.deg() > 0) {
                std::vector<Poly> irred;
                detail::equal_degree_split(ctx, gd, d, rng, irred);
                for (auto& p : irred) out.factors.push_back({p, mult});
                g = ctx.divrem(g, gd).first;
                h = ctx.mod(h, g);
            }
        }
        if (g.deg() > 0) out.factors.push_back({g, mult});
    }
    std::sort(out.factors.begin(), out.factors.end(),
              [](const FactorUnit& a, const FactorUnit& b) { return a.p < b.p; });
    return out;
}

// --- norms and the totient -----------------------------------------------

// ||f|| = q^deg(f) = #(F_q[T]/(f)).
inline BigInt norm(const FieldCtx& ctx, const Poly& f) {
    if (f.is_zero()) throw config_error("norm of the zero polynomial");
    return pow_int(ctx.q, static_cast<unsigned>(f.deg()));
}

inline BigInt totient_from_factors(const FieldCtx& ctx, const Factorization& fac) {
    BigInt phi(1);
    for (const auto& u : fac.factors) {
        unsigned d = static_cast<unsigned>(u.p.deg());
        BigInt qd = pow_int(ctx.q, d);
        BigInt term = qd - 1;
        if (u.mult > 1) term *= pow_int(ctx.q, d * (u.mult - 1));
        phi *= term;
    }
    return phi;
}

// phi(f) = ||f|| prod_{P | f} (1 - 1/||P||); phi(unit) = 1.
inline BigInt totient(const FieldCtx& ctx, const Poly& f) {
    if (f.is_zero()) throw config_error("totient of the zero polynomial");
    return totient_from_factors(ctx, factorize(ctx, f));
}

// beta(f) = phi(f)/||f|| as an exact rational.
inline BigRational beta(const FieldCtx& ctx, const Poly& f) {
    return make_rational(totient(ctx, f), norm(ctx, f));
}

// Polynomial Moebius function: (-1)^k on squarefree with k factors, else 0.
inline int mobius_poly(const FieldCtx& ctx, const Poly& f) {
    if (f.is_zero()) throw config_error("mobius of the zero polynomial");
    auto fac = factorize(ctx, f);
    for (const auto& u : fac.factors)
        if (u.mult > 1) return 0;
    return fac.factors.size() % 2 == 0 ? 1 : -1;
}

// All monic divisors of f (enumeration-scale inputs only).
inline std::vector<Poly> monic_divisors(const FieldCtx& ctx, const Poly& f) {
    auto fac = factorize(ctx, f);
    std::vector<Poly> divs{Poly::constant(1)};
    for (const auto& u : fac.factors) {
        std::vector<Poly> next;
        next.reserve(divs.size() * (u.mult + 1));
        Poly pk = Poly::constant(1);
        for (unsigned e = 0; e <= u.mult; ++e) {
            for (const auto& d : divs) next.push_back(ctx.mul(d, pk));
            if (e < u.mult) pk = ctx.mul(pk, u.p);
        }
        divs = std::move(next);
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

// Verifies ||f|| = sum_{g|f} phi(g) and phi(f) = sum_{g|f} mu(g) ||f/g||
// by explicit divisor enumeration.
inline bool totient_divisor_sum_check(const FieldCtx& ctx, const Poly& f) {
    if (f.is_zero()) throw config_error("zero polynomial");
    Poly fm = ctx.monicize(f);
    auto divs = monic_divisors(ctx, fm);
    BigInt phi_sum(0), conv(0);
    for (const auto& g : divs) {
        phi_sum += totient(ctx, g);
        Poly cof = ctx.divrem(fm, g).first;
        conv += mobius_poly(ctx, g) * norm(ctx, cof);
    }
    BigInt nf = fm.deg() == 0 ? BigInt(1) : norm(ctx, fm);
    return phi_sum == nf && conv == totient(ctx, fm);
}

// f*(T) = T^deg(f) f(1/T): coefficient reversal.  Defined for f(0) != 0,
// where it is an involution and preserves beta.
inline Poly reversal(const Poly& f) {
    if (f.is_zero() || f.coeff(0) == 0)
        throw config_error("reversal needs f(0) != 0");
    std::vector<std::uint32_t> c(f.coeffs().rbegin(), f.coeffs().rend());
    return Poly(std::move(c));
}

// --- enumeration ----------------------------------------------------------

// Monic polynomials of degree n, indexed 0..q^n-1; index digits in base q
// are the coefficients, constant term varying fastest.
class MonicRange {
  public:
    MonicRange(const FieldCtx& ctx, unsigned n) : q_(ctx.q), n_(n) {
        size_ = 1;
        for (unsigned i = 0; i < n; ++i) {
            if (size_ > (std::uint64_t(1) << 62) / q_)
                throw bound_error("monic enumeration range exceeds 2^62");
            size_ *= q_;
        }
    }

    std::uint64_t size() const { return size_; }
    unsigned degree() const { return n_; }

    void decode(std::uint64_t idx, std::vector<std::uint32_t>& c) const {
        c.assign(n_ + 1, 0);
        c[n_] = 1;
        for (unsigned i = 0; i < n_; ++i) {
            c[i] = static_cast<std::uint32_t>(idx % q_);
            idx /= q_;
        }
    }

    Poly at(std::uint64_t idx) const {
        std::vector<std::uint32_t> c;
        decode(idx, c);
        return Poly(std::move(c));
    }

  private:
    std::uint32_t q_;
    unsigned n_;
    std::uint64_t size_;
};

// Short interval I(A;h) = { A + g : deg g <= h }, of size q^(h+1).
class IntervalRange {
  public:
    IntervalRange(const FieldCtx& ctx, Poly A, int h) : ctx_(ctx), a_(std::move(A)), h_(h) {
        if (!a_.is_monic()) throw config_error("interval center must be monic");
        if (h < 0 || h > a_.deg() - 2) throw config_error("interval exponent h out of range");
        size_ = 1;
        for (int i = 0; i <= h; ++i) size_ *= ctx_.q;
    }

    std::uint64_t size() const { return size_; }

    Poly at(std::uint64_t idx) const {
        std::vector<std::uint32_t> g(static_cast<std::size_t>(h_) + 1, 0);
        for (int i = 0; i <= h_; ++i) {
            g[i] = static_cast<std::uint32_t>(idx % ctx_.q);
            idx /= ctx_.q;
        }
        return ctx_.add(a_, Poly(std::move(g)));
    }

    // Coefficients of the center above degree h identify the interval.
    std::vector<std::uint32_t> key() const {
        std::vector<std::uint32_t> k;
        for (int i = h_ + 1; i <= a_.deg(); ++i) k.push_back(a_.coeff(i));
        return k;
    }

  private:
    const FieldCtx& ctx_;
    Poly a_;
    int h_;
    std::uint64_t size_;
};

// --- text format ----------------------------------------------------------

// "c0+c1*T+...+T^n" with coefficients reduced mod q; zero terms omitted,
// the zero polynomial prints as "0".
inline std::string to_string(const Poly& f) {
    if (f.is_zero()) return "0";
    std::string s;
    for (int i = 0; i <= f.deg(); ++i) {
        std::uint32_t c = f.coeff(i);
        if (c == 0) continue;
        if (!s.empty()) s += '+';
        if (i == 0) {
            s += std::to_string(c);
        } else {
            if (c != 1) {
                s += std::to_string(c);
                s += '*';
            }
            s += 'T';
            if (i > 1) {
                s += '^';
                s += std::to_string(i);
            }
        }
    }
    return s;
}

inline Poly parse_poly(const FieldCtx& ctx, const std::string& text) {
    std::vector<std::uint32_t> coeffs;
    std::size_t pos = 0;
    auto fail = [&]() { throw config_error("bad polynomial literal: " + text); };
    if (text.empty()) fail();
    while (pos < text.size()) {
        std::size_t end = text.find('+', pos);
        if (end == std::string::npos) end = text.size();
        std::string term = text.substr(pos, end - pos);
        pos = end + 1;
        if (term.empty()) fail();
        std::uint64_t c = 1;
        std::size_t deg = 0;
        std::size_t tpos = term.find('T');
        if (tpos == std::string::npos) {
            c = std::strtoull(term.c_str(), nullptr, 10);
            deg = 0;
        } else {
            if (tpos > 0) {
                std::string cs = term.substr(0, tpos);
                if (!cs.empty() && cs.back() == '*') cs.pop_back();
                if (!cs.empty()) c = std::strtoull(cs.c_str(), nullptr, 10);
            }
            deg = 1;
            if (tpos + 1 < term.size()) {
                if (term[tpos + 1] != '^') fail();
                deg = std::strtoull(term.c_str() + tpos + 2, nullptr, 10);
            }
        }
        if (deg >= coeffs.size()) coeffs.resize(deg + 1, 0);
        coeffs[deg] = static_cast<std::uint32_t>((coeffs[deg] + c) % ctx.q);
    }
    return Poly(std::move(coeffs));
}

} // namespace totvar::ffpoly
