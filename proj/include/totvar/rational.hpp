#pragma once

// Exact arbitrary-precision rationals, backed by GMP.  BigRational values
// are always canonical (reduced, positive denominator); that is gmpxx's
// own invariant for mpq_class.

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace totvar {

using BigInt = mpz_class;
using BigRational = mpq_class;

inline BigRational make_rational(long num, unsigned long den) {
    BigRational r(num, den);
    r.canonicalize();
    return r;
}

inline BigRational make_rational(const BigInt& num, const BigInt& den) {
    BigRational r(num, den);
    r.canonicalize();
    return r;
}

inline BigInt pow_int(std::uint64_t base, unsigned exp) {
    BigInt b;
    mpz_import(b.get_mpz_t(), 1, 1, sizeof(base), 0, 0, &base);
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), exp);
    return r;
}

inline BigInt bigint_from_u64(std::uint64_t v) {
    BigInt b;
    mpz_import(b.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return b;
}

inline std::string to_string(const BigRational& r) {
    return r.get_str();
}

} // namespace totvar
