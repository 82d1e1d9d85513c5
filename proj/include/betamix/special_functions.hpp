#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace betamix {

using BigInt = boost::multiprecision::cpp_int;

/// ln Gamma(x) for x > 0. Throws std::domain_error otherwise.
double log_gamma(double x);

/// Generalized binomial coefficient Gamma(M+1) / (Gamma(s+1) Gamma(M-s+1)),
/// computed in log space. Requires -1 < s < M+1, where it is strictly
/// positive; throws std::domain_error outside that range.
double gen_binom(double order, double index);
double log_gen_binom(double order, double index);

/// A real number stored as sign * exp(log_abs). sign == 0 encodes zero.
struct SignedLog {
    double log_abs;
    int sign;

    double value() const;
};

/// The generalized binomial continued in the index through the entire function
/// 1/Gamma: Gamma(N+1) * rgamma(s+1) * rgamma(N-s+1). Defined for every real s
/// when N > -1; vanishes at s = -1, -2, ... and at s = N+1, N+2, ..., and changes
/// sign outside (-1, N+1). Agrees with gen_binom on its domain.
SignedLog gen_binom_entire(double order, double index);

/// Exact integer binomial; zero when i < 0 or i > M (including any M < 0).
BigInt int_binom_exact(long long M, long long i);

/// Same convention as int_binom_exact, returned as a double.
double int_binom(long long M, long long i);

} // namespace betamix
