#include "betamix/special_functions.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace betamix {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// log|1/Gamma(z)| and its sign; sign 0 at the poles of Gamma.
SignedLog log_rgamma(double z)
{
    if (z <= 0.0 && z == std::floor(z))
        return {neg_inf, 0};
    int sign = 1;
    const double lg = boost::math::lgamma(z, &sign);
    return {-lg, sign};
}

} // namespace

double SignedLog::value() const
{
    return sign == 0 ? 0.0 : sign * std::exp(log_abs);
}

double log_gamma(double x)
{
    if (!(x > 0.0))
        throw std::domain_error("log_gamma: argument must be positive, got " + std::to_string(x));
    if (std::isinf(x))
        return x;
    return boost::math::lgamma(x);
}

double log_gen_binom(double order, double index)
{
    if (!(index > -1.0 && index < order + 1.0))
        throw std::domain_error("gen_binom: index " + std::to_string(index) + " outside (-1, "
                                + std::to_string(order + 1.0) + ")");
    return log_gamma(order + 1.0) - log_gamma(index + 1.0) - log_gamma(order - index + 1.0);
}

double gen_binom(double order, double index)
{
    return std::exp(log_gen_binom(order, index));
}

SignedLog gen_binom_entire(double order, double index)
{
    if (!(order > -1.0))
        throw std::domain_error("gen_binom_entire: order must exceed -1");
    if (index > -1.0 && index < order + 1.0)
        return {log_gen_binom(order, index), 1};
    const SignedLog left = log_rgamma(index + 1.0);
    const SignedLog right = log_rgamma(order - index + 1.0);
    if (left.sign == 0 || right.sign == 0)
        return {neg_inf, 0};
    return {log_gamma(order + 1.0) + left.log_abs + right.log_abs, left.sign * right.sign};
}

BigInt int_binom_exact(long long M, long long i)
{
    if (M < 0 || i < 0 || i > M)
        return 0;
    if (i > M - i)
        i = M - i;
    BigInt result = 1;
    // Each partial product is C(M-i+j, j), hence integral.
    for (long long j = 1; j <= i; ++j) {
        result *= M - i + j;
        result /= j;
    }
    return result;
}

double int_binom(long long M, long long i)
{
    if (M < 0 || i < 0 || i > M)
        return 0.0;
    return int_binom_exact(M, i).convert_to<double>();
}

} // namespace betamix
