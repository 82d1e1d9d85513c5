#pragma once

#include "betamix/quadrature.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

namespace betamix {

/// Raised by operations that need a mixture which is not identically zero.
class DegenerateMixtureError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// g(x) = sum_i w_i (M choose i) (1-x)^i x^(M-i), i = 0..M.
///
/// Each term is (1/(M+1)) times the Beta(M-i+1, i+1) density, so the index
/// runs opposite to the usual Bernstein basis in x: g(0) = w_M, g(1) = w_0.
class DiscreteMixture {
public:
    /// Order is weights.size() - 1, which must be at least 1.
    explicit DiscreteMixture(std::vector<double> weights);
    /// Checks weights.size() == order + 1.
    DiscreteMixture(int order, std::vector<double> weights);

    int order() const { return static_cast<int>(weights_.size()) - 1; }
    std::span<const double> weights() const { return weights_; }
    bool is_zero() const;
    DiscreteMixture reversed() const;

private:
    std::vector<double> weights_;
};

/// f(x) = integral_0^M alpha(s) (M choose s) (1-x)^s x^(M-s) ds with
/// alpha = exp(l), l piecewise linear on the knots. A knot value of -inf
/// zeroes alpha on both adjacent segments; alpha is zero outside [0, M].
class ContinuousMixture {
public:
    ContinuousMixture(double order, std::vector<double> knots, std::vector<double> log_alpha);

    /// alpha = exp(log_value) on [0, M].
    static ContinuousMixture constant(double order, double log_value = 0.0);

    double order() const { return order_; }
    std::span<const double> knots() const { return knots_; }
    std::span<const double> log_alpha() const { return log_alpha_; }

    /// l(s); -inf outside [0, M] and on zeroed segments.
    double log_alpha_at(double s) const;
    /// l on the segment containing `branch`, extended to its closed ends so
    /// that panel-end evaluations take the one-sided limit from inside.
    double log_alpha_branch(double s, double branch) const;

    bool is_zero() const;
    /// integral_0^M alpha(s) ds, in closed form.
    double mass() const;

private:
    double order_;
    std::vector<double> knots_;
    std::vector<double> log_alpha_;
};

using Mixture = std::variant<DiscreteMixture, ContinuousMixture>;

double mixture_order(const Mixture& mix);
bool is_zero(const Mixture& mix);

/// Density and derivatives at one point. log_d1 = f'/f and
/// log_d2 = (f f'' - f'^2) / f^2; the log fields are computed from internally
/// rescaled values and stay finite where f itself underflows.
struct EvalResult {
    double x = 0.0;
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double log_value = 0.0;
    double log_d1 = 0.0;
    double log_d2 = 0.0;
};

/// Log-concavity of a weight sequence: nonnegative, no interior zeros, and
/// 2 ln w_i >= ln w_{i-1} + ln w_{i+1} - log_tol on the support.
bool is_log_concave_weights(std::span<const double> weights, double log_tol = 1e-10);
/// Concavity of the finite knot values (slopes nonincreasing) on a contiguous support.
bool is_log_concave(const ContinuousMixture& mix, double slope_tol = 1e-12);

/// Bernstein-form evaluation sum_j c_j (n choose j) x^j (1-x)^(n-j) by
/// de Casteljau's algorithm.
long double de_casteljau(std::span<const long double> coeffs, long double x);

double eval_density_discrete(const DiscreteMixture& mix, double x);
EvalResult eval_derivs_discrete(const DiscreteMixture& mix, double x);

/// Quadrature tables for one continuous mixture. Everything that does not
/// depend on x (mixing function, binomial kernels, quadrature weights) is
/// folded into per-node log magnitudes at construction.
class ContinuousEvaluator {
public:
    explicit ContinuousEvaluator(const ContinuousMixture& mix, QuadratureConfig config = {});

    const ContinuousMixture& mixture() const { return mix_; }
    double density(double x) const;
    /// Density without the refinement check; used for tabulation.
    double density_unchecked(double x) const;
    double log_density(double x) const;
    EvalResult derivs(double x) const;

    struct Table {
        double order = 0.0;
        std::vector<double> s;
        std::vector<double> log_mag;
        std::vector<signed char> sign;
    };

private:
    ContinuousMixture mix_;
    QuadratureConfig config_;
    Table density_fine_, density_coarse_;
    Table d1_fine_, d1_coarse_;
    Table d2_fine_, d2_coarse_;
};

double eval_density_continuous(const ContinuousMixture& mix, double x, const QuadratureConfig& quad = {});
EvalResult eval_derivs_continuous(const ContinuousMixture& mix, double x, const QuadratureConfig& quad = {});

/// Uniform front end over both mixture kinds.
class MixtureEvaluator {
public:
    explicit MixtureEvaluator(const Mixture& mix, QuadratureConfig config = {});

    const Mixture& mixture() const { return mix_; }
    double order() const { return mixture_order(mix_); }
    bool is_zero() const { return zero_; }
    double density(double x) const;
    double log_density(double x) const;
    EvalResult derivs(double x) const;

private:
    Mixture mix_;
    bool zero_;
    std::vector<long double> coeffs_;
    std::vector<long double> diff1_;
    std::vector<long double> diff2_;
    std::variant<std::monostate, ContinuousEvaluator> continuous_;
};

/// integral_0^1 density = (sum of weights) / (M+1) for discrete mixtures and
/// (integral alpha) / (M+1) for continuous ones.
double normalization(const Mixture& mix);

/// integral_0^x density.
double cdf(const Mixture& mix, double x, const QuadratureConfig& quad = {});

/// Unnormalized CDF on the uniform grid k / grid_points, k = 0..grid_points.
std::vector<double> tabulate_cdf(const Mixture& mix, int grid_points, const QuadratureConfig& quad = {});

/// Inverse-CDF draws in (0, 1) from the tabulated CDF with linear interpolation.
std::vector<double> sample(const Mixture& mix, std::size_t count, std::uint64_t seed, int grid_points = 4096,
                           const QuadratureConfig& quad = {});

} // namespace betamix
