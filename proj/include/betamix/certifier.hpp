#pragma once

#include "betamix/mixture.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace betamix {

enum class Verdict { Certified, Violated, DegenerateZero };

std::string to_string(Verdict verdict);

/// A triple (x, y, lambda) with f(lambda x + (1-lambda) y) < f(x)^lambda f(y)^(1-lambda).
struct MidpointWitness {
    double x = 0.0;
    double y = 0.0;
    double lambda = 0.0;
    /// ln f at the interpolated point and lambda ln f(x) + (1-lambda) ln f(y).
    double log_mid = 0.0;
    double log_chord = 0.0;
};

struct CertifyOptions {
    int grid_points = 1024;
    double eps = 1e-6;
    double tol = 1e-9;
    int midpoint_checks = 64;
    std::uint64_t seed = 0;
    QuadratureConfig quad{};
};

/// Grid certificate for log-concavity on [eps, 1-eps].
///
/// "certified" means no violation was detected at this resolution: the
/// sharpened margin stayed above -tol at every grid point and every
/// midpoint-definition check passed.
struct ConcavityCertificate {
    Verdict verdict = Verdict::DegenerateZero;
    std::string criterion = "margin_eq10";
    int grid_points = 0;
    double eps = 0.0;
    double tol = 0.0;
    /// Minimum over the grid of the normalized margin.
    double min_margin_eq10 = 0.0;
    /// Maximum over the grid of the second difference of ln f (<= 0 when log-concave).
    double min_logcurv = 0.0;
    /// Whether that maximum stayed within roundoff of zero.
    bool logcurv_ok = true;
    double worst_x = 0.0;
    int midpoint_checks = 0;
    int midpoint_failures = 0;
    std::optional<MidpointWitness> witness;
};

/// Coefficients of ((M-1)/M) g'^2 - g g'' for a discrete mixture, as a
/// Bernstein-form polynomial of degree 2M-2 in x. Evaluating it never
/// subtracts two large derivative values, so its sign survives near the
/// endpoints where g'/g grows like 1/x.
class CurvaturePolynomial {
public:
    explicit CurvaturePolynomial(const DiscreteMixture& mix);

    long double operator()(long double x) const;
    std::span<const long double> bernstein_coefficients() const { return coeffs_; }

private:
    std::vector<long double> coeffs_;
};

/// [((M-1)/M) f'(x)^2 - f(x) f''(x)] / max(f(x)^2, 1e-300).
double margin_eq10(const Mixture& mix, double x, const QuadratureConfig& quad = {});

/// The same quantity from an evaluation: -(ln f)'' - ((ln f)')^2 / M.
double margin_from_derivs(const EvalResult& r, double order);

/// Grid points eps + (1 - 2 eps) k / (n - 1), k = 0..n-1.
std::vector<double> certification_grid(int grid_points, double eps);

ConcavityCertificate certify(const Mixture& mix, const CertifyOptions& options = {});

/// max over the grid of |margin_eq10| for weights r^i, i = 0..M.
double sharpness_check(int order, double ratio, int grid_points = 1024, double eps = 1e-6);

/// d^2/dx^2 ln[(M choose s) (1-x)^s x^(M-s)] = -s/(1-x)^2 - (M-s)/x^2.
double kernel_log_curvature(double order, double index, double x);

/// Some x in (0,1) where the kernel is log-convex, for s in (-1,0) or (M, M+1);
/// empty for s in [0, M]. Throws std::domain_error outside (-1, M+1).
std::optional<double> find_kernel_failure(double order, double index);

} // namespace betamix
