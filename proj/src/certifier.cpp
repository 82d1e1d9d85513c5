#include "betamix/certifier.hpp"

#include "betamix/random.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <string>

namespace betamix {

namespace {

constexpr long double margin_floor = 1e-300L;

// Row M of Pascal's triangle in long double.
std::vector<long double> pascal_row(int n)
{
    std::vector<long double> row(static_cast<std::size_t>(std::max(n, 0)) + 1, 1.0L);
    for (int k = 1; k < n; ++k)
        row[k] = row[k - 1] * (n - k + 1) / k;
    return row;
}

} // namespace

std::string to_string(Verdict verdict)
{
    switch (verdict) {
    case Verdict::Certified:
        return "certified";
    case Verdict::Violated:
        return "violated";
    case Verdict::DegenerateZero:
        return "degenerate-zero";
    }
    return "unknown";
}

CurvaturePolynomial::CurvaturePolynomial(const DiscreteMixture& mix)
{
    const int m = mix.order();
    if (m < 2) {
        // (M-1)/M = 0 and g'' = 0.
        coeffs_ = {0.0L};
        return;
    }
    auto w = mix.weights();
    std::vector<long double> c(w.rbegin(), w.rend());
    std::vector<long double> d1(m), d2(m - 1);
    for (int j = 0; j < m; ++j)
        d1[j] = c[j + 1] - c[j];
    for (int j = 0; j + 1 < m; ++j)
        d2[j] = d1[j + 1] - d1[j];

    const auto row_m = pascal_row(m);
    const auto row_m1 = pascal_row(m - 1);
    const auto row_m2 = pascal_row(m - 2);
    const auto row_top = pascal_row(2 * m - 2);
    const long double scale = static_cast<long double>(m) * (m - 1);

    coeffs_.assign(2 * m - 1, 0.0L);
    for (int k = 0; k <= 2 * m - 2; ++k) {
        long double sum = 0.0L;
        for (int i = std::max(0, k - (m - 1)); i <= std::min(m - 1, k); ++i)
            sum += row_m1[i] * row_m1[k - i] * d1[i] * d1[k - i];
        for (int i = std::max(0, k - (m - 2)); i <= std::min(m, k); ++i)
            sum -= row_m[i] * row_m2[k - i] * c[i] * d2[k - i];
        coeffs_[k] = scale * sum / row_top[k];
    }
}

long double CurvaturePolynomial::operator()(long double x) const
{
    return de_casteljau(coeffs_, x);
}

double margin_from_derivs(const EvalResult& r, double order)
{
    if (!(r.value > 0.0) && r.log_value == -std::numeric_limits<double>::infinity())
        return 0.0;
    return -r.log_d2 - r.log_d1 * r.log_d1 / order;
}

namespace {

// Margin evaluation with per-mixture precomputation.
class MarginEvaluator {
public:
    MarginEvaluator(const Mixture& mix, const QuadratureConfig& quad) : evaluator_(mix, quad)
    {
        if (const auto* d = std::get_if<DiscreteMixture>(&mix)) {
            polynomial_.emplace(*d);
            auto w = d->weights();
            coeffs_.assign(w.rbegin(), w.rend());
        }
    }

    double margin(double x) const
    {
        if (polynomial_) {
            const long double g = de_casteljau(coeffs_, x);
            return static_cast<double>((*polynomial_)(x) / std::max(g * g, margin_floor));
        }
        return margin_from_derivs(evaluator_.derivs(x), evaluator_.order());
    }

    const MixtureEvaluator& evaluator() const { return evaluator_; }

private:
    MixtureEvaluator evaluator_;
    std::optional<CurvaturePolynomial> polynomial_;
    std::vector<long double> coeffs_;
};

} // namespace

double margin_eq10(const Mixture& mix, double x, const QuadratureConfig& quad)
{
    if (!(x > 0.0 && x < 1.0))
        throw std::domain_error("margin_eq10: x must lie in (0, 1)");
    return MarginEvaluator(mix, quad).margin(x);
}

std::vector<double> certification_grid(int grid_points, double eps)
{
    if (grid_points < 1)
        throw std::invalid_argument("grid_points must be positive");
    if (!(eps > 0.0 && eps < 0.5))
        throw std::invalid_argument("eps must lie in (0, 0.5)");
    if (grid_points == 1)
        return {0.5};
    std::vector<double> grid(grid_points);
    for (int k = 0; k < grid_points; ++k)
        grid[k] = eps + (1.0 - 2.0 * eps) * k / (grid_points - 1);
    return grid;
}

ConcavityCertificate certify(const Mixture& mix, const CertifyOptions& options)
{
    ConcavityCertificate cert;
    cert.grid_points = options.grid_points;
    cert.eps = options.eps;
    cert.tol = options.tol;
    const auto grid = certification_grid(options.grid_points, options.eps);
    if (is_zero(mix)) {
        cert.verdict = Verdict::DegenerateZero;
        return cert;
    }

    const MarginEvaluator margins(mix, options.quad);
    const MixtureEvaluator& ev = margins.evaluator();

    std::vector<double> log_f(grid.size());
    cert.min_margin_eq10 = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double m = margins.margin(grid[k]);
        if (m < cert.min_margin_eq10) {
            cert.min_margin_eq10 = m;
            cert.worst_x = grid[k];
        }
        log_f[k] = ev.log_density(grid[k]);
    }

    // Second differences of ln f on the same grid.
    cert.min_logcurv = -std::numeric_limits<double>::infinity();
    if (grid.size() >= 3) {
        const double h = grid[1] - grid[0];
        double largest_log = 0.0;
        for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
            const double second = (log_f[k + 1] - 2.0 * log_f[k] + log_f[k - 1]) / (h * h);
            cert.min_logcurv = std::max(cert.min_logcurv, second);
            largest_log = std::max(largest_log, std::abs(log_f[k]));
        }
        const double roundoff = 8.0 * DBL_EPSILON * largest_log / (h * h);
        cert.logcurv_ok = cert.min_logcurv <= options.tol + roundoff;
    }

    auto check = [&](double x, double y, double lambda) {
        const double z = lambda * x + (1.0 - lambda) * y;
        const double lx = ev.log_density(x);
        const double ly = ev.log_density(y);
        const double lz = ev.log_density(z);
        const double chord = lambda * lx + (1.0 - lambda) * ly;
        ++cert.midpoint_checks;
        const double slack = 1e-10 + 4.0 * DBL_EPSILON * std::max(std::abs(lz), std::abs(chord));
        if (lz < chord - slack) {
            ++cert.midpoint_failures;
            if (!cert.witness)
                cert.witness = MidpointWitness{x, y, lambda, lz, chord};
        }
    };

    Rng rng(options.seed);
    const double lo = grid.front();
    const double hi = grid.back();
    for (int i = 0; i < options.midpoint_checks; ++i) {
        const double x = rng.uniform(lo, hi);
        const double y = rng.uniform(lo, hi);
        double lambda = rng.uniform();
        if (lambda == 0.0)
            lambda = 0.5;
        check(x, y, lambda);
    }

    const bool margin_violated = cert.min_margin_eq10 < -options.tol;
    if (margin_violated && !cert.witness) {
        // Symmetric triples around the worst grid point.
        for (double d : {0.25, 0.1, 0.03, 0.01, 0.003, 0.001}) {
            const double x = std::max(lo, cert.worst_x - d);
            const double y = std::min(hi, cert.worst_x + d);
            check(x, y, 0.5);
            if (cert.witness)
                break;
        }
    }

    cert.verdict = (margin_violated || cert.midpoint_failures > 0) ? Verdict::Violated : Verdict::Certified;
    return cert;
}

double sharpness_check(int order, double ratio, int grid_points, double eps)
{
    if (order < 1)
        throw std::invalid_argument("sharpness_check: M must be a positive integer");
    if (!(ratio > 0.0) || ratio == 1.0 || std::isinf(ratio))
        throw std::invalid_argument("sharpness_check: ratio must be positive and different from 1");
    std::vector<double> weights(order + 1);
    for (int i = 0; i <= order; ++i)
        weights[i] = std::pow(ratio, i);
    const DiscreteMixture mix(std::move(weights));
    const MarginEvaluator margins(mix, {});
    double worst = 0.0;
    for (double x : certification_grid(grid_points, eps))
        worst = std::max(worst, std::abs(margins.margin(x)));
    return worst;
}

double kernel_log_curvature(double order, double index, double x)
{
    if (!(index > -1.0 && index < order + 1.0))
        throw std::domain_error("kernel_log_curvature: s outside (-1, M+1)");
    if (!(x > 0.0 && x < 1.0))
        throw std::domain_error("kernel_log_curvature: x outside (0, 1)");
    return -index / ((1.0 - x) * (1.0 - x)) - (order - index) / (x * x);
}

std::optional<double> find_kernel_failure(double order, double index)
{
    if (!(index > -1.0 && index < order + 1.0))
        throw std::domain_error("find_kernel_failure: s outside (-1, M+1)");
    if (index >= 0.0 && index <= order)
        return std::nullopt;

    // Curvature > 0 exactly where h(x) = -s x^2 - (M-s)(1-x)^2 > 0; h is
    // monotone, increasing for s < 0 and decreasing for s > M.
    auto h = [&](double x) { return -index * x * x - (order - index) * (1.0 - x) * (1.0 - x); };
    const bool increasing = index < 0.0;
    double a = 0.0;
    double b = 1.0;
    for (int iter = 0; iter < 200 && b - a > 1e-15; ++iter) {
        const double mid = 0.5 * (a + b);
        if ((h(mid) > 0.0) == increasing)
            b = mid;
        else
            a = mid;
    }
    const double root = 0.5 * (a + b);
    double x = increasing ? 0.5 * (root + 1.0) : 0.5 * root;
    if (!(kernel_log_curvature(order, index, x) > 0.0))
        x = increasing ? std::nextafter(1.0, 0.0) : std::nextafter(0.0, 1.0);
    // Only for |s| or s - M below ~1e-30, where the window is narrower than double spacing.
    if (!(kernel_log_curvature(order, index, x) > 0.0))
        return std::nullopt;
    return x;
}

} // namespace betamix
