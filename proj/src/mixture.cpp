#include "betamix/mixture.hpp"

#include "betamix/random.hpp"
#include "betamix/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace betamix {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();
constexpr double quiet_nan = std::numeric_limits<double>::quiet_NaN();

void require_unit_closed(double x)
{
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("x = " + std::to_string(x) + " outside [0, 1]");
}

void require_unit_open(double x)
{
    if (!(x > 0.0 && x < 1.0))
        throw std::domain_error("x = " + std::to_string(x) + " outside (0, 1)");
}

std::vector<long double> forward_difference(const std::vector<long double>& c)
{
    std::vector<long double> d;
    for (std::size_t j = 0; j + 1 < c.size(); ++j)
        d.push_back(c[j + 1] - c[j]);
    return d;
}

// Coefficients of g in the Bernstein basis in x, i.e. the weights reversed.
std::vector<long double> bernstein_coefficients(const DiscreteMixture& mix)
{
    auto w = mix.weights();
    return {w.rbegin(), w.rend()};
}

struct DiscreteDerivs {
    long double value, d1, d2;
};

DiscreteDerivs discrete_derivs(const std::vector<long double>& c, const std::vector<long double>& d1,
                               const std::vector<long double>& d2, int order, long double x)
{
    const long double m = order;
    return {de_casteljau(c, x), m * de_casteljau(d1, x), order >= 2 ? m * (m - 1) * de_casteljau(d2, x) : 0.0L};
}

EvalResult make_result(double x, long double value, long double d1, long double d2)
{
    EvalResult r;
    r.x = x;
    r.value = static_cast<double>(value);
    r.d1 = static_cast<double>(d1);
    r.d2 = static_cast<double>(d2);
    if (value > 0.0L) {
        const long double r1 = d1 / value;
        const long double r2 = d2 / value;
        r.log_value = static_cast<double>(std::log(value));
        r.log_d1 = static_cast<double>(r1);
        r.log_d2 = static_cast<double>(r2 - r1 * r1);
    } else {
        r.log_value = neg_inf;
        r.log_d1 = quiet_nan;
        r.log_d2 = quiet_nan;
    }
    return r;
}

// ---- continuous quadrature tables ------------------------------------------

using Table = ContinuousEvaluator::Table;

struct Shift {
    double coefficient;
    double offset;
};

// sum_k coefficient_k * alpha(s + offset_k) as a signed log.
SignedLog combine(const ContinuousMixture& mix, std::span<const Shift> shifts, double s, double branch)
{
    double logs[3];
    double top = neg_inf;
    for (std::size_t k = 0; k < shifts.size(); ++k) {
        logs[k] = mix.log_alpha_branch(s + shifts[k].offset, branch + shifts[k].offset);
        top = std::max(top, logs[k]);
    }
    if (top == neg_inf)
        return {neg_inf, 0};
    double v = 0.0;
    for (std::size_t k = 0; k < shifts.size(); ++k)
        if (logs[k] != neg_inf)
            v += shifts[k].coefficient * std::exp(logs[k] - top);
    if (v == 0.0)
        return {neg_inf, 0};
    return {top + std::log(std::abs(v)), v > 0.0 ? 1 : -1};
}

Table build_table(const ContinuousMixture& mix, const QuadratureConfig& config, bool coarse, int depth)
{
    static constexpr Shift density_shifts[] = {{1.0, 0.0}};
    static constexpr Shift d1_shifts[] = {{1.0, 0.0}, {-1.0, 1.0}};
    static constexpr Shift d2_shifts[] = {{1.0, 0.0}, {-2.0, 1.0}, {1.0, 2.0}};
    std::span<const Shift> shifts = depth == 0 ? std::span<const Shift>(density_shifts)
                                    : depth == 1 ? std::span<const Shift>(d1_shifts)
                                                 : std::span<const Shift>(d2_shifts);

    const double order = mix.order();
    std::vector<double> breaks;
    for (double k : mix.knots())
        for (int d = 0; d <= depth; ++d)
            breaks.push_back(k - d);

    Table table;
    table.order = order - depth;
    for (const QuadratureNode& node : composite_nodes(-static_cast<double>(depth), order, breaks, config, coarse)) {
        const SignedLog coef = combine(mix, shifts, node.s, node.panel_mid);
        if (coef.sign == 0)
            continue;
        const SignedLog kernel = gen_binom_entire(table.order, node.s);
        if (kernel.sign == 0)
            continue;
        table.s.push_back(node.s);
        table.log_mag.push_back(std::log(node.weight) + coef.log_abs + kernel.log_abs);
        table.sign.push_back(static_cast<signed char>(coef.sign * kernel.sign));
    }
    return table;
}

struct ShiftedSum {
    long double sum = 0.0L;
    long double mass = 0.0L;
    double shift = neg_inf;

    long double value() const { return sum == 0.0L ? 0.0L : sum * std::exp(static_cast<long double>(shift)); }
};

double table_max(const Table& t, double log_x, double log_1mx)
{
    double top = neg_inf;
    const double slope = log_1mx - log_x;
    for (std::size_t i = 0; i < t.s.size(); ++i)
        top = std::max(top, t.log_mag[i] + t.s[i] * slope);
    return top == neg_inf ? neg_inf : top + t.order * log_x;
}

ShiftedSum table_sum(const Table& t, double log_x, double log_1mx, double shift)
{
    ShiftedSum out;
    out.shift = shift;
    if (shift == neg_inf)
        return out;
    const double slope = log_1mx - log_x;
    const double base = t.order * log_x - shift;
    for (std::size_t i = 0; i < t.s.size(); ++i) {
        const long double term = std::exp(static_cast<long double>(t.log_mag[i] + t.s[i] * slope + base));
        out.sum += t.sign[i] * term;
        out.mass += term;
    }
    return out;
}

ShiftedSum integrate(const Table& fine, const Table& coarse, double x, double tol, bool check, const char* what)
{
    const double log_x = std::log(x);
    const double log_1mx = std::log1p(-x);
    const double shift = std::max(table_max(fine, log_x, log_1mx), check ? table_max(coarse, log_x, log_1mx) : neg_inf);
    ShiftedSum result = table_sum(fine, log_x, log_1mx, shift);
    if (check && shift != neg_inf) {
        const ShiftedSum rough = table_sum(coarse, log_x, log_1mx, shift);
        const long double gap = std::abs(result.sum - rough.sum);
        if (gap > tol * std::max(result.mass, rough.mass))
            throw QuadratureError(std::string("quadrature for ") + what + " at x = " + std::to_string(x)
                                  + " did not converge: relative refinement gap "
                                  + std::to_string(static_cast<double>(gap / result.mass)));
    }
    return result;
}

} // namespace

// ---- DiscreteMixture -------------------------------------------------------

DiscreteMixture::DiscreteMixture(std::vector<double> weights) : weights_(std::move(weights))
{
    if (weights_.size() < 2)
        throw std::invalid_argument("discrete mixture: need at least two weights (M >= 1)");
    for (double w : weights_)
        if (!(w >= 0.0) || std::isinf(w))
            throw std::invalid_argument("discrete mixture: weights must be finite and nonnegative");
}

DiscreteMixture::DiscreteMixture(int order, std::vector<double> weights) : DiscreteMixture(std::move(weights))
{
    if (order != this->order())
        throw std::invalid_argument("discrete mixture: expected " + std::to_string(order + 1) + " weights, got "
                                    + std::to_string(weights_.size()));
}

bool DiscreteMixture::is_zero() const
{
    return std::all_of(weights_.begin(), weights_.end(), [](double w) { return w == 0.0; });
}

DiscreteMixture DiscreteMixture::reversed() const
{
    return DiscreteMixture(std::vector<double>(weights_.rbegin(), weights_.rend()));
}

// ---- ContinuousMixture -----------------------------------------------------

ContinuousMixture::ContinuousMixture(double order, std::vector<double> knots, std::vector<double> log_alpha)
    : order_(order), knots_(std::move(knots)), log_alpha_(std::move(log_alpha))
{
    if (!(order > 1.0) || std::isinf(order))
        throw std::invalid_argument("continuous mixture: M must be a finite real > 1");
    if (knots_.size() < 2)
        throw std::invalid_argument("continuous mixture: need at least two knots");
    if (knots_.size() != log_alpha_.size())
        throw std::invalid_argument("continuous mixture: knots and log_alpha differ in length");
    if (knots_.front() != 0.0 || knots_.back() != order_)
        throw std::invalid_argument("continuous mixture: knots must run from 0 to M");
    for (std::size_t j = 1; j < knots_.size(); ++j)
        if (!(knots_[j] > knots_[j - 1]))
            throw std::invalid_argument("continuous mixture: knots must be strictly increasing");
    for (double l : log_alpha_)
        if (std::isnan(l) || l == std::numeric_limits<double>::infinity())
            throw std::invalid_argument("continuous mixture: log_alpha must be finite or -inf");
}

ContinuousMixture ContinuousMixture::constant(double order, double log_value)
{
    return ContinuousMixture(order, {0.0, order}, {log_value, log_value});
}

double ContinuousMixture::log_alpha_branch(double s, double branch) const
{
    if (branch < 0.0 || branch > order_)
        return neg_inf;
    auto it = std::upper_bound(knots_.begin(), knots_.end(), branch);
    std::size_t j = static_cast<std::size_t>(it - knots_.begin());
    j = std::clamp<std::size_t>(j, 1, knots_.size() - 1);
    const double a = log_alpha_[j - 1];
    const double b = log_alpha_[j];
    if (a == neg_inf || b == neg_inf)
        return neg_inf;
    const double t = (s - knots_[j - 1]) / (knots_[j] - knots_[j - 1]);
    return a + (b - a) * t;
}

double ContinuousMixture::log_alpha_at(double s) const
{
    return log_alpha_branch(s, s);
}

bool ContinuousMixture::is_zero() const
{
    for (std::size_t j = 1; j < knots_.size(); ++j)
        if (log_alpha_[j - 1] != neg_inf && log_alpha_[j] != neg_inf)
            return false;
    return true;
}

double ContinuousMixture::mass() const
{
    double total = 0.0;
    for (std::size_t j = 1; j < knots_.size(); ++j) {
        const double a = log_alpha_[j - 1];
        const double b = log_alpha_[j];
        if (a == neg_inf || b == neg_inf)
            continue;
        const double width = knots_[j] - knots_[j - 1];
        const double d = b - a;
        // width * (e^b - e^a) / (b - a), written to stay accurate as d -> 0.
        const double lo = std::min(a, b);
        const double ad = std::abs(d);
        total += width * std::exp(lo) * (ad == 0.0 ? 1.0 : std::expm1(ad) / ad);
    }
    return total;
}

double mixture_order(const Mixture& mix)
{
    return std::visit([](const auto& m) { return static_cast<double>(m.order()); }, mix);
}

bool is_zero(const Mixture& mix)
{
    return std::visit([](const auto& m) { return m.is_zero(); }, mix);
}

// ---- log-concavity of the mixing data --------------------------------------

bool is_log_concave_weights(std::span<const double> weights, double log_tol)
{
    std::size_t first = weights.size();
    std::size_t last = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] < 0.0 || std::isnan(weights[i]))
            return false;
        if (weights[i] > 0.0) {
            first = std::min(first, i);
            last = i;
        }
    }
    if (first == weights.size())
        return true;
    for (std::size_t i = first; i <= last; ++i)
        if (weights[i] == 0.0)
            return false;
    for (std::size_t i = first + 1; i + 1 <= last; ++i) {
        const double gap = 2.0 * std::log(weights[i]) - std::log(weights[i - 1]) - std::log(weights[i + 1]);
        if (gap < -log_tol)
            return false;
    }
    return true;
}

bool is_log_concave(const ContinuousMixture& mix, double slope_tol)
{
    auto knots = mix.knots();
    auto logs = mix.log_alpha();
    std::vector<std::size_t> finite;
    for (std::size_t j = 0; j < logs.size(); ++j)
        if (logs[j] != neg_inf)
            finite.push_back(j);
    if (finite.size() < 2)
        return true;
    if (finite.back() - finite.front() + 1 != finite.size())
        return false;
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < finite.size(); ++k) {
        const std::size_t j = finite[k];
        const double slope = (logs[j] - logs[j - 1]) / (knots[j] - knots[j - 1]);
        if (slope > previous + slope_tol * std::max(1.0, std::abs(previous)))
            return false;
        previous = slope;
    }
    return true;
}

// ---- discrete evaluation ---------------------------------------------------

long double de_casteljau(std::span<const long double> coeffs, long double x)
{
    if (coeffs.empty())
        return 0.0L;
    std::vector<long double> work(coeffs.begin(), coeffs.end());
    const long double y = 1.0L - x;
    for (std::size_t level = work.size() - 1; level > 0; --level)
        for (std::size_t j = 0; j < level; ++j)
            work[j] = y * work[j] + x * work[j + 1];
    return work[0];
}

double eval_density_discrete(const DiscreteMixture& mix, double x)
{
    require_unit_closed(x);
    return static_cast<double>(de_casteljau(bernstein_coefficients(mix), x));
}

EvalResult eval_derivs_discrete(const DiscreteMixture& mix, double x)
{
    require_unit_open(x);
    const auto c = bernstein_coefficients(mix);
    const auto d1 = forward_difference(c);
    const auto d2 = forward_difference(d1);
    const auto d = discrete_derivs(c, d1, d2, mix.order(), x);
    return make_result(x, d.value, d.d1, d.d2);
}

// ---- continuous evaluation -------------------------------------------------

ContinuousEvaluator::ContinuousEvaluator(const ContinuousMixture& mix, QuadratureConfig config)
    : mix_(mix), config_(config)
{
    config_.validate();
    density_fine_ = build_table(mix_, config_, false, 0);
    density_coarse_ = build_table(mix_, config_, true, 0);
    d1_fine_ = build_table(mix_, config_, false, 1);
    d1_coarse_ = build_table(mix_, config_, true, 1);
    d2_fine_ = build_table(mix_, config_, false, 2);
    d2_coarse_ = build_table(mix_, config_, true, 2);
}

double ContinuousEvaluator::density(double x) const
{
    require_unit_closed(x);
    if (x == 0.0 || x == 1.0)
        return 0.0;
    return static_cast<double>(integrate(density_fine_, density_coarse_, x, config_.abs_tol, true, "f").value());
}

double ContinuousEvaluator::density_unchecked(double x) const
{
    if (x <= 0.0 || x >= 1.0)
        return 0.0;
    return static_cast<double>(integrate(density_fine_, density_coarse_, x, config_.abs_tol, false, "f").value());
}

double ContinuousEvaluator::log_density(double x) const
{
    require_unit_closed(x);
    if (x == 0.0 || x == 1.0)
        return neg_inf;
    const ShiftedSum s = integrate(density_fine_, density_coarse_, x, config_.abs_tol, true, "f");
    return s.sum > 0.0L ? static_cast<double>(std::log(s.sum) + s.shift) : neg_inf;
}

EvalResult ContinuousEvaluator::derivs(double x) const
{
    require_unit_open(x);
    const ShiftedSum f = integrate(density_fine_, density_coarse_, x, config_.abs_tol, true, "f");
    const ShiftedSum g1 = integrate(d1_fine_, d1_coarse_, x, config_.abs_tol, true, "f'");
    const ShiftedSum g2 = integrate(d2_fine_, d2_coarse_, x, config_.abs_tol, true, "f''");
    const long double m = mix_.order();

    EvalResult r;
    r.x = x;
    r.value = static_cast<double>(f.value());
    r.d1 = static_cast<double>(m * g1.value());
    r.d2 = static_cast<double>(m * (m - 1) * g2.value());
    if (f.sum > 0.0L) {
        const long double r1 = g1.sum == 0.0L ? 0.0L : m * g1.sum / f.sum * std::exp(static_cast<long double>(g1.shift) - f.shift);
        const long double r2 =
            g2.sum == 0.0L ? 0.0L : m * (m - 1) * g2.sum / f.sum * std::exp(static_cast<long double>(g2.shift) - f.shift);
        r.log_value = static_cast<double>(std::log(f.sum) + f.shift);
        r.log_d1 = static_cast<double>(r1);
        r.log_d2 = static_cast<double>(r2 - r1 * r1);
    } else {
        r.log_value = neg_inf;
        r.log_d1 = quiet_nan;
        r.log_d2 = quiet_nan;
    }
    return r;
}

double eval_density_continuous(const ContinuousMixture& mix, double x, const QuadratureConfig& quad)
{
    require_unit_open(x);
    return ContinuousEvaluator(mix, quad).density(x);
}

EvalResult eval_derivs_continuous(const ContinuousMixture& mix, double x, const QuadratureConfig& quad)
{
    return ContinuousEvaluator(mix, quad).derivs(x);
}

// ---- MixtureEvaluator ------------------------------------------------------

MixtureEvaluator::MixtureEvaluator(const Mixture& mix, QuadratureConfig config) : mix_(mix), zero_(betamix::is_zero(mix))
{
    if (const auto* d = std::get_if<DiscreteMixture>(&mix_)) {
        coeffs_ = bernstein_coefficients(*d);
        diff1_ = forward_difference(coeffs_);
        diff2_ = forward_difference(diff1_);
    } else {
        continuous_.emplace<ContinuousEvaluator>(std::get<ContinuousMixture>(mix_), config);
    }
}

double MixtureEvaluator::density(double x) const
{
    if (const auto* c = std::get_if<ContinuousEvaluator>(&continuous_))
        return c->density(x);
    require_unit_closed(x);
    return static_cast<double>(de_casteljau(coeffs_, x));
}

double MixtureEvaluator::log_density(double x) const
{
    if (const auto* c = std::get_if<ContinuousEvaluator>(&continuous_))
        return c->log_density(x);
    require_unit_closed(x);
    const long double v = de_casteljau(coeffs_, x);
    return v > 0.0L ? static_cast<double>(std::log(v)) : neg_inf;
}

EvalResult MixtureEvaluator::derivs(double x) const
{
    if (const auto* c = std::get_if<ContinuousEvaluator>(&continuous_))
        return c->derivs(x);
    require_unit_open(x);
    const auto d = discrete_derivs(coeffs_, diff1_, diff2_, static_cast<int>(order()), x);
    return make_result(x, d.value, d.d1, d.d2);
}

// ---- normalization, CDF, sampling ------------------------------------------

double normalization(const Mixture& mix)
{
    if (is_zero(mix))
        throw DegenerateMixtureError("normalization: mixture is identically zero");
    if (const auto* d = std::get_if<DiscreteMixture>(&mix)) {
        double total = 0.0;
        for (double w : d->weights())
            total += w;
        return total / (d->order() + 1);
    }
    const auto& c = std::get<ContinuousMixture>(mix);
    return c.mass() / (c.order() + 1.0);
}

namespace {

// Bernstein coefficients (degree M+1) of the antiderivative of g vanishing at 0.
std::vector<long double> antiderivative_coefficients(const DiscreteMixture& mix)
{
    const auto c = bernstein_coefficients(mix);
    std::vector<long double> out(c.size() + 1, 0.0L);
    const long double scale = 1.0L / static_cast<long double>(c.size());
    for (std::size_t j = 1; j < out.size(); ++j)
        out[j] = out[j - 1] + c[j - 1] * scale;
    return out;
}

// Panel edges on [0, 1] refined geometrically toward both endpoints, where the
// continuous density has logarithmic behaviour.
std::vector<double> graded_edges(double lo, double hi, int uniform_panels)
{
    std::vector<double> edges{lo, hi};
    for (int k = 1; k < uniform_panels; ++k)
        edges.push_back(static_cast<double>(k) / uniform_panels);
    for (int k = 1; k <= 48; ++k) {
        const double t = std::ldexp(1.0, -k);
        if (t < 1.0 / uniform_panels) {
            edges.push_back(t);
            edges.push_back(1.0 - t);
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::remove_if(edges.begin(), edges.end(), [&](double e) { return e < lo || e > hi; }), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

double integrate_density(const ContinuousEvaluator& ev, std::span<const double> edges, const QuadratureConfig& quad,
                         bool check)
{
    QuadratureConfig rule = quad;
    rule.rule = QuadratureRule::GaussLegendre;
    auto sum_nodes = [&](bool coarse) {
        long double total = 0.0L;
        for (const QuadratureNode& node : panel_nodes(edges, rule, coarse))
            total += node.weight * static_cast<long double>(ev.density_unchecked(node.s));
        return total;
    };
    const long double fine = sum_nodes(false);
    if (check) {
        const long double rough = sum_nodes(true);
        if (std::abs(fine - rough) > quad.abs_tol * std::max(fine, 1e-300L))
            throw QuadratureError("cdf quadrature did not converge");
    }
    return static_cast<double>(fine);
}

} // namespace

double cdf(const Mixture& mix, double x, const QuadratureConfig& quad)
{
    require_unit_closed(x);
    if (const auto* d = std::get_if<DiscreteMixture>(&mix))
        return static_cast<double>(de_casteljau(antiderivative_coefficients(*d), x));
    if (x == 0.0 || is_zero(mix))
        return 0.0;
    const ContinuousEvaluator ev(std::get<ContinuousMixture>(mix), quad);
    const auto edges = graded_edges(0.0, x, 64);
    return integrate_density(ev, edges, quad, true);
}

std::vector<double> tabulate_cdf(const Mixture& mix, int grid_points, const QuadratureConfig& quad)
{
    if (grid_points < 1)
        throw std::invalid_argument("tabulate_cdf: grid_points must be positive");
    std::vector<double> table(static_cast<std::size_t>(grid_points) + 1, 0.0);
    if (const auto* d = std::get_if<DiscreteMixture>(&mix)) {
        const auto coeffs = antiderivative_coefficients(*d);
        for (int k = 0; k <= grid_points; ++k)
            table[k] = static_cast<double>(de_casteljau(coeffs, static_cast<long double>(k) / grid_points));
        return table;
    }
    const ContinuousEvaluator ev(std::get<ContinuousMixture>(mix), quad);
    QuadratureConfig cell_rule;
    cell_rule.nodes_per_panel = 4;
    long double running = 0.0L;
    for (int k = 0; k < grid_points; ++k) {
        const double a = static_cast<double>(k) / grid_points;
        const double b = static_cast<double>(k + 1) / grid_points;
        std::vector<double> edges{a, b};
        if (k == 0 || k == grid_points - 1) {
            for (int level = 1; level <= 40; ++level) {
                const double t = std::ldexp(1.0 / grid_points, -level);
                edges.push_back(k == 0 ? t : 1.0 - t);
            }
            std::sort(edges.begin(), edges.end());
        }
        running += integrate_density(ev, edges, cell_rule, false);
        table[k + 1] = static_cast<double>(running);
    }
    return table;
}

std::vector<double> sample(const Mixture& mix, std::size_t count, std::uint64_t seed, int grid_points,
                           const QuadratureConfig& quad)
{
    if (is_zero(mix))
        throw DegenerateMixtureError("sample: mixture is identically zero");
    const std::vector<double> table = tabulate_cdf(mix, grid_points, quad);
    const double total = table.back();
    if (!(total > 0.0))
        throw DegenerateMixtureError("sample: tabulated CDF has no mass");

    Rng rng(seed);
    std::vector<double> draws;
    draws.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double target = rng.uniform() * total;
        // First grid value strictly above the target; the cell before it has positive mass.
        auto it = std::upper_bound(table.begin(), table.end(), target);
        if (it == table.end())
            it = std::prev(table.end());
        const auto k = static_cast<std::size_t>(it - table.begin());
        const double lo = table[k - 1];
        const double hi = table[k];
        const double t = hi > lo ? (target - lo) / (hi - lo) : 0.5;
        double x = (static_cast<double>(k - 1) + t) / grid_points;
        if (x <= 0.0)
            x = std::nextafter(0.0, 1.0);
        if (x >= 1.0)
            x = std::nextafter(1.0, 0.0);
        draws.push_back(x);
    }
    return draws;
}

} // namespace betamix
