#include "betamix/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

namespace betamix {

void QuadratureConfig::validate() const
{
    if (panels_per_unit < 1)
        throw std::invalid_argument("quadrature: panels_per_unit must be positive");
    if (nodes_per_panel < 1)
        throw std::invalid_argument("quadrature: nodes_per_panel must be positive");
    if (!(abs_tol > 0.0))
        throw std::invalid_argument("quadrature: abs_tol must be positive");
}

namespace {

// Returns (P_n(z), P_n'(z)) by the three-term recurrence.
std::pair<double, double> legendre(int n, double z)
{
    double p0 = 1.0;
    double p1 = z;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return {p1, n * (z * p1 - p0) / (z * z - 1.0)};
}

GaussLegendre compute_gauss_legendre(int n)
{
    GaussLegendre rule;
    if (n == 1) {
        rule.nodes = {0.0};
        rule.weights = {2.0};
        return rule;
    }
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, dp] = legendre(n, z);
            const double dz = p / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16)
                break;
        }
        const double dp = legendre(n, z).second;
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1)
        rule.nodes[n / 2] = 0.0;
    return rule;
}

void append_panel(std::vector<QuadratureNode>& out, double a, double b, const QuadratureConfig& config,
                  bool coarse)
{
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    if (config.rule == QuadratureRule::GaussLegendre) {
        const int n = coarse ? std::max(1, config.nodes_per_panel / 2) : config.nodes_per_panel;
        const GaussLegendre& gl = gauss_legendre(n);
        for (int i = 0; i < n; ++i)
            out.push_back({mid + half * gl.nodes[i], half * gl.weights[i], mid});
        return;
    }
    // Composite Simpson with an even number of subintervals.
    int intervals = std::max(2, 2 * ((config.nodes_per_panel - 1) / 2));
    if (coarse)
        intervals = std::max(2, 2 * (intervals / 4));
    const double h = (b - a) / intervals;
    for (int i = 0; i <= intervals; ++i) {
        const double coef = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        out.push_back({a + i * h, coef * h / 3.0, mid});
    }
}

} // namespace

const GaussLegendre& gauss_legendre(int n)
{
    static std::mutex mutex;
    static std::map<int, GaussLegendre> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

std::vector<QuadratureNode> panel_nodes(std::span<const double> edges, const QuadratureConfig& config,
                                        bool coarse)
{
    std::vector<QuadratureNode> out;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        if (edges[i + 1] > edges[i])
            append_panel(out, edges[i], edges[i + 1], config, coarse);
    return out;
}

std::vector<QuadratureNode> composite_nodes(double lo, double hi, std::span<const double> breaks,
                                            const QuadratureConfig& config, bool coarse)
{
    std::vector<double> cuts{lo, hi};
    for (double b : breaks)
        if (b > lo && b < hi)
            cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<double> edges;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double len = cuts[i + 1] - cuts[i];
        const int panels = std::max(1, static_cast<int>(std::ceil(len * config.panels_per_unit - 1e-9)));
        for (int p = 0; p < panels; ++p)
            edges.push_back(cuts[i] + len * p / panels);
    }
    edges.push_back(cuts.back());
    return panel_nodes(edges, config, coarse);
}

} // namespace betamix
