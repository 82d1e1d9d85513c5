#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace betamix {

enum class QuadratureRule { GaussLegendre, Simpson };

/// Governs every continuous integral in the library.
struct QuadratureConfig {
    QuadratureRule rule = QuadratureRule::GaussLegendre;
    int panels_per_unit = 8;
    int nodes_per_panel = 16;
    /// Allowed disagreement between the fine and coarse rule, relative to
    /// the integral of |integrand|.
    double abs_tol = 1e-10;

    void validate() const;
};

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct QuadratureNode {
    double s;
    double weight;
    /// Midpoint of the panel holding the node. Piecewise-defined integrands
    /// use it to pick the one-sided branch at panel ends.
    double panel_mid;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int n);

/// Composite rule on [lo, hi]. Panels never straddle a breakpoint, and each
/// piece between breakpoints gets ceil(length * panels_per_unit) panels.
/// `coarse` selects the lower-order companion rule on the same panels.
std::vector<QuadratureNode> composite_nodes(double lo, double hi, std::span<const double> breaks,
                                            const QuadratureConfig& config, bool coarse);

/// Composite rule on explicit panel edges (sorted), same fine/coarse convention.
std::vector<QuadratureNode> panel_nodes(std::span<const double> edges, const QuadratureConfig& config,
                                        bool coarse);

inline std::string to_string(QuadratureRule rule)
{
    return rule == QuadratureRule::GaussLegendre ? "gauss-legendre" : "simpson";
}

} // namespace betamix
