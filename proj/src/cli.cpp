#include "betamix/cli.hpp"

#include "betamix/certifier.hpp"
#include "betamix/lemma_lab.hpp"
#include "betamix/mixture.hpp"
#include "betamix/mixture_io.hpp"
#include "betamix/version.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace betamix::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string real(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T>
std::string maybe(const std::optional<T>& v)
{
    if (!v)
        return "unset";
    if constexpr (std::is_floating_point_v<T>)
        return real(*v);
    else if constexpr (std::is_same_v<T, std::string>)
        return *v;
    else
        return std::to_string(*v);
}

// Every flag with its effective value, in a fixed order.
std::vector<std::pair<std::string, std::string>> flag_list(const RunConfig& c)
{
    return {
        {"input", maybe(c.input_path)},
        {"M", maybe(c.order)},
        {"r", maybe(c.ratio)},
        {"s", maybe(c.index)},
        {"n", maybe(c.n)},
        {"q", maybe(c.q)},
        {"k", maybe(c.k)},
        {"grid-points", maybe(c.grid_points)},
        {"eps", real(c.eps)},
        {"tol", real(c.tol)},
        {"quad-panels", std::to_string(c.quad_panels)},
        {"quad-nodes", std::to_string(c.quad_nodes)},
        {"seed", std::to_string(c.seed)},
        {"count", maybe(c.count)},
        {"format", c.format},
        {"debug-negate", c.debug_negate ? "true" : "false"},
    };
}

std::string flag_string(const RunConfig& c)
{
    std::string s;
    for (const auto& [name, value] : flag_list(c)) {
        if (!s.empty())
            s += ' ';
        s += "--" + name + '=' + value;
    }
    return s;
}

json flag_json(const RunConfig& c)
{
    json j = json::object();
    for (const auto& [name, value] : flag_list(c))
        j[name] = value;
    return j;
}

struct Context {
    RunConfig config;
    std::string digest = "none";
    std::ostream* out = nullptr;
    std::ostream* err = nullptr;

    QuadratureConfig quad() const
    {
        QuadratureConfig q;
        q.panels_per_unit = config.quad_panels;
        q.nodes_per_panel = config.quad_nodes;
        q.validate();
        return q;
    }

    void csv_header(std::ostream& os) const
    {
        os << "# betamix " << version << " " << config.command << '\n';
        os << "# flags: " << flag_string(config) << '\n';
        os << "# input_digest: " << digest << '\n';
    }

    json json_header() const
    {
        return {{"tool", "betamix"},
                {"tool_version", version},
                {"command", config.command},
                {"flags", flag_json(config)},
                {"input_digest", digest}};
    }

    Mixture load()
    {
        if (!config.input_path)
            throw UsageError("--input is required for " + config.command);
        std::string raw;
        Mixture mix = load_mixture(*config.input_path, &raw);
        digest = input_digest(raw);
        return mix;
    }
};

int cmd_eval(Context& ctx, std::ostream& os)
{
    const Mixture mix = ctx.load();
    const MixtureEvaluator ev(mix, ctx.quad());
    const auto grid = certification_grid(ctx.config.grid_points.value_or(1024), ctx.config.eps);
    std::vector<EvalResult> rows;
    rows.reserve(grid.size());
    for (double x : grid)
        rows.push_back(ev.derivs(x));

    if (ctx.config.format == "json") {
        json doc = ctx.json_header();
        doc["input"] = to_json(mix);
        json arr = json::array();
        for (const EvalResult& r : rows)
            arr.push_back({{"x", r.x},
                           {"f", r.value},
                           {"d1", r.d1},
                           {"d2", r.d2},
                           {"log_f", r.log_value},
                           {"log_curvature", r.log_d2}});
        doc["rows"] = arr;
        os << doc.dump(2) << '\n';
        return exit_ok;
    }
    ctx.csv_header(os);
    os << "x,f,d1,d2,log_f,log_curvature\n";
    for (const EvalResult& r : rows)
        os << real(r.x) << ',' << real(r.value) << ',' << real(r.d1) << ',' << real(r.d2) << ',' << real(r.log_value)
           << ',' << real(r.log_d2) << '\n';
    return exit_ok;
}

int cmd_certify(Context& ctx, std::ostream& os)
{
    const Mixture mix = ctx.load();
    CertifyOptions opts;
    opts.grid_points = ctx.config.grid_points.value_or(1024);
    opts.eps = ctx.config.eps;
    opts.tol = ctx.config.tol;
    opts.seed = ctx.config.seed;
    opts.quad = ctx.quad();
    const ConcavityCertificate cert = certify(mix, opts);

    const json fields = to_json(cert);
    json doc = ctx.json_header();
    for (const auto& [key, value] : fields.items())
        doc[key] = value;
    doc["input"] = to_json(mix);
    if (ctx.config.format == "csv") {
        ctx.csv_header(os);
        os << "field,value\n";
        for (const auto& [key, value] : fields.items())
            os << key << ',' << value.dump() << '\n';
    } else {
        os << doc.dump(2) << '\n';
    }
    switch (cert.verdict) {
    case Verdict::Certified:
        return exit_ok;
    case Verdict::Violated:
        return exit_violated;
    case Verdict::DegenerateZero:
        return exit_degenerate;
    }
    return exit_violated;
}

int write_lemma_report(Context& ctx, std::ostream& os, const std::vector<DiscreteLemmaCase>& discrete,
                       const std::vector<ContinuousLemmaCase>& continuous)
{
    // Continuous cases pass when the margin clears -tol relative to the integrand mass.
    auto continuous_tol = [&](const ContinuousLemmaCase& c) { return ctx.config.tol * std::max(1.0, c.scale); };
    std::size_t failures = 0;
    for (const auto& c : discrete)
        failures += c.holds() ? 0 : 1;
    for (const auto& c : continuous)
        failures += c.holds(continuous_tol(c)) ? 0 : 1;

    ctx.csv_header(os);
    os << "# rows: " << discrete.size() + continuous.size() << " failures: " << failures << '\n';
    write_lemma_csv_header(os);
    for (const auto& c : discrete)
        write_lemma_csv(os, c);
    for (const auto& c : continuous)
        write_lemma_csv(os, c, continuous_tol(c));
    if (failures > 0)
        *ctx.err << "lemmas: " << failures << " case(s) failed\n";
    return failures == 0 ? exit_ok : exit_violated;
}

int lemmas_single(Context& ctx, std::ostream& os)
{
    const RunConfig& c = ctx.config;
    if (!c.order || !c.n || (!c.k && !c.q))
        throw UsageError("a single lemma case needs --M, --n and --k (exact) and/or --q (continuous)");
    std::vector<DiscreteLemmaCase> discrete;
    std::vector<ContinuousLemmaCase> continuous;
    if (c.k) {
        if (*c.order != std::floor(*c.order) || *c.n != std::floor(*c.n))
            throw UsageError("the exact case needs integer --M and --n");
        for (DiscreteInequality which :
             {DiscreteInequality::Ineq2p1, DiscreteInequality::Ineq2p2, DiscreteInequality::Ineq2p3}) {
            discrete.push_back(lemma2_discrete(static_cast<long long>(*c.order), static_cast<long long>(*c.n), *c.k,
                                               which));
            discrete.back().negated = c.debug_negate;
        }
    }
    if (c.q) {
        for (ContinuousInequality which :
             {ContinuousInequality::Ineq4, ContinuousInequality::Ineq5, ContinuousInequality::Ineq6}) {
            continuous.push_back(lemma2_continuous(*c.order, *c.n, *c.q, which, ctx.quad()));
            continuous.back().negated = c.debug_negate;
        }
    }
    return write_lemma_report(ctx, os, discrete, continuous);
}

int cmd_lemmas(Context& ctx, std::ostream& os)
{
    if (ctx.config.n || ctx.config.k || ctx.config.q)
        return lemmas_single(ctx, os);
    const double bound = ctx.config.order.value_or(12.0);
    if (bound != std::floor(bound) || bound < 2.0 || bound > 200.0)
        throw UsageError("--M must be an integer in [2, 200] for lemmas");
    const long long count = ctx.config.count.value_or(50);
    if (count < 0)
        throw UsageError("--count must be nonnegative");

    const auto discrete = sweep_lemma2_discrete(static_cast<int>(bound), ctx.config.debug_negate);
    const auto continuous =
        sweep_lemma2_continuous(static_cast<int>(count), ctx.config.seed, ctx.quad(), ctx.config.debug_negate);
    return write_lemma_report(ctx, os, discrete, continuous);
}

int cmd_demo(Context& ctx, std::ostream& os)
{
    const RunConfig& c = ctx.config;
    if (!c.ratio && !c.index)
        throw UsageError("demo needs --r (sharpness) and/or --s (kernel failure)");
    if (!c.order)
        throw UsageError("demo needs --M");

    json doc = ctx.json_header();
    std::ostringstream csv;
    csv << "kind,M,parameter,x,value\n";
    if (c.ratio) {
        if (*c.order != std::floor(*c.order) || *c.order < 1.0)
            throw UsageError("sharpness demo needs an integer --M >= 1");
        if (!(*c.ratio > 0.0) || *c.ratio == 1.0)
            throw UsageError("sharpness demo needs --r > 0 and --r != 1");
        const double worst =
            sharpness_check(static_cast<int>(*c.order), *c.ratio, c.grid_points.value_or(1024), c.eps);
        doc["sharpness"] = {{"M", *c.order}, {"r", *c.ratio}, {"max_abs_margin_eq10", worst}};
        csv << "sharpness," << real(*c.order) << ',' << real(*c.ratio) << ",," << real(worst) << '\n';
    }
    if (c.index) {
        const double s = *c.index;
        if (!(s > -1.0 && s < *c.order + 1.0))
            throw UsageError("--s must lie in (-1, M+1)");
        const auto x = find_kernel_failure(*c.order, s);
        if (!x) {
            *ctx.err << "demo: the kernel is log-concave for s in [0, M]; no failure witness exists\n";
            return exit_bad_input;
        }
        const double curvature = kernel_log_curvature(*c.order, s, *x);
        doc["kernel_failure"] = {{"M", *c.order}, {"s", s}, {"x", *x}, {"log_curvature", curvature}};
        csv << "kernel_failure," << real(*c.order) << ',' << real(s) << ',' << real(*x) << ',' << real(curvature)
            << '\n';
    }
    if (c.format == "json") {
        os << doc.dump(2) << '\n';
    } else {
        ctx.csv_header(os);
        os << csv.str();
    }
    return exit_ok;
}

int cmd_sample(Context& ctx, std::ostream& os)
{
    const Mixture mix = ctx.load();
    if (is_zero(mix)) {
        *ctx.err << "sample: mixture is identically zero\n";
        return exit_degenerate;
    }
    const long long count = ctx.config.count.value_or(1000);
    if (count < 1)
        throw UsageError("--count must be positive");
    const int grid = ctx.config.grid_points.value_or(4096);
    const auto draws = sample(mix, static_cast<std::size_t>(count), ctx.config.seed, grid, ctx.quad());
    if (ctx.config.format == "json") {
        json doc = ctx.json_header();
        doc["draws"] = draws;
        os << doc.dump(2) << '\n';
        return exit_ok;
    }
    ctx.csv_header(os);
    for (double x : draws)
        os << real(x) << '\n';
    return exit_ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig config;
    CLI::App app{"Log-concavity toolkit for mixtures of Beta distributions", "betamix"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_version_flag("--version", version);

    app.add_option("--input", config.input_path, "Mixture JSON file");
    app.add_option("--M", config.order, "Mixture order (or discrete sweep bound for lemmas)");
    app.add_option("--r", config.ratio, "Geometric ratio for the sharpness demo");
    app.add_option("--s", config.index, "Kernel index for the failure demo");
    app.add_option("--n", config.n, "Lemma index n");
    app.add_option("--q", config.q, "Lemma window q");
    app.add_option("--k", config.k, "Lemma window k");
    app.add_option("--grid-points", config.grid_points, "Grid size (default 1024; 4096 for sample)");
    app.add_option("--eps", config.eps, "Grid endpoints at eps and 1-eps")->capture_default_str();
    app.add_option("--tol", config.tol, "Margin tolerance")->capture_default_str();
    app.add_option("--quad-panels", config.quad_panels, "Quadrature panels per unit length")->capture_default_str();
    app.add_option("--quad-nodes", config.quad_nodes, "Quadrature nodes per panel")->capture_default_str();
    app.add_option("--seed", config.seed, "Random seed")->capture_default_str();
    app.add_option("--count", config.count, "Draws (sample) or continuous lemma draws (lemmas)");
    app.add_option("--format", config.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", config.out_path, "Output file (default: standard output)");
    app.add_flag("--debug-negate", config.debug_negate, "Negate every lemma direction (harness self-test)");

    using Command = std::function<int(Context&, std::ostream&)>;
    const std::vector<std::tuple<std::string, std::string, Command, std::string>> commands = {
        {"eval", "Tabulate f, f', f'', log f and (log f)'' on the grid", cmd_eval, "csv"},
        {"certify", "Certify log-concavity and write a JSON certificate", cmd_certify, "json"},
        {"lemmas", "Run the exact and randomized binomial-inequality sweeps", cmd_lemmas, "csv"},
        {"demo", "Geometric tightness and kernel-failure demonstrations", cmd_demo, "csv"},
        {"sample", "Draw from the mixture by inverse CDF", cmd_sample, "csv"},
    };
    for (const auto& [name, help, fn, fmt] : commands)
        app.add_subcommand(name, help);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_bad_input;
    }

    Context ctx;
    for (const auto& [name, help, fn, fmt] : commands) {
        if (!app.got_subcommand(name))
            continue;
        config.command = name;
        if (config.format.empty())
            config.format = fmt;
        ctx.config = config;
        ctx.err = &err;
        try {
            std::ostringstream buffer;
            const int code = fn(ctx, buffer);
            if (!ctx.config.out_path) {
                out << buffer.str();
                return code;
            }
            std::ofstream file(*ctx.config.out_path, std::ios::binary);
            if (!file) {
                err << "cannot write " << *ctx.config.out_path << '\n';
                return exit_bad_input;
            }
            file << buffer.str();
            return code;
        } catch (const InputError& e) {
            err << name << ": " << e.what() << '\n';
            return exit_bad_input;
        } catch (const UsageError& e) {
            err << name << ": " << e.what() << '\n';
            return exit_bad_input;
        } catch (const DegenerateMixtureError& e) {
            err << name << ": " << e.what() << '\n';
            return exit_degenerate;
        } catch (const QuadratureError& e) {
            err << name << ": " << e.what() << '\n';
            return exit_evaluation_failed;
        } catch (const std::invalid_argument& e) {
            err << name << ": " << e.what() << '\n';
            return exit_bad_input;
        } catch (const std::domain_error& e) {
            err << name << ": " << e.what() << '\n';
            return exit_bad_input;
        } catch (const std::exception& e) {
            err << name << ": evaluation failed: " << e.what() << '\n';
            return exit_evaluation_failed;
        }
    }
    err << "no command given\n";
    return exit_bad_input;
}

} // namespace betamix::cli
