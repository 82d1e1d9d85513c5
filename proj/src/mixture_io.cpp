#include "betamix/mixture_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace betamix {

namespace {

using nlohmann::json;

double number_field(const json& doc, const char* key)
{
    if (!doc.contains(key))
        throw InputError(std::string("mixture: missing \"") + key + "\"");
    const json& v = doc.at(key);
    if (!v.is_number())
        throw InputError(std::string("mixture: \"") + key + "\" must be a number");
    return v.get<double>();
}

std::vector<double> number_array(const json& doc, const char* key, bool allow_neg_inf)
{
    if (!doc.contains(key) || !doc.at(key).is_array())
        throw InputError(std::string("mixture: \"") + key + "\" must be an array");
    std::vector<double> out;
    for (const json& v : doc.at(key)) {
        if (v.is_number()) {
            out.push_back(v.get<double>());
        } else if (allow_neg_inf && v.is_string() && v.get<std::string>() == "-inf") {
            out.push_back(-std::numeric_limits<double>::infinity());
        } else {
            throw InputError(std::string("mixture: non-numeric entry in \"") + key + "\"");
        }
    }
    return out;
}

json log_value_json(double v)
{
    if (v == -std::numeric_limits<double>::infinity())
        return "-inf";
    return v;
}

} // namespace

Mixture parse_mixture(const json& doc)
{
    if (!doc.is_object())
        throw InputError("mixture: expected a JSON object");
    const double order = number_field(doc, "M");
    try {
        if (doc.contains("weights")) {
            if (order != std::floor(order) || order < 1.0 || order > 1e6)
                throw InputError("mixture: discrete M must be a positive integer");
            return DiscreteMixture(static_cast<int>(order), number_array(doc, "weights", false));
        }
        if (doc.contains("knots") || doc.contains("log_alpha"))
            return ContinuousMixture(order, number_array(doc, "knots", false), number_array(doc, "log_alpha", true));
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    throw InputError("mixture: need \"weights\" or \"knots\" and \"log_alpha\"");
}

Mixture parse_mixture_text(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("mixture: invalid JSON: ") + e.what());
    }
    return parse_mixture(doc);
}

Mixture load_mixture(const std::filesystem::path& path, std::string* raw)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open input file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (raw)
        *raw = buf.str();
    return parse_mixture_text(buf.str());
}

json to_json(const Mixture& mix)
{
    if (const auto* d = std::get_if<DiscreteMixture>(&mix)) {
        auto w = d->weights();
        return {{"M", d->order()}, {"weights", std::vector<double>(w.begin(), w.end())}};
    }
    const auto& c = std::get<ContinuousMixture>(mix);
    json logs = json::array();
    for (double v : c.log_alpha())
        logs.push_back(log_value_json(v));
    auto k = c.knots();
    return {{"M", c.order()}, {"knots", std::vector<double>(k.begin(), k.end())}, {"log_alpha", logs}};
}

json to_json(const ConcavityCertificate& cert)
{
    json out = {
        {"verdict", to_string(cert.verdict)},
        {"criterion", cert.criterion},
        {"grid_points", cert.grid_points},
        {"eps", cert.eps},
        {"tol", cert.tol},
        {"min_margin_eq10", cert.min_margin_eq10},
        {"min_logcurv", cert.min_logcurv},
        {"logcurv_ok", cert.logcurv_ok},
        {"worst_x", cert.worst_x},
        {"midpoint_checks", cert.midpoint_checks},
        {"midpoint_failures", cert.midpoint_failures},
    };
    if (cert.witness) {
        const MidpointWitness& w = *cert.witness;
        out["witness"] = {{"x", w.x}, {"y", w.y}, {"lambda", w.lambda}, {"log_mid", w.log_mid}, {"log_chord", w.log_chord}};
    } else {
        out["witness"] = nullptr;
    }
    return out;
}

std::string input_digest(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace betamix
