#pragma once

#include "betamix/certifier.hpp"
#include "betamix/mixture.hpp"

#include "json.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace betamix {

/// Malformed or invalid mixture input.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Accepts {"M": int, "weights": [...]} (discrete; M may be written as a
/// real with zero fractional part) or {"M": real, "knots": [...],
/// "log_alpha": [...]} (continuous; "-inf" allowed in log_alpha).
Mixture parse_mixture(const nlohmann::json& doc);
Mixture parse_mixture_text(const std::string& text);

/// Reads and parses a mixture file. `raw` receives the file bytes when given.
Mixture load_mixture(const std::filesystem::path& path, std::string* raw = nullptr);

nlohmann::json to_json(const Mixture& mix);
nlohmann::json to_json(const ConcavityCertificate& cert);

/// 64-bit FNV-1a of the bytes, as "fnv1a64:<16 hex digits>".
std::string input_digest(const std::string& bytes);

} // namespace betamix
