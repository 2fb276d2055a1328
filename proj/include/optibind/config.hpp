#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "optibind/response.hpp"
#include "optibind/scenario.hpp"

namespace optibind {

inline constexpr const char* kToolkitVersion = "0.1.0";

// Configuration errors carry the offending field path ("tweezers[2].waist").
class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string& field, const std::string& what)
        : std::runtime_error(field.empty() ? what : field + ": " + what), field_(field) {}
    const std::string& field() const { return field_; }

  private:
    std::string field_;
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Dimensioned quantities in scenario files are strings "value unit" from a
// fixed unit table; Hz-family rates are ordinary frequencies and are
// converted to angular ones (factor 2 pi) internally.
enum class Dimension { Length, Power, Amplitude, AngularRate, Mass, Density, Temperature, Angle };
double parse_quantity(const std::string& text, Dimension dim, const std::string& field);

struct ParseOptions {
    bool force = false;  // waive the validation gates
};

struct LoadedScenario {
    ArrayScenario scenario;
    std::optional<ChainSpec> chain;  // present for chain-shorthand files
    nlohmann::json canonical;
    std::uint64_t hash = 0;
};

LoadedScenario parse_scenario(const std::string& path, const ParseOptions& opt = {});
LoadedScenario parse_scenario_json(const nlohmann::json& doc, const ParseOptions& opt = {});

// Canonical normalized form: SI quantities as "value unit" strings with 17
// significant digits; parse(emit(x)) == x.
nlohmann::json emit_scenario(const ArrayScenario& sc);

std::uint64_t scenario_hash(const nlohmann::json& canonical);

// Reproducibility sidecar written next to every set of outputs.
void write_manifest(const std::string& dir, const std::string& command, std::uint64_t hash,
                    std::uint64_t seed, const std::vector<std::string>& outputs);

}  // namespace optibind
