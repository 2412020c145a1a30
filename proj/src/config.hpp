#pragma once

// Runtime configuration: thresholds, signal constants, weight profiles,
// corpus parameters and oracle probabilities. Loaded from a single flat JSON
// document with a schema-version field; CLI flags override file values.

#include <string>

#include "gate.hpp"
#include "tracegen.hpp"

namespace locgate {

enum class DetectionUnit { trace, fix };

struct Config {
    Thresholds thresholds;
    SignalConstants signals;
    ProfileTable profiles = ProfileTable::defaults();
    StepUpOracle oracle;
    CorpusConfig corpus;
    bool strict_parse = false;
    DetectionUnit detection_unit = DetectionUnit::trace;

    void validate() const;
};

// Parses a config document; unknown keys error in strict mode (the file's
// own strict_parse field applies to itself) and warn otherwise.
Config parse_config(const std::string& json_text, std::vector<std::string>* warnings = nullptr);

Config load_config_file(const std::string& path, std::vector<std::string>* warnings = nullptr);

std::string config_json(const Config& cfg);

}  // namespace locgate
