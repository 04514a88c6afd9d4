// Flat key=value config files. Unknown keys are rejected; values are
// validated with field-level messages. CLI flags layer on top of this.
#pragma once

#include <string>
#include <string_view>

#include "repage/engine.hpp"

namespace repage {

// "uniform" | "uniform:LO,HI" | "point:Q" | "normal:MEAN,STDDEV"
QualityDistSpec parse_quality_dist(std::string_view text);
std::string to_string(const QualityDistSpec& spec);

ScenarioLevel parse_level(std::string_view text);

// Applies one key=value pair onto `config`. Throws std::invalid_argument
// naming the key on unknown keys or bad values.
void apply_config_entry(SimConfig& config, std::string_view key, std::string_view value);

// Parses the file at `path` over `base`. Lines are `key = value`; blank
// lines and lines starting with '#' are skipped; duplicate keys are
// rejected.
SimConfig load_config_file(const std::string& path, const SimConfig& base = SimConfig{});
SimConfig parse_config_text(std::string_view text, const SimConfig& base = SimConfig{});

}  // namespace repage
