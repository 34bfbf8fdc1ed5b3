#pragma once

// Run configuration: flat "key = value" files with namespaced keys, overridden
// by --set and dedicated flags, plus CRITSOB_OUTPUT_DIR for the output directory.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "critsob/extractor.hpp"
#include "critsob/radial.hpp"
#include "critsob/threshold.hpp"

namespace critsob::cli {

/// Bad configuration or usage; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    QuadSpec quad;
    std::optional<int> n_min;  // unset: per-command default
    std::optional<int> n_max;
    std::vector<double> s_list = {0.25, 0.5, 0.75};
    Mode mode = Mode::Analytic;
    std::string output_dir = "out";
    std::string output_format = "csv";
    bool svg = false;
    std::uint64_t seed = 20240607;
    unsigned threads = 1;

    double tighten = 1.0;
    std::string golden_dir;
    std::vector<int> only;

    SyntheticSpec synthetic = default_two_bubble();
    std::vector<double> ks = {8, 16, 32};
    int max_profiles = 4;
    int samples = 200000;
};

/// Parses "key = value" lines; '#' starts a comment. Throws ConfigError on
/// malformed lines and duplicate keys.
std::map<std::string, std::string> parse_config_text(const std::string& text);

/// Applies one key; throws ConfigError for unknown keys or bad values.
void apply_key(RunConfig& cfg, const std::string& key, const std::string& value);

/// Applies a merged set of keys: per-bubble keys (synthetic.bubble<i>.*) go
/// last so that synthetic.bubbles and synthetic.n are already in place.
void apply_all(RunConfig& cfg, const std::map<std::string, std::string>& entries);

/// Every key apply_key accepts.
std::vector<std::string> known_keys();

/// The effective configuration as sorted key/value pairs.
std::map<std::string, std::string> describe(const RunConfig& cfg);

std::vector<double> parse_doubles(const std::string& text);
std::vector<int> parse_ints(const std::string& text);

}  // namespace critsob::cli
