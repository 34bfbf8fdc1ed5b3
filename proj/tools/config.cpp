#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "critsob/report.hpp"

namespace critsob::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key + ": not a number: '" + v + "'");
    }
    if (pos != v.size()) throw ConfigError(key + ": not a number: '" + v + "'");
    return out;
}

long long to_int(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    long long out = 0;
    try {
        out = std::stoll(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key + ": not an integer: '" + v + "'");
    }
    if (pos != v.size()) throw ConfigError(key + ": not an integer: '" + v + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(key + ": not a boolean: '" + v + "'");
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt_num(v[i]);
    return out;
}

// synthetic.bubble<i>.<field> -> (i, field)
bool bubble_key(const std::string& key, int& index, std::string& field) {
    const std::string prefix = "synthetic.bubble";
    if (key.rfind(prefix, 0) != 0) return false;
    const auto dot = key.find('.', prefix.size());
    if (dot == std::string::npos) return false;
    const std::string num = key.substr(prefix.size(), dot - prefix.size());
    if (num.empty() || !std::all_of(num.begin(), num.end(), ::isdigit)) return false;
    index = std::stoi(num);
    field = key.substr(dot + 1);
    return true;
}

}  // namespace

std::vector<double> parse_doubles(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) out.push_back(to_double("list", item));
    return out;
}

std::vector<int> parse_ints(const std::string& text) {
    std::vector<int> out;
    for (const auto& item : split_list(text)) out.push_back(static_cast<int>(to_int("list", item)));
    return out;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream is(text);
    int line_no = 0;
    for (std::string line; std::getline(is, line);) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        if (!out.emplace(key, value).second) throw ConfigError("line " + std::to_string(line_no) + ": duplicate key " + key);
    }
    return out;
}

void apply_key(RunConfig& c, const std::string& key, const std::string& v) {
    if (key == "quad.rel_tol") {
        c.quad.rel_tol = to_double(key, v);
    } else if (key == "quad.abs_tol") {
        c.quad.abs_tol = to_double(key, v);
    } else if (key == "quad.max_subdiv") {
        c.quad.max_subdiv = static_cast<int>(to_int(key, v));
    } else if (key == "quad.r_max") {
        c.quad.r_max = v == "none" ? std::nan("") : to_double(key, v);
    } else if (key == "scan.n_min") {
        c.n_min = static_cast<int>(to_int(key, v));
    } else if (key == "scan.n_max") {
        c.n_max = static_cast<int>(to_int(key, v));
    } else if (key == "scan.s") {
        c.s_list.clear();
        for (const auto& item : split_list(v)) c.s_list.push_back(to_double(key, item));
    } else if (key == "scan.mode") {
        if (v == "analytic")
            c.mode = Mode::Analytic;
        else if (v == "exact")
            c.mode = Mode::Exact;
        else
            throw ConfigError(key + ": expected analytic or exact");
    } else if (key == "output.dir") {
        c.output_dir = v;
    } else if (key == "output.format") {
        if (v != "csv" && v != "json") throw ConfigError(key + ": expected csv or json");
        c.output_format = v;
    } else if (key == "output.svg") {
        c.svg = to_bool(key, v);
    } else if (key == "seed") {
        const long long s = to_int(key, v);
        if (s < 0) throw ConfigError("seed must be nonnegative");
        c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "threads") {
        const long long t = to_int(key, v);
        if (t < 1 || t > 1024) throw ConfigError("threads must be in 1..1024");
        c.threads = static_cast<unsigned>(t);
    } else if (key == "verify.tighten") {
        c.tighten = to_double(key, v);
    } else if (key == "verify.golden_dir") {
        c.golden_dir = v;
    } else if (key == "verify.only") {
        c.only.clear();
        for (const auto& item : split_list(v)) c.only.push_back(static_cast<int>(to_int(key, item)));
    } else if (key == "extract.k") {
        c.ks.clear();
        for (const auto& item : split_list(v)) c.ks.push_back(to_double(key, item));
    } else if (key == "extract.max_profiles") {
        c.max_profiles = static_cast<int>(to_int(key, v));
    } else if (key == "extract.samples") {
        c.samples = static_cast<int>(to_int(key, v));
    } else if (key == "synthetic.n") {
        c.synthetic.n = static_cast<int>(to_int(key, v));
    } else if (key == "synthetic.base_on") {
        c.synthetic.base_on = to_bool(key, v);
    } else if (key == "synthetic.base_amplitude") {
        c.synthetic.base_amplitude = to_double(key, v);
    } else if (key == "synthetic.base_radius") {
        c.synthetic.base_radius = to_double(key, v);
    } else if (key == "synthetic.remainder") {
        c.synthetic.remainder = to_double(key, v);
    } else if (key == "synthetic.remainder_radius") {
        c.synthetic.remainder_radius = to_double(key, v);
    } else if (key == "synthetic.remainder_center") {
        c.synthetic.remainder_center.clear();
        for (const auto& item : split_list(v)) c.synthetic.remainder_center.push_back(to_double(key, item));
    } else if (key == "synthetic.bubbles") {
        const long long count = to_int(key, v);
        if (count < 0 || count > 16) throw ConfigError(key + ": expected 0..16");
        c.synthetic.bubbles.assign(static_cast<std::size_t>(count), BubbleSchedule{});
    } else {
        int index = 0;
        std::string field;
        if (!bubble_key(key, index, field)) throw ConfigError("unknown key " + key);
        if (index < 1 || index > static_cast<int>(c.synthetic.bubbles.size()))
            throw ConfigError(key + ": bubble index outside synthetic.bubbles");
        BubbleSchedule& b = c.synthetic.bubbles[index - 1];
        if (field == "center") {
            b.center.clear();
            for (const auto& item : split_list(v)) b.center.push_back(to_double(key, item));
        } else if (field == "drift") {
            b.drift.clear();
            for (const auto& item : split_list(v)) b.drift.push_back(to_double(key, item));
        } else if (field == "c") {
            b.c = to_double(key, v);
        } else if (field == "amplitude") {
            b.amplitude = to_double(key, v);
        } else {
            throw ConfigError("unknown key " + key);
        }
    }
}

void apply_all(RunConfig& cfg, const std::map<std::string, std::string>& entries) {
    int index = 0;
    std::string field;
    for (const auto& [k, v] : entries)
        if (!bubble_key(k, index, field)) apply_key(cfg, k, v);
    for (const auto& [k, v] : entries)
        if (bubble_key(k, index, field)) apply_key(cfg, k, v);
}

std::vector<std::string> known_keys() {
    return {"quad.rel_tol",       "quad.abs_tol",          "quad.max_subdiv",   "quad.r_max",
            "scan.n_min",         "scan.n_max",            "scan.s",            "scan.mode",
            "output.dir",         "output.format",         "output.svg",        "seed",
            "threads",            "verify.tighten",        "verify.golden_dir", "verify.only",
            "extract.k",          "extract.max_profiles",  "extract.samples",   "synthetic.n",
            "synthetic.base_on",  "synthetic.base_amplitude", "synthetic.base_radius", "synthetic.remainder",
            "synthetic.remainder_radius", "synthetic.remainder_center", "synthetic.bubbles",
            "synthetic.bubble<i>.center", "synthetic.bubble<i>.drift", "synthetic.bubble<i>.c",
            "synthetic.bubble<i>.amplitude"};
}

std::map<std::string, std::string> describe(const RunConfig& c) {
    std::map<std::string, std::string> m;
    m["quad.rel_tol"] = fmt_num(c.quad.rel_tol);
    m["quad.abs_tol"] = fmt_num(c.quad.abs_tol);
    m["quad.max_subdiv"] = std::to_string(c.quad.max_subdiv);
    m["quad.r_max"] = std::isnan(c.quad.r_max) ? "none" : fmt_num(c.quad.r_max);
    m["scan.n_min"] = c.n_min ? std::to_string(*c.n_min) : "default";
    m["scan.n_max"] = c.n_max ? std::to_string(*c.n_max) : "default";
    m["scan.s"] = join(c.s_list);
    m["scan.mode"] = to_string(c.mode);
    m["output.format"] = c.output_format;
    m["output.svg"] = c.svg ? "true" : "false";
    m["seed"] = std::to_string(c.seed);
    m["extract.k"] = join(c.ks);
    m["extract.max_profiles"] = std::to_string(c.max_profiles);
    m["extract.samples"] = std::to_string(c.samples);
    m["synthetic.n"] = std::to_string(c.synthetic.n);
    m["synthetic.bubbles"] = std::to_string(c.synthetic.bubbles.size());
    m["synthetic.remainder"] = fmt_num(c.synthetic.remainder);
    return m;
}

}  // namespace critsob::cli
