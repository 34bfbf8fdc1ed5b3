#include "critsob/report.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <unistd.h>

namespace critsob {

std::string fmt_num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt_num(const std::optional<double>& v) { return v ? fmt_num(*v) : std::string(); }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                out.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else {
            out.back() += c;
        }
    }
    return out;
}

namespace {
std::string truth_field(const std::optional<Truth>& t) { return t ? to_string(*t) : ""; }
}  // namespace

std::string threshold_csv(const std::vector<ThresholdRecord>& records) {
    std::ostringstream os;
    os << "N,s,mode,lhs_analytic,lhs_exact,rhs,predicate_analytic,predicate_exact,margin_analytic,margin_exact,"
          "error_estimate,status\n";
    for (const ThresholdRecord& r : records)
        for (const BoundReport& b : r.table) {
            os << b.n << ',' << fmt_num(b.s) << ',' << to_string(r.mode) << ',' << fmt_num(b.lhs_analytic) << ','
               << fmt_num(b.lhs_exact) << ',' << fmt_num(b.rhs) << ',' << truth_field(b.predicate_analytic) << ','
               << truth_field(b.predicate_exact) << ',' << fmt_num(b.margin_analytic) << ','
               << fmt_num(b.margin_exact) << ',' << fmt_num(b.error_estimate) << ',' << csv_field(b.status) << '\n';
        }
    return os.str();
}

std::string threshold_summary_csv(const std::vector<ThresholdRecord>& records) {
    std::ostringstream os;
    os << "s,mode,n_lo,n_hi,n0,non_monotone,any_error\n";
    for (const ThresholdRecord& r : records) {
        os << fmt_num(r.s) << ',' << to_string(r.mode) << ',' << r.n_lo << ',' << r.n_hi << ','
           << (r.n0 ? std::to_string(*r.n0) : std::string()) << ',' << (r.non_monotone ? "true" : "false") << ','
           << (r.any_error ? "true" : "false") << '\n';
    }
    return os.str();
}

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string l; std::getline(is, l);)
        if (!l.empty()) out.push_back(l);
    return out;
}

bool as_number(const std::string& s, double& v) {
    if (s.empty()) return false;
    char* end = nullptr;
    v = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

}  // namespace

std::string csv_diff(const std::string& expected, const std::string& actual, double rel_tol) {
    const auto a = lines_of(expected), b = lines_of(actual);
    if (a.size() != b.size())
        return "row count " + std::to_string(b.size()) + " differs from " + std::to_string(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto fa = csv_split(a[i]), fb = csv_split(b[i]);
        if (fa.size() != fb.size()) return "line " + std::to_string(i + 1) + ": field count differs";
        for (std::size_t j = 0; j < fa.size(); ++j) {
            double x, y;
            if (as_number(fa[j], x) && as_number(fb[j], y)) {
                if (std::isnan(x) && std::isnan(y)) continue;
                if (x == y) continue;
                if (std::abs(x - y) <= rel_tol * std::max(std::abs(x), std::abs(y))) continue;
            } else if (fa[j] == fb[j]) {
                continue;
            }
            return "line " + std::to_string(i + 1) + " field " + std::to_string(j + 1) + ": expected '" + fa[j] +
                   "' got '" + fb[j] + "'";
        }
    }
    return {};
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        os << content;
        os.flush();
        if (!os) throw std::runtime_error("write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot move " + tmp.string() + " into place: " + ec.message());
    }
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) return std::nullopt;
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace critsob
