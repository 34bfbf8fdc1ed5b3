#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "critsob/report.hpp"
#include "critsob/threshold.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace critsob;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "critsob");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("critsob_cli_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    const auto t = read_file(p.string());
    REQUIRE(t.has_value());
    return *t;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
    const std::string dir = scratch("usage").string();
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"nonsense"}).code == 2);
    CHECK(invoke({"constants", "--n-min", "6", "--n-max", "3", "-o", dir}).code == 2);
    CHECK(invoke({"constants", "--n-min", "2", "-o", dir}).code == 2);
    CHECK(invoke({"threshold", "-s", "1.2", "-o", dir}).code == 2);
    CHECK(invoke({"threshold", "--n-min", "4", "-o", dir}).code == 2);
    CHECK(invoke({"threshold", "--mode", "fuzzy", "-o", dir}).code == 2);
    CHECK(invoke({"constants", "--set", "no.such.key=1", "-o", dir}).code == 2);
    CHECK(invoke({"constants", "--set", "quad.rel_tol=-1", "-o", dir}).code == 2);
    CHECK(invoke({"bubble", "--set", "quad.rel_tol=-1", "-o", dir}).code == 2);
    CHECK(invoke({"constants", "--config", "/nonexistent/file.cfg", "-o", dir}).code == 2);
    CHECK(invoke({"verify", "--only", "99", "-o", dir}).code == 2);
    CHECK(invoke({"extract", "--set", "synthetic.n=7", "-o", dir}).code == 2);
    CHECK(invoke({"--help"}).code == 0);
    CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("constants table") {
    const fs::path dir = scratch("constants");
    const Run r = invoke({"constants", "--n-min", "3", "--n-max", "6", "-o", dir.string()});
    CHECK(r.code == 0);
    const std::string csv = slurp(dir / "constants.csv");
    std::istringstream is(csv);
    std::string header, first;
    std::getline(is, header);
    std::getline(is, first);
    CHECK(header.rfind("N,s,", 0) == 0);
    CHECK(header.substr(header.size() - 21) == "error_estimate,status");
    const auto f = csv_split(first);
    CHECK(f[0] == "3");
    CHECK(std::abs(std::stod(f[4]) - 5.47790) < 1e-5);
    int rows = 0;
    for (std::string l; std::getline(is, l);) ++rows;
    CHECK(rows == 3);

    // json carries the same numbers and a schema version
    CHECK(invoke({"constants", "--n-min", "3", "--n-max", "6", "-o", dir.string(), "-f", "json"}).code == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "constants.json"));
    CHECK(j.at("schema_version") == 1);
    CHECK(j.at("table") == "constants");
    REQUIRE(j.at("rows").size() == 4);
    const auto& cols = j.at("columns");
    for (const auto& row : j.at("rows")) {
        CHECK(row.size() == cols.size());
        for (const auto& c : cols) CHECK(row.contains(c.get<std::string>()));
    }
    CHECK(j["rows"][0]["sobolev"].get<double>() == std::stod(f[4]));
    CHECK(j["rows"][0]["s"].is_null());
    fs::remove_all(dir);
}

TEST_CASE("identical configuration gives byte-identical output") {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    for (const auto& cmd : std::vector<std::vector<std::string>>{
             {"threshold", "--n-max", "60"},
             {"bubble", "--n-max", "5", "-s", "0.5,0.75"},
             {"extract", "-k", "16", "--set", "extract.samples=20000"}}) {
        auto ca = cmd, cb = cmd;
        ca.insert(ca.end(), {"-o", a.string()});
        cb.insert(cb.end(), {"-o", b.string(), "-j", "3"});
        CHECK(invoke(ca).code == 0);
        CHECK(invoke(cb).code == 0);
    }
    int files = 0;
    for (const auto& e : fs::directory_iterator(a)) {
        ++files;
        CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
    }
    CHECK(files == 5);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("threshold output matches the library table") {
    const fs::path dir = scratch("threshold");
    const Run r = invoke({"threshold", "-s", "0.5", "--n-max", "40", "-o", dir.string(), "--svg"});
    CHECK(r.code == 0);
    CHECK(r.out.find("N0=22") != std::string::npos);
    const ThresholdRecord rec = threshold_search(0.5, Mode::Analytic, 5, 40, QuadSpec{});
    CHECK(slurp(dir / "threshold.csv") == threshold_csv({rec}));
    CHECK(slurp(dir / "threshold_summary.csv") == threshold_summary_csv({rec}));
    CHECK(slurp(dir / "threshold.svg").rfind("<svg", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("configuration file, overrides and the output directory variable") {
    const fs::path root = scratch("config");
    fs::create_directories(root);
    const fs::path cfg = root / "run.cfg";
    write_file_atomic(cfg.string(), "# threshold run\nscan.s = 0.25\nscan.n_max = 30\noutput.dir = " +
                                        (root / "from_file").string() + "\noutput.format = json\n");
    CHECK(invoke({"--config", cfg.string(), "threshold"}).code == 0);
    const auto j = nlohmann::json::parse(slurp(root / "from_file" / "threshold_summary.json"));
    CHECK(j["rows"][0]["s"] == 0.25);
    CHECK(j["rows"][0]["n_hi"] == 30);

    // --set beats the file, flags beat --set
    CHECK(invoke({"--config", cfg.string(), "--set", "scan.n_max=25", "threshold", "--n-min", "20"}).code == 0);
    const auto k = nlohmann::json::parse(slurp(root / "from_file" / "threshold_summary.json"));
    CHECK(k["rows"][0]["n_lo"] == 20);
    CHECK(k["rows"][0]["n_hi"] == 25);

    ::setenv("CRITSOB_OUTPUT_DIR", (root / "from_env").string().c_str(), 1);
    CHECK(invoke({"--config", cfg.string(), "constants", "--n-max", "4"}).code == 0);
    CHECK(fs::exists(root / "from_env" / "constants.json"));
    CHECK(invoke({"--config", cfg.string(), "constants", "--n-max", "4", "-o", (root / "flag").string()}).code == 0);
    CHECK(fs::exists(root / "flag" / "constants.json"));
    ::unsetenv("CRITSOB_OUTPUT_DIR");

    write_file_atomic(cfg.string(), "scan.s = 0.5\nscan.s = 0.25\n");
    CHECK(invoke({"--config", cfg.string(), "constants"}).code == 2);
    write_file_atomic(cfg.string(), "just words\n");
    CHECK(invoke({"--config", cfg.string(), "constants"}).code == 2);
    fs::remove_all(root);
}

TEST_CASE("synthetic sequence from configuration keys") {
    const fs::path dir = scratch("synthetic");
    const Run r = invoke({"extract", "-o", dir.string(), "-k", "20", "--set", "synthetic.n=3", "--set",
                       "synthetic.bubbles=1", "--set", "synthetic.bubble1.center=0.2,0,0", "--set",
                       "synthetic.bubble1.c=1", "--set", "extract.samples=20000"});
    CHECK(r.code == 0);
    const std::string csv = slurp(dir / "extract_profiles.csv");
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    std::getline(is, line);
    const auto f = csv_split(line);
    // lambda = 1/20; the default remainder bump sits under the bubble
    CHECK(std::abs(std::stod(f[4]) - 0.2) < 0.01 * 0.05);
    CHECK(std::abs(std::stod(f[7]) - 0.05) < 0.01 * 0.05);
    CHECK(invoke({"extract", "-o", dir.string(), "--set", "synthetic.bubble3.c=1"}).code == 2);
    fs::remove_all(dir);
}

TEST_CASE("verify exit codes") {
    const fs::path dir = scratch("verify");
    const Run ok = invoke({"verify", "--only", "1,8,10", "-o", dir.string()});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("all 3 criteria passed") != std::string::npos);
    const Run bad = invoke({"verify", "--only", "1,8,10", "--tighten", "100", "-o", dir.string()});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("failed criteria: 8 10") != std::string::npos);
    const std::string csv = slurp(dir / "verify.csv");
    CHECK(csv.rfind("id,name,passed,detail\n1,", 0) == 0);
    fs::remove_all(dir);
}
