#include <cmath>
#include <filesystem>

#include "critsob/report.hpp"
#include "doctest.h"

using namespace critsob;

TEST_CASE("number formatting") {
    CHECK(fmt_num(0.5) == "0.5");
    CHECK(fmt_num(std::nan("")) == "nan");
    CHECK(fmt_num(-INFINITY) == "-inf");
    CHECK(fmt_num(std::optional<double>()) == "");
    CHECK(std::strtod(fmt_num(M_PI).c_str(), nullptr) == doctest::Approx(M_PI).epsilon(1e-12));
}

TEST_CASE("csv quoting round trip") {
    const std::string raw = "a, \"b\"";
    const std::string line = "1," + csv_field(raw) + ",x";
    const auto f = csv_split(line);
    REQUIRE(f.size() == 3);
    CHECK(f[1] == raw);
    CHECK(csv_field("plain") == "plain");
}

TEST_CASE("csv diff") {
    const std::string a = "N,v,status\n5,1.0000000001,ok\n6,nan,ok\n";
    CHECK(csv_diff(a, "N,v,status\n5,1,ok\n6,nan,ok\n", 1e-6).empty());
    CHECK_FALSE(csv_diff(a, "N,v,status\n5,1.1,ok\n6,nan,ok\n", 1e-6).empty());
    CHECK_FALSE(csv_diff(a, "N,v,status\n5,1,bad\n6,nan,ok\n", 1e-6).empty());
    CHECK_FALSE(csv_diff(a, "N,v,status\n5,1,ok\n", 1e-6).empty());
}

TEST_CASE("atomic write") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "critsob_atomic_test" / "nested";
    fs::remove_all(dir.parent_path());
    const std::string path = (dir / "f.txt").string();
    write_file_atomic(path, "one\n");
    write_file_atomic(path, "two\n");
    CHECK(*read_file(path) == "two\n");
    int entries = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        (void)e;
        ++entries;
    }
    CHECK(entries == 1);
    CHECK_FALSE(read_file((dir / "missing").string()).has_value());
    fs::remove_all(dir.parent_path());
}
