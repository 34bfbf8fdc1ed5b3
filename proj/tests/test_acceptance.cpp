#include <filesystem>
#include <set>

#include "critsob/acceptance.hpp"
#include "critsob/errors.hpp"
#include "critsob/report.hpp"
#include "doctest.h"

using namespace critsob;

TEST_CASE("report lists each selected criterion once") {
    AcceptanceOptions o;
    o.only = {10, 1, 8, 1};
    const AcceptanceReport r = run_acceptance(o);
    REQUIRE(r.criteria.size() == 3);
    CHECK(r.criteria[0].id == 1);
    CHECK(r.criteria[1].id == 8);
    CHECK(r.criteria[2].id == 10);
    CHECK(r.passed());
    CHECK(r.text().find("8 PASS R(N) limit: ") != std::string::npos);
    std::set<std::string> names;
    for (int id = 1; id <= kCriterionCount; ++id) names.insert(criterion_name(id));
    CHECK(names.size() == kCriterionCount);
    o.only = {16};
    CHECK_THROWS_AS(run_acceptance(o), DomainError);
}

TEST_CASE("tightened tolerances name the failing criteria") {
    AcceptanceOptions o;
    o.tighten = 100.0;
    o.only = {1, 8, 10, 11, 12};
    const AcceptanceReport r = run_acceptance(o);
    CHECK_FALSE(r.passed());
    const auto failed = r.failed_ids();
    CHECK(failed == std::vector<int>{8, 10, 11});
    for (const auto& c : r.criteria)
        if (!c.passed) CHECK(c.detail.rfind("failed: ", 0) == 0);
}

TEST_CASE("golden tables: pinning and regression") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "critsob_golden_test";
    fs::remove_all(dir);
    AcceptanceOptions o;
    o.only = {7};
    o.golden_dir = dir.string();
    o.pin_missing = false;
    CHECK_FALSE(run_acceptance(o).passed());

    o.pin_missing = true;
    const AcceptanceReport pinned = run_acceptance(o);
    CHECK(pinned.passed());
    CHECK(pinned.criteria[0].detail.find("pinned") != std::string::npos);
    CHECK(fs::exists(dir / "threshold_analytic.csv"));

    // the in-tree tables agree with a fresh pin
    const auto fresh = read_file((dir / "threshold_exact.csv").string());
    const auto tree = read_file(default_golden_dir() + "/threshold_exact.csv");
    REQUIRE(fresh);
    REQUIRE(tree);
    CHECK(csv_diff(*tree, *fresh, 1e-6).empty());

    // a flipped predicate is caught
    std::string text = *fresh;
    const auto pos = text.find(",true,true,");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 11, ",true,false,");
    write_file_atomic((dir / "threshold_exact.csv").string(), text);
    const AcceptanceReport broken = run_acceptance(o);
    CHECK_FALSE(broken.passed());
    CHECK(broken.criteria[0].detail.find("threshold_exact.csv line") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("determinism criterion") {
    AcceptanceOptions o;
    o.only = {12, 14, 15};
    const AcceptanceReport r = run_acceptance(o);
    REQUIRE(r.criteria.size() == 3);
    CHECK(r.criteria[2].id == 15);
    CHECK(r.criteria[2].passed);
    CHECK(r.criteria[2].detail.find("2 criteria rerun") != std::string::npos);
}
