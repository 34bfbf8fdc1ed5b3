#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "table.hpp"

namespace critsob::cli {

struct Chart {
    std::string name;
    std::string svg;
};

struct CommandOutput {
    std::vector<Table> tables;
    std::vector<Chart> charts;
    int exit_code = 0;  // 0 ok, 1 acceptance failure, 3 partial computational failure
};

// Each command validates its ranges (ConfigError on bad input), prints a short
// human summary to `out` and returns its tables in a fixed order.
CommandOutput cmd_constants(const RunConfig& cfg, std::ostream& out);
CommandOutput cmd_bubble(const RunConfig& cfg, std::ostream& out);
CommandOutput cmd_threshold(const RunConfig& cfg, std::ostream& out);
CommandOutput cmd_asymptotics(const RunConfig& cfg, std::ostream& out);
CommandOutput cmd_ledger(const RunConfig& cfg, std::ostream& out);
CommandOutput cmd_extract(const RunConfig& cfg, std::ostream& out);
CommandOutput cmd_verify(const RunConfig& cfg, std::ostream& out);

}  // namespace critsob::cli
