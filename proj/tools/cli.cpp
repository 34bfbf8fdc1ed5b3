#include "cli.hpp"

#include <cstdlib>
#include <functional>
#include <map>

#include "CLI11.hpp"
#include "commands.hpp"
#include "critsob/errors.hpp"
#include "critsob/report.hpp"

namespace critsob::cli {

namespace {

using Command = std::function<CommandOutput(const RunConfig&, std::ostream&)>;

void write_outputs(const RunConfig& cfg, const CommandOutput& o, std::ostream& out) {
    const auto conf = describe(cfg);
    for (const Table& t : o.tables) {
        const std::string path = cfg.output_dir + "/" + t.name + "." + cfg.output_format;
        write_file_atomic(path, cfg.output_format == "json" ? to_json(t, conf) : to_csv(t));
        out << "wrote " << path << "\n";
    }
    for (const Chart& c : o.charts) {
        const std::string path = cfg.output_dir + "/" + c.name + ".svg";
        write_file_atomic(path, c.svg);
        out << "wrote " << path << "\n";
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sharp Sobolev constants, bubble seminorms, dimension thresholds and profile extraction"};
    app.require_subcommand(1, 1);
    app.fallthrough();  // global options may follow the subcommand

    std::string config_path, out_dir, format;
    std::vector<std::string> sets;
    unsigned threads = 0;
    std::uint64_t seed = 0;
    bool svg = false;
    auto* o_config = app.add_option("--config", config_path, "flat key = value configuration file");
    auto* o_set = app.add_option("--set", sets, "override one configuration key (key=value), repeatable");
    auto* o_out = app.add_option("-o,--out", out_dir, "output directory (key output.dir)");
    auto* o_format = app.add_option("-f,--format", format, "csv or json (key output.format)")
                         ->check(CLI::IsMember({"csv", "json"}));
    auto* o_threads = app.add_option("-j,--threads", threads, "worker threads (key threads)")->check(CLI::Range(1, 1024));
    auto* o_seed = app.add_option("--seed", seed, "random seed (key seed)");
    auto* o_svg = app.add_flag("--svg", svg, "also write static SVG charts where available");
    (void)o_config;
    (void)o_set;

    int n_min = 0, n_max = 0;
    std::vector<double> s_list, ks;
    std::string mode;
    double tighten = 1.0;
    std::vector<int> only;
    std::string golden;

    std::map<CLI::App*, Command> commands;
    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> flags;
    auto add_range = [&](CLI::App* sub) {
        flags.push_back({sub->add_option("--n-min", n_min, "smallest N (key scan.n_min)"),
                         [&](RunConfig& c) { c.n_min = n_min; }});
        flags.push_back({sub->add_option("--n-max", n_max, "largest N (key scan.n_max)"),
                         [&](RunConfig& c) { c.n_max = n_max; }});
    };
    auto add_s = [&](CLI::App* sub) {
        flags.push_back({sub->add_option("-s,--s", s_list, "orders s, comma separated (key scan.s)")->delimiter(','),
                         [&](RunConfig& c) { c.s_list = s_list; }});
    };

    auto* constants = app.add_subcommand("constants", "S_N, sphere measures, bubble level and Coron window per N");
    add_range(constants);
    commands[constants] = cmd_constants;

    auto* bubble = app.add_subcommand("bubble", "bubble norms and Gagliardo seminorms by both quadrature routes");
    add_range(bubble);
    add_s(bubble);
    commands[bubble] = cmd_bubble;

    auto* threshold = app.add_subcommand("threshold", "threshold inequality scan and N0 per s");
    add_range(threshold);
    add_s(threshold);
    flags.push_back({threshold->add_option("--mode", mode, "analytic or exact (key scan.mode)")
                         ->check(CLI::IsMember({"analytic", "exact"})),
                     [&](RunConfig& c) { c.mode = mode == "exact" ? Mode::Exact : Mode::Analytic; }});
    commands[threshold] = cmd_threshold;

    auto* asym = app.add_subcommand("asymptotics", "large-N behaviour of the constants and the bound ratio");
    add_range(asym);
    add_s(asym);
    commands[asym] = cmd_asymptotics;

    auto* ledger = app.add_subcommand("ledger", "energy levels, quadrature cross-checks and the sign-split identity");
    add_range(ledger);
    add_s(ledger);
    commands[ledger] = cmd_ledger;

    auto* extract = app.add_subcommand("extract", "profile extraction on a synthetic Palais-Smale sequence");
    add_s(extract);
    flags.push_back({extract->add_option("-k,--k", ks, "sequence indices, comma separated (key extract.k)")->delimiter(','),
                     [&](RunConfig& c) { c.ks = ks; }});
    commands[extract] = cmd_extract;

    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    flags.push_back({verify->add_option("--tighten", tighten, "divide every tolerance by this factor (key verify.tighten)"),
                     [&](RunConfig& c) { c.tighten = tighten; }});
    flags.push_back({verify->add_option("--only", only, "criterion ids, comma separated (key verify.only)")->delimiter(','),
                     [&](RunConfig& c) { c.only = only; }});
    flags.push_back({verify->add_option("--golden-dir", golden, "golden table directory (key verify.golden_dir)"),
                     [&](RunConfig& c) { c.golden_dir = golden; }});
    commands[verify] = cmd_verify;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    RunConfig cfg;
    try {
        std::map<std::string, std::string> entries;
        if (!config_path.empty()) {
            const auto text = read_file(config_path);
            if (!text) throw ConfigError("cannot read config file " + config_path);
            entries = parse_config_text(*text);
        }
        for (const std::string& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
            entries[s.substr(0, eq)] = s.substr(eq + 1);
        }
        apply_all(cfg, entries);
        if (const char* env = std::getenv("CRITSOB_OUTPUT_DIR"); env && *env) cfg.output_dir = env;
        if (o_out->count()) cfg.output_dir = out_dir;
        if (o_format->count()) cfg.output_format = format;
        if (o_threads->count()) cfg.threads = threads;
        if (o_seed->count()) cfg.seed = seed;
        if (o_svg->count()) cfg.svg = svg;
        for (auto& [opt, apply] : flags)
            if (opt->count()) apply(cfg);
        try {
            cfg.quad.validate();
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    }

    CLI::App* chosen = app.get_subcommands().front();
    try {
        const CommandOutput result = commands.at(chosen)(cfg, out);
        write_outputs(cfg, result, out);
        return result.exit_code;
    } catch (const ConfigError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "computation failed: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace critsob::cli
