/// Command-line front end: load a JSON run configuration, execute it, and
/// write the report (and optional CSV point dump).
///
///   paralattice <command> --config run.json [--out report.json] [--points pts.csv]
///
/// The positional command overrides the config's "command" field, so one
/// config can drive several runs. Exit status: 0 when the verdict is
/// certified-* or evidence-only, 1 for rejected/unknown, 2 for bad
/// configuration or I/O failures.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "paralattice/config.hpp"
#include "paralattice/errors.hpp"
#include "paralattice/pipeline.hpp"
#include "paralattice/points_io.hpp"

namespace {

const std::set<std::string> kCommands = {"construct", "verify",  "certify",
                                         "decompose", "bounds", "emit-points"};

int run(const std::string& command, const std::string& config_path, const std::string& out_path,
        const std::string& points_path) {
    paralattice::RunConfig rc = paralattice::parse_config_file(config_path);
    if (!command.empty()) rc.command = command;
    if (kCommands.find(rc.command) == kCommands.end())
        throw paralattice::ConfigError("command", "unknown command \"" + rc.command + "\"");
    if (rc.command == "emit-points" && points_path.empty())
        throw paralattice::ConfigError("--points", "emit-points needs a --points output file");

    const paralattice::ExecResult res = paralattice::execute(rc);

    const std::string text = res.report.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw paralattice::IoError("cannot open report file \"" + out_path + "\"");
        out << text;
        if (!out) throw paralattice::IoError("failed writing report file \"" + out_path + "\"");
    }

    if (!points_path.empty()) {
        if (!res.has_points && res.points.empty())
            throw paralattice::ConfigError(
                "--points", "this run produced no point series; use emit-points or add \"series\"");
        paralattice::write_points_csv(points_path, res.points_dim, res.points);
    }

    return res.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lattice frequency sets for exponential bases on parallelepipeds"};
    app.require_subcommand(0);

    std::string command;
    std::string config_path;
    std::string out_path;
    std::string points_path;

    app.add_option("command", command, "construct|verify|certify|decompose|bounds|emit-points")
        ->required();
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--out", out_path, "report output file (default: stdout)");
    app.add_option("--points", points_path, "CSV point dump output file");

    CLI11_PARSE(app, argc, argv);

    try {
        return run(command, config_path, out_path, points_path);
    } catch (const paralattice::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const paralattice::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const paralattice::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 2;
    }
}
