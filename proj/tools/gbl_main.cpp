// gbl — greedy-basis laboratory CLI.
//
// Subcommands: analyze, witness, renorm, gallery. Instances are JSON files;
// an argument that is not an existing file is resolved as a gallery name.
// Exit codes: 0 success/consistent, 1 input or guard error, 2 theorem
// inconsistency (which indicates an implementation bug, not a bad input).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gbl/errors.hpp"
#include "gbl/gallery.hpp"
#include "gbl/instance.hpp"
#include "gbl/report.hpp"

namespace {

struct CliFlags {
    std::optional<int> budget;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::string out;
    bool hilbert = false;
    bool all_ties = false;
};

gbl::Instance resolve_instance(const std::string& arg) {
    std::error_code ec;
    if (std::filesystem::exists(arg, ec)) return gbl::load_instance_file(arg);
    if (gbl::is_gallery_name(arg)) return gbl::gallery_instance(arg);
    throw gbl::InstanceError("'" + arg +
                             "' is neither an existing instance file nor a gallery name "
                             "(see `gbl gallery --list`)");
}

/// Defaults < file overrides < explicit CLI flags.
gbl::ReportOptions effective_options(const gbl::Instance& inst, const CliFlags& cli) {
    gbl::ReportOptions opt;
    if (inst.overrides.budget) opt.budget.restarts = *inst.overrides.budget;
    if (inst.overrides.seed) opt.budget.seed = *inst.overrides.seed;
    if (inst.overrides.tol) opt.tol = *inst.overrides.tol;
    if (cli.budget) opt.budget.restarts = *cli.budget;
    if (cli.seed) opt.budget.seed = *cli.seed;
    if (cli.tol) opt.tol = *cli.tol;
    opt.all_ties = cli.all_ties;
    return opt;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    f << text;
    if (!f) throw gbl::InstanceError("cannot write output file '" + out_path + "'");
}

int run(int argc, char** argv) {
    CLI::App app{"greedy-basis laboratory: quasi-greedy and suppression constants"};
    app.require_subcommand(1);

    CliFlags flags;
    std::string instance_arg;
    bool list_gallery = false;

    const auto add_common = [&](CLI::App* cmd, bool with_search) {
        cmd->add_option("instance", instance_arg, "Instance file or gallery name")->required();
        cmd->add_option("--out", flags.out, "Write output to this file instead of stdout");
        if (with_search) {
            cmd->add_option("--budget", flags.budget, "Search restarts (default 10000)");
            cmd->add_option("--seed", flags.seed, "Search seed (default 0)");
            cmd->add_option("--tol", flags.tol, "Verdict tolerance (default 1e-9)");
            cmd->add_flag("--all-ties", flags.all_ties,
                          "List every valid greedy set at each witness");
        }
    };

    CLI::App* analyze = app.add_subcommand("analyze", "Full constant report with verdict");
    add_common(analyze, true);

    CLI::App* witness = app.add_subcommand("witness", "Strongest greedy-violation certificate");
    add_common(witness, true);
    witness->add_flag("--hilbert", flags.hilbert,
                      "Per-pair orthogonality witnesses (quadratic, canonical basis)");

    CLI::App* renorm = app.add_subcommand("renorm", "Emit the 1-suppression renormed instance");
    add_common(renorm, false);

    CLI::App* gallery = app.add_subcommand("gallery", "Emit a builtin instance");
    gallery->add_option("name", instance_arg, "Gallery instance name");
    gallery->add_flag("--list", list_gallery, "List the builtin families");
    gallery->add_option("--out", flags.out, "Write output to this file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (gallery->parsed()) {
        if (list_gallery == !instance_arg.empty()) {
            std::cerr << "gbl: gallery needs exactly one of --list or a name\n";
            return 1;
        }
        if (list_gallery) {
            nlohmann::json j;
            j["schema"] = "gbl/1";
            j["kind"] = "gallery";
            j["families"] = nlohmann::json::array();
            for (const auto& fam : gbl::gallery_families()) {
                j["families"].push_back({{"pattern", fam.pattern},
                                         {"description", fam.description},
                                         {"example", fam.example}});
            }
            emit(gbl::render_json(j), flags.out);
            return 0;
        }
        emit(gbl::render_json(gbl::instance_to_json(gbl::gallery_instance(instance_arg))),
             flags.out);
        return 0;
    }

    const gbl::Instance inst = resolve_instance(instance_arg);
    const gbl::ReportOptions opt = effective_options(inst, flags);

    if (analyze->parsed()) {
        const nlohmann::json report = gbl::analyze_report(inst, opt);
        emit(gbl::render_json(report), flags.out);
        return report.at("verdict").at("consistent").get<bool>() ? 0 : 2;
    }
    if (witness->parsed()) {
        emit(gbl::render_json(gbl::witness_report(inst, opt, flags.hilbert)), flags.out);
        return 0;
    }
    // renorm
    emit(gbl::render_json(gbl::renorm_instance_json(inst)), flags.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const gbl::Error& e) {
        std::cerr << "gbl: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "gbl: " << e.what() << "\n";
        return 1;
    }
}
