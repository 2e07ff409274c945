#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bellstat/counts.hpp"
#include "bellstat/errors.hpp"
#include "bellstat/io.hpp"
#include "bellstat/report.hpp"

namespace {

// The positional argument accepts an embedded dataset name or, when it
// looks like a path, a .json/.csv file; --dataset-file forces file input.
bellstat::BellDataset resolve_dataset(const std::string& name,
                                      const std::string& file) {
    if (!file.empty()) return bellstat::load_dataset_file(file);
    const auto& names = bellstat::embedded_names();
    if (std::find(names.begin(), names.end(), name) == names.end() &&
        (name.find('/') != std::string::npos ||
         name.find('.') != std::string::npos))
        return bellstat::load_dataset_file(name);
    return bellstat::load_embedded(name);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Statistical analysis of two-setting, two-outcome Bell-test "
                 "count data"};
    app.require_subcommand(0, 1);

    CLI::App* list_cmd =
        app.add_subcommand("list", "List the embedded datasets");

    CLI::App* analyze_cmd = app.add_subcommand(
        "analyze", "Analyze an embedded dataset (by name) or a JSON/CSV file");
    std::string dataset;
    std::string dataset_file;
    std::vector<std::string> methods;
    std::string format = "text";
    analyze_cmd->add_option("dataset", dataset,
                            "Embedded dataset name or file path");
    analyze_cmd->add_option("--dataset-file", dataset_file,
                            "Read the dataset from a .json or .csv file");
    analyze_cmd
        ->add_option("--method", methods,
                     "Pipelines to run: gls, mle, bellgame, all (default all; "
                     "repeatable)")
        ->check(CLI::IsMember({"gls", "mle", "bellgame", "all"}));
    analyze_cmd->add_option("--format", format, "Output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));

    CLI::App* reproduce_cmd = app.add_subcommand(
        "reproduce",
        "Run every method on every embedded dataset and compare against the "
        "published figures");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the diagnostic
        return 1;     // usage errors always exit 1
    }

    if (*list_cmd) {
        for (const std::string& name : bellstat::embedded_names())
            std::cout << name << "\n";
        return 0;
    }

    if (*analyze_cmd) {
        if (dataset.empty() == dataset_file.empty()) {
            std::cerr << "error: give exactly one of a dataset name or "
                         "--dataset-file\n";
            return 1;
        }
        bellstat::MethodSet ms;
        if (!methods.empty()) {
            ms = {false, false, false};
            for (const std::string& m : methods) {
                if (m == "gls")
                    ms.gls = true;
                else if (m == "mle")
                    ms.mle = true;
                else if (m == "bellgame")
                    ms.bellgame = true;
                else
                    ms = {true, true, true};
            }
        }
        try {
            const bellstat::BellDataset ds =
                resolve_dataset(dataset, dataset_file);
            const bellstat::AnalysisReport report = bellstat::analyze(ds, ms);
            std::cout << (format == "json" ? bellstat::render_json(report)
                                           : bellstat::render_text(report));
            return 0;
        } catch (const bellstat::Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }

    if (*reproduce_cmd) {
        const std::vector<bellstat::ReferenceCheck> checks =
            bellstat::reference_checks();
        std::cout << bellstat::render_reference_table(checks);
        const bool all_pass =
            std::all_of(checks.begin(), checks.end(),
                        [](const bellstat::ReferenceCheck& c) { return c.pass; });
        return all_pass ? 0 : 3;
    }

    std::cout << app.help();
    return 1;
}
