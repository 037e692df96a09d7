// survtest: command-line driver for the two-sample tests, the embedded
// datasets, Kaplan-Meier export and the Monte Carlo studies.
//
// Exit codes: 0 success, 2 usage, 3 parse, 4 I/O, 5 computation failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "survtest/datasets.hpp"
#include "survtest/dataset_io.hpp"
#include "survtest/distributions.hpp"
#include "survtest/monte_carlo.hpp"
#include "survtest/report.hpp"
#include "survtest/scenario.hpp"

namespace {

using namespace survtest;

enum Exit : int { ok = 0, usage = 2, parse = 3, io = 4, compute = 5 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataSource {
    std::string file;
    std::string dataset;
};

void add_source(CLI::App* cmd, DataSource& src) {
    auto* f = cmd->add_option("--data", src.file, "CSV file with time,event,group rows");
    auto* d = cmd->add_option("--dataset", src.dataset, "embedded dataset id");
    f->excludes(d);
    d->excludes(f);
}

std::pair<std::string, TwoSampleDataset> resolve(const DataSource& src) {
    if (!src.dataset.empty()) {
        const auto d = find_embedded(src.dataset);
        if (!d) throw UsageError("unknown dataset '" + src.dataset + "' (see `datasets list`)");
        return {std::string(d->id), load_embedded(*d)};
    }
    if (src.file.empty()) throw UsageError("one of --data or --dataset is required");
    return {src.file, load_dataset(src.file)};
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        write_file(out, text);
    }
}

std::vector<Method> methods_or_all(const std::string& text) {
    try {
        return parse_methods(text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-sample tests for right-censored survival data"};
    app.require_subcommand(1);

    // test
    DataSource test_src;
    std::string test_methods = "all";
    std::string test_format = "tsv";
    std::string test_out;
    auto* test_cmd = app.add_subcommand("test", "run two-sample tests on a dataset");
    add_source(test_cmd, test_src);
    test_cmd->add_option("--methods", test_methods, "comma-separated methods or 'all'");
    test_cmd->add_option("--format", test_format)->check(CLI::IsMember({"tsv", "json"}));
    test_cmd->add_option("--out", test_out, "output file (default stdout)");

    // datasets
    auto* ds_cmd = app.add_subcommand("datasets", "embedded real-data examples");
    ds_cmd->require_subcommand(1);
    auto* ds_list = ds_cmd->add_subcommand("list", "list embedded datasets");
    std::string ds_show_id;
    auto* ds_show = ds_cmd->add_subcommand("show", "print a dataset as CSV");
    ds_show->add_option("id", ds_show_id)->required();
    std::string ds_export_id;
    std::string ds_export_out;
    auto* ds_export = ds_cmd->add_subcommand("export", "write a dataset to a CSV file");
    ds_export->add_option("id", ds_export_id)->required();
    ds_export->add_option("--out", ds_export_out)->required();

    // km
    DataSource km_src;
    std::string km_out;
    auto* km_cmd = app.add_subcommand("km", "export per-group Kaplan-Meier curves as CSV");
    add_source(km_cmd, km_src);
    km_cmd->add_option("--out", km_out, "output stem; writes <stem>_group1.csv, <stem>_group2.csv")
        ->required();

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo size and power studies");
    sim_cmd->require_subcommand(1);
    std::optional<std::uint64_t> seed;
    std::size_t reps = 10000;
    unsigned workers = 0;
    std::string sim_out;
    std::string sim_format = "tsv";
    auto common = [&](CLI::App* c) {
        c->add_option("--seed", seed, "master seed (required)")->required();
        c->add_option("--reps", reps, "replications per scenario")->check(CLI::PositiveNumber);
        c->add_option("--workers", workers, "worker threads (0 = all cores)");
        c->add_option("--out", sim_out, "output file (default stdout)");
        c->add_option("--format", sim_format)->check(CLI::IsMember({"tsv", "json"}));
    };
    auto* sim_size = sim_cmd->add_subcommand("size", "replay the built-in size grid");
    common(sim_size);
    std::string power_case;
    std::size_t power_n = 0;
    int power_cens = -1;
    auto* sim_power = sim_cmd->add_subcommand("power", "one built-in power scenario");
    common(sim_power);
    sim_power->add_option("--case", power_case, "I, II, III, IV or V")->required();
    sim_power->add_option("--n", power_n, "per-group size: 50, 100 or 200")->required();
    sim_power->add_option("--censoring", power_cens, "percent: 0, 10, 20, 30, 40 or 50")
        ->required();
    std::string scenario_file;
    bool reps_given = false;
    auto* sim_custom = sim_cmd->add_subcommand("custom", "scenarios from a scenario file");
    common(sim_custom);
    sim_custom->add_option("--scenario", scenario_file, "scenario file")->required();

    // calibrate
    std::string cal_event;
    double cal_target = 0.0;
    auto* cal_cmd = app.add_subcommand("calibrate",
                                       "find theta so Uniform(0, theta) censoring hits a target");
    cal_cmd->add_option("--event", cal_event, "event distribution, e.g. 'exponential(1)'")
        ->required();
    cal_cmd->add_option("--target", cal_target, "target censoring fraction in (0, 1)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }

    try {
        if (test_cmd->parsed()) {
            const auto methods = methods_or_all(test_methods);
            const auto [name, ds] = resolve(test_src);
            const auto rows = run_tests(ds, methods);
            emit(test_format == "json" ? dump(test_report_json(name, ds, rows))
                                       : test_report_tsv(rows),
                 test_out);
        } else if (ds_list->parsed()) {
            for (const auto& d : embedded_datasets) {
                const auto ds = load_embedded(d);
                std::cout << d.id << '\t' << ds.n1() << '\t' << ds.n2() << '\t' << d.title
                          << " (" << d.group1_label << " vs " << d.group2_label << ")\n";
            }
        } else if (ds_show->parsed() || ds_export->parsed()) {
            const auto& id = ds_show->parsed() ? ds_show_id : ds_export_id;
            const auto d = find_embedded(id);
            if (!d) throw UsageError("unknown dataset '" + id + "'");
            emit(format_dataset_csv(load_embedded(*d)), ds_show->parsed() ? "" : ds_export_out);
        } else if (km_cmd->parsed()) {
            const auto [name, ds] = resolve(km_src);
            for (const auto& p : export_km(ds, km_out)) std::cerr << "wrote " << p.string() << '\n';
        } else if (sim_cmd->parsed()) {
            std::string kind;
            std::vector<StudyResult> results;
            std::optional<AcceptanceInterval> interval;
            if (sim_size->parsed()) {
                kind = "size";
                results = size_study(builtin_size_grid(reps, *seed), workers);
                interval = size_acceptance_interval(0.05, reps);
                std::cerr << "acceptance interval: (" << interval->lo << ", " << interval->hi
                          << ")\n";
            } else if (sim_power->parsed()) {
                kind = "power";
                const auto c = power_case_from_string(power_case);
                if (!c) throw UsageError("--case must be one of I, II, III, IV, V");
                try {
                    results.push_back(power_study(*c, power_n, power_cens, reps, *seed, workers));
                } catch (const std::invalid_argument& e) {
                    throw UsageError(e.what());
                }
            } else {
                kind = "custom";
                reps_given = sim_custom->count("--reps") > 0;
                auto grid = parse_scenarios(read_file(scenario_file));
                for (auto& cfg : grid) {
                    cfg.master_seed = scenario_seed(*seed, cfg.id);
                    if (reps_given) cfg.replications = reps;
                }
                results = size_study(grid, workers);
            }
            emit(sim_format == "json" ? dump(study_report_json(kind, *seed, results, interval))
                                      : study_report_tsv(results),
                 sim_out);
        } else if (cal_cmd->parsed()) {
            DistributionSpec event = Exponential{1.0};
            try {
                event = parse_distribution(cal_event);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            if (!(cal_target > 0.0 && cal_target < 1.0)) {
                throw UsageError("--target must lie in (0, 1)");
            }
            const double theta = calibrate_uniform_theta(event, cal_target);
            std::cout.precision(10);
            std::cout << "theta\t" << theta << "\ncensoring\t"
                      << censoring_fraction(event, Uniform{theta}) << '\n';
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return usage;
    } catch (const DatasetParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return parse;
    } catch (const ScenarioParseError& e) {
        std::cerr << "parse error: " << scenario_file << ": " << e.what() << '\n';
        return parse;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return io;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return compute;
    }
    return ok;
}
