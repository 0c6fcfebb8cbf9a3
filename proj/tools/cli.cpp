#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "iidseval/config.hpp"
#include "iidseval/error.hpp"
#include "iidseval/io.hpp"
#include "iidseval/runner.hpp"
#include "iidseval/synthetic.hpp"

namespace iidseval::cli {

namespace fs = std::filesystem;

namespace {

struct Globals {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> k;
    std::optional<std::size_t> workers;
    std::optional<std::string> strategy;
};

struct DatasetArgs {
    std::string path;
    std::string taxonomy = "builtin";
    std::string schema;
};

void add_dataset_args(CLI::App* cmd, DatasetArgs& a) {
    cmd->add_option("dataset", a.path, "Dataset CSV")->required();
    cmd->add_option("--taxonomy", a.taxonomy, "'builtin' or a taxonomy CSV")->capture_default_str();
    cmd->add_option("--schema", a.schema, "'gas-pipeline', 'infer' or a schema CSV (default: sidecar, else infer)");
}

Dataset load(const DatasetArgs& a) {
    ExperimentConfig cfg;
    cfg.dataset.path = a.path;
    cfg.dataset.schema = a.schema;
    cfg.dataset.taxonomy = a.taxonomy;
    return load_experiment_dataset(cfg);
}

/// Write to `path`, or to `out` when the path is empty or "-".
void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-")
        out << content;
    else
        io::write_file_atomic(path, content);
}

std::string matrix_file_name(const MetricsMatrix& m, const std::string& ext) {
    return m.classifier + "-" + std::string(to_string(m.level)) + "-" + std::string(to_string(m.mode)) + "." + ext;
}

class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Leave-one-attack-out evaluation harness for industrial intrusion detection", "iidseval"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "iidseval 0.1.0");

    Globals g;
    app.add_option("--seed", g.seed, "Override the experiment seed");
    app.add_option("--k", g.k, "Override the number of folds")->check(CLI::Range(2, 1000000));
    app.add_option("--workers", g.workers, "Override the worker count")->check(CLI::PositiveNumber);
    app.add_option("--strategy", g.strategy, "Fold strategy")->check(CLI::IsMember({"stratified", "contiguous"}));

    DatasetArgs validate_args;
    auto* validate = app.add_subcommand("validate", "Check a dataset and report every violation");
    add_dataset_args(validate, validate_args);

    DatasetArgs stats_args;
    auto* stats = app.add_subcommand("stats", "Print record counts per attack type and category");
    add_dataset_args(stats, stats_args);

    std::string synth_config, synth_out;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset with schema and taxonomy sidecars");
    synth->add_option("--config", synth_config, "Synthetic generator JSON")->required();
    synth->add_option("--out", synth_out, "Dataset CSV to write")->required();

    std::string run_config, run_out;
    auto* run_cmd = app.add_subcommand("run", "Run an experiment");
    run_cmd->add_option("--config", run_config, "Experiment JSON")->required();
    run_cmd->add_option("--out", run_out, "Output directory (default: config output_dir, then $IIDSEVAL_OUTPUT_DIR)");

    std::string resume_dir;
    auto* resume_cmd = app.add_subcommand("resume", "Finish an interrupted run");
    resume_cmd->add_option("dir", resume_dir, "Run directory")->required();

    std::string report_dir, report_format = "text", report_out, report_classifier, report_level, report_mode;
    std::string low_color, high_color;
    bool report_delta = false, report_precision = false, no_annotate = false;
    auto* report = app.add_subcommand("report", "Render recall matrices of a finished run");
    report->add_option("dir", report_dir, "Run directory")->required();
    report->add_option("--format", report_format, "text, csv or svg")
        ->check(CLI::IsMember({"text", "csv", "svg"}))
        ->capture_default_str();
    report->add_option("--out", report_out, "Output file, or a directory when several matrices are selected");
    report->add_option("--classifier", report_classifier, "Only this classifier");
    report->add_option("--level", report_level, "attack or category")->check(CLI::IsMember({"attack", "category"}));
    report->add_option("--mode", report_mode, "baseline, omit or only")->check(CLI::IsMember({"baseline", "omit", "only"}));
    report->add_flag("--delta", report_delta, "Print differences to the baseline row in percentage points");
    report->add_flag("--precision", report_precision, "Write the precision table (CSV) instead of matrices");
    report->add_option("--low-color", low_color, "SVG color for recall 0 (#rrggbb)");
    report->add_option("--high-color", high_color, "SVG color for recall 1 (#rrggbb)");
    report->add_flag("--no-annotate", no_annotate, "Omit percentages inside SVG cells");

    std::string compare_a, compare_b, compare_out;
    auto* compare = app.add_subcommand("compare", "Omit-mode recall next to only-mode recall per unit");
    compare->add_option("omit_dir", compare_a, "Run providing omit matrices")->required();
    compare->add_option("only_dir", compare_b, "Run providing only matrices (default: the same run)");
    compare->add_option("--out", compare_out, "CSV file (default: stdout)");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return usage;
    }

    try {
        if (*validate) {
            Dataset d;
            try {
                d = load(validate_args);
            } catch (const ParseError& e) {
                err << validate_args.path << ": " << e.what() << '\n';
                return findings;
            }
            const auto rep = validate_dataset(d);
            for (const auto& v : rep.violations) out << v << '\n';
            if (rep.ok()) out << "ok: " << d.size() << " records\n";
            return rep.ok() ? ok : findings;
        }
        if (*stats) {
            const Dataset d = load(stats_args);
            out << format_stats(dataset_stats(d), d.taxonomy());
            return ok;
        }
        if (*synth) {
            const auto cfg = synthetic_config_from_json(nlohmann::json::parse(io::read_file(synth_config)));
            auto patched = cfg;
            if (g.seed) patched.seed = *g.seed;
            const Dataset d = generate_synthetic(patched);
            std::ostringstream data, schema, tax;
            write_dataset(data, d);
            write_schema(schema, d.schema());
            write_taxonomy(tax, d.taxonomy());
            io::write_file_atomic(synth_out, data.str());
            io::write_file_atomic(synth_out + ".schema.csv", schema.str());
            io::write_file_atomic(synth_out + ".taxonomy.csv", tax.str());
            err << "wrote " << d.size() << " records to " << synth_out << '\n';
            return ok;
        }
        if (*run_cmd) {
            auto cfg = load_experiment_config(run_config);
            if (g.seed) cfg.seed = *g.seed;
            if (g.k) cfg.k = *g.k;
            if (g.workers) cfg.workers = *g.workers;
            if (g.strategy) cfg.strategy = parse_strategy(*g.strategy);
            if (!run_out.empty()) {
                cfg.output_dir = fs::absolute(run_out);
            } else if (cfg.output_dir.empty()) {
                const char* env = std::getenv("IIDSEVAL_OUTPUT_DIR");
                if (!env || !*env) throw UsageError("no output directory: pass --out, set output_dir or IIDSEVAL_OUTPUT_DIR");
                cfg.output_dir = fs::absolute(env);
            }
            cfg.validate();
            const auto a = run(cfg);
            err << "ran " << a.cells.size() << " cells into " << cfg.output_dir.string() << '\n';
            return ok;
        }
        if (*resume_cmd) {
            const auto a = resume(resume_dir, g.workers);
            err << "computed " << a.timing.cells_computed << " cells, reused " << a.timing.cells_reused << '\n';
            return ok;
        }
        if (*report) {
            const auto a = load_run_artifact(report_dir);
            if (report_precision) {
                emit(report_out, precision_rows_to_csv(precision_report(a)), out);
                return ok;
            }
            std::vector<const MetricsMatrix*> chosen;
            for (const auto& m : a.matrices) {
                if (!report_classifier.empty() && m.classifier != report_classifier) continue;
                if (!report_level.empty() && m.level != parse_level(report_level)) continue;
                if (!report_mode.empty() && m.mode != parse_mode(report_mode)) continue;
                chosen.push_back(&m);
            }
            if (chosen.empty()) throw UsageError("no matrix matches the filters");
            HeatmapSpec spec;
            if (!low_color.empty()) spec.low = parse_rgb(low_color);
            if (!high_color.empty()) spec.high = parse_rgb(high_color);
            spec.annotate = !no_annotate;
            spec.check();

            if (report_format == "text") {
                std::string text;
                for (const auto* m : chosen) {
                    if (!text.empty()) text += '\n';
                    text += "# " + m->classifier + " " + std::string(to_string(m->level)) + " " +
                            std::string(to_string(m->mode)) + " recall [%]\n";
                    text += report_delta ? render_delta_text(delta_vs_baseline(*m)) : render_text_heatmap(*m, spec);
                }
                emit(report_out, text, out);
                return ok;
            }
            if (report_delta) throw UsageError("--delta is only available with --format text");
            const auto render = [&](const MetricsMatrix& m) {
                return report_format == "csv" ? matrix_to_csv(m) : render_svg_heatmap(m, spec);
            };
            if (chosen.size() == 1) {
                emit(report_out, render(*chosen.front()), out);
                return ok;
            }
            if (report_out.empty() || report_out == "-")
                throw UsageError(std::to_string(chosen.size()) +
                                 " matrices match; narrow with --classifier/--level/--mode or pass --out <dir>");
            for (const auto* m : chosen) io::write_file_atomic(fs::path(report_out) / matrix_file_name(*m, report_format), render(*m));
            return ok;
        }
        if (*compare) {
            const auto a = load_run_artifact(compare_a);
            const auto b = compare_b.empty() ? a : load_run_artifact(compare_b);
            emit(compare_out, comparison_to_csv(compare_experiments(a, b)), out);
            return ok;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return usage;
    } catch (const nlohmann::json::exception& e) {
        err << "config error: " << e.what() << '\n';
        return usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return runtime;
    }
    return usage;
}

}  // namespace iidseval::cli
