#include "iidseval/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "iidseval/csv.hpp"
#include "iidseval/error.hpp"
#include "iidseval/io.hpp"
#include "iidseval/random.hpp"

namespace iidseval {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

ojson opt_json(const std::optional<double>& v) { return v ? ojson(*v) : ojson(); }

std::optional<double> opt_from(const nlohmann::json& j) {
    return j.is_null() ? std::nullopt : std::optional<double>(j.get<double>());
}

ojson confusion_json(const ConfusionCounts& c) {
    return ojson{{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
}

ConfusionCounts confusion_from(const nlohmann::json& j) {
    return {j.at("tp").get<std::size_t>(), j.at("fp").get<std::size_t>(), j.at("tn").get<std::size_t>(),
            j.at("fn").get<std::size_t>()};
}

ojson taxonomy_json(const AttackTaxonomy& t) {
    auto cats = ojson::array();
    for (const auto& [id, c] : t.categories())
        cats.push_back(ojson{{"id", id}, {"abbreviation", c.abbreviation}, {"name", c.name}});
    auto attacks = ojson::array();
    for (const auto& [id, a] : t.types()) attacks.push_back(ojson{{"id", id}, {"name", a.name}, {"category", a.category}});
    return ojson{{"categories", std::move(cats)}, {"attacks", std::move(attacks)}};
}

AttackTaxonomy taxonomy_from(const nlohmann::json& j) {
    std::map<int, Category> cats;
    for (const auto& c : j.at("categories"))
        cats[c.at("id").get<int>()] = {c.at("abbreviation").get<std::string>(), c.at("name").get<std::string>()};
    std::map<int, AttackType> types;
    for (const auto& a : j.at("attacks"))
        types[a.at("id").get<int>()] = {a.at("name").get<std::string>(), a.at("category").get<int>()};
    return AttackTaxonomy(std::move(types), std::move(cats));
}

std::string unit_display(const AttackTaxonomy& t, Level level, int unit) {
    if (level == Level::attack) return t.types().at(unit).name;
    return std::to_string(unit);
}

/// Units of `level` with at least one record in `d`.
std::set<int> present_units(const Dataset& d, Level level) {
    std::set<int> out;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d.malicious(i)) out.insert(d.taxonomy().unit_of(d.attack_type(i), level));
    return out;
}

std::vector<ScenarioSpec> scenarios_for(const ExperimentConfig& cfg, const Dataset& d) {
    std::vector<ScenarioSpec> out{ScenarioSpec::baseline()};
    for (Level level : cfg.levels) {
        const auto present = present_units(d, level);
        std::set<Mode> modes = cfg.modes;
        modes.erase(Mode::baseline);
        for (const auto& s : enumerate_scenarios(d.taxonomy(), level, modes))
            if (present.contains(*s.target)) out.push_back(s);
    }
    return out;
}

const ClassifierSpec& spec_for(const ExperimentConfig& cfg, const std::string& id) {
    for (const auto& c : cfg.classifiers)
        if (c.id == id) return c;
    throw Error("unknown classifier '" + id + "'");
}

FoldPlan plan_for(const ExperimentConfig& cfg, const Dataset& d) {
    return partition_folds(d, cfg.k, cfg.strategy, derive_seed(cfg.seed, "folds"));
}

void check_dataset(const Dataset& d) {
    const auto rep = validate_dataset(d);
    if (!rep.ok()) throw Error("dataset is invalid: " + rep.violations.front());
}

ojson cell_body(const CellResult& c) {
    ojson j;
    j["classifier"] = c.key.classifier;
    j["scenario"] = c.key.scenario.label();
    j["fold"] = c.key.fold;
    j["seed"] = c.seed;
    j["train_size"] = c.train_size;
    j["test_size"] = c.test_size;
    j["confusion"] = confusion_json(c.confusion);
    ojson levels;
    for (const auto& [level, groups] : c.groups) {
        const auto row = c.row(level);
        auto gj = ojson::array();
        for (const auto& [g, t] : groups)
            gj.push_back(ojson{{"group", g}, {"count", t.count}, {"hits", t.hits}, {"recall", opt_json(t.recall())}});
        levels[std::string(to_string(level))] =
            ojson{{"groups", std::move(gj)}, {"precision", opt_json(row.precision())},
                  {"recall", opt_json(row.recall())}, {"f1", opt_json(row.f1())}};
    }
    j["levels"] = std::move(levels);
    return j;
}

CellResult cell_body_from(const nlohmann::json& j) {
    CellResult c;
    c.key.classifier = j.at("classifier").get<std::string>();
    c.key.scenario = ScenarioSpec::from_label(j.at("scenario").get<std::string>());
    c.key.fold = j.at("fold").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.train_size = j.at("train_size").get<std::size_t>();
    c.test_size = j.at("test_size").get<std::size_t>();
    c.confusion = confusion_from(j.at("confusion"));
    for (const auto& [name, lj] : j.at("levels").items()) {
        auto& groups = c.groups[parse_level(name)];
        for (const auto& g : lj.at("groups"))
            groups[g.at("group").get<int>()] = {g.at("count").get<std::size_t>(), g.at("hits").get<std::size_t>()};
    }
    return c;
}

ojson aggregate_json(const AggregateEntry& e) {
    const auto& r = e.row;
    ojson j;
    j["classifier"] = e.classifier;
    j["level"] = to_string(r.level);
    j["scenario"] = r.scenario.label();
    auto groups = ojson::array();
    for (const auto& [g, v] : r.mean_recall)
        groups.push_back(ojson{{"group", g}, {"mean_recall", opt_json(v)}, {"defined_folds", r.defined_folds.at(g)}});
    j["groups"] = std::move(groups);
    j["mean_precision"] = opt_json(r.mean_precision);
    j["precision_folds"] = r.precision_folds;
    j["mean_recall"] = opt_json(r.mean_overall_recall);
    j["mean_f1"] = opt_json(r.mean_f1);
    return j;
}

AggregateEntry aggregate_from(const nlohmann::json& j) {
    AggregateEntry e;
    e.classifier = j.at("classifier").get<std::string>();
    auto& r = e.row;
    r.level = parse_level(j.at("level").get<std::string>());
    r.scenario = ScenarioSpec::from_label(j.at("scenario").get<std::string>());
    for (const auto& g : j.at("groups")) {
        const int id = g.at("group").get<int>();
        r.mean_recall[id] = opt_from(g.at("mean_recall"));
        r.defined_folds[id] = g.at("defined_folds").get<std::size_t>();
    }
    r.mean_precision = opt_from(j.at("mean_precision"));
    r.precision_folds = j.at("precision_folds").get<std::size_t>();
    r.mean_overall_recall = opt_from(j.at("mean_recall"));
    r.mean_f1 = opt_from(j.at("mean_f1"));
    return e;
}

std::optional<std::vector<std::pair<fs::path, CellResult>>> read_cells(const fs::path& dir, const std::string& hash) {
    std::vector<std::pair<fs::path, CellResult>> out;
    const fs::path root = dir / "cells";
    if (!fs::exists(root)) return out;
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(root))
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(io::read_file(f));
        } catch (const nlohmann::json::exception& e) {
            throw Error("unreadable cell file " + f.string() + ": " + e.what());
        }
        if (j.value("config_hash", std::string{}) != hash)
            throw Error("config snapshot mismatch: " + f.string() + " was produced under a different config");
        out.emplace_back(f, cell_from_json(j));
    }
    return out;
}

RunArtifact execute(const ExperimentConfig& cfg, bool resuming) {
    cfg.validate();
    const auto t0 = Clock::now();
    const Dataset d = load_experiment_dataset(cfg);
    check_dataset(d);
    const FoldPlan plan = plan_for(cfg, d);
    const auto keys = schedule_cells(cfg, d);
    const std::string hash = config_hash(cfg);
    const bool persist = !cfg.output_dir.empty();

    std::map<CellKey, CellResult> done;
    if (persist) {
        fs::create_directories(cfg.output_dir);
        if (resuming) {
            auto stored = read_cells(cfg.output_dir, hash);
            for (auto& [path, cell] : *stored) {
                if (path != cfg.output_dir / cell.key.relative_path())
                    throw Error("cell file " + path.string() + " does not match its contents");
                done.emplace(cell.key, std::move(cell));
            }
        } else {
            io::write_file_atomic(cfg.output_dir / "config.json", to_json(cfg).dump(2) + "\n");
        }
        io::write_file_atomic(cfg.output_dir / "INCOMPLETE", "run in progress or failed; use `resume` to finish\n");
        fs::remove(cfg.output_dir / "run.json");
    }

    std::vector<const CellKey*> todo;
    for (const auto& k : keys)
        if (!done.contains(k)) todo.push_back(&k);
    const std::size_t reused = keys.size() - todo.size();

    std::vector<std::optional<CellResult>> results(todo.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::optional<std::pair<std::size_t, std::string>> first_error;

    const auto worker = [&] {
        while (!failed.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= todo.size()) return;
            const CellKey& key = *todo[i];
            try {
                auto cell = run_cell(spec_for(cfg, key.classifier), key, d, plan, cfg.levels, cfg.seed);
                if (persist) {
                    auto j = cell_to_json(cell);
                    j["config_hash"] = hash;
                    io::write_file_atomic(cfg.output_dir / key.relative_path(), j.dump(2) + "\n");
                }
                results[i] = std::move(cell);
            } catch (const std::exception& e) {
                std::lock_guard lock(error_mutex);
                if (!first_error || i < first_error->first) first_error = {i, key.describe() + ": " + e.what()};
                failed = true;
            }
        }
    };
    const std::size_t n_threads = std::max<std::size_t>(1, std::min(cfg.workers, todo.size()));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (first_error) throw Error("cell " + first_error->second);

    std::vector<CellResult> cells;
    cells.reserve(keys.size());
    for (auto& [_, c] : done) cells.push_back(std::move(c));
    for (auto& r : results) cells.push_back(std::move(*r));

    RunTiming timing{0.0, todo.size(), reused, cfg.workers};
    auto artifact = assemble_artifact(cfg, d, plan, std::move(cells), timing);
    artifact.timing.wall_seconds = seconds_since(t0);
    if (persist) {
        io::write_file_atomic(cfg.output_dir / "run.json", to_json(artifact).dump(2) + "\n");
        fs::remove(cfg.output_dir / "INCOMPLETE");
    }
    return artifact;
}

}  // namespace

fs::path CellKey::relative_path() const {
    return fs::path("cells") / classifier / scenario.label() / (std::to_string(fold) + ".json");
}

std::string CellKey::describe() const {
    return classifier + "/" + scenario.label() + "/fold " + std::to_string(fold);
}

GroupRecallRow CellResult::row(Level level) const {
    const auto it = groups.find(level);
    if (it == groups.end()) throw Error("cell " + key.describe() + " has no " + std::string(to_string(level)) + " tallies");
    GroupRecallRow r;
    r.scenario = key.scenario;
    r.fold = key.fold;
    r.level = level;
    r.groups = it->second;
    r.confusion = confusion;
    return r;
}

const MetricsMatrix* RunArtifact::matrix(const std::string& classifier, Level level, Mode mode) const {
    for (const auto& m : matrices)
        if (m.classifier == classifier && m.level == level && m.mode == mode) return &m;
    return nullptr;
}

std::uint64_t cell_seed(std::uint64_t config_seed, const ClassifierSpec& spec, const ScenarioSpec& scenario,
                        std::size_t fold) {
    return derive_seed(config_seed, "cell/" + spec.id + "/" + std::to_string(spec.seed) + "/" + scenario.label() + "/" +
                                        std::to_string(fold));
}

std::vector<CellKey> schedule_cells(const ExperimentConfig& cfg, const Dataset& d) {
    const auto scenarios = scenarios_for(cfg, d);
    std::vector<CellKey> out;
    for (const auto& c : cfg.classifiers)
        for (const auto& cell : build_schedule(scenarios, cfg.k)) out.push_back({c.id, cell.scenario, cell.fold});
    return out;
}

CellResult run_cell(const ClassifierSpec& spec, const CellKey& key, const Dataset& d, const FoldPlan& plan,
                    const std::vector<Level>& levels, std::uint64_t config_seed) {
    CellResult c;
    c.key = key;
    c.seed = cell_seed(config_seed, spec, key.scenario, key.fold);
    const auto split = materialize_split(d, plan, key.fold, key.scenario);
    c.train_size = split.train.size();
    c.test_size = split.test.size();

    auto t0 = Clock::now();
    const auto model = train(spec, d, split.train, c.seed);
    c.train_seconds = seconds_since(t0);
    t0 = Clock::now();
    const auto preds = predict(model, d, split.test);
    c.predict_seconds = seconds_since(t0);

    const std::size_t n = split.test.size();
    std::unique_ptr<bool[]> predicted(new bool[n]);
    std::unique_ptr<bool[]> truth(new bool[n]);
    for (std::size_t i = 0; i < n; ++i) {
        predicted[i] = preds[i].malicious;
        truth[i] = d.malicious(split.test[i]);
    }
    c.confusion = confusion({predicted.get(), n}, {truth.get(), n});
    for (Level level : levels) c.groups[level] = per_group_recall({predicted.get(), n}, d, split.test, level);
    return c;
}

RunArtifact assemble_artifact(const ExperimentConfig& cfg, const Dataset& d, const FoldPlan& plan,
                              std::vector<CellResult> cells, RunTiming timing) {
    RunArtifact a;
    a.config = cfg;
    a.config_hash = config_hash(cfg);
    a.taxonomy = d.taxonomy();
    a.folds = plan;
    a.timing = timing;

    const auto keys = schedule_cells(cfg, d);
    std::map<CellKey, std::size_t> order;
    for (std::size_t i = 0; i < keys.size(); ++i) order.emplace(keys[i], i);
    for (const auto& c : cells)
        if (!order.contains(c.key)) throw Error("unexpected cell " + c.key.describe());
    std::sort(cells.begin(), cells.end(),
              [&](const CellResult& x, const CellResult& y) { return order.at(x.key) < order.at(y.key); });
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (i > 0 && cells[i - 1].key == cells[i].key) throw Error("duplicate cell " + cells[i].key.describe());
    if (cells.size() != keys.size()) throw Error("missing cells: have " + std::to_string(cells.size()) + " of " +
                                                 std::to_string(keys.size()));
    a.cells = std::move(cells);

    for (const auto& spec : cfg.classifiers) {
        for (Level level : cfg.levels) {
            std::map<ScenarioSpec, AggregatedRow> by_scenario;
            std::vector<ScenarioSpec> seen;
            for (std::size_t i = 0; i < a.cells.size();) {
                const auto& first = a.cells[i];
                std::size_t j = i;
                while (j < a.cells.size() && a.cells[j].key.classifier == first.key.classifier &&
                       a.cells[j].key.scenario == first.key.scenario)
                    ++j;
                const auto& s = first.key.scenario;
                if (first.key.classifier == spec.id && (s.mode == Mode::baseline || s.level == level)) {
                    std::vector<GroupRecallRow> rows;
                    for (std::size_t r = i; r < j; ++r) rows.push_back(a.cells[r].row(level));
                    auto agg = aggregate_folds(rows);
                    a.aggregated.push_back({spec.id, agg});
                    by_scenario.emplace(s, std::move(agg));
                }
                i = j;
            }

            const auto units = a.taxonomy.units(level);
            std::vector<Mode> modes;
            for (Mode m : {Mode::omit, Mode::only})
                if (cfg.modes.contains(m)) modes.push_back(m);
            if (modes.empty()) modes.push_back(Mode::baseline);
            for (Mode mode : modes) {
                MetricsMatrix m;
                m.classifier = spec.id;
                m.level = level;
                m.mode = mode;
                m.column_units.push_back(kBenign);
                m.column_labels.emplace_back("benign");
                for (int u : units) {
                    m.column_units.push_back(u);
                    m.column_labels.push_back(unit_display(a.taxonomy, level, u));
                }
                const auto add_row = [&](int unit, std::string label, const AggregatedRow* agg) {
                    m.row_units.push_back(unit);
                    m.row_labels.push_back(std::move(label));
                    auto& row = m.cells.emplace_back();
                    for (int c : m.column_units) {
                        std::optional<double> v;
                        if (agg)
                            if (auto it = agg->mean_recall.find(c); it != agg->mean_recall.end()) v = it->second;
                        row.push_back(v);
                    }
                };
                const auto base = by_scenario.find(ScenarioSpec::baseline());
                add_row(kBenign, "none", base == by_scenario.end() ? nullptr : &base->second);
                if (mode != Mode::baseline) {
                    for (int u : units) {
                        const auto it = by_scenario.find({mode, level, u});
                        add_row(u, unit_display(a.taxonomy, level, u), it == by_scenario.end() ? nullptr : &it->second);
                    }
                }
                a.matrices.push_back(std::move(m));
            }
        }
    }
    return a;
}

RunArtifact run(const ExperimentConfig& cfg) { return execute(cfg, false); }

RunArtifact resume(const fs::path& dir, std::optional<std::size_t> workers) {
    if (!fs::exists(dir / "config.json")) throw Error("no config snapshot in " + dir.string());
    ExperimentConfig cfg = load_experiment_config(dir / "config.json");
    cfg.output_dir = dir;
    if (workers) cfg.workers = *workers;
    return execute(cfg, true);
}

nlohmann::ordered_json cell_to_json(const CellResult& c) {
    ojson j;
    j["format_version"] = kRunFormatVersion;
    const auto body = cell_body(c);
    for (const auto& [k, v] : body.items()) j[k] = v;
    j["timing"] = ojson{{"train_seconds", c.train_seconds}, {"predict_seconds", c.predict_seconds}};
    return j;
}

CellResult cell_from_json(const nlohmann::json& j) {
    try {
        if (j.at("format_version").get<std::string>() != kRunFormatVersion)
            throw Error("unsupported cell format_version");
        auto c = cell_body_from(j);
        if (j.contains("timing")) {
            c.train_seconds = j.at("timing").value("train_seconds", 0.0);
            c.predict_seconds = j.at("timing").value("predict_seconds", 0.0);
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed cell: ") + e.what());
    }
}

nlohmann::ordered_json to_json(const RunArtifact& a) {
    ojson j;
    j["format_version"] = kRunFormatVersion;
    j["config_hash"] = a.config_hash;
    auto cfg = to_json(a.config);
    cfg.erase("output_dir");
    cfg.erase("workers");
    j["config"] = std::move(cfg);
    j["taxonomy"] = taxonomy_json(a.taxonomy);
    j["folds"] = ojson{{"k", a.folds.k},
                       {"strategy", to_string(a.folds.strategy)},
                       {"seed", a.folds.seed},
                       {"sizes", a.folds.fold_sizes()},
                       {"assignment", a.folds.assignment}};
    auto cells = ojson::array();
    for (const auto& c : a.cells) cells.push_back(cell_body(c));
    j["cells"] = std::move(cells);
    auto agg = ojson::array();
    for (const auto& e : a.aggregated) agg.push_back(aggregate_json(e));
    j["aggregated"] = std::move(agg);
    auto mats = ojson::array();
    for (const auto& m : a.matrices) mats.push_back(to_json(m));
    j["matrices"] = std::move(mats);
    j["timing"] = ojson{{"wall_seconds", a.timing.wall_seconds},
                        {"cells_computed", a.timing.cells_computed},
                        {"cells_reused", a.timing.cells_reused},
                        {"workers", a.timing.workers}};
    return j;
}

RunArtifact artifact_from_json(const nlohmann::json& j) {
    try {
        if (j.at("format_version").get<std::string>() != kRunFormatVersion)
            throw Error("unsupported run format_version '" + j.at("format_version").get<std::string>() + "'");
        RunArtifact a;
        a.config = experiment_config_from_json(j.at("config"));
        a.config_hash = j.at("config_hash").get<std::string>();
        a.taxonomy = taxonomy_from(j.at("taxonomy"));
        const auto& f = j.at("folds");
        a.folds.k = f.at("k").get<std::size_t>();
        a.folds.strategy = parse_strategy(f.at("strategy").get<std::string>());
        a.folds.seed = f.at("seed").get<std::uint64_t>();
        a.folds.assignment = f.at("assignment").get<std::vector<std::size_t>>();
        for (const auto& c : j.at("cells")) a.cells.push_back(cell_body_from(c));
        for (const auto& e : j.at("aggregated")) a.aggregated.push_back(aggregate_from(e));
        for (const auto& m : j.at("matrices")) a.matrices.push_back(matrix_from_json(m));
        if (j.contains("timing")) {
            const auto& t = j.at("timing");
            a.timing = {t.value("wall_seconds", 0.0), t.value("cells_computed", std::size_t{0}),
                        t.value("cells_reused", std::size_t{0}), t.value("workers", std::size_t{1})};
        }
        return a;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed run.json: ") + e.what());
    }
}

RunArtifact load_run_artifact(const fs::path& dir) {
    const fs::path file = fs::is_directory(dir) ? dir / "run.json" : dir;
    if (!fs::exists(file)) {
        if (fs::exists(dir / "INCOMPLETE")) throw Error(dir.string() + " holds an incomplete run; use `resume` first");
        throw Error("no run.json in " + dir.string());
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(io::read_file(file));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(file.string() + ": " + e.what());
    }
    auto a = artifact_from_json(j);
    if (fs::is_directory(dir)) a.config.output_dir = dir;
    return a;
}

std::string canonical_run_json(const RunArtifact& a) {
    auto j = to_json(a);
    j.erase("timing");
    return j.dump(2);
}

std::vector<ComparisonRow> compare_experiments(const RunArtifact& a, const RunArtifact& b) {
    if (!(a.taxonomy == b.taxonomy)) throw Error("cannot compare experiments with different taxonomies");
    std::vector<std::string> ids_a, ids_b;
    for (const auto& c : a.config.classifiers) ids_a.push_back(c.id);
    for (const auto& c : b.config.classifiers) ids_b.push_back(c.id);
    std::sort(ids_a.begin(), ids_a.end());
    std::sort(ids_b.begin(), ids_b.end());
    if (ids_a != ids_b) throw Error("cannot compare experiments with different classifier sets");

    std::vector<ComparisonRow> out;
    bool any = false;
    for (const auto& id : ids_a) {
        for (Level level : {Level::attack, Level::category}) {
            const auto* omit = a.matrix(id, level, Mode::omit);
            const auto* only = b.matrix(id, level, Mode::only);
            if (!omit || !only) continue;
            any = true;
            for (int u : a.taxonomy.units(level)) {
                const std::size_t first = out.size();
                const auto omit_recall = omit->at_units(u, u);
                for (int v : a.taxonomy.units(level)) {
                    if (v == u) continue;
                    ComparisonRow r;
                    r.classifier = id;
                    r.level = level;
                    r.unit = u;
                    r.unit_label = unit_display(a.taxonomy, level, u);
                    r.omit_recall = omit_recall;
                    r.trained_unit = v;
                    r.trained_label = unit_display(a.taxonomy, level, v);
                    r.only_recall = only->at_units(v, u);
                    if (r.omit_recall && r.only_recall) r.difference = *r.only_recall - *r.omit_recall;
                    out.push_back(std::move(r));
                }
                std::optional<std::size_t> best;
                for (std::size_t i = first; i < out.size(); ++i)
                    if (out[i].difference &&
                        (!best || std::abs(*out[i].difference) < std::abs(*out[*best].difference)))
                        best = i;
                if (best) out[*best].closest = true;
            }
        }
    }
    if (!any) throw Error("no level has an omit matrix in the first run and an only matrix in the second");
    return out;
}

std::string comparison_to_csv(const std::vector<ComparisonRow>& rows) {
    std::ostringstream out;
    const auto cell = [](const std::optional<double>& v) { return v ? csv::format_exact(*v) : std::string("n/a"); };
    out << "classifier,level,unit,omit_recall,trained_unit,only_recall,difference,closest\n";
    for (const auto& r : rows)
        out << csv::escape(r.classifier) << ',' << to_string(r.level) << ',' << csv::escape(r.unit_label) << ','
            << cell(r.omit_recall) << ',' << csv::escape(r.trained_label) << ',' << cell(r.only_recall) << ','
            << cell(r.difference) << ',' << (r.closest ? "yes" : "no") << '\n';
    return out.str();
}

std::vector<PrecisionRow> precision_report(const RunArtifact& a) {
    std::vector<PrecisionRow> out;
    for (const auto& spec : a.config.classifiers) {
        for (Level level : a.config.levels) {
            std::optional<double> base;
            for (const auto& e : a.aggregated)
                if (e.classifier == spec.id && e.row.level == level && e.row.scenario.mode == Mode::baseline)
                    base = e.row.mean_precision;
            for (const auto& e : a.aggregated) {
                if (e.classifier != spec.id || e.row.level != level) continue;
                PrecisionRow r{spec.id, level, e.row.scenario.label(), e.row.mean_precision, base, std::nullopt};
                if (r.precision && r.baseline_precision) r.delta = *r.precision - *r.baseline_precision;
                out.push_back(std::move(r));
            }
        }
    }
    return out;
}

}  // namespace iidseval
