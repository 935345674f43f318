#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <tailsel/tailsel.hpp>

namespace {

using nlohmann::json;

struct RunConfig {
    std::string input;
    std::string target;  // empty: resolve from the header
    std::string method = "a2";
    std::size_t k = 5;
    std::uint64_t seed = 42;
    std::string estimator = "tau";
    std::string select_on = "train";
    unsigned threads = 0;
    std::string output;
    std::string format = "json";
    std::string config_path;
    std::string feature;  // fit-copula only
    double test_fraction = 0.2;
    std::size_t repeats = 20;
    bool no_timing = false;
};

// a stage label travels with every runtime failure so the diagnostic names
// where the pipeline stopped
struct StageFailure : std::runtime_error {
    StageFailure(const std::string& stage, const std::string& what)
        : std::runtime_error("error: " + stage + ": " + what) {}
};

template <typename Fn>
auto run_stage(const std::string& stage, Fn&& fn) {
    try {
        return fn();
    } catch (const tailsel::Error& e) {
        throw StageFailure(stage, e.what());
    } catch (const std::ios_base::failure& e) {
        throw StageFailure(stage, e.what());
    }
}

// JSON config overlay: command-line flags win; unknown keys are rejected
void apply_config_file(const CLI::App* sub, RunConfig& cfg) {
    if (cfg.config_path.empty()) return;
    std::ifstream in(cfg.config_path);
    if (!in) throw StageFailure("config", "cannot open file: " + cfg.config_path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw StageFailure("config", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw StageFailure("config", "top-level JSON must be an object");

    auto flag_given = [&](const char* flag) {
        return sub->get_option_no_throw(flag) != nullptr && sub->count(flag) > 0;
    };
    auto has_flag = [&](const char* flag) { return sub->get_option_no_throw(flag) != nullptr; };

    try {
        for (const auto& [key, value] : doc.items()) {
            const std::string flag = "--" + key;
            if (!has_flag(flag.c_str()))
                throw StageFailure("config",
                                   "unknown key '" + key + "' for this subcommand");
            if (flag_given(flag.c_str())) continue;
            if (key == "input") cfg.input = value.get<std::string>();
            else if (key == "target") cfg.target = value.get<std::string>();
            else if (key == "method") cfg.method = value.get<std::string>();
            else if (key == "k") cfg.k = value.get<std::size_t>();
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else if (key == "estimator") cfg.estimator = value.get<std::string>();
            else if (key == "select-on") cfg.select_on = value.get<std::string>();
            else if (key == "threads") cfg.threads = value.get<unsigned>();
            else if (key == "output") cfg.output = value.get<std::string>();
            else if (key == "format") cfg.format = value.get<std::string>();
            else if (key == "feature") cfg.feature = value.get<std::string>();
            else if (key == "test-fraction") cfg.test_fraction = value.get<double>();
            else if (key == "repeats") cfg.repeats = value.get<std::size_t>();
            else if (key == "no-timing") cfg.no_timing = value.get<bool>();
            else throw StageFailure("config", "unknown key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw StageFailure("config", std::string("bad value type: ") + e.what());
    }
}

tailsel::EstimatorMethod parse_estimator(const std::string& name) {
    if (name == "tau") return tailsel::EstimatorMethod::tau_inversion;
    if (name == "mle") return tailsel::EstimatorMethod::pseudo_mle;
    throw StageFailure("config", "estimator must be 'tau' or 'mle'");
}

// default target column: Diabetes_binary if present, else Diabetes_012
std::string resolve_target(const RunConfig& cfg) {
    if (!cfg.target.empty()) return cfg.target;
    const auto header = run_stage("load", [&] { return tailsel::read_csv_header(cfg.input); });
    for (const auto& name : header)
        if (name == "Diabetes_binary") return name;
    for (const auto& name : header)
        if (name == "Diabetes_012") return name;
    throw StageFailure("load",
                       "no --target given and neither Diabetes_binary nor Diabetes_012 found");
}

tailsel::BinaryDataset load_dataset(const RunConfig& cfg) {
    const std::string target = resolve_target(cfg);
    const tailsel::RawDataset raw =
        run_stage("load", [&] { return tailsel::load_csv(cfg.input, target); });
    for (const auto& warning : raw.warnings) std::cerr << "warning: " << warning << "\n";
    return run_stage("binarize", [&] { return tailsel::binarize_target(raw); });
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw StageFailure("write", "cannot open file for writing: " + path);
    out << content;
    if (!out) throw StageFailure("write", "failed while writing: " + path);
}

std::string output_stem(const std::string& output, const std::string& fallback) {
    std::string stem = output.empty() ? fallback : output;
    for (const char* ext : {".json", ".txt", ".csv"}) {
        const std::string suffix(ext);
        if (stem.size() > suffix.size() &&
            stem.compare(stem.size() - suffix.size(), suffix.size(), suffix) == 0)
            return stem.substr(0, stem.size() - suffix.size());
    }
    return stem;
}

json config_echo(const RunConfig& cfg, const std::string& target) {
    return json{{"input", cfg.input},
                {"target", target},
                {"k", cfg.k},
                {"seed", cfg.seed},
                {"estimator", cfg.estimator},
                {"format", cfg.format}};
}

void attach_timing(json& doc, const RunConfig& cfg, double wall_seconds) {
    if (!cfg.no_timing) doc["timing"] = {{"wall_seconds", wall_seconds}};
}

class Stopwatch {
  public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int cmd_rank(const RunConfig& cfg) {
    const Stopwatch watch;
    const tailsel::BinaryDataset data = load_dataset(cfg);
    if (cfg.k > data.columns.size())
        throw StageFailure("rank", "k exceeds the number of features");

    json doc;
    doc["schema_version"] = tailsel::kReportSchemaVersion;
    doc["command"] = "rank";
    doc["method"] = cfg.method;
    doc["config"] = config_echo(cfg, data.target_name);
    std::string text = "rank (" + cfg.method + ") on " + cfg.input + "\n";

    if (cfg.method == "a2") {
        const auto ranking = run_stage("rank", [&] {
            const tailsel::PseudoMatrix pseudo = tailsel::build_pseudo_matrix(data.columns);
            std::vector<double> target_values(data.target.begin(), data.target.end());
            const auto target_pseudo = tailsel::pseudo_observations(target_values);
            return tailsel::rank_a2(pseudo, target_pseudo, data.feature_names, cfg.k,
                                    parse_estimator(cfg.estimator), cfg.threads);
        });
        doc["ranking"] = tailsel::ranking_to_json(ranking);
        json top = json::array();
        for (const std::size_t f : ranking.top) top.push_back(data.feature_names[f]);
        doc["selected"] = std::move(top);
        text += "feature                   theta       lambda_u    tau\n";
        for (const auto& e : ranking.entries) {
            char line[160];
            if (e.failed)
                std::snprintf(line, sizeof(line), "%-25s failed: %s\n", e.name.c_str(),
                              e.note.c_str());
            else
                std::snprintf(line, sizeof(line), "%-25s %-11.6f %-11.9f %.6f%s\n",
                              e.name.c_str(), e.theta_hat, e.lambda_u, e.tau_hat,
                              e.clamped ? "  (clamped)" : "");
            text += line;
        }
    } else if (cfg.method == "mi") {
        const auto scores = run_stage("rank", [&] {
            return tailsel::score_mi(data.columns, data.target, 5,
                                     tailsel::derive_seed(cfg.seed, 2));
        });
        json entries = json::array();
        json top = json::array();
        for (std::size_t i = 0; i < scores.size(); ++i) {
            entries.push_back({{"feature", data.feature_names[scores[i].feature]},
                               {"mean_mi", scores[i].mean_mi}});
            if (i < cfg.k) top.push_back(data.feature_names[scores[i].feature]);
        }
        doc["scores"] = std::move(entries);
        doc["selected"] = std::move(top);
        text += "feature                   mean_mi\n";
        for (const auto& s : scores) {
            char line[120];
            std::snprintf(line, sizeof(line), "%-25s %.6f\n",
                          data.feature_names[s.feature].c_str(), s.mean_mi);
            text += line;
        }
    } else if (cfg.method == "ga") {
        const auto result = run_stage("rank", [&] {
            return tailsel::ga_select(data.columns, data.target, cfg.k, 10, 5,
                                      tailsel::derive_seed(cfg.seed, 3), cfg.threads);
        });
        json top = json::array();
        for (const std::size_t f : result.selected) top.push_back(data.feature_names[f]);
        doc["selected"] = std::move(top);
        doc["fitness"] = result.state.best_fitness;
        doc["evaluations"] = result.state.evaluations;
        doc["cache_hits"] = result.state.cache_hits;
        text += "selected:";
        for (const std::size_t f : result.selected) text += " " + data.feature_names[f];
        char line[80];
        std::snprintf(line, sizeof(line), "\nfitness: %.6f\n", result.state.best_fitness);
        text += line;
    } else {
        throw StageFailure("config", "method must be 'a2', 'mi', or 'ga'");
    }

    attach_timing(doc, cfg, watch.seconds());
    if (!cfg.no_timing) {
        char line[80];
        std::snprintf(line, sizeof(line), "wall seconds: %.3f\n", watch.seconds());
        text += line;
    }
    const std::string stem = output_stem(cfg.output, "tailsel_rank");
    const std::string content = cfg.format == "text" ? text : doc.dump(2) + "\n";
    const std::string path = stem + (cfg.format == "text" ? ".txt" : ".json");
    write_file(path, content);
    std::cout << content;
    return 0;
}

int cmd_benchmark(const RunConfig& cfg) {
    const Stopwatch watch;
    const tailsel::BinaryDataset data = load_dataset(cfg);

    tailsel::BenchmarkOptions opt;
    opt.k = cfg.k;
    opt.seed = cfg.seed;
    opt.estimator = parse_estimator(cfg.estimator);
    if (cfg.select_on != "train" && cfg.select_on != "full")
        throw StageFailure("config", "select-on must be 'train' or 'full'");
    opt.select_on_full = cfg.select_on == "full";
    opt.test_fraction = cfg.test_fraction;
    opt.importance_repeats = cfg.repeats;
    opt.threads = cfg.threads;

    const tailsel::EvalReport report =
        run_stage("benchmark", [&] { return tailsel::run_benchmark(data, opt); });

    json doc = tailsel::report_to_json(report);
    doc["config"]["input"] = cfg.input;
    attach_timing(doc, cfg, watch.seconds());
    std::string text = tailsel::report_to_text(report);
    if (!cfg.no_timing) {
        char line[80];
        std::snprintf(line, sizeof(line), "wall seconds: %.3f\n", watch.seconds());
        text += line;
    }

    const std::string stem = output_stem(cfg.output, "tailsel_benchmark");
    write_file(stem + ".json", doc.dump(2) + "\n");
    write_file(stem + ".txt", text);
    write_file(stem + "_importance.csv", tailsel::importance_to_csv(report.importances));
    std::cout << text;
    return 0;
}

int cmd_fit_copula(const RunConfig& cfg) {
    const Stopwatch watch;
    const tailsel::BinaryDataset data = load_dataset(cfg);
    if (cfg.feature.empty()) throw StageFailure("config", "--feature is required");

    std::size_t column = data.columns.size();
    for (std::size_t j = 0; j < data.feature_names.size(); ++j)
        if (data.feature_names[j] == cfg.feature) {
            column = j;
            break;
        }
    if (column == data.columns.size())
        throw StageFailure("fit", "unknown feature '" + cfg.feature + "'");

    const auto estimate = run_stage("fit", [&] {
        tailsel::PseudoSample sample;
        sample.u = tailsel::pseudo_observations(data.columns[column]);
        std::vector<double> target_values(data.target.begin(), data.target.end());
        sample.v = tailsel::pseudo_observations(target_values);
        return cfg.estimator == "mle" ? tailsel::fit_theta_mle(sample)
                                      : tailsel::fit_theta_tau(sample);
    });
    const double lambda_u = tailsel::upper_tail_coefficient(estimate.theta).lambda_u;

    json doc;
    doc["schema_version"] = tailsel::kReportSchemaVersion;
    doc["command"] = "fit-copula";
    doc["config"] = config_echo(cfg, data.target_name);
    doc["feature"] = cfg.feature;
    doc["estimator"] = cfg.estimator;
    doc["theta"] = estimate.theta.value;
    doc["lambda_u"] = lambda_u;
    doc["tau_hat"] = estimate.tau_hat;
    doc["clamped"] = estimate.clamped;
    doc["rows"] = data.n;
    if (estimate.log_likelihood) doc["log_likelihood"] = *estimate.log_likelihood;
    attach_timing(doc, cfg, watch.seconds());

    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "fit-copula %s vs %s\ntheta: %.6f%s\nlambda_u: %.9f\ntau_hat: %.6f\n",
                  cfg.feature.c_str(), data.target_name.c_str(), estimate.theta.value,
                  estimate.clamped ? " (clamped)" : "", lambda_u, estimate.tau_hat);
    std::string text = buf;
    if (estimate.log_likelihood) {
        std::snprintf(buf, sizeof(buf), "log_likelihood: %.6f\n", *estimate.log_likelihood);
        text += buf;
    }

    const std::string stem = output_stem(cfg.output, "tailsel_fit");
    const std::string content = cfg.format == "text" ? text : doc.dump(2) + "\n";
    const std::string path = stem + (cfg.format == "text" ? ".txt" : ".json");
    write_file(path, content);
    std::cout << content;
    return 0;
}

void add_shared_options(CLI::App* sub, RunConfig& cfg, bool with_format) {
    sub->add_option("--input", cfg.input, "input CSV path")->required();
    sub->add_option("--target", cfg.target, "target column name");
    sub->add_option("--k", cfg.k, "number of features to select");
    sub->add_option("--seed", cfg.seed, "master RNG seed");
    sub->add_option("--estimator", cfg.estimator, "theta estimator: tau or mle");
    sub->add_option("--threads", cfg.threads, "worker threads (0 = auto)")
        ->envname("TAILSEL_THREADS");
    sub->add_option("--output", cfg.output, "output path or stem");
    sub->add_option("--config", cfg.config_path, "JSON file of defaults for these flags");
    sub->add_flag("--no-timing", cfg.no_timing, "omit wall-clock timing from outputs");
    if (with_format) sub->add_option("--format", cfg.format, "output format: json or text");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"upper-tail dependence feature selection toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    CLI::App* rank = app.add_subcommand("rank", "rank or select features");
    add_shared_options(rank, cfg, true);
    rank->add_option("--method", cfg.method, "selector: a2, mi, or ga");

    CLI::App* bench = app.add_subcommand("benchmark", "full selection-and-model benchmark");
    add_shared_options(bench, cfg, false);
    bench->add_option("--select-on", cfg.select_on, "rows visible to selectors: train or full");
    bench->add_option("--test-fraction", cfg.test_fraction, "held-out fraction");
    bench->add_option("--repeats", cfg.repeats, "permutation-importance repeats");

    CLI::App* fit = app.add_subcommand("fit-copula", "fit one feature-target pair");
    add_shared_options(fit, cfg, true);
    fit->add_option("--feature", cfg.feature, "feature column to fit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (rank->parsed()) {
            apply_config_file(rank, cfg);
            return cmd_rank(cfg);
        }
        if (bench->parsed()) {
            apply_config_file(bench, cfg);
            return cmd_benchmark(cfg);
        }
        apply_config_file(fit, cfg);
        return cmd_fit_copula(cfg);
    } catch (const StageFailure& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const tailsel::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
