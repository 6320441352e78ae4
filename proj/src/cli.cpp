#include "streamclique/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "streamclique/error.hpp"
#include "streamclique/pipeline.hpp"
#include "streamclique/serialize.hpp"

namespace streamclique::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSeedVariable = "STREAMCLIQUE_SEED";

std::optional<std::uint64_t> seed_from_environment() {
    const char* env = std::getenv(kSeedVariable);
    if (env == nullptr)
        return std::nullopt;
    const std::string text(env);
    std::uint64_t value = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || end != text.data() + text.size())
        throw InvalidParameter(std::string(kSeedVariable) + " is not an unsigned integer: '" + text + "'");
    return value;
}

struct ConfigFlags {
    std::string config_path;
    std::size_t n = 0, max_depth = 0, min_clique_size = 0, max_iters = 0;
    double k_param = 0, epsilon = 0, support_threshold = 0, smoothing = 0;
    std::uint64_t seed = 0;
    std::vector<CLI::Option*> options;

    void attach(CLI::App& app) {
        auto* config = app.add_option("--config", config_path, "JSON config file (a report.json works too)")
                           ->check(CLI::ExistingFile);
        options = {
            app.add_option("--n", n, "n-gram length")->check(CLI::PositiveNumber),
            app.add_option("--prune-k", k_param, "pruning factor K of the K log2(l) threshold")
                ->check(CLI::PositiveNumber),
            app.add_option("--max-depth", max_depth, "deepest context")->check(CLI::PositiveNumber),
            app.add_option("--min-clique-size", min_clique_size, "smallest class kept")
                ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max())),
            app.add_option("--epsilon", epsilon, "replicator L1 stopping tolerance")
                ->check(CLI::PositiveNumber),
            app.add_option("--max-iters", max_iters, "replicator iteration cap")->check(CLI::PositiveNumber),
            app.add_option("--support-threshold", support_threshold, "weight below which a node leaves the support")
                ->check(CLI::Range(0.0, 1.0)),
            app.add_option("--smoothing", smoothing, "additive smoothing for likelihoods")
                ->check(CLI::PositiveNumber),
            app.add_option("--seed", seed, "seed (overrides " + std::string(kSeedVariable) + ")"),
        };
        options.insert(options.begin(), config);
    }

    bool given(std::size_t i) const { return options[i]->count() > 0; }

    // defaults < --config < STREAMCLIQUE_SEED < flags
    PipelineConfig resolve() const {
        PipelineConfig config;
        if (given(0))
            config = io::config_from_json(io::read_json(config_path));
        if (!given(9))
            if (auto env = seed_from_environment())
                config.seed = *env;
        if (given(1)) config.n = n;
        if (given(2)) config.k_param = k_param;
        if (given(3)) config.max_depth = max_depth;
        if (given(4)) config.min_clique_size = min_clique_size;
        if (given(5)) config.epsilon = epsilon;
        if (given(6)) config.max_iters = max_iters;
        if (given(7)) config.support_threshold = support_threshold;
        if (given(8)) config.smoothing = smoothing;
        if (given(9)) config.seed = seed;
        config.validate();
        return config;
    }
};

struct Inputs {
    std::string events;
    std::string vocab;
    CLI::Option* vocab_option = nullptr;

    void attach(CLI::App& app) {
        app.add_option("--events", events, "event log (JSON lines)")->required()->check(CLI::ExistingFile);
        vocab_option = app.add_option("--vocab", vocab, "vocabulary file, one event name per line")
                           ->check(CLI::ExistingFile);
    }

    std::optional<fs::path> vocab_path() const {
        if (vocab_option->count() == 0)
            return std::nullopt;
        return fs::path(vocab);
    }

    Dataset load() const { return ingest(fs::path(events), vocab_path()); }
};

void report_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
    for (const auto& w : warnings)
        err << "warning: " << w << "\n";
}

fs::path prepare(const std::string& out_dir) {
    fs::path dir(out_dir);
    fs::create_directories(dir);
    return dir;
}

void write_vocab_file(const fs::path& path, const Vocabulary& vocabulary) {
    std::ostringstream text;
    write_vocabulary(vocabulary, text);
    io::write_file(path, text.str());
}

void cmd_generate(const SyntheticSpec& spec, const std::string& out_dir) {
    const SyntheticData data = generate(spec);
    const fs::path dir = prepare(out_dir);
    std::ostringstream log;
    export_event_log(data.dataset, log);
    io::write_file(dir / "events.jsonl", log.str());
    write_vocab_file(dir / "vocab.txt", data.dataset.vocabulary());
    io::Json truth = io::truth_to_json(data.truth, data.dataset.vocabulary());
    truth["spec"] = io::to_json(spec);
    io::write_file(dir / "truth.json", io::dump(truth));
}

void cmd_discover(const Inputs& in, const PipelineConfig& config, const std::string& out_dir,
                  std::ostream& err) {
    const Dataset dataset = in.load();
    const DiscoveryOutcome outcome = run_discovery(dataset, config);
    report_warnings(outcome.warnings, err);
    const fs::path dir = prepare(out_dir);
    io::write_file(dir / "clusters.json", io::dump(io::clusters_to_json(outcome.clusters, dataset)));
    io::write_file(dir / "similarity.pgm", render_similarity_image(outcome.matrix));
    const auto order = cluster_ordering(outcome);
    io::write_file(dir / "similarity_sorted.pgm",
                   render_similarity_image(outcome.matrix, std::span<const std::size_t>(order)));
    err << outcome.clusters.classes.size() << " classes, " << outcome.clusters.leftover.size()
        << " leftover activities\n";
}

void cmd_motifs(const Inputs& in, const std::string& clusters_path, const PipelineConfig& config,
                const std::string& out_dir, std::ostream& err) {
    const Dataset dataset = in.load();
    const ClusterResult clusters = io::clusters_from_json(io::read_json(clusters_path), dataset);
    const MotifOutcome outcome = run_motifs(dataset, clusters, config);
    report_warnings(outcome.warnings, err);
    const fs::path dir = prepare(out_dir);
    io::write_file(dir / "motifs.json", io::dump(io::motifs_to_json(outcome.motifs, dataset.vocabulary())));
    io::write_file(dir / "models.json",
                   io::dump(io::models_to_json(outcome.models, dataset.vocabulary(), config)));
}

void cmd_classify(const Inputs& in, const std::string& models_path, std::optional<double> smoothing,
                  const std::string& out_dir) {
    const io::LoadedModels loaded = io::models_from_json(io::read_json(models_path));
    Dataset dataset;
    if (auto vocab = in.vocab_path()) {
        if (read_vocabulary(*vocab) != loaded.vocabulary)
            throw VocabularyMismatch("vocabulary mismatch: " + vocab->string() +
                                     " differs from the vocabulary the models were trained on");
        dataset = in.load();
    } else {
        std::ifstream log(in.events);
        if (!log)
            throw IoError("cannot open " + in.events);
        try {
            dataset = ingest(log, loaded.vocabulary);
        } catch (const UnknownEventError& e) {
            throw VocabularyMismatch("vocabulary mismatch: event '" + e.name() +
                                     "' is not in the vocabulary the models were trained on");
        }
    }
    const double s = smoothing.value_or(loaded.config.smoothing);
    std::vector<Classification> results;
    results.reserve(dataset.size());
    for (const auto& activity : dataset.activities())
        results.push_back(classify(activity.events, loaded.models, s));
    const fs::path dir = prepare(out_dir);
    io::write_file(dir / "classification.json", io::dump(io::classification_to_json(dataset, results)));
}

void cmd_report(const Inputs& in, const std::string& truth_path, const PipelineConfig& config,
                const std::string& out_dir, std::ostream& err) {
    const Dataset dataset = in.load();
    std::optional<GroundTruth> truth;
    if (!truth_path.empty())
        truth = io::truth_from_json(io::read_json(truth_path), dataset.vocabulary());
    const DiscoveryReport report = run_report(dataset, config, truth);
    report_warnings(report.discovery.warnings, err);
    report_warnings(report.motifs.warnings, err);
    const fs::path dir = prepare(out_dir);
    io::write_file(dir / "report.json", io::dump(io::report_to_json(report, dataset)));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Activity-class discovery and motif mining over event logs", "streamclique"};
    app.require_subcommand(1);

    SyntheticSpec spec;
    std::string out_dir;
    auto* gen = app.add_subcommand("generate", "write a synthetic event log with planted classes");
    gen->add_option("--out-dir", out_dir, "output directory")->required();
    gen->add_option("--vocab-size", spec.vocab_size, "number of event types")->capture_default_str();
    gen->add_option("--classes", spec.num_classes, "planted classes")->capture_default_str();
    gen->add_option("--instances-per-class", spec.instances_per_class)->capture_default_str();
    gen->add_option("--length", spec.sequence_length, "events per activity")->capture_default_str();
    gen->add_option("--motifs-per-class", spec.motifs_per_class)->capture_default_str();
    gen->add_option("--motif-length", spec.motif_length)->capture_default_str();
    gen->add_option("--noise-rate", spec.noise_rate, "share of background events")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    gen->add_option("--noise-instances", spec.noise_instances, "activities with no planted structure")
        ->capture_default_str();
    auto* gen_seed = gen->add_option("--seed", spec.seed, "generator seed")->capture_default_str();

    Inputs disc_in, motif_in, class_in, report_in;
    ConfigFlags disc_cfg, motif_cfg, report_cfg;
    std::string clusters_path, models_path, truth_path;
    double class_smoothing = 0.0;

    auto* disc = app.add_subcommand("discover", "cluster activities into classes");
    disc_in.attach(*disc);
    disc_cfg.attach(*disc);
    disc->add_option("--out-dir", out_dir)->required();

    auto* mot = app.add_subcommand("motifs", "mine per-class motifs from discovered classes");
    motif_in.attach(*mot);
    motif_cfg.attach(*mot);
    mot->add_option("--clusters", clusters_path, "clusters.json from discover")
        ->required()
        ->check(CLI::ExistingFile);
    mot->add_option("--out-dir", out_dir)->required();

    auto* cls = app.add_subcommand("classify", "assign activities to trained class models");
    class_in.attach(*cls);
    cls->add_option("--models", models_path, "models.json from motifs")->required()->check(CLI::ExistingFile);
    auto* cls_smoothing = cls->add_option("--smoothing", class_smoothing, "overrides the trained smoothing")
                              ->check(CLI::PositiveNumber);
    cls->add_option("--out-dir", out_dir)->required();

    auto* rep = app.add_subcommand("report", "run the whole pipeline and write report.json");
    report_in.attach(*rep);
    report_cfg.attach(*rep);
    rep->add_option("--truth", truth_path, "truth.json from generate")->check(CLI::ExistingFile);
    rep->add_option("--out-dir", out_dir)->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        const auto& subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return kExitUsage;
    }

    try {
        if (gen->parsed()) {
            if (gen_seed->count() == 0)
                if (auto env = seed_from_environment())
                    spec.seed = *env;
            cmd_generate(spec, out_dir);
        } else if (disc->parsed()) {
            cmd_discover(disc_in, disc_cfg.resolve(), out_dir, err);
        } else if (mot->parsed()) {
            cmd_motifs(motif_in, clusters_path, motif_cfg.resolve(), out_dir, err);
        } else if (cls->parsed()) {
            std::optional<double> smoothing;
            if (cls_smoothing->count() > 0)
                smoothing = class_smoothing;
            cmd_classify(class_in, models_path, smoothing, out_dir);
        } else if (rep->parsed()) {
            cmd_report(report_in, truth_path, report_cfg.resolve(), out_dir, err);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const nlohmann::json::exception& e) {
        err << "error: malformed JSON input: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}

}  // namespace streamclique::cli
