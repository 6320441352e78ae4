#include "streamclique/serialize.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "streamclique/error.hpp"

namespace streamclique::io {

namespace {

Json number(double v) {
    return std::isfinite(v) ? Json(v) : Json(nullptr);
}

double as_double(const Json& j, const char* what) {
    if (j.is_null())
        return -std::numeric_limits<double>::infinity();
    if (!j.is_number())
        throw InvalidParameter(std::string(what) + " must be a number");
    return j.get<double>();
}

std::size_t as_count(const Json& j, const char* what) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
        throw InvalidParameter(std::string(what) + " must be a nonnegative integer");
    return j.get<std::size_t>();
}

const Json& member(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw InvalidParameter(std::string("missing key '") + key + "'");
    return j.at(key);
}

Json event_names(std::span<const EventId> events, const Vocabulary& vocabulary) {
    Json out = Json::array();
    for (EventId e : events)
        out.push_back(vocabulary.name(e));
    return out;
}

std::vector<EventId> event_ids(const Json& j, const Vocabulary& vocabulary) {
    if (!j.is_array())
        throw InvalidParameter("event list must be an array");
    std::vector<EventId> out;
    for (const auto& name : j) {
        if (!name.is_string())
            throw InvalidParameter("event names must be strings");
        out.push_back(vocabulary.at(name.get<std::string>()));
    }
    return out;
}

Json class_json(const DiscoveredClass& cls, const Dataset& dataset) {
    Json members = Json::array();
    Json weights = Json::object();
    for (std::size_t i = 0; i < cls.members.size(); ++i) {
        const auto& id = dataset[cls.members[i]].id;
        members.push_back(id);
        weights[id] = cls.membership_weights.at(i);
    }
    Json out;
    out["members"] = std::move(members);
    out["weights"] = std::move(weights);
    out["cohesiveness"] = cls.cohesiveness;
    return out;
}

}  // namespace

Json to_json(const PipelineConfig& config) {
    Json j;
    j["n"] = config.n;
    j["prune_k"] = config.k_param;
    j["max_depth"] = config.max_depth;
    j["min_clique_size"] = config.min_clique_size;
    j["epsilon"] = config.epsilon;
    j["max_iters"] = config.max_iters;
    j["support_threshold"] = config.support_threshold;
    j["smoothing"] = config.smoothing;
    j["seed"] = config.seed;
    return j;
}

PipelineConfig config_from_json(const Json& j, PipelineConfig base) {
    if (j.is_object() && j.contains("config"))
        return config_from_json(j.at("config"), base);
    if (!j.is_object())
        throw InvalidParameter("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "n")
            base.n = as_count(value, "n");
        else if (key == "prune_k")
            base.k_param = as_double(value, "prune_k");
        else if (key == "max_depth")
            base.max_depth = as_count(value, "max_depth");
        else if (key == "min_clique_size")
            base.min_clique_size = as_count(value, "min_clique_size");
        else if (key == "epsilon")
            base.epsilon = as_double(value, "epsilon");
        else if (key == "max_iters")
            base.max_iters = as_count(value, "max_iters");
        else if (key == "support_threshold")
            base.support_threshold = as_double(value, "support_threshold");
        else if (key == "smoothing")
            base.smoothing = as_double(value, "smoothing");
        else if (key == "seed")
            base.seed = as_count(value, "seed");
        else
            throw InvalidParameter("unknown config key '" + key + "'");
    }
    base.validate();
    return base;
}

Json to_json(const SimilarityMatrix& matrix) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        Json row = Json::array();
        for (double v : matrix.row(i))
            row.push_back(v);
        rows.push_back(std::move(row));
    }
    Json j;
    j["ids"] = matrix.ids();
    j["rows"] = std::move(rows);
    return j;
}

Json clusters_to_json(const ClusterResult& clusters, const Dataset& dataset) {
    Json classes = Json::array();
    for (const auto& cls : clusters.classes)
        classes.push_back(class_json(cls, dataset));
    Json leftover = Json::array();
    for (std::size_t a : clusters.leftover)
        leftover.push_back(dataset[a].id);
    Json j;
    j["classes"] = std::move(classes);
    j["leftover"] = std::move(leftover);
    j["warnings"] = clusters.warnings;
    return j;
}

ClusterResult clusters_from_json(const Json& j, const Dataset& dataset) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < dataset.size(); ++i)
        index.emplace(dataset[i].id, i);
    std::set<std::size_t> used;
    auto lookup = [&](const Json& id) {
        if (!id.is_string())
            throw InvalidParameter("activity ids must be strings");
        auto it = index.find(id.get<std::string>());
        if (it == index.end())
            throw InvalidParameter("clusters refer to unknown activity '" + id.get<std::string>() + "'");
        if (!used.insert(it->second).second)
            throw InvalidParameter("activity '" + it->first + "' appears twice in clusters");
        return it->second;
    };

    ClusterResult out;
    for (const auto& cls : member(j, "classes")) {
        DiscoveredClass c;
        const Json& weights = member(cls, "weights");
        for (const auto& id : member(cls, "members")) {
            c.members.push_back(lookup(id));
            c.membership_weights.push_back(as_double(member(weights, id.get_ref<const std::string&>().c_str()), "weight"));
        }
        c.cohesiveness = as_double(member(cls, "cohesiveness"), "cohesiveness");
        out.classes.push_back(std::move(c));
    }
    for (const auto& id : member(j, "leftover"))
        out.leftover.push_back(lookup(id));
    if (j.contains("warnings"))
        out.warnings = j.at("warnings").get<std::vector<std::string>>();
    return out;
}

Json motifs_to_json(std::span<const MotifSet> motifs, const Vocabulary& vocabulary) {
    Json classes = Json::array();
    for (const auto& set : motifs) {
        Json list = Json::array();
        for (const auto& motif : set.motifs) {
            Json next = Json::object();
            for (const auto& [y, p] : motif.next)
                next[vocabulary.name(y)] = p;
            Json m;
            m["events"] = event_names(motif.events, vocabulary);
            m["depth"] = motif.depth();
            m["psi_bits"] = motif.psi;
            m["next_event_distribution"] = std::move(next);
            list.push_back(std::move(m));
        }
        Json c;
        c["class"] = set.class_id;
        c["motifs"] = std::move(list);
        classes.push_back(std::move(c));
    }
    Json j;
    j["classes"] = std::move(classes);
    return j;
}

Json models_to_json(std::span<const ClassModel> models, const Vocabulary& vocabulary,
                    const PipelineConfig& config) {
    Json list = Json::array();
    for (const auto& model : models) {
        Json nodes = Json::array();
        for (const auto& node : model.nodes()) {
            std::vector<EventId> chronological(node.context.rbegin(), node.context.rend());
            Json next = Json::object();
            for (const auto& [y, n] : node.counts.next)
                next[vocabulary.name(y)] = n;
            Json deltas = Json::array();
            for (double d : node.deltas)
                deltas.push_back(number(d));
            Json jn;
            jn["context"] = event_names(chronological, vocabulary);
            jn["total"] = node.counts.total;
            jn["next"] = std::move(next);
            jn["deltas"] = std::move(deltas);
            jn["psi"] = number(node.psi);
            jn["selected"] = node.selected;
            jn["structural"] = node.structural;
            nodes.push_back(std::move(jn));
        }
        Json jm;
        jm["class"] = model.class_id();
        jm["max_depth"] = model.max_depth();
        jm["pruned"] = model.pruned();
        jm["prune_k"] = model.k_param();
        jm["ell"] = model.ell();
        jm["nodes"] = std::move(nodes);
        list.push_back(std::move(jm));
    }
    Json j;
    j["format"] = kModelsFormat;
    j["version"] = kModelsVersion;
    j["vocabulary"] = vocabulary.names();
    j["config"] = to_json(config);
    j["models"] = std::move(list);
    return j;
}

LoadedModels models_from_json(const Json& j) {
    if (!j.is_object() || j.value("format", std::string{}) != kModelsFormat)
        throw InvalidParameter("not a models file (format tag missing)");
    if (member(j, "version") != kModelsVersion)
        throw InvalidParameter("unsupported models version " + member(j, "version").dump());

    LoadedModels out;
    out.vocabulary = Vocabulary(member(j, "vocabulary").get<std::vector<std::string>>());
    out.config = config_from_json(member(j, "config"));
    for (const auto& jm : member(j, "models")) {
        std::vector<ContextNode> nodes;
        for (const auto& jn : member(jm, "nodes")) {
            ContextNode node;
            const auto chronological = event_ids(member(jn, "context"), out.vocabulary);
            node.context.assign(chronological.rbegin(), chronological.rend());
            node.counts.total = as_count(member(jn, "total"), "total");
            std::vector<std::pair<EventId, std::uint64_t>> next;
            for (const auto& [name, count] : member(jn, "next").items())
                next.emplace_back(out.vocabulary.at(name), as_count(count, "next count"));
            std::sort(next.begin(), next.end());
            node.counts.next = std::move(next);
            for (const auto& d : member(jn, "deltas"))
                node.deltas.push_back(as_double(d, "delta"));
            node.psi = as_double(member(jn, "psi"), "psi");
            node.selected = member(jn, "selected").get<bool>();
            node.structural = member(jn, "structural").get<bool>();
            nodes.push_back(std::move(node));
        }
        out.models.push_back(ClassModel::from_nodes(
            as_count(member(jm, "class"), "class"), out.vocabulary.size(),
            as_count(member(jm, "max_depth"), "max_depth"), as_double(member(jm, "prune_k"), "prune_k"),
            as_count(member(jm, "ell"), "ell"), member(jm, "pruned").get<bool>(), std::move(nodes)));
    }
    return out;
}

Json classification_to_json(const Dataset& dataset, std::span<const Classification> results) {
    if (results.size() != dataset.size())
        throw InvalidParameter("one classification per activity required");
    Json list = Json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        Json item;
        item["activity"] = dataset[i].id;
        item["label"] = r.label ? Json(*r.label) : Json(nullptr);
        Json posterior = Json::array(), ll = Json::array();
        for (double p : r.posterior)
            posterior.push_back(p);
        for (double v : r.log_likelihoods)
            ll.push_back(number(v));
        item["posterior"] = std::move(posterior);
        item["log2_likelihoods"] = std::move(ll);
        list.push_back(std::move(item));
    }
    Json j;
    j["activities"] = std::move(list);
    return j;
}

Json truth_to_json(const GroundTruth& truth, const Vocabulary& vocabulary) {
    Json labels = Json::object();
    for (const auto& [id, label] : truth.labels)
        labels[id] = label;
    Json motifs = Json::array();
    for (const auto& class_motifs : truth.motifs) {
        Json list = Json::array();
        for (const auto& motif : class_motifs)
            list.push_back(event_names(motif, vocabulary));
        motifs.push_back(std::move(list));
    }
    Json j;
    j["labels"] = std::move(labels);
    j["motifs"] = std::move(motifs);
    return j;
}

GroundTruth truth_from_json(const Json& j, const Vocabulary& vocabulary) {
    GroundTruth truth;
    for (const auto& [id, label] : member(j, "labels").items()) {
        if (!label.is_number_integer())
            throw InvalidParameter("truth label for '" + id + "' must be an integer");
        truth.labels.emplace(id, label.get<int>());
    }
    for (const auto& class_motifs : member(j, "motifs")) {
        std::vector<std::vector<EventId>> list;
        for (const auto& motif : class_motifs)
            list.push_back(event_ids(motif, vocabulary));
        truth.motifs.push_back(std::move(list));
    }
    return truth;
}

Json to_json(const SyntheticSpec& spec) {
    Json j;
    j["vocab_size"] = spec.vocab_size;
    j["num_classes"] = spec.num_classes;
    j["instances_per_class"] = spec.instances_per_class;
    j["sequence_length"] = spec.sequence_length;
    j["motifs_per_class"] = spec.motifs_per_class;
    j["motif_length"] = spec.motif_length;
    j["noise_rate"] = spec.noise_rate;
    j["noise_instances"] = spec.noise_instances;
    j["seed"] = spec.seed;
    return j;
}

Json report_to_json(const DiscoveryReport& report, const Dataset& dataset) {
    Json data;
    data["activities"] = dataset.size();
    data["total_length"] = dataset.total_length();
    data["vocabulary_size"] = dataset.vocabulary().size();

    Json objectives = Json::array();
    for (const auto& o : report.objectives) {
        Json competitors = Json::object();
        for (const auto& [other, value] : o.log2_competitors)
            competitors[std::to_string(other)] = number(value);
        Json jo;
        jo["class"] = o.class_id;
        jo["log2_gamma"] = number(o.log2_gamma);
        jo["log2_lambda"] = number(o.log2_lambda);
        jo["log2_competitors"] = std::move(competitors);
        jo["q"] = o.q ? number(*o.q) : Json(nullptr);
        jo["underflowed"] = o.underflowed;
        objectives.push_back(std::move(jo));
    }

    std::vector<std::string> warnings = report.discovery.warnings;
    warnings.insert(warnings.end(), report.motifs.warnings.begin(), report.motifs.warnings.end());

    Json j;
    j["config"] = to_json(report.config);
    j["dataset"] = std::move(data);
    j["clusters"] = clusters_to_json(report.discovery.clusters, dataset);
    j["motifs"] = motifs_to_json(report.motifs.motifs, dataset.vocabulary())["classes"];
    j["objectives"] = std::move(objectives);
    j["warnings"] = std::move(warnings);
    if (report.truth) {
        const auto& t = *report.truth;
        Json jt;
        jt["class_labels"] = t.class_labels;
        jt["clustered"] = t.clustered;
        jt["purity"] = t.purity;
        jt["coverage"] = t.coverage;
        Json found = Json::array();
        for (const auto& row : t.motif_found) {
            Json r = Json::array();
            for (bool b : row)
                r.push_back(b);
            found.push_back(std::move(r));
        }
        jt["motif_found"] = std::move(found);
        jt["motif_recall"] = t.motif_recall;
        jt["leftover_is_noise"] = t.leftover_is_noise;
        j["truth"] = std::move(jt);
    }
    return j;
}

std::string dump(const Json& j) {
    return j.dump(2) + "\n";
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw IoError("write failed for " + path.string());
}

}  // namespace streamclique::io
