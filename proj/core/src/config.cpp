#include "lossforecast/config.hpp"

#include "lossforecast/errors.hpp"

#include <json.hpp>

#include <fstream>

namespace lossforecast {

using nlohmann::json;

const char* resample_method_name(ResampleMethod m) {
    return m == ResampleMethod::mean ? "mean" : "last";
}

ResampleMethod resample_method_from_name(const std::string& name) {
    if (name == "mean")
        return ResampleMethod::mean;
    if (name == "last")
        return ResampleMethod::last;
    throw ParseError("unknown resample method '" + name + "'");
}

FeatureMode feature_mode_from_name(const std::string& name) {
    if (name == "optimal_lags")
        return FeatureMode::optimal_lags;
    if (name == "all_lags")
        return FeatureMode::all_lags;
    throw ParseError("unknown feature mode '" + name + "'");
}

namespace {

IndicatorSource parse_source(const json& j, const std::filesystem::path& base) {
    IndicatorSource src;
    src.id = j.at("id").get<std::string>();
    std::filesystem::path p = j.at("path").get<std::string>();
    src.path = p.is_absolute() ? p : base / p;
    if (j.contains("resample"))
        src.resample = resample_method_from_name(j.at("resample").get<std::string>());
    return src;
}

} // namespace

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open config '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("config '" + path.string() + "': " + e.what());
    }

    RunConfig cfg;
    cfg.config_path = path;
    std::filesystem::path base = path.parent_path();
    try {
        for (const json& src : j.at("indicators"))
            cfg.indicators.push_back(parse_source(src, base));
        cfg.target = parse_source(j.at("target"), base);

        if (j.contains("mode"))
            cfg.mode = feature_mode_from_name(j.at("mode").get<std::string>());
        if (j.contains("learners")) {
            cfg.learners.clear();
            for (const json& l : j.at("learners"))
                cfg.learners.push_back(learner_from_name(l.get<std::string>()));
        }
        if (j.contains("classifiers")) {
            cfg.classifiers.clear();
            for (const json& c : j.at("classifiers"))
                cfg.classifiers.push_back(classifier_kind_from_name(c.get<std::string>()));
        }
        if (j.contains("chunk_span"))
            cfg.chunk_span = j.at("chunk_span").get<int>();
        if (j.contains("horizon"))
            cfg.horizon = j.at("horizon").get<int>();
        if (j.contains("split"))
            cfg.split = Quarter::parse(j.at("split").get<std::string>());
        if (j.contains("origin"))
            cfg.origin = Quarter::parse(j.at("origin").get<std::string>());
        if (j.contains("p1")) {
            cfg.p1_grid.clear();
            for (const json& p : j.at("p1"))
                cfg.p1_grid.push_back(p.get<int>());
        }
        if (j.contains("seed")) {
            cfg.seed = j.at("seed").get<std::uint64_t>();
            cfg.seed_set = true;
        }
        if (j.contains("out")) {
            std::filesystem::path out = j.at("out").get<std::string>();
            cfg.out_dir = out.is_absolute() ? out : base / out;
        } else {
            cfg.out_dir = base / "out";
        }
    } catch (const json::exception& e) {
        throw ParseError("config '" + path.string() + "': " + e.what());
    }
    validate_config(cfg);
    return cfg;
}

void validate_config(const RunConfig& config) {
    if (config.indicators.empty())
        throw ParseError("config: no indicators listed");
    if (config.target.id.empty())
        throw ParseError("config: no target source");
    if (!config.seed_set)
        throw ParseError("config: a seed is mandatory");
    if (config.horizon < 1)
        throw ParseError("config: horizon must be >= 1");
    if (config.chunk_span < 8)
        throw ParseError("config: chunk_span must be >= 8");
    if (config.learners.empty())
        throw ParseError("config: learner set is empty");
    if (config.classifiers.empty())
        throw ParseError("config: classifier set is empty");
    if (config.p1_grid.empty())
        throw ParseError("config: p1 grid is empty");
}

} // namespace lossforecast
