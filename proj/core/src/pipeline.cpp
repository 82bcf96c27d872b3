#include "lossforecast/pipeline.hpp"

#include "lossforecast/csv.hpp"
#include "lossforecast/errors.hpp"
#include "lossforecast/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

namespace lossforecast {

using nlohmann::json;

namespace {

std::uint64_t id_tag(const std::string& id) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : id) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

QuarterlySeries load_source(const IndicatorSource& src) {
    std::vector<DatedObservation> obs = ingest_csv(src.path, src.id);
    return resample_to_quarterly(src.id, obs, src.resample);
}

/// Truncate a series at the prediction origin; everything after it is treated
/// as unknown at forecast time.
QuarterlySeries truncate_at(const QuarterlySeries& s, Quarter origin) {
    if (s.end() <= origin)
        return s;
    int count = origin.minus(s.start()) + 1;
    if (count < 1)
        throw DataError("series '" + s.id() + "' starts after the prediction origin");
    return s.slice(0, static_cast<std::size_t>(count));
}

json quarter_list(const std::vector<Quarter>& qs) {
    json out = json::array();
    for (Quarter q : qs)
        out.push_back(q.str());
    return out;
}

json source_json(const IndicatorSource& src) {
    return json{{"id", src.id},
                {"path", src.path.filename().string()},
                {"resample", resample_method_name(src.resample)}};
}

} // namespace

std::vector<QuarterlySeries> load_indicators(const RunConfig& config) {
    std::vector<QuarterlySeries> out;
    out.reserve(config.indicators.size());
    for (const IndicatorSource& src : config.indicators)
        out.push_back(load_source(src));
    return out;
}

QuarterlySeries load_target(const RunConfig& config) {
    return load_source(config.target);
}

namespace {

struct PreparedData {
    std::vector<QuarterlySeries> indicators;
    QuarterlySeries target;
    LagTable table;
    std::vector<CorrelationRecord> records;
};

PreparedData prepare(const RunConfig& config) {
    PreparedData d{load_indicators(config), load_target(config),
                   LagTable{{}, QuarterlySeries("", Quarter(1, 1), {0.0})}, {}};
    d.table = build_lag_table(d.indicators, d.target);
    d.records.reserve(d.table.features.size());
    for (const LaggedFeature& f : d.table.features)
        d.records.push_back(correlation(f, d.table.target_yoy));
    return d;
}

std::vector<LaggedFeature> mode_subset(const PreparedData& d, FeatureMode mode) {
    if (mode == FeatureMode::all_lags)
        return d.table.features;
    std::map<std::string, int> lags = optimal_lag_selection(d.records);
    std::vector<LaggedFeature> subset;
    for (const LaggedFeature& f : d.table.features)
        if (lags.at(f.indicator_id) == f.lag)
            subset.push_back(f);
    return subset;
}

} // namespace

PipelineResult run_pipeline(const RunConfig& config) {
    validate_config(config);
    PreparedData data = prepare(config);

    // Step 2: Lasso feature selection
    std::vector<LaggedFeature> subset = mode_subset(data, config.mode);
    FeatureMatrix mode_matrix = assemble_matrix(subset, data.table.target_yoy);
    SelectionResult selection =
        lasso_feature_select(mode_matrix, config.mode, derive_seed(config.seed, 0x73656cULL));
    if (selection.selected.empty())
        throw EmptySelection("feature selection kept no column above the 0.2 threshold");

    std::vector<LaggedFeature> chosen;
    for (const SelectedFeature& sf : selection.selected)
        for (const LaggedFeature& f : subset)
            if (f.indicator_id == sf.indicator_id && f.lag == sf.lag)
                chosen.push_back(f);
    FeatureMatrix matrix = assemble_matrix(chosen, data.table.target_yoy);

    // Step 3: regression model training and winner selection
    EvaluationResult evaluation = train_and_evaluate(matrix, config.split, config.learners,
                                                     derive_seed(config.seed, 0x657661ULL));
    const LearnerReport& winner = evaluation.reports[evaluation.best_index];

    // Step 4: forecast each selected indicator past the origin via MSIC
    std::set<std::string> selected_ids;
    for (const LaggedFeature& f : chosen)
        selected_ids.insert(f.indicator_id);

    PipelineResult result;
    std::map<std::string, QuarterlySeries> extended; // raw series through origin+horizon
    for (const QuarterlySeries& raw : data.indicators) {
        if (!selected_ids.count(raw.id()))
            continue;
        QuarterlySeries trunc = truncate_at(raw, config.origin);
        IndicatorForecastInfo info;
        info.indicator_id = raw.id();
        std::uint64_t seed = derive_seed(config.seed, 0x6d736963ULL, id_tag(raw.id()));
        Forecast fc;
        try {
            std::vector<QuarterlySeries> chunks = chunk(trunc, config.chunk_span);
            std::vector<ChunkLabel> labels = label_chunks(chunks, config.horizon, seed);
            MsicModel model = train_msic(labels, config.classifiers.front(), seed);
            std::tie(info.model, fc) = msic_select(model, trunc, config.horizon, seed);
            info.fallback = fc.fallback;
        } catch (const Error&) {
            info.model = ForecastModel::naive;
            info.fallback = true;
            fc = forecast_with(ForecastModel::naive, trunc, config.horizon, seed);
        }
        std::vector<double> ext = trunc.values();
        ext.insert(ext.end(), fc.values.begin(), fc.values.end());
        extended.emplace(raw.id(), QuarterlySeries(raw.id(), trunc.start(), std::move(ext)));
        result.indicator_models.push_back(info);
    }

    // Predicted feature rows on the training scale: transform then YoY
    result.predicted_yoy.reserve(static_cast<std::size_t>(config.horizon));
    for (int h = 1; h <= config.horizon; ++h) {
        Quarter t = config.origin.plus(h);
        std::vector<double> row(chosen.size());
        for (std::size_t c = 0; c < chosen.size(); ++c) {
            const LaggedFeature& f = chosen[c];
            const QuarterlySeries& ext = extended.at(f.indicator_id);
            double num = apply_one(f.transform, ext.at(t.plus(-f.lag)));
            double den = apply_one(f.transform, ext.at(t.plus(-f.lag - 4)));
            if (den == 0.0)
                throw DivisionByZero("feature " + f.indicator_id + " lag " +
                                     std::to_string(f.lag) + " has a zero base at " + t.str());
            row[c] = num / den - 1.0;
        }
        result.prediction_quarters.push_back(t);
        result.predicted_yoy.push_back(winner.model.predict(row));
        if (data.table.target_yoy.covers(t))
            result.actual_yoy.emplace_back(data.table.target_yoy.at(t));
        else
            result.actual_yoy.emplace_back(std::nullopt);
    }

    // Level reconstruction: level_t = level_{t-4} * (1 + yoy_t), base level
    // from the observed target, or a reconstructed one inside the window
    for (std::size_t i = 0; i < result.prediction_quarters.size(); ++i) {
        Quarter t = result.prediction_quarters[i];
        Quarter base_q = t.plus(-4);
        double base;
        auto it = std::find(result.prediction_quarters.begin(), result.prediction_quarters.end(),
                            base_q);
        if (it != result.prediction_quarters.end())
            base = result.predicted_level[static_cast<std::size_t>(
                it - result.prediction_quarters.begin())];
        else
            base = data.target.at(base_q);
        result.predicted_level.push_back(base * (1.0 + result.predicted_yoy[i]));
    }

    double sse = 0.0;
    std::size_t scored = 0;
    for (std::size_t i = 0; i < result.predicted_yoy.size(); ++i)
        if (result.actual_yoy[i]) {
            double e = result.predicted_yoy[i] - *result.actual_yoy[i];
            sse += e * e;
            ++scored;
        }
    if (scored)
        result.prediction_mse = sse / static_cast<double>(scored);

    result.selection = std::move(selection);
    result.correlations = std::move(data.records);
    result.winner = winner.kind;
    result.out_dir = config.out_dir;

    // ---- outputs ----
    std::filesystem::create_directories(config.out_dir);
    std::filesystem::create_directories(config.out_dir / "plotdata");

    {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < result.prediction_quarters.size(); ++i)
            rows.push_back({result.prediction_quarters[i].str(),
                            format_double(result.predicted_yoy[i]),
                            result.actual_yoy[i] ? format_double(*result.actual_yoy[i]) : "",
                            format_double(result.predicted_level[i])});
        write_csv(config.out_dir / "predictions.csv",
                  {"quarter", "predicted_yoy", "actual_yoy", "predicted_level"}, rows);
    }

    {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t c = 0; c < mode_matrix.column_labels.size(); ++c) {
            const auto& [ind, lagk] = mode_matrix.column_labels[c];
            const SelectedFeature* hit = nullptr;
            for (const SelectedFeature& sf : result.selection.selected)
                if (sf.indicator_id == ind && sf.lag == lagk)
                    hit = &sf;
            rows.push_back({ind, std::to_string(lagk),
                            format_double(result.selection.all_importances[c]),
                            hit ? format_double(hit->r) : "",
                            hit ? "1" : "0"});
        }
        write_csv(config.out_dir / "selection.csv",
                  {"indicator", "lag", "importance", "r", "selected"}, rows);
    }

    write_correlations_csv(config.out_dir / "correlations.csv", result.correlations);

    {
        std::vector<BenchmarkRow> bench;
        for (const QuarterlySeries& raw : data.indicators) {
            if (!selected_ids.count(raw.id()))
                continue;
            std::vector<BenchmarkRow> rows =
                benchmark(raw, config.p1_grid, config.classifiers, config.chunk_span,
                          config.horizon,
                          derive_seed(config.seed, 0x62656eULL, id_tag(raw.id())));
            bench.insert(bench.end(), rows.begin(), rows.end());
        }
        write_benchmark_csv(config.out_dir / "benchmark.csv", bench);
    }

    {
        // per-model fit over the full matrix range (train + test)
        std::vector<std::string> header{"quarter", "actual"};
        for (const LearnerReport& rep : evaluation.reports)
            header.push_back(learner_name(rep.kind));
        std::vector<std::vector<double>> fits;
        for (const LearnerReport& rep : evaluation.reports)
            fits.push_back(rep.model.predict_all(matrix.X));
        std::vector<std::vector<std::string>> rows;
        for (std::size_t r = 0; r < matrix.rows; ++r) {
            std::vector<std::string> row{matrix.quarter_of(r).str(), format_double(matrix.y[r])};
            for (const auto& fit : fits)
                row.push_back(format_double(fit[r]));
            rows.push_back(std::move(row));
        }
        write_csv(config.out_dir / "plotdata" / "model_fit.csv", header, rows);
    }

    {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < result.prediction_quarters.size(); ++i)
            rows.push_back({result.prediction_quarters[i].str(),
                            result.actual_yoy[i] ? format_double(*result.actual_yoy[i]) : "",
                            format_double(result.predicted_yoy[i])});
        write_csv(config.out_dir / "plotdata" / "forecast.csv",
                  {"quarter", "actual_yoy", "predicted_yoy"}, rows);
    }

    {
        json manifest;
        json cfg;
        cfg["mode"] = feature_mode_name(config.mode);
        cfg["chunk_span"] = config.chunk_span;
        cfg["horizon"] = config.horizon;
        cfg["split"] = config.split.str();
        cfg["origin"] = config.origin.str();
        cfg["p1"] = config.p1_grid;
        cfg["seed"] = config.seed;
        json inds = json::array();
        for (const IndicatorSource& src : config.indicators)
            inds.push_back(source_json(src));
        cfg["indicators"] = inds;
        cfg["target"] = source_json(config.target);
        json learners = json::array();
        for (LearnerKind k : config.learners)
            learners.push_back(learner_name(k));
        cfg["learners"] = learners;
        json classifiers = json::array();
        for (ClassifierKind k : config.classifiers)
            classifiers.push_back(classifier_kind_name(k));
        cfg["classifiers"] = classifiers;
        manifest["config"] = cfg;

        json hashes;
        for (const IndicatorSource& src : config.indicators)
            hashes[src.id] = hash_file(src.path);
        hashes[config.target.id] = hash_file(config.target.path);
        manifest["input_hashes"] = hashes;

        json transforms = json::array();
        for (const LaggedFeature& f : chosen)
            transforms.push_back(json{{"indicator", f.indicator_id},
                                      {"lag", f.lag},
                                      {"kind", transform_kind_name(f.transform.kind)},
                                      {"shift", f.transform.shift},
                                      {"lambda", f.transform.lambda},
                                      {"mean", f.transform.mean},
                                      {"sd", f.transform.sd}});
        manifest["transforms"] = transforms;

        json sel;
        sel["mode"] = feature_mode_name(result.selection.mode);
        sel["lambda"] = result.selection.lambda;
        json selected = json::array();
        for (const SelectedFeature& sf : result.selection.selected)
            selected.push_back(json{{"indicator", sf.indicator_id},
                                    {"lag", sf.lag},
                                    {"r", sf.r},
                                    {"importance", sf.importance}});
        sel["selected"] = selected;
        manifest["selection"] = sel;

        json reports = json::array();
        for (const LearnerReport& rep : evaluation.reports) {
            json r;
            r["learner"] = learner_name(rep.kind);
            r["params"] = rep.params.describe(rep.kind);
            r["train_mse"] = rep.train.mse;
            if (rep.train.r_squared)
                r["train_r2"] = *rep.train.r_squared;
            r["test_mse"] = rep.test.mse;
            if (rep.test.r_squared)
                r["test_r2"] = *rep.test.r_squared;
            reports.push_back(r);
        }
        manifest["learners"] = reports;
        manifest["winner"] = learner_name(result.winner);

        json forecasters;
        for (const IndicatorForecastInfo& info : result.indicator_models)
            forecasters[info.indicator_id] = json{{"model", forecast_model_name(info.model)},
                                                  {"fallback", info.fallback}};
        manifest["indicator_forecasters"] = forecasters;

        json pred;
        pred["quarters"] = quarter_list(result.prediction_quarters);
        pred["predicted_yoy"] = result.predicted_yoy;
        json actual = json::array();
        for (const auto& a : result.actual_yoy)
            a ? actual.push_back(*a) : actual.push_back(nullptr);
        pred["actual_yoy"] = actual;
        pred["predicted_level"] = result.predicted_level;
        if (result.prediction_mse)
            pred["mse"] = *result.prediction_mse;
        manifest["prediction"] = pred;

        std::ofstream out(config.out_dir / "manifest.json", std::ios::binary);
        out << manifest.dump(2) << "\n";
    }

    {
        json m;
        m["winner"] = learner_name(result.winner);
        json reports;
        for (const LearnerReport& rep : evaluation.reports) {
            json r;
            r["train_mse"] = rep.train.mse;
            if (rep.train.r_squared)
                r["train_r2"] = *rep.train.r_squared;
            r["test_mse"] = rep.test.mse;
            if (rep.test.r_squared)
                r["test_r2"] = *rep.test.r_squared;
            reports[learner_name(rep.kind)] = r;
        }
        m["learners"] = reports;
        if (result.prediction_mse)
            m["prediction_mse"] = *result.prediction_mse;
        std::ofstream out(config.out_dir / "metrics.json", std::ios::binary);
        out << m.dump(2) << "\n";
    }

    result.evaluation = std::move(evaluation);
    return result;
}

std::vector<BenchmarkRow> run_benchmark(const RunConfig& config,
                                        const std::vector<std::string>& indicator_filter) {
    std::vector<BenchmarkRow> out;
    for (const IndicatorSource& src : config.indicators) {
        if (!indicator_filter.empty() &&
            std::find(indicator_filter.begin(), indicator_filter.end(), src.id) ==
                indicator_filter.end())
            continue;
        QuarterlySeries series = load_source(src);
        std::vector<BenchmarkRow> rows =
            benchmark(series, config.p1_grid, config.classifiers, config.chunk_span,
                      config.horizon, derive_seed(config.seed, 0x62656eULL, id_tag(src.id)));
        out.insert(out.end(), rows.begin(), rows.end());
    }
    if (out.empty())
        throw EmptyInput("benchmark: no indicator matched the filter");
    return out;
}

void write_benchmark_csv(const std::filesystem::path& path,
                         const std::vector<BenchmarkRow>& rows) {
    std::vector<std::vector<std::string>> flat;
    for (const BenchmarkRow& row : rows)
        for (std::size_t c = 0; c < row.classifiers.size(); ++c)
            flat.push_back({row.series_id, std::to_string(row.p1),
                            classifier_kind_name(row.classifiers[c]),
                            format_double(row.mse_optimal),
                            forecast_model_name(row.optimal_model),
                            format_double(row.mse_traditional),
                            forecast_model_name(row.traditional_model),
                            format_double(row.mse_msic[c]),
                            forecast_model_name(row.msic_model[c]),
                            row.gap_reduction[c] ? format_double(*row.gap_reduction[c]) : ""});
    write_csv(path,
              {"series_id", "p1", "classifier", "mse_optimal", "optimal_model",
               "mse_traditional", "traditional_model", "mse_msic", "msic_model",
               "gap_reduction"},
              flat);
}

std::vector<CorrelationRecord> run_correlate(const RunConfig& config) {
    PreparedData data = prepare(config);
    return data.records;
}

void write_correlations_csv(const std::filesystem::path& path,
                            const std::vector<CorrelationRecord>& records) {
    std::vector<std::vector<std::string>> rows;
    for (const CorrelationRecord& rec : records)
        rows.push_back({rec.indicator_id, std::to_string(rec.lag), format_double(rec.r),
                        format_double(rec.p_value), rec.significant_at_10pct ? "1" : "0"});
    write_csv(path, {"indicator", "lag", "r", "p_value", "significant_at_10pct"}, rows);
}

std::string inspect_manifest(const std::filesystem::path& out_dir) {
    std::ifstream in(out_dir / "manifest.json");
    if (!in)
        throw DataError("no manifest.json under '" + out_dir.string() + "'");
    json m;
    try {
        in >> m;
    } catch (const json::exception& e) {
        throw ParseError(std::string("manifest.json: ") + e.what());
    }

    std::string out;
    out += "target:  " + m["config"]["target"]["id"].get<std::string>() + "\n";
    out += "mode:    " + m["config"]["mode"].get<std::string>() + "\n";
    out += "seed:    " + std::to_string(m["config"]["seed"].get<std::uint64_t>()) + "\n";
    out += "winner:  " + m["winner"].get<std::string>() + "\n";
    out += "selected features:\n";
    for (const json& sf : m["selection"]["selected"])
        out += "  " + sf["indicator"].get<std::string>() + " lag " +
               std::to_string(sf["lag"].get<int>()) + " (importance " +
               format_double(sf["importance"].get<double>()) + ")\n";
    out += "indicator forecasters:\n";
    for (auto it = m["indicator_forecasters"].begin(); it != m["indicator_forecasters"].end();
         ++it)
        out += "  " + it.key() + ": " + it.value()["model"].get<std::string>() + "\n";
    if (m["prediction"].contains("mse"))
        out += "prediction mse: " + format_double(m["prediction"]["mse"].get<double>()) + "\n";
    return out;
}

} // namespace lossforecast
