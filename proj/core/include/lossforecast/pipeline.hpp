#pragma once

#include "lossforecast/config.hpp"
#include "lossforecast/features.hpp"
#include "lossforecast/model_selection.hpp"
#include "lossforecast/msic.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lossforecast {

struct IndicatorForecastInfo {
    std::string indicator_id;
    ForecastModel model = ForecastModel::naive;
    bool fallback = false; // MSIC training failed, naive substituted
};

struct PipelineResult {
    SelectionResult selection;
    std::vector<CorrelationRecord> correlations;
    EvaluationResult evaluation;
    LearnerKind winner = LearnerKind::lasso;
    std::vector<IndicatorForecastInfo> indicator_models;

    std::vector<Quarter> prediction_quarters; // origin+1 .. origin+horizon
    std::vector<double> predicted_yoy;
    std::vector<std::optional<double>> actual_yoy;
    std::vector<double> predicted_level;
    std::optional<double> prediction_mse; // vs actual YoY where available

    std::filesystem::path out_dir;
};

/// Load the configured sources and resample each to quarterly.
std::vector<QuarterlySeries> load_indicators(const RunConfig& config);
QuarterlySeries load_target(const RunConfig& config);

/// Steps 1-4 end to end. Writes predictions.csv, metrics.json, selection.csv,
/// correlations.csv, benchmark.csv, manifest.json and plotdata/ under the
/// configured output directory.
PipelineResult run_pipeline(const RunConfig& config);

/// The benchmark subcommand: MSIC vs the traditional baseline per indicator.
/// An empty filter means every configured indicator.
std::vector<BenchmarkRow> run_benchmark(const RunConfig& config,
                                        const std::vector<std::string>& indicator_filter = {});

void write_benchmark_csv(const std::filesystem::path& path,
                         const std::vector<BenchmarkRow>& rows);

/// The correlate subcommand: one record per (indicator, lag).
std::vector<CorrelationRecord> run_correlate(const RunConfig& config);

void write_correlations_csv(const std::filesystem::path& path,
                            const std::vector<CorrelationRecord>& records);

/// Human-readable summary of a previous run's manifest.json.
std::string inspect_manifest(const std::filesystem::path& out_dir);

} // namespace lossforecast
