#pragma once

#include "lossforecast/model_selection.hpp"
#include "lossforecast/msic.hpp"
#include "lossforecast/series.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lossforecast {

struct IndicatorSource {
    std::string id;
    std::filesystem::path path;
    ResampleMethod resample = ResampleMethod::mean;
};

struct RunConfig {
    std::vector<IndicatorSource> indicators;
    IndicatorSource target;
    FeatureMode mode = FeatureMode::optimal_lags;
    std::vector<LearnerKind> learners{LearnerKind::lasso, LearnerKind::ridge, LearnerKind::gbm,
                                      LearnerKind::rf};
    std::vector<ClassifierKind> classifiers{ClassifierKind::logistic_regression};
    int chunk_span = 16;
    int horizon = 4;
    Quarter split{2011, 1};
    Quarter origin{2018, 1};
    std::vector<int> p1_grid{24, 27, 30, 33};
    std::uint64_t seed = 0;
    bool seed_set = false; // a seed is mandatory; no wall-clock entropy
    std::filesystem::path out_dir = "out";
    std::filesystem::path config_path; // for manifest echo
};

const char* resample_method_name(ResampleMethod m);
ResampleMethod resample_method_from_name(const std::string& name);
FeatureMode feature_mode_from_name(const std::string& name);

/// Parse a JSON config file. Relative source and output paths are resolved
/// against the config file's directory.
RunConfig load_config(const std::filesystem::path& path);

/// Throws on structural problems (no indicators, missing seed, horizon < 1).
void validate_config(const RunConfig& config);

} // namespace lossforecast
