#include "lossforecast/config.hpp"
#include "lossforecast/csv.hpp"
#include "lossforecast/errors.hpp"
#include "lossforecast/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace lossforecast;

struct CommonOpts {
    std::string config_path;
    std::string mode;
    std::string learner = "auto";
    std::string msic;
    int horizon = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out_dir;
};

RunConfig configure(const CommonOpts& opts) {
    if (!std::filesystem::exists(opts.config_path)) {
        // surfaced as a usage error, the caller prints help
        throw CLI::FileError::Missing(opts.config_path);
    }
    RunConfig cfg = load_config(opts.config_path);
    if (!opts.mode.empty())
        cfg.mode = feature_mode_from_name(opts.mode);
    if (opts.learner != "auto")
        cfg.learners = {learner_from_name(opts.learner)};
    if (!opts.msic.empty())
        cfg.classifiers = {classifier_kind_from_name(opts.msic)};
    if (opts.horizon > 0)
        cfg.horizon = opts.horizon;
    if (opts.seed_given) {
        cfg.seed = opts.seed;
        cfg.seed_set = true;
    }
    if (!opts.out_dir.empty())
        cfg.out_dir = opts.out_dir;
    validate_config(cfg);
    return cfg;
}

int cmd_run(const CommonOpts& opts) {
    RunConfig cfg = configure(opts);
    PipelineResult res = run_pipeline(cfg);

    std::cout << "mode: " << feature_mode_name(res.selection.mode) << "\n";
    std::cout << "selected " << res.selection.selected.size() << " feature(s):\n";
    for (const SelectedFeature& sf : res.selection.selected)
        std::cout << "  " << sf.indicator_id << " lag " << sf.lag << " importance "
                  << format_double(sf.importance) << "\n";
    const LearnerReport& best = res.evaluation.reports[res.evaluation.best_index];
    std::cout << "winner: " << learner_name(res.winner) << " (test mse "
              << format_double(best.test.mse) << ")\n";
    for (std::size_t i = 0; i < res.prediction_quarters.size(); ++i)
        std::cout << res.prediction_quarters[i].str() << "  yoy "
                  << format_double(res.predicted_yoy[i]) << "  level "
                  << format_double(res.predicted_level[i]) << "\n";
    if (res.prediction_mse)
        std::cout << "prediction mse: " << format_double(*res.prediction_mse) << "\n";
    std::cout << "outputs in " << res.out_dir.string() << "\n";
    return 0;
}

int cmd_benchmark(const CommonOpts& opts, const std::string& p1_csv,
                  const std::vector<std::string>& indicators) {
    RunConfig cfg = configure(opts);
    if (!p1_csv.empty()) {
        cfg.p1_grid.clear();
        std::stringstream ss(p1_csv);
        std::string tok;
        while (std::getline(ss, tok, ','))
            cfg.p1_grid.push_back(std::stoi(tok));
    }
    validate_config(cfg);
    std::vector<BenchmarkRow> rows = run_benchmark(cfg, indicators);
    std::filesystem::create_directories(cfg.out_dir);
    write_benchmark_csv(cfg.out_dir / "benchmark.csv", rows);
    std::cout << "wrote " << (cfg.out_dir / "benchmark.csv").string() << " ("
              << rows.size() * cfg.classifiers.size() << " rows)\n";
    return 0;
}

int cmd_correlate(const CommonOpts& opts) {
    RunConfig cfg = configure(opts);
    std::vector<CorrelationRecord> records = run_correlate(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    write_correlations_csv(cfg.out_dir / "correlations.csv", records);
    std::cout << "wrote " << (cfg.out_dir / "correlations.csv").string() << " ("
              << records.size() << " rows)\n";
    return 0;
}

int cmd_inspect(const std::string& out_dir) {
    std::cout << inspect_manifest(out_dir);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"macroeconomic loss-rate forecasting pipeline"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string p1_csv;
    std::vector<std::string> indicators;
    std::string inspect_dir = "out";

    auto add_common = [&](CLI::App* sub, bool with_run_flags) {
        sub->add_option("--config", opts.config_path, "JSON config file")->required();
        sub->add_option("--out", opts.out_dir, "output directory override");
        sub->add_option("--seed", opts.seed, "seed override")
            ->each([&](const std::string&) { opts.seed_given = true; });
        if (with_run_flags) {
            sub->add_option("--mode", opts.mode, "optimal_lags or all_lags")
                ->check(CLI::IsMember({"optimal_lags", "all_lags"}));
            sub->add_option("--learner", opts.learner, "auto|lasso|ridge|gbm|rf")
                ->check(CLI::IsMember({"auto", "lasso", "ridge", "gbm", "rf"}));
            sub->add_option("--msic", opts.msic, "lr|svm|dt")
                ->check(CLI::IsMember({"lr", "svm", "dt"}));
            sub->add_option("--horizon", opts.horizon, "forecast horizon in quarters");
        }
    };

    CLI::App* run = app.add_subcommand("run", "execute the full pipeline");
    add_common(run, true);

    CLI::App* bench = app.add_subcommand("benchmark", "MSIC vs traditional per indicator");
    add_common(bench, true);
    bench->add_option("--p1", p1_csv, "comma-separated train/validation split indices");
    bench->add_option("--indicator", indicators, "restrict to these indicator ids");

    CLI::App* corr = app.add_subcommand("correlate", "per-(indicator, lag) correlation report");
    add_common(corr, false);

    CLI::App* inspect = app.add_subcommand("inspect", "summarize a previous run's manifest");
    inspect->add_option("--out", inspect_dir, "output directory of the run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (app.got_subcommand(run))
            return cmd_run(opts);
        if (app.got_subcommand(bench))
            return cmd_benchmark(opts, p1_csv, indicators);
        if (app.got_subcommand(corr))
            return cmd_correlate(opts);
        return cmd_inspect(inspect_dir);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n" << app.help() << "\n";
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
