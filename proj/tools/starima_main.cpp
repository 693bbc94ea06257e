#include <CLI11.hpp>

#include "starima/config.hpp"
#include "starima/errors.hpp"
#include "starima/pipeline.hpp"

#include <functional>
#include <iostream>
#include <string>
#include <vector>

namespace {

void print_eval_summary(const std::vector<starima::MethodReport>& reports) {
    for (const starima::MethodReport& mr : reports) {
        double weighted = 0.0;
        std::size_t points = 0;
        for (const starima::EvalReport& r : mr.rows) {
            const std::size_t used = r.n_points - r.n_skipped_zero_actuals;
            weighted += r.mape * static_cast<double>(used);
            points += used;
        }
        std::cout << mr.method << ": ";
        if (points == 0) {
            std::cout << "no evaluable points\n";
        } else {
            std::cout << "mape " << 100.0 * weighted / static_cast<double>(points) << "% over "
                      << points << " points\n";
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"regime-aware space-time traffic forecasting pipeline"};
    app.require_subcommand(1);

    std::string config_path, out_dir, data_csv, network_csv;
    long seed = -1;
    std::vector<std::string> overrides;
    app.add_option("-c,--config", config_path, "key=value config file");
    app.add_option("--out-dir", out_dir, "artifact directory");
    app.add_option("--data", data_csv, "input data CSV");
    app.add_option("--network", network_csv, "station network CSV");
    app.add_option("--seed", seed, "seed for every random draw");
    app.add_option("--set", overrides, "override a config key (key=value), repeatable");

    const std::vector<std::pair<std::string, std::function<void(const starima::PipelineConfig&)>>>
        stages{
            {"generate", starima::stage_generate},
            {"smooth", starima::stage_smooth},
            {"ccf", starima::stage_ccf},
            {"cluster", starima::stage_cluster},
            {"partition", starima::stage_partition},
            {"lags", starima::stage_lags},
            {"fit", starima::stage_fit},
            {"forecast", starima::stage_forecast},
            {"evaluate",
             [](const starima::PipelineConfig& cfg) { print_eval_summary(starima::stage_evaluate(cfg)); }},
            {"pipeline", starima::run_pipeline},
        };
    for (const auto& [name, fn] : stages) {
        (void)fn;
        app.add_subcommand(name)->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        starima::PipelineConfig cfg = config_path.empty() ? starima::default_config()
                                                          : starima::load_config(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!data_csv.empty()) cfg.data_csv = data_csv;
        if (!network_csv.empty()) cfg.network_csv = network_csv;
        if (seed >= 0) {
            starima::apply_config_entry(cfg, "seed", std::to_string(seed));
        }
        for (const std::string& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw starima::DataError("--set expects key=value, got '" + kv + "'");
            starima::apply_config_entry(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }

        for (const auto& [name, fn] : stages) {
            if (app.got_subcommand(name)) {
                fn(cfg);
                return 0;
            }
        }
        return 1;
    } catch (const starima::EstimationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const starima::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
