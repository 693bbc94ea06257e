#pragma once

#include "starima/config.hpp"
#include "starima/metrics.hpp"
#include "starima/partition.hpp"
#include "starima/series.hpp"
#include "starima/starima.hpp"

#include <string>
#include <vector>

namespace starima {

// Stage functions shared by the CLI and the test suites. Each stage reads
// its predecessors' artifact files from the configured output directory and
// writes its own; a missing input is an error naming the stage to run first.
void stage_generate(const PipelineConfig& cfg);
void stage_smooth(const PipelineConfig& cfg);
void stage_ccf(const PipelineConfig& cfg);
void stage_cluster(const PipelineConfig& cfg);
void stage_partition(const PipelineConfig& cfg);
void stage_lags(const PipelineConfig& cfg);
void stage_fit(const PipelineConfig& cfg);
void stage_forecast(const PipelineConfig& cfg);

struct MethodReport {
    std::string method;
    std::vector<EvalReport> rows;
};

// Holdout comparison of the three lag modes plus a per-station ARIMA
// baseline; writes one report CSV per method and returns the rows.
std::vector<MethodReport> stage_evaluate(const PipelineConfig& cfg);

// generate .. evaluate in order.
void run_pipeline(const PipelineConfig& cfg);

// Artifact formats (also used by tests).
void save_partition_csv(const std::string& path, const DayPartition& partition);
DayPartition load_partition_csv(const std::string& path);

struct LagArtifacts {
    std::vector<RegimeLags> speed_lag_sets; // one per cluster in the partition
    RegimeLags ccf_lag_set;                 // whole-day CCF lags
};

void save_lag_csvs(const PipelineConfig& cfg, const LagArtifacts& lags,
                   const StationNetwork& network);
LagArtifacts load_lag_csvs(const PipelineConfig& cfg, const StationNetwork& network,
                           const DayPartition& partition);

void save_reports_csv(const std::string& path, const std::vector<EvalReport>& rows);

// All-ones lag matrices over the same adjacency, for the constant-lag mode.
RegimeLags constant_lag_set(const StationNetwork& network, int lambda);

} // namespace starima
