#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "deepscore/entity_metrics.hpp"
#include "deepscore/ingest.hpp"
#include "deepscore/scorecard.hpp"

namespace deepscore {

/// Environment variable naming the default output directory for artifacts.
inline constexpr const char* kOutputDirEnvVar = "DEEPSCORE_OUT_DIR";

struct RunConfig {
    BundlePaths inputs;
    std::optional<std::filesystem::path> out_path;  // scorecard artifact
    ReportFormat format = ReportFormat::Table;
    unsigned jobs = 1;
    BundleMeta meta;
};

/// Everything computed from one bundle. Detail results are present for the
/// sections the bundle carried; scorecard_json is the deterministic artifact.
struct PipelineResult {
    ComponentMetrics components;
    std::optional<double> deep_score;  // present iff all six components exist
    std::optional<StatRatesResult> stat_rates;
    std::optional<FunnelResult> funnel;
    std::optional<MnrResult> mnr;
    std::optional<MwhrResult> mwhr;
    std::string scorecard_json;
    std::vector<std::string> warnings;
};

/// Computes every metric whose input section is present. Identical bundles
/// produce byte-identical scorecard_json for every jobs value.
PipelineResult compute_scorecard(const DatasetBundle& bundle, unsigned jobs = 1);

/// Loads the configured bundle, computes the scorecard, prints the rendered
/// report and a summary to out, and writes the JSON artifact to the resolved
/// output path (config.out_path, else $DEEPSCORE_OUT_DIR/scorecard.json, else
/// the JSON goes to out). Returns 0 on success, 1 on validation/parse/input
/// failure; errors go to err.
int run_pipeline(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace deepscore
