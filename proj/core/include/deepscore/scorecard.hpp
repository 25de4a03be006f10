#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "deepscore/errors.hpp"

namespace deepscore {

enum class MetricId { Mdfr, Cdfr, Cer, Aer, Mnr, Mwhr };

inline constexpr std::array<MetricId, 6> kAllMetrics = {
    MetricId::Mdfr, MetricId::Cdfr, MetricId::Cer,
    MetricId::Aer,  MetricId::Mnr,  MetricId::Mwhr};

/// Machine name: "mdfr", "cdfr", ...
std::string_view metric_name(MetricId id);
/// Row label: "MDFR", "CDFR", ...
std::string_view metric_display_name(MetricId id);
/// Scorecard category column: "Stat Rates", "Recall/Precision", ...
std::string_view metric_category(MetricId id);

/// One component metric with its provenance. value is the unrounded fraction
/// in [0, 1]; the percent form exists only in display strings, so no x100
/// ambiguity crosses a module boundary.
struct MetricValue {
    double value = 0.0;
    std::string source;    // verbatim provenance label
    std::uint64_t n = 0;   // sample size behind the estimate

    bool operator==(const MetricValue& other) const = default;
};

/// The six scorecard components. A disengaged optional marks a metric whose
/// input section was absent or whose rate was undefined.
struct ComponentMetrics {
    std::optional<MetricValue> mdfr;
    std::optional<MetricValue> cdfr;
    std::optional<MetricValue> cer;
    std::optional<MetricValue> aer;
    std::optional<MetricValue> mnr;
    std::optional<MetricValue> mwhr;

    const std::optional<MetricValue>& get(MetricId id) const;
    std::optional<MetricValue>& get(MetricId id);
    bool complete() const noexcept;

    bool operator==(const ComponentMetrics& other) const = default;
};

/// The composite index: unweighted mean of the six components, kept at full
/// precision. Bounded by the smallest and largest component.
struct DeepScore {
    double value = 0.0;  // fraction in [0, 1]
    ComponentMetrics components;
};

/// Throws MissingComponentError when any component is undefined and
/// OutOfRangeError when a component leaves [0, 1].
DeepScore compute_deepscore(const ComponentMetrics& components);

/// Half-up rounding to one decimal in percent space (95.4333 -> 95.4).
double round_pct_half_up(double pct);
/// Display form of a fraction: "95.4%". Rounding never touches stored values.
std::string display_pct(double fraction);

enum class ReportFormat { Table, Json, Html };

/// Accepts "table", "json", "html"; throws UnsupportedFormatError otherwise.
ReportFormat parse_report_format(std::string_view name);

/// Renders the six component rows plus the DeepScore row. The JSON document
/// carries unrounded fractions alongside display strings; table and HTML show
/// display strings only.
std::string render_scorecard(const DeepScore& score, ReportFormat format);

/// Partial render: absent components appear as null rows and the composite
/// row is omitted unless all six components exist.
std::string render_scorecard(const ComponentMetrics& components, ReportFormat format);

/// Parsed form of the JSON scorecard document, for round-trip checks and
/// downstream consumers.
struct ParsedScorecard {
    std::optional<double> deep_score;
    ComponentMetrics components;
};

ParsedScorecard parse_scorecard_json(const std::string& text);

}  // namespace deepscore
