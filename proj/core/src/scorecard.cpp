#include "deepscore/scorecard.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

namespace deepscore {

using ordered_json = nlohmann::ordered_json;

std::string_view metric_name(MetricId id) {
    switch (id) {
        case MetricId::Mdfr: return "mdfr";
        case MetricId::Cdfr: return "cdfr";
        case MetricId::Cer: return "cer";
        case MetricId::Aer: return "aer";
        case MetricId::Mnr: return "mnr";
        default: return "mwhr";
    }
}

std::string_view metric_display_name(MetricId id) {
    switch (id) {
        case MetricId::Mdfr: return "MDFR";
        case MetricId::Cdfr: return "CDFR";
        case MetricId::Cer: return "CER";
        case MetricId::Aer: return "AER";
        case MetricId::Mnr: return "MNR";
        default: return "MWHR";
    }
}

std::string_view metric_category(MetricId id) {
    switch (id) {
        case MetricId::Mdfr:
        case MetricId::Cdfr: return "Stat Rates";
        case MetricId::Cer:
        case MetricId::Aer: return "Recall/Precision";
        case MetricId::Mnr: return "User Acceptance";
        default: return "Transcription QC";
    }
}

const std::optional<MetricValue>& ComponentMetrics::get(MetricId id) const {
    switch (id) {
        case MetricId::Mdfr: return mdfr;
        case MetricId::Cdfr: return cdfr;
        case MetricId::Cer: return cer;
        case MetricId::Aer: return aer;
        case MetricId::Mnr: return mnr;
        default: return mwhr;
    }
}

std::optional<MetricValue>& ComponentMetrics::get(MetricId id) {
    return const_cast<std::optional<MetricValue>&>(
        static_cast<const ComponentMetrics*>(this)->get(id));
}

bool ComponentMetrics::complete() const noexcept {
    return mdfr && cdfr && cer && aer && mnr && mwhr;
}

DeepScore compute_deepscore(const ComponentMetrics& components) {
    std::array<double, 6> values{};
    for (std::size_t i = 0; i < kAllMetrics.size(); ++i) {
        const auto& component = components.get(kAllMetrics[i]);
        if (!component) {
            throw MissingComponentError("component " +
                                        std::string(metric_name(kAllMetrics[i])) +
                                        " is undefined");
        }
        if (!(component->value >= 0.0) || component->value > 1.0) {
            throw OutOfRangeError("component " + std::string(metric_name(kAllMetrics[i])) +
                                  " outside [0, 1]");
        }
        values[i] = component->value;
    }
    // Summing in sorted order makes the mean invariant under component
    // permutations; the clamp keeps the min/max bound exact under rounding.
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double value : values) sum += value;
    const double mean = std::clamp(sum / 6.0, values.front(), values.back());
    return DeepScore{mean, components};
}

double round_pct_half_up(double pct) {
    return static_cast<double>(std::llround(pct * 10.0)) / 10.0;
}

std::string display_pct(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f%%", round_pct_half_up(fraction * 100.0));
    return buf;
}

ReportFormat parse_report_format(std::string_view name) {
    if (name == "table") return ReportFormat::Table;
    if (name == "json") return ReportFormat::Json;
    if (name == "html") return ReportFormat::Html;
    throw UnsupportedFormatError("unsupported format '" + std::string(name) +
                                 "' (expected table, json, or html)");
}

namespace {

std::string render_table(const ComponentMetrics& components,
                         std::optional<double> deep_score) {
    std::size_t source_width = std::string_view("Source").size();
    for (MetricId id : kAllMetrics) {
        if (components.get(id)) source_width = std::max(source_width, components.get(id)->source.size());
    }

    std::ostringstream out;
    out << std::left << std::setw(11) << "Metric" << std::setw(8) << "Value"
        << std::setw(18) << "Category" << std::setw(static_cast<int>(source_width) + 2)
        << "Source" << "N" << '\n';
    out << std::string(11 + 8 + 18 + source_width + 2 + 1, '-') << '\n';
    for (MetricId id : kAllMetrics) {
        const auto& component = components.get(id);
        out << std::left << std::setw(11) << metric_display_name(id);
        if (component) {
            out << std::setw(8) << display_pct(component->value)
                << std::setw(18) << metric_category(id)
                << std::setw(static_cast<int>(source_width) + 2) << component->source
                << component->n;
        } else {
            out << std::setw(8) << "-" << std::setw(18) << metric_category(id)
                << std::setw(static_cast<int>(source_width) + 2) << "-" << "-";
        }
        out << '\n';
    }
    if (deep_score) {
        out << std::left << std::setw(11) << "DeepScore" << std::setw(8)
            << display_pct(*deep_score) << std::setw(18) << "Composite"
            << std::setw(static_cast<int>(source_width) + 2) << "Computed" << "-" << '\n';
    }
    return out.str();
}

std::string render_json(const ComponentMetrics& components,
                        std::optional<double> deep_score) {
    ordered_json doc;
    doc["schema_version"] = 1;
    if (deep_score) {
        doc["deep_score"] = {{"value", *deep_score}, {"display", display_pct(*deep_score)}};
    }
    ordered_json rows = ordered_json::array();
    for (MetricId id : kAllMetrics) {
        const auto& component = components.get(id);
        ordered_json row;
        row["name"] = std::string(metric_name(id));
        row["value"] = component ? ordered_json(component->value) : ordered_json(nullptr);
        row["display"] = component ? ordered_json(display_pct(component->value))
                                   : ordered_json(nullptr);
        row["category"] = std::string(metric_category(id));
        row["source"] = component ? ordered_json(component->source) : ordered_json(nullptr);
        row["n"] = component ? ordered_json(component->n) : ordered_json(nullptr);
        rows.push_back(std::move(row));
    }
    doc["components"] = std::move(rows);
    return doc.dump(2) + "\n";
}

void append_html_escaped(std::string& out, std::string_view text) {
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
}

std::string render_html(const ComponentMetrics& components,
                        std::optional<double> deep_score) {
    std::string out;
    out += "<table class=\"scorecard\">\n";
    out += "  <thead><tr><th>Metric</th><th>Value</th><th>Category</th>"
           "<th>Source</th><th>N</th></tr></thead>\n";
    out += "  <tbody>\n";
    auto row = [&out](std::string_view name, std::string_view value, std::string_view category,
                      std::string_view source, std::string_view n) {
        out += "    <tr><td>";
        append_html_escaped(out, name);
        out += "</td><td>";
        append_html_escaped(out, value);
        out += "</td><td>";
        append_html_escaped(out, category);
        out += "</td><td>";
        append_html_escaped(out, source);
        out += "</td><td>";
        append_html_escaped(out, n);
        out += "</td></tr>\n";
    };
    for (MetricId id : kAllMetrics) {
        const auto& component = components.get(id);
        if (component) {
            row(metric_display_name(id), display_pct(component->value), metric_category(id),
                component->source, std::to_string(component->n));
        } else {
            row(metric_display_name(id), "-", metric_category(id), "-", "-");
        }
    }
    if (deep_score) {
        row("DeepScore", display_pct(*deep_score), "Composite", "Computed", "-");
    }
    out += "  </tbody>\n</table>\n";
    return out;
}

std::string render(const ComponentMetrics& components, std::optional<double> deep_score,
                   ReportFormat format) {
    for (MetricId id : kAllMetrics) {
        const auto& component = components.get(id);
        if (component && (!(component->value >= 0.0) || component->value > 1.0)) {
            throw OutOfRangeError("component " + std::string(metric_name(id)) +
                                  " outside [0, 1]");
        }
    }
    switch (format) {
        case ReportFormat::Table: return render_table(components, deep_score);
        case ReportFormat::Json: return render_json(components, deep_score);
        default: return render_html(components, deep_score);
    }
}

}  // namespace

std::string render_scorecard(const DeepScore& score, ReportFormat format) {
    return render(score.components, score.value, format);
}

std::string render_scorecard(const ComponentMetrics& components, ReportFormat format) {
    std::optional<double> deep_score;
    if (components.complete()) deep_score = compute_deepscore(components).value;
    return render(components, deep_score, format);
}

ParsedScorecard parse_scorecard_json(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw ParseError({{"<scorecard>", 0, e.what()}});
    }

    ParsedScorecard parsed;
    if (doc.contains("deep_score") && !doc["deep_score"].is_null()) {
        parsed.deep_score = doc["deep_score"].at("value").get<double>();
    }
    if (!doc.contains("components") || !doc["components"].is_array()) {
        throw ParseError({{"<scorecard>", 0, "missing components array"}});
    }
    for (const auto& row : doc["components"]) {
        std::string name = row.at("name").get<std::string>();
        if (row.at("value").is_null()) continue;
        MetricValue value;
        value.value = row.at("value").get<double>();
        value.source = row.at("source").is_null() ? "" : row.at("source").get<std::string>();
        value.n = row.at("n").is_null() ? 0 : row.at("n").get<std::uint64_t>();
        for (MetricId id : kAllMetrics) {
            if (metric_name(id) == name) parsed.components.get(id) = std::move(value);
        }
    }
    return parsed;
}

}  // namespace deepscore
