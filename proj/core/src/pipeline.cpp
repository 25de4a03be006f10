#include "deepscore/pipeline.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>

namespace deepscore {

namespace {

std::string section_source(const std::string& label, const std::string& file) {
    if (label.empty()) return file;
    if (file.empty()) return label;
    return label + " (" + file + ")";
}

}  // namespace

PipelineResult compute_scorecard(const DatasetBundle& bundle, unsigned jobs) {
    PipelineResult result;

    if (bundle.test_set) {
        const std::string source =
            section_source(bundle.meta.label, bundle.test_set->meta.source_label);
        result.stat_rates = compute_stat_rates(*bundle.test_set);
        result.components.mdfr =
            MetricValue{result.stat_rates->mdfr, source, result.stat_rates->n_entities};
        result.components.cdfr =
            MetricValue{result.stat_rates->cdfr, source, result.stat_rates->n_entities};
        try {
            result.funnel = compute_funnel(*bundle.test_set);
            result.components.cer =
                MetricValue{result.funnel->cer, source, result.funnel->n_relevant};
            result.components.aer =
                MetricValue{result.funnel->aer, source, result.funnel->n_captured};
        } catch (const NoCapturedEntitiesError& e) {
            result.warnings.push_back(std::string(e.what()) + "; CER/AER omitted");
        }
    } else {
        result.warnings.push_back("no entities section: MDFR/CDFR/CER/AER omitted");
    }

    if (bundle.edit_pairs && !bundle.edit_pairs->empty()) {
        const std::string source = section_source(bundle.meta.label, bundle.edits_source);
        result.mnr = compute_mnr(*bundle.edit_pairs, jobs);
        result.components.mnr = MetricValue{result.mnr->mnr, source, result.mnr->n_notes};
    } else {
        result.warnings.push_back("no edit pairs section: MNR omitted");
    }

    if (bundle.qc_records && !bundle.qc_records->empty()) {
        const std::string source = section_source(bundle.meta.label, bundle.qc_source);
        try {
            result.mwhr = compute_mwhr(*bundle.qc_records, jobs);
            result.components.mwhr =
                MetricValue{result.mwhr->mwhr, source, result.mwhr->audible_terms};
        } catch (const NoAudibleTermsError& e) {
            result.warnings.push_back(std::string(e.what()) + "; MWHR omitted");
        }
    } else {
        result.warnings.push_back("no QC section: MWHR omitted");
    }

    if (result.components.complete()) {
        result.deep_score = compute_deepscore(result.components).value;
    } else {
        result.warnings.push_back("scorecard incomplete: DeepScore omitted");
    }
    result.scorecard_json = render_scorecard(result.components, ReportFormat::Json);
    return result;
}

int run_pipeline(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        if (config.jobs < 1) throw Error("parallelism degree must be >= 1");
        DatasetBundle bundle = load_bundle(config.inputs, config.meta);
        PipelineResult result = compute_scorecard(bundle, config.jobs);

        if (config.format == ReportFormat::Json) {
            out << result.scorecard_json;
        } else {
            out << render_scorecard(result.components, config.format);
        }

        std::optional<std::filesystem::path> artifact = config.out_path;
        if (!artifact) {
            if (const char* dir = std::getenv(kOutputDirEnvVar); dir != nullptr && *dir != '\0') {
                artifact = std::filesystem::path(dir) / kScorecardFileName;
            }
        }
        if (artifact) {
            if (artifact->has_parent_path()) {
                std::filesystem::create_directories(artifact->parent_path());
            }
            std::ofstream file(*artifact, std::ios::binary | std::ios::trunc);
            if (!file) throw IoError("cannot open '" + artifact->string() + "' for writing");
            file << result.scorecard_json;
            if (!file) throw IoError("failed writing '" + artifact->string() + "'");
            out << "scorecard written to " << artifact->string() << "\n";
        } else if (config.format != ReportFormat::Json) {
            out << result.scorecard_json;
        }

        for (const std::string& warning : result.warnings) {
            err << "warning: " << warning << "\n";
        }
        if (result.deep_score) {
            out << "DeepScore " << display_pct(*result.deep_score) << "\n";
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace deepscore
