// deepscore: note-quality metrics over JSONL annotation bundles.
//
// Subcommands: statrates, funnel, edits, mwhr, score, report, synth.
// Exit codes: 0 success, 1 validation/parse failure, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "deepscore/edit_metrics.hpp"
#include "deepscore/entity_metrics.hpp"
#include "deepscore/ingest.hpp"
#include "deepscore/pipeline.hpp"
#include "deepscore/scorecard.hpp"
#include "deepscore/synth.hpp"
#include "deepscore/transcription_qc.hpp"

namespace {

using deepscore::BundleMeta;
using deepscore::BundlePaths;
using ordered_json = nlohmann::ordered_json;

struct InputOptions {
    std::string bundle_dir;
    std::string entities;
    std::string snippets;
    std::string edits;
    std::string qc;
    std::string out;
    std::string format = "table";
    std::string label;
    std::string date;
    unsigned jobs = 1;
};

void add_input_flags(CLI::App* cmd, InputOptions& io) {
    cmd->add_option("--bundle-dir", io.bundle_dir,
                    "Directory holding entities/snippets/edits/qc .jsonl files");
    cmd->add_option("--entities", io.entities, "entity_audit records (JSONL)");
    cmd->add_option("--snippets", io.snippets, "snippet records (JSONL)");
    cmd->add_option("--edits", io.edits, "edit_pair records (JSONL)");
    cmd->add_option("--qc", io.qc, "qc_record records (JSONL)");
    cmd->add_option("--out", io.out, "Write the result document to this path");
    cmd->add_option("--format", io.format, "Output format: table, json, or html")
        ->check(CLI::IsMember({"table", "json", "html"}));
    cmd->add_option("--jobs", io.jobs, "Worker threads for per-record computation")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--label", io.label, "Run label recorded in outputs");
    cmd->add_option("--date", io.date, "Date range recorded in outputs");
}

BundlePaths resolve_paths(const InputOptions& io) {
    BundlePaths paths;
    if (!io.bundle_dir.empty()) paths = BundlePaths::from_directory(io.bundle_dir);
    if (!io.entities.empty()) paths.entities = io.entities;
    if (!io.snippets.empty()) paths.snippets = io.snippets;
    if (!io.edits.empty()) paths.edits = io.edits;
    if (!io.qc.empty()) paths.qc = io.qc;
    return paths;
}

BundleMeta resolve_meta(const InputOptions& io) { return BundleMeta{io.label, io.date}; }

void emit_document(const InputOptions& io, const std::string& document) {
    std::cout << document;
    if (!io.out.empty()) {
        std::filesystem::path path(io.out);
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
        std::ofstream file(path, std::ios::binary | std::ios::trunc);
        if (!file) throw deepscore::IoError("cannot open '" + io.out + "' for writing");
        file << document;
    }
}

int run_statrates(const InputOptions& io) {
    auto bundle = deepscore::load_bundle(resolve_paths(io), resolve_meta(io));
    if (!bundle.test_set) throw deepscore::Error("statrates requires an entities section");
    auto rates = deepscore::compute_stat_rates(*bundle.test_set);

    if (io.format == "json") {
        ordered_json doc;
        doc["n_entities"] = rates.n_entities;
        doc["n_major_free"] = rates.n_major_free;
        doc["n_critical_free"] = rates.n_critical_free;
        doc["mdfr"] = rates.mdfr;
        doc["cdfr"] = rates.cdfr;
        emit_document(io, doc.dump(2) + "\n");
        return 0;
    }
    std::ostringstream out;
    out << "MDFR " << deepscore::display_pct(rates.mdfr) << " (" << rates.n_major_free << "/"
        << rates.n_entities << " entities free of major defects)\n";
    out << "CDFR " << deepscore::display_pct(rates.cdfr) << " (" << rates.n_critical_free << "/"
        << rates.n_entities << " entities free of critical defects)\n";
    emit_document(io, out.str());
    return 0;
}

int run_funnel(const InputOptions& io) {
    auto bundle = deepscore::load_bundle(resolve_paths(io), resolve_meta(io));
    if (!bundle.test_set) throw deepscore::Error("funnel requires an entities section");
    auto funnel = deepscore::compute_funnel(*bundle.test_set);

    if (io.format == "json") {
        ordered_json doc;
        doc["n_relevant"] = funnel.n_relevant;
        doc["n_missing"] = funnel.n_missing;
        doc["n_captured"] = funnel.n_captured;
        doc["n_inaccurate"] = funnel.n_inaccurate;
        doc["mer"] = funnel.mer;
        doc["cer"] = funnel.cer;
        doc["ier"] = funnel.ier;
        doc["aer"] = funnel.aer;
        emit_document(io, doc.dump(2) + "\n");
        return 0;
    }
    std::ostringstream out;
    out << "MER " << deepscore::display_pct(funnel.mer) << " (" << funnel.n_missing << "/"
        << funnel.n_relevant << " relevant entities missing)\n";
    out << "CER " << deepscore::display_pct(funnel.cer) << "\n";
    out << "IER " << deepscore::display_pct(funnel.ier) << " (" << funnel.n_inaccurate << "/"
        << funnel.n_captured << " captured entities inaccurate)\n";
    out << "AER " << deepscore::display_pct(funnel.aer) << "\n";
    emit_document(io, out.str());
    return 0;
}

int run_edits(const InputOptions& io) {
    auto bundle = deepscore::load_bundle(resolve_paths(io), resolve_meta(io));
    if (!bundle.edit_pairs || bundle.edit_pairs->empty()) {
        throw deepscore::Error("edits requires a non-empty edit_pair section");
    }
    auto mnr = deepscore::compute_mnr(*bundle.edit_pairs, io.jobs);

    // Pooled add/delete/substitute rates across the batch; reported for
    // context even though only substitutions feed MNR.
    std::size_t total_initial = 0;
    std::size_t total_final = 0;
    std::size_t added = 0;
    std::size_t deleted = 0;
    std::size_t substituted = 0;
    for (const auto& pair : *bundle.edit_pairs) {
        auto b = deepscore::edit_breakdown(pair);
        total_initial += b.n_initial;
        total_final += b.n_final;
        added += b.added;
        deleted += b.deleted;
        substituted += b.substituted;
    }
    const double added_rate =
        total_final > 0 ? static_cast<double>(added) / static_cast<double>(total_final) : 0.0;
    const double deleted_rate =
        total_initial > 0 ? static_cast<double>(deleted) / static_cast<double>(total_initial)
                          : 0.0;
    const double substituted_rate =
        total_initial > 0 ? static_cast<double>(substituted) / static_cast<double>(total_initial)
                          : 0.0;

    if (io.format == "json") {
        ordered_json doc;
        doc["n_notes"] = mnr.n_notes;
        doc["n_minimally_edited"] = mnr.n_minimally_edited;
        doc["mnr"] = mnr.mnr;
        doc["words_added_rate"] = added_rate;
        doc["words_deleted_rate"] = deleted_rate;
        doc["words_substituted_rate"] = substituted_rate;
        ordered_json segments;
        for (auto segment : deepscore::kAllSegments) {
            ordered_json entry;
            entry["count"] = mnr.count(segment);
            entry["share"] = mnr.share(segment);
            segments[std::string(deepscore::to_string(segment))] = std::move(entry);
        }
        doc["segments"] = std::move(segments);
        emit_document(io, doc.dump(2) + "\n");
        return 0;
    }
    std::ostringstream out;
    out << "MNR " << deepscore::display_pct(mnr.mnr) << " (" << mnr.n_minimally_edited << "/"
        << mnr.n_notes << " notes with substitution rate < 10%)\n";
    static constexpr const char* kSegmentLabels[] = {"0%", "<5%", "5-10%", ">=10%"};
    for (std::size_t s = 0; s < deepscore::kSegmentCount; ++s) {
        out << "  " << kSegmentLabels[s] << " segment: "
            << deepscore::display_pct(mnr.segment_shares[s]) << " (" << mnr.segment_counts[s]
            << " notes)\n";
    }
    emit_document(io, out.str());
    return 0;
}

int run_mwhr(const InputOptions& io) {
    auto bundle = deepscore::load_bundle(resolve_paths(io), resolve_meta(io));
    if (!bundle.qc_records || bundle.qc_records->empty()) {
        throw deepscore::Error("mwhr requires a non-empty qc_record section");
    }
    auto result = deepscore::compute_mwhr(*bundle.qc_records, io.jobs);

    if (io.format == "json") {
        ordered_json doc;
        doc["hits"] = result.hits;
        doc["audible_terms"] = result.audible_terms;
        doc["mwhr"] = result.mwhr;
        ordered_json misses = ordered_json::array();
        for (const auto& miss : result.misses) {
            ordered_json entry;
            entry["record_id"] = miss.record_id;
            entry["term_id"] = miss.term_id;
            entry["hypothesis_tokens"] = miss.hypothesis_tokens;
            misses.push_back(std::move(entry));
        }
        doc["misses"] = std::move(misses);
        emit_document(io, doc.dump(2) + "\n");
        return 0;
    }
    std::ostringstream out;
    out << "MWHR " << deepscore::display_pct(result.mwhr) << " (" << result.hits << "/"
        << result.audible_terms << " audible terms transcribed exactly)\n";
    for (const auto& miss : result.misses) {
        out << "  miss " << miss.term_id << " in " << miss.record_id;
        if (!miss.hypothesis_tokens.empty()) {
            out << " -> ";
            for (std::size_t i = 0; i < miss.hypothesis_tokens.size(); ++i) {
                if (i > 0) out << ' ';
                out << miss.hypothesis_tokens[i];
            }
        } else {
            out << " -> (dropped)";
        }
        out << "\n";
    }
    emit_document(io, out.str());
    return 0;
}

int run_score(const InputOptions& io, const std::vector<double>& component_pcts) {
    const auto format = deepscore::parse_report_format(io.format);

    if (!component_pcts.empty()) {
        if (component_pcts.size() != 6) {
            throw deepscore::Error("--values expects six percentages: mdfr cdfr cer aer mnr mwhr");
        }
        deepscore::ComponentMetrics components;
        for (std::size_t i = 0; i < 6; ++i) {
            components.get(deepscore::kAllMetrics[i]) =
                deepscore::MetricValue{component_pcts[i] / 100.0, "provided", 0};
        }
        auto score = deepscore::compute_deepscore(components);
        emit_document(io, deepscore::render_scorecard(score, format));
        std::cout << "DeepScore " << deepscore::display_pct(score.value) << "\n";
        return 0;
    }

    auto bundle = deepscore::load_bundle(resolve_paths(io), resolve_meta(io));
    auto result = deepscore::compute_scorecard(bundle, io.jobs);
    for (const auto& warning : result.warnings) std::cerr << "warning: " << warning << "\n";
    if (format == deepscore::ReportFormat::Json) {
        emit_document(io, result.scorecard_json);
    } else {
        emit_document(io, deepscore::render_scorecard(result.components, format));
    }
    if (result.deep_score) {
        std::cout << "DeepScore " << deepscore::display_pct(*result.deep_score) << "\n";
    }
    return 0;
}

int run_report(const InputOptions& io) {
    deepscore::RunConfig config;
    config.inputs = resolve_paths(io);
    if (!io.out.empty()) config.out_path = io.out;
    config.format = deepscore::parse_report_format(io.format);
    config.jobs = io.jobs;
    config.meta = resolve_meta(io);
    return deepscore::run_pipeline(config, std::cout, std::cerr);
}

struct SynthOptions {
    std::string out;
    std::uint64_t seed = 0;
    // entity section
    std::uint64_t n_entities = 0;
    std::uint64_t major = 0;
    std::uint64_t critical = 0;
    std::uint64_t missing = 0;
    std::uint64_t inaccurate = 0;
    std::vector<double> probabilities;  // p-major p-critical p-missing p-inaccurate
    // edit section
    std::uint64_t n_notes = 0;
    std::uint64_t note_length = 25;
    std::uint64_t subs = 0;
    std::uint64_t ins = 0;
    std::uint64_t dels = 0;
    std::vector<std::uint64_t> segments;  // zero under_five five_to_ten ten_plus
    // qc section
    std::uint64_t qc_records = 0;
    std::uint64_t terms_per_record = 10;
    std::uint64_t corrupt_terms = 0;
    std::uint64_t inaudible_per_record = 0;
};

int run_synth(const SynthOptions& opts) {
    if (opts.n_entities == 0 && opts.n_notes == 0 && opts.segments.empty() &&
        opts.qc_records == 0) {
        throw deepscore::Error(
            "synth needs at least one section (--n-entities, --n-notes/--segments, or "
            "--qc-records)");
    }

    deepscore::DatasetBundle bundle;
    std::optional<deepscore::EntityGroundTruth> entity_truth;
    std::optional<deepscore::EditGroundTruth> edit_truth;
    std::optional<deepscore::QcGroundTruth> qc_truth;

    if (opts.n_entities > 0) {
        deepscore::InjectionProfile profile;
        profile.n_entities = opts.n_entities;
        profile.seed = opts.seed;
        if (!opts.probabilities.empty()) {
            if (opts.probabilities.size() != 4) {
                throw deepscore::Error(
                    "--probabilities expects four values: major critical missing inaccurate");
            }
            profile.p_major_defect = opts.probabilities[0];
            profile.p_critical_defect = opts.probabilities[1];
            profile.p_missing_major = opts.probabilities[2];
            profile.p_inaccurate_major = opts.probabilities[3];
        } else {
            profile.exact_counts = deepscore::InjectionCounts{opts.major, opts.critical,
                                                              opts.missing, opts.inaccurate};
        }
        auto generated = deepscore::generate_audited_set(profile);
        bundle.test_set = std::move(generated.test_set);
        entity_truth = generated.truth;
    }

    if (!opts.segments.empty() || opts.n_notes > 0) {
        deepscore::EditInjectionProfile profile;
        if (!opts.segments.empty()) {
            if (opts.segments.size() != 4) {
                throw deepscore::Error(
                    "--segments expects four counts: zero under-five five-to-ten ten-plus");
            }
            profile = deepscore::segment_population_profile(
                opts.segments[0], opts.segments[1], opts.segments[2], opts.segments[3],
                opts.note_length, opts.seed);
        } else {
            profile.n_notes = opts.n_notes;
            profile.note_length = opts.note_length;
            profile.per_note = {deepscore::EditCounts{static_cast<std::uint32_t>(opts.subs),
                                                      static_cast<std::uint32_t>(opts.ins),
                                                      static_cast<std::uint32_t>(opts.dels)}};
            profile.seed = opts.seed;
        }
        auto generated = deepscore::generate_edit_pairs(profile);
        bundle.edit_pairs = std::move(generated.pairs);
        edit_truth = std::move(generated.truth);
    }

    if (opts.qc_records > 0) {
        deepscore::QcInjectionProfile profile;
        profile.n_records = opts.qc_records;
        profile.terms_per_record = opts.terms_per_record;
        profile.corrupted_terms = opts.corrupt_terms;
        profile.inaudible_per_record = opts.inaudible_per_record;
        profile.seed = opts.seed;
        auto generated = deepscore::generate_qc_records(profile);
        bundle.qc_records = std::move(generated.records);
        qc_truth = generated.truth;
    }

    const std::filesystem::path dir(opts.out);
    auto written = deepscore::write_bundle(bundle, dir);
    const std::filesystem::path truth_path = dir / deepscore::kGroundTruthFileName;
    {
        std::ofstream file(truth_path, std::ios::binary | std::ios::trunc);
        if (!file) {
            throw deepscore::IoError("cannot open '" + truth_path.string() + "' for writing");
        }
        file << deepscore::ground_truth_to_json(entity_truth, edit_truth, qc_truth);
    }

    auto report = [](const char* name, const std::optional<std::filesystem::path>& path) {
        if (path) std::cout << "  " << name << ": " << path->string() << "\n";
    };
    std::cout << "synthetic corpus written to " << dir.string() << "\n";
    report("entities", written.entities);
    report("snippets", written.snippets);
    report("edits", written.edits);
    report("qc", written.qc);
    std::cout << "  ground truth: " << truth_path.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Note-quality metrics: defect-free rates, capture/accuracy funnel, edit\n"
                 "behavior, transcription QC, and the composite DeepScore."};
    app.set_version_flag("--version", "deepscore 0.1.0");
    app.require_subcommand(1);

    InputOptions statrates_io;
    add_input_flags(app.add_subcommand("statrates", "MDFR and CDFR over audited entities"),
                    statrates_io);

    InputOptions funnel_io;
    add_input_flags(app.add_subcommand("funnel", "MER/CER and IER/AER over audited entities"),
                    funnel_io);

    InputOptions edits_io;
    add_input_flags(app.add_subcommand("edits", "Word-edit rates and MNR over note pairs"),
                    edits_io);

    InputOptions mwhr_io;
    add_input_flags(app.add_subcommand("mwhr", "Medical Word Hit Rate over QC records"),
                    mwhr_io);

    InputOptions score_io;
    std::vector<double> score_values;
    CLI::App* score_cmd =
        app.add_subcommand("score", "Composite DeepScore from a bundle or explicit values");
    add_input_flags(score_cmd, score_io);
    score_cmd->add_option("--values", score_values,
                          "Six component percentages (mdfr cdfr cer aer mnr mwhr)")
        ->delimiter(',');

    InputOptions report_io;
    add_input_flags(app.add_subcommand(
                        "report", "Full pipeline: every available metric plus the scorecard"),
                    report_io);

    SynthOptions synth_opts;
    CLI::App* synth_cmd =
        app.add_subcommand("synth", "Generate a synthetic corpus with known ground truth");
    synth_cmd->add_option("--out", synth_opts.out, "Output directory")->required();
    synth_cmd->add_option("--seed", synth_opts.seed, "Random seed");
    synth_cmd->add_option("--n-entities", synth_opts.n_entities, "Entity count");
    synth_cmd->add_option("--major", synth_opts.major, "Exact Other/Major injections");
    synth_cmd->add_option("--critical", synth_opts.critical, "Exact Other/Critical injections");
    synth_cmd->add_option("--missing", synth_opts.missing,
                          "Exact MissingInformation/Major injections");
    synth_cmd->add_option("--inaccurate", synth_opts.inaccurate,
                          "Exact Inaccurate/Major injections");
    synth_cmd->add_option("--probabilities", synth_opts.probabilities,
                          "Bernoulli mode: p-major p-critical p-missing p-inaccurate")
        ->delimiter(',');
    synth_cmd->add_option("--n-notes", synth_opts.n_notes, "Note count");
    synth_cmd->add_option("--note-length", synth_opts.note_length, "Tokens per note draft");
    synth_cmd->add_option("--subs", synth_opts.subs, "Substitutions per note");
    synth_cmd->add_option("--ins", synth_opts.ins, "Insertions per note");
    synth_cmd->add_option("--dels", synth_opts.dels, "Deletions per note");
    synth_cmd->add_option("--segments", synth_opts.segments,
                          "Note counts per rate bucket: zero,under-five,five-to-ten,ten-plus")
        ->delimiter(',');
    synth_cmd->add_option("--qc-records", synth_opts.qc_records, "QC record count");
    synth_cmd->add_option("--terms-per-record", synth_opts.terms_per_record,
                          "Annotated terms per QC record");
    synth_cmd->add_option("--corrupt", synth_opts.corrupt_terms,
                          "Audible terms to mis-transcribe (pooled)");
    synth_cmd->add_option("--inaudible", synth_opts.inaudible_per_record,
                          "Inaudible terms per record (excluded from MWHR)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand("statrates")) return run_statrates(statrates_io);
        if (app.got_subcommand("funnel")) return run_funnel(funnel_io);
        if (app.got_subcommand("edits")) return run_edits(edits_io);
        if (app.got_subcommand("mwhr")) return run_mwhr(mwhr_io);
        if (app.got_subcommand("score")) return run_score(score_io, score_values);
        if (app.got_subcommand("report")) return run_report(report_io);
        if (app.got_subcommand("synth")) return run_synth(synth_opts);
    } catch (const deepscore::UnsupportedFormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const deepscore::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
