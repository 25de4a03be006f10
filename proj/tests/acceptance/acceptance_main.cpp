// Acceptance suite: runs every release criterion and prints one line per
// criterion. Exits nonzero if any criterion fails.

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "deepscore/edit_metrics.hpp"
#include "deepscore/entity_metrics.hpp"
#include "deepscore/pipeline.hpp"
#include "deepscore/scorecard.hpp"
#include "deepscore/synth.hpp"
#include "deepscore/token_align.hpp"
#include "deepscore/transcription_qc.hpp"
#include "support/generators.hpp"

namespace fs = std::filesystem;
using namespace deepscore;

namespace {

int failures = 0;

void report(const std::string& label, bool passed, const std::string& detail = "") {
    std::cout << (passed ? "[PASS] " : "[FAIL] ") << label;
    if (!detail.empty()) std::cout << " — " << detail;
    std::cout << "\n";
    if (!passed) ++failures;
}

void run(const std::string& label, bool (*criterion)(std::string&)) {
    std::string detail;
    try {
        const bool ok = criterion(detail);
        report(label, ok, detail);
    } catch (const std::exception& e) {
        report(label, false, std::string("exception: ") + e.what());
    }
}

fs::path fixture_dir;

// --- criterion 1: DeepScore worked example --------------------------------

bool deepscore_reproduction(std::string& detail) {
    ComponentMetrics components;
    const double pcts[6] = {95.9, 100.0, 90.2, 96.2, 95.0, 95.3};
    for (std::size_t i = 0; i < 6; ++i) {
        components.get(kAllMetrics[i]) = MetricValue{pcts[i] / 100.0, "published", 0};
    }
    DeepScore score = compute_deepscore(components);
    const double unrounded_pct = score.value * 100.0;
    const bool value_ok = std::abs(unrounded_pct - 95.433333333333333) < 1e-9;
    const bool display_ok = display_pct(score.value) == "95.4%";
    std::ostringstream out;
    out << "unrounded " << unrounded_pct << ", displayed " << display_pct(score.value);
    detail = out.str();
    return value_ok && display_ok;
}

// --- criterion 2: MWHR worked example --------------------------------------

bool mwhr_worked_example(std::string& detail) {
    std::vector<QcRecord> records;

    QcRecord first;
    first.record_id = "wk01";
    first.reference = tokenize("we will stop the Clonidine and reassess at the next visit");
    first.hypothesis = tokenize("we will stop the client and reassess at the next visit");
    MedicalTermAnnotation clonidine;
    clonidine.term_id = "wk01-clonidine";
    clonidine.start_index = 4;
    clonidine.tokens = {first.reference[4]};
    first.terms.push_back(clonidine);
    records.push_back(std::move(first));

    QcRecord second;
    second.record_id = "wk02";
    second.reference = tokenize("patient stays on Envarsus after the transplant per pharmacy");
    second.hypothesis = tokenize("patient stays on invasive after the transplant per pharmacy");
    MedicalTermAnnotation envarsus;
    envarsus.term_id = "wk02-envarsus";
    envarsus.start_index = 3;
    envarsus.tokens = {second.reference[3]};
    second.terms.push_back(envarsus);
    records.push_back(std::move(second));

    // 88 more clearly audible terms, all transcribed exactly.
    QcRecord rest;
    rest.record_id = "wk03";
    for (int i = 0; i < 88; ++i) {
        rest.reference.emplace_back("and" + std::to_string(i));
        MedicalTermAnnotation term;
        term.term_id = "wk03-t" + std::to_string(i);
        term.start_index = rest.reference.size();
        rest.reference.emplace_back("agent" + std::to_string(i));
        term.tokens = {rest.reference.back()};
        rest.terms.push_back(std::move(term));
    }
    rest.hypothesis = rest.reference;
    records.push_back(std::move(rest));

    MwhrResult result = compute_mwhr(records);
    std::ostringstream out;
    out << result.hits << "/" << result.audible_terms << " displayed "
        << display_pct(result.mwhr);
    detail = out.str();
    return result.hits == 88 && result.audible_terms == 90 && result.mwhr == 88.0 / 90.0 &&
           display_pct(result.mwhr) == "97.8%" && result.misses.size() == 2;
}

// --- criterion 3: pie segments and MNR agree -------------------------------

bool mnr_pie_consistency(std::string& detail) {
    auto profile = segment_population_profile(429, 425, 96, 50, 25, 31);
    auto generated = generate_edit_pairs(profile);
    MnrResult result = compute_mnr(generated.pairs);

    const bool counts_ok = result.count(SubstitutionSegment::Zero) == 429 &&
                           result.count(SubstitutionSegment::UnderFive) == 425 &&
                           result.count(SubstitutionSegment::FiveToTen) == 96 &&
                           result.count(SubstitutionSegment::TenPlus) == 50;
    const bool mnr_ok = result.mnr == 0.95 && display_pct(result.mnr) == "95.0%";
    const bool shares_ok = display_pct(result.share(SubstitutionSegment::Zero)) == "42.9%" &&
                           display_pct(result.share(SubstitutionSegment::UnderFive)) == "42.5%" &&
                           display_pct(result.share(SubstitutionSegment::FiveToTen)) == "9.6%" &&
                           display_pct(result.share(SubstitutionSegment::TenPlus)) == "5.0%";
    std::ostringstream out;
    out << "MNR " << display_pct(result.mnr) << ", segments 42.9/42.5/9.6/5.0";
    detail = out.str();
    return counts_ok && mnr_ok && shares_ok;
}

// --- criterion 4a: alignment oracle equivalence ----------------------------

bool alignment_oracle_equivalence(std::string& detail) {
    std::mt19937_64 rng(40401);
    int checked = 0;
    for (int trial = 0; trial < 1200; ++trial) {
        auto a = testsupport::random_tokens(rng, 8);
        auto b = testsupport::random_tokens(rng, 8);
        Alignment alignment = align(a, b);
        OracleAlignment oracle = oracle_edit_distance(a, b);
        if (alignment.cost != oracle.cost) {
            detail = "cost mismatch at trial " + std::to_string(trial);
            return false;
        }
        const std::size_t keeps = alignment.count(EditOp::Keep);
        const std::size_t subs = alignment.count(EditOp::Substitute);
        const std::size_t dels = alignment.count(EditOp::Delete);
        const std::size_t ins = alignment.count(EditOp::Insert);
        if (keeps + subs + dels != a.size() || keeps + subs + ins != b.size() ||
            alignment.cost != subs + dels + ins) {
            detail = "conservation identity broken at trial " + std::to_string(trial);
            return false;
        }
        ++checked;
    }
    detail = std::to_string(checked) + " random pairs";
    return true;
}

// --- criterion 4b: injected rates recovered exactly -------------------------

bool injected_rate_recovery(std::string& detail) {
    std::mt19937_64 rng(40402);
    int profiles = 0;

    for (int trial = 0; trial < 110; ++trial) {
        const std::uint64_t n = 4 + rng() % 200;
        InjectionCounts counts;
        counts.other_major = rng() % (n / 4 + 1);
        counts.other_critical = rng() % (n / 4 + 1);
        counts.missing_major = rng() % (n / 4 + 1);
        counts.inaccurate_major = rng() % (n / 4 + 1);
        if (counts.missing_major == n) counts.missing_major = n - 1;  // keep captured nonempty
        InjectionProfile profile;
        profile.n_entities = n;
        profile.exact_counts = counts;
        profile.seed = rng();
        auto generated = generate_audited_set(profile);
        auto entities = collect_audited_entities(generated.test_set);

        auto rates = compute_stat_rates(entities);
        auto funnel = compute_funnel(entities);
        const EntityGroundTruth& truth = generated.truth;
        if (rates.n_major_free != truth.n_major_free ||
            rates.n_critical_free != truth.n_critical_free || rates.mdfr != truth.mdfr() ||
            rates.cdfr != truth.cdfr() || funnel.n_missing != truth.n_missing ||
            funnel.cer != truth.cer() || funnel.n_inaccurate != truth.n_inaccurate ||
            funnel.aer != truth.aer()) {
            detail = "entity profile " + std::to_string(trial) + " not recovered";
            return false;
        }
        ++profiles;
    }

    for (int trial = 0; trial < 110; ++trial) {
        EditInjectionProfile profile;
        profile.n_notes = 1 + rng() % 30;
        profile.note_length = 12 + rng() % 30;
        profile.per_note.clear();
        for (std::uint64_t note = 0; note < profile.n_notes; ++note) {
            EditCounts counts;
            counts.substitutions = static_cast<std::uint32_t>(rng() % (profile.note_length / 4));
            counts.insertions = static_cast<std::uint32_t>(rng() % 3);
            counts.deletions = static_cast<std::uint32_t>(rng() % 3);
            profile.per_note.push_back(counts);
        }
        profile.seed = rng();
        auto generated = generate_edit_pairs(profile);
        auto result = compute_mnr(generated.pairs);
        if (result.n_minimally_edited != generated.truth.n_minimally_edited ||
            result.mnr != generated.truth.mnr() ||
            result.segment_counts != generated.truth.segment_counts) {
            detail = "edit profile " + std::to_string(trial) + " not recovered";
            return false;
        }
        for (std::size_t i = 0; i < generated.pairs.size(); ++i) {
            auto breakdown = edit_breakdown(generated.pairs[i]);
            if (breakdown.words_substituted_rate != generated.truth.substitution_rates[i]) {
                detail = "per-note rate drifted in edit profile " + std::to_string(trial);
                return false;
            }
        }
        ++profiles;
    }

    detail = std::to_string(profiles) + " exact-count profiles recovered";
    return true;
}

// --- criterion 4c: metric invariants ----------------------------------------

bool metric_invariant_suite(std::string& detail) {
    std::mt19937_64 rng(40403);

    // mdfr <= cdfr and severity/kind gates
    for (int trial = 0; trial < 600; ++trial) {
        auto entities = testsupport::random_entities(rng, 16);
        auto rates = compute_stat_rates(entities);
        if (!(rates.mdfr <= rates.cdfr)) {
            detail = "mdfr > cdfr";
            return false;
        }

        // severity <= 3 gate
        auto low = entities;
        auto& low_target = low[rng() % low.size()];
        low_target.defects.push_back(
            {DefectKind::inaccurate(), Severity(1 + static_cast<int>(rng() % 3)), ""});
        if (compute_stat_rates(low) != rates) {
            detail = "severity gate moved stat rates";
            return false;
        }

        // Other-kind gate: critical Other lowers mdfr/cdfr, never the funnel counts
        auto other = entities;
        auto& other_target = other[rng() % other.size()];
        const bool had_critical = other_target.has_defect_at_least(5);
        other_target.defects.push_back({DefectKind::other("layout"), Severity(5), ""});
        auto rates_other = compute_stat_rates(other);
        if (rates_other.mdfr > rates.mdfr || rates_other.cdfr > rates.cdfr) {
            detail = "Other-kind defect raised a stat rate";
            return false;
        }
        if (other_target.entity.medically_relevant && !had_critical &&
            rates_other.n_critical_free != rates.n_critical_free - 1) {
            detail = "critical Other defect did not lower cdfr";
            return false;
        }
        try {
            auto funnel_before = compute_funnel(entities);
            auto funnel_after = compute_funnel(other);
            if (funnel_after.n_missing != funnel_before.n_missing ||
                funnel_after.n_inaccurate != funnel_before.n_inaccurate) {
                detail = "Other-kind defect moved the funnel";
                return false;
            }
        } catch (const NoCapturedEntitiesError&) {
        }

        // defect removal monotonicity (aer excepted when the removal unmasks
        // a captured-but-inaccurate entity; see the decisions notes)
        std::vector<std::pair<std::size_t, std::size_t>> slots;
        for (std::size_t i = 0; i < entities.size(); ++i) {
            for (std::size_t d = 0; d < entities[i].defects.size(); ++d) slots.push_back({i, d});
        }
        if (!slots.empty()) {
            auto [ei, di] = slots[rng() % slots.size()];
            auto reduced = entities;
            reduced[ei].defects.erase(reduced[ei].defects.begin() +
                                      static_cast<std::ptrdiff_t>(di));
            auto reduced_rates = compute_stat_rates(reduced);
            if (reduced_rates.mdfr < rates.mdfr || reduced_rates.cdfr < rates.cdfr) {
                detail = "removing a defect lowered a stat rate";
                return false;
            }
            const bool unmasks = is_missing_entity(entities[ei]) &&
                                 !is_missing_entity(reduced[ei]) &&
                                 is_inaccurate_entity(reduced[ei]);
            try {
                auto funnel_before = compute_funnel(entities);
                auto funnel_after = compute_funnel(reduced);
                if (funnel_after.cer < funnel_before.cer ||
                    (!unmasks && funnel_after.aer < funnel_before.aer)) {
                    detail = "removing a defect lowered a funnel rate";
                    return false;
                }
            } catch (const NoCapturedEntitiesError&) {
            }
        }
    }

    // segment partition sums to one
    for (int trial = 0; trial < 600; ++trial) {
        std::vector<NoteEditPair> pairs;
        const std::size_t n = 1 + rng() % 10;
        for (std::size_t i = 0; i < n; ++i) {
            pairs.push_back(NoteEditPair{"n" + std::to_string(i),
                                         testsupport::random_tokens(rng, 10),
                                         testsupport::random_tokens(rng, 10)});
        }
        auto result = compute_mnr(pairs);
        double share_sum = 0.0;
        std::size_t count_sum = 0;
        for (auto segment : kAllSegments) {
            share_sum += result.share(segment);
            count_sum += result.count(segment);
        }
        if (count_sum != result.n_notes || std::abs(share_sum - 1.0) > 1e-12) {
            detail = "segment partition broken";
            return false;
        }
    }

    // DeepScore permutation invariance and bounds
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 600; ++trial) {
        std::array<double, 6> values{};
        for (double& v : values) v = unit(rng);
        ComponentMetrics components;
        for (std::size_t i = 0; i < 6; ++i) {
            components.get(kAllMetrics[i]) = MetricValue{values[i], "r", 1};
        }
        const double base = compute_deepscore(components).value;
        std::shuffle(values.begin(), values.end(), rng);
        ComponentMetrics permuted;
        for (std::size_t i = 0; i < 6; ++i) {
            permuted.get(kAllMetrics[i]) = MetricValue{values[i], "r", 1};
        }
        const double shuffled = compute_deepscore(permuted).value;
        const double low = *std::min_element(values.begin(), values.end());
        const double high = *std::max_element(values.begin(), values.end());
        if (shuffled != base || base < low || base > high) {
            detail = "DeepScore invariance or bounds broken";
            return false;
        }
    }

    detail = "600 instances per invariant family";
    return true;
}

// --- criterion 5: determinism across worker counts --------------------------

bool pipeline_determinism(std::string& detail) {
    const fs::path dir = fs::temp_directory_path() / "deepscore_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);

    auto run_with_jobs = [&](unsigned jobs) -> std::string {
        RunConfig config;
        config.inputs = BundlePaths::from_directory(fixture_dir);
        config.out_path = dir / ("scorecard_" + std::to_string(jobs) + ".json");
        config.jobs = jobs;
        std::ostringstream out;
        std::ostringstream err;
        if (run_pipeline(config, out, err) != 0) {
            throw Error("pipeline failed: " + err.str());
        }
        std::ifstream in(*config.out_path, std::ios::binary);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    };

    const std::string serial = run_with_jobs(1);
    const std::string parallel = run_with_jobs(8);
    detail = serial == parallel ? "byte-identical scorecards" : "artifacts differ";
    return serial == parallel && !serial.empty();
}

// --- criterion 6: emit -> ingest round trip ---------------------------------

bool bundle_round_trip(std::string& detail) {
    DatasetBundle original = load_bundle(BundlePaths::from_directory(fixture_dir));
    const fs::path dir = fs::temp_directory_path() / "deepscore_acceptance_roundtrip";
    fs::remove_all(dir);
    DatasetBundle reloaded = load_bundle(write_bundle(original, dir));

    const bool entities_ok = reloaded.test_set.has_value() &&
                             reloaded.test_set->encounters == original.test_set->encounters;
    const bool edits_ok = reloaded.edit_pairs == original.edit_pairs;
    const bool qc_ok = reloaded.qc_records == original.qc_records;
    detail = "entities/snippets, edits, qc all equal field for field";
    if (!entities_ok) detail = "test set sections differ";
    if (!edits_ok) detail = "edit pairs differ";
    if (!qc_ok) detail = "qc records differ";
    return entities_ok && edits_ok && qc_ok;
}

}  // namespace

int main(int argc, char** argv) {
    fixture_dir = argc > 1 ? fs::path(argv[1]) : fs::path(DEEPSCORE_FIXTURE_DIR);
    if (!fs::exists(fixture_dir)) {
        std::cerr << "fixture bundle not found at " << fixture_dir << "\n";
        return 2;
    }

    run("criterion 1: DeepScore worked example reproduces 95.4", deepscore_reproduction);
    run("criterion 2: MWHR worked example reproduces 88/90 = 97.8%", mwhr_worked_example);
    run("criterion 3: segment mix 42.9/42.5/9.6/5.0 gives MNR 95.0%", mnr_pie_consistency);
    run("criterion 4a: alignment matches the exhaustive oracle on 1200 random pairs",
        alignment_oracle_equivalence);
    run("criterion 4b: exact-count injections recovered exactly across 220 profiles",
        injected_rate_recovery);
    run("criterion 4c: metric invariant suite holds on random instances",
        metric_invariant_suite);
    run("criterion 5: scorecard bytes identical for --jobs 1 and --jobs 8",
        pipeline_determinism);
    run("criterion 6: emit -> ingest round trip preserves every record field",
        bundle_round_trip);

    if (failures == 0) {
        std::cout << "all acceptance criteria passed\n";
        return 0;
    }
    std::cout << failures << " acceptance criteria failed\n";
    return 1;
}
