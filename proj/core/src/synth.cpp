#include "deepscore/synth.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "deepscore/scorecard.hpp"

namespace deepscore {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string padded_id(const char* prefix, std::uint64_t index, int width = 5) {
    std::string digits = std::to_string(index);
    std::string out(prefix);
    if (digits.size() < static_cast<std::size_t>(width)) {
        out.append(static_cast<std::size_t>(width) - digits.size(), '0');
    }
    out += digits;
    return out;
}

constexpr std::size_t kEntitiesPerEncounter = 10;

}  // namespace

SynthAuditResult generate_audited_set(const InjectionProfile& profile) {
    if (profile.n_entities == 0) {
        throw InfeasibleProfileError("profile requires at least one entity");
    }
    for (double p : {profile.p_major_defect, profile.p_critical_defect, profile.p_missing_major,
                     profile.p_inaccurate_major}) {
        if (!(p >= 0.0) || p > 1.0) {
            throw InfeasibleProfileError("injection probability outside [0, 1]");
        }
    }

    const std::size_t n = static_cast<std::size_t>(profile.n_entities);
    std::mt19937_64 rng(profile.seed);

    // Per-entity injection flags.
    std::vector<std::uint8_t> other_major(n, 0), other_critical(n, 0), missing(n, 0),
        inaccurate(n, 0);

    if (profile.exact_counts) {
        const InjectionCounts& c = *profile.exact_counts;
        const std::uint64_t total =
            c.other_major + c.other_critical + c.missing_major + c.inaccurate_major;
        if (total > profile.n_entities) {
            throw InfeasibleProfileError("exact injection counts exceed the entity count");
        }
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        std::size_t cursor = 0;
        for (std::uint64_t k = 0; k < c.other_major; ++k) other_major[order[cursor++]] = 1;
        for (std::uint64_t k = 0; k < c.other_critical; ++k) other_critical[order[cursor++]] = 1;
        for (std::uint64_t k = 0; k < c.missing_major; ++k) missing[order[cursor++]] = 1;
        for (std::uint64_t k = 0; k < c.inaccurate_major; ++k) inaccurate[order[cursor++]] = 1;
    } else {
        std::bernoulli_distribution draw_major(profile.p_major_defect);
        std::bernoulli_distribution draw_critical(profile.p_critical_defect);
        std::bernoulli_distribution draw_missing(profile.p_missing_major);
        std::bernoulli_distribution draw_inaccurate(profile.p_inaccurate_major);
        for (std::size_t i = 0; i < n; ++i) {
            other_major[i] = draw_major(rng) ? 1 : 0;
            other_critical[i] = draw_critical(rng) ? 1 : 0;
            missing[i] = draw_missing(rng) ? 1 : 0;
            inaccurate[i] = draw_inaccurate(rng) ? 1 : 0;
        }
    }

    SynthAuditResult result;
    result.test_set.set_id = "synthetic";
    result.test_set.meta.source_label = "synthetic corpus";

    EntityGroundTruth& truth = result.truth;
    truth.n_relevant = n;

    std::uint64_t snippet_counter = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % kEntitiesPerEncounter == 0) {
            Encounter encounter;
            encounter.encounter_id = padded_id("enc", i / kEntitiesPerEncounter);
            result.test_set.encounters.push_back(std::move(encounter));
        }
        Encounter& encounter = result.test_set.encounters.back();

        AuditedEntity audited;
        audited.entity.entity_id = padded_id("e", i);
        audited.entity.rubric_id = encounter.encounter_id;
        audited.entity.text = "finding " + audited.entity.entity_id;
        audited.entity.medically_relevant = true;

        if (other_major[i]) {
            audited.defects.push_back(
                {DefectKind::other("wording"), Severity(kMajorSeverityLevel), ""});
        }
        if (other_critical[i]) {
            audited.defects.push_back(
                {DefectKind::other("wording"), Severity(kCriticalSeverityLevel), ""});
        }
        if (missing[i]) {
            audited.defects.push_back(
                {DefectKind::missing_information(), Severity(kMajorSeverityLevel), ""});
        }
        if (inaccurate[i]) {
            audited.defects.push_back(
                {DefectKind::inaccurate(), Severity(kMajorSeverityLevel), ""});
        }

        const bool any_defect = other_major[i] || other_critical[i] || missing[i] || inaccurate[i];
        if (!any_defect) ++truth.n_major_free;
        if (!other_critical[i]) ++truth.n_critical_free;
        if (missing[i]) {
            ++truth.n_missing;
        } else {
            // Captured entities get a snippet; omitted content has none.
            Snippet snippet;
            snippet.snippet_id = padded_id("s", snippet_counter++);
            snippet.note_id = encounter.encounter_id;
            snippet.text = "notes on " + audited.entity.entity_id;
            snippet.linked_entity = audited.entity.entity_id;
            encounter.snippets.push_back(std::move(snippet));
            if (inaccurate[i]) ++truth.n_inaccurate;
        }
        encounter.entities.push_back(std::move(audited));
    }
    truth.n_captured = truth.n_relevant - truth.n_missing;
    return result;
}

EditInjectionProfile segment_population_profile(std::size_t zero, std::size_t under_five,
                                                std::size_t five_to_ten, std::size_t ten_plus,
                                                std::uint64_t note_length, std::uint64_t seed) {
    EditInjectionProfile profile;
    profile.n_notes = zero + under_five + five_to_ten + ten_plus;
    profile.note_length = note_length;
    profile.seed = seed;
    profile.per_note.reserve(profile.n_notes);
    // Substitution counts hitting each bucket: 0, then the smallest counts
    // landing in (0,5%), [5%,10%), and [10%, ...].
    const auto count_for = [note_length](double low, bool inclusive) -> std::uint32_t {
        for (std::uint32_t k = 1; k <= note_length; ++k) {
            double rate = static_cast<double>(k) / static_cast<double>(note_length);
            if (inclusive ? rate >= low : rate > low) return k;
        }
        return static_cast<std::uint32_t>(note_length);
    };
    const std::uint32_t under_five_subs = count_for(0.0, false);
    const std::uint32_t five_to_ten_subs = count_for(0.05, true);
    const std::uint32_t ten_plus_subs = count_for(0.10, true);
    if (static_cast<double>(under_five_subs) / static_cast<double>(note_length) >= 0.05 ||
        static_cast<double>(five_to_ten_subs) / static_cast<double>(note_length) >= 0.10) {
        throw InfeasibleProfileError("note_length too small to realize all rate buckets");
    }
    for (std::size_t k = 0; k < zero; ++k) profile.per_note.push_back({0, 0, 0});
    for (std::size_t k = 0; k < under_five; ++k) profile.per_note.push_back({under_five_subs, 0, 0});
    for (std::size_t k = 0; k < five_to_ten; ++k) profile.per_note.push_back({five_to_ten_subs, 0, 0});
    for (std::size_t k = 0; k < ten_plus; ++k) profile.per_note.push_back({ten_plus_subs, 0, 0});
    return profile;
}

SynthEditsResult generate_edit_pairs(const EditInjectionProfile& profile) {
    if (profile.n_notes == 0) throw InfeasibleProfileError("profile requires at least one note");
    if (profile.note_length < 2) {
        throw InfeasibleProfileError("note_length must be at least 2");
    }
    if (!profile.per_note.empty() && profile.per_note.size() != 1 &&
        profile.per_note.size() != profile.n_notes) {
        throw InfeasibleProfileError("per_note must hold one entry or one entry per note");
    }

    const std::size_t len = static_cast<std::size_t>(profile.note_length);
    std::mt19937_64 rng(profile.seed);

    SynthEditsResult result;
    result.truth.n_notes = static_cast<std::size_t>(profile.n_notes);
    result.pairs.reserve(result.truth.n_notes);

    for (std::uint64_t note = 0; note < profile.n_notes; ++note) {
        EditCounts counts;
        if (profile.per_note.size() == 1) {
            counts = profile.per_note.front();
        } else if (!profile.per_note.empty()) {
            counts = profile.per_note[static_cast<std::size_t>(note)];
        }

        const std::size_t subs = counts.substitutions;
        const std::size_t dels = counts.deletions;
        const std::size_t ins = counts.insertions;
        const std::size_t interior = len - 2;  // first and last token stay kept
        const std::size_t reserve_kept = (ins > 0 && dels > 0) ? 1 : 0;
        if (subs + dels + reserve_kept > interior) {
            throw InfeasibleProfileError("note " + std::to_string(note) +
                                         ": substitutions + deletions leave no room in a " +
                                         std::to_string(len) + "-token note");
        }

        NoteEditPair pair;
        pair.note_id = padded_id("note", note);
        pair.initial_tokens.reserve(len);
        for (std::size_t i = 0; i < len; ++i) {
            pair.initial_tokens.emplace_back("w" + std::to_string(i));
        }

        // Deletions occupy the tail of the interior; substitutions are drawn
        // from the positions before them; insertions go right after the first
        // token. Distinct tokens plus this layout pin the minimal alignment.
        const std::size_t delete_begin = len - 1 - dels;
        std::vector<std::size_t> candidates(delete_begin - 1);
        std::iota(candidates.begin(), candidates.end(), 1);
        std::vector<std::size_t> sub_positions;
        std::sample(candidates.begin(), candidates.end(), std::back_inserter(sub_positions),
                    subs, rng);

        std::vector<std::uint8_t> substituted(len, 0);
        for (std::size_t p : sub_positions) substituted[p] = 1;

        pair.final_tokens.reserve(len - dels + ins);
        pair.final_tokens.emplace_back(pair.initial_tokens.front().surface);
        for (std::size_t k = 0; k < ins; ++k) {
            pair.final_tokens.emplace_back("a" + std::to_string(k));
        }
        for (std::size_t i = 1; i + 1 < len; ++i) {
            if (i >= delete_begin) continue;
            if (substituted[i]) {
                pair.final_tokens.emplace_back("r" + std::to_string(i));
            } else {
                pair.final_tokens.emplace_back(pair.initial_tokens[i].surface);
            }
        }
        pair.final_tokens.emplace_back(pair.initial_tokens.back().surface);

        const double rate = static_cast<double>(subs) / static_cast<double>(len);
        result.truth.applied.push_back(counts);
        result.truth.substitution_rates.push_back(rate);
        if (rate < 0.10) ++result.truth.n_minimally_edited;
        std::size_t bucket;
        if (rate == 0.0) {
            bucket = 0;
        } else if (rate < 0.05) {
            bucket = 1;
        } else if (rate < 0.10) {
            bucket = 2;
        } else {
            bucket = 3;
        }
        ++result.truth.segment_counts[bucket];

        result.pairs.push_back(std::move(pair));
    }
    return result;
}

SynthQcResult generate_qc_records(const QcInjectionProfile& profile) {
    if (profile.n_records == 0 || profile.terms_per_record == 0) {
        throw InfeasibleProfileError("profile requires records and terms");
    }
    if (profile.inaudible_per_record > profile.terms_per_record) {
        throw InfeasibleProfileError("more inaudible terms than terms per record");
    }
    const std::size_t audible_total = static_cast<std::size_t>(
        profile.n_records * (profile.terms_per_record - profile.inaudible_per_record));
    if (profile.corrupted_terms > audible_total) {
        throw InfeasibleProfileError("more corrupted terms than audible terms");
    }

    std::mt19937_64 rng(profile.seed);
    SynthQcResult result;
    result.truth.audible_terms = audible_total;
    result.truth.corrupted = static_cast<std::size_t>(profile.corrupted_terms);

    struct TermRef {
        std::size_t record;
        std::size_t term;
    };
    std::vector<TermRef> audible_refs;

    std::uint64_t filler_counter = 0;
    for (std::uint64_t r = 0; r < profile.n_records; ++r) {
        QcRecord record;
        record.record_id = padded_id("qc", r);

        std::vector<std::size_t> inaudible_picks;
        {
            std::vector<std::size_t> term_indices(profile.terms_per_record);
            std::iota(term_indices.begin(), term_indices.end(), 0);
            std::sample(term_indices.begin(), term_indices.end(),
                        std::back_inserter(inaudible_picks), profile.inaudible_per_record, rng);
        }
        std::vector<std::uint8_t> inaudible(profile.terms_per_record, 0);
        for (std::size_t t : inaudible_picks) inaudible[t] = 1;

        for (std::uint64_t t = 0; t < profile.terms_per_record; ++t) {
            record.reference.emplace_back("f" + std::to_string(filler_counter++));
            MedicalTermAnnotation term;
            term.term_id = record.record_id + "t" + std::to_string(t);
            term.start_index = record.reference.size();
            const std::size_t term_len = 1 + (rng() % 2);
            for (std::size_t k = 0; k < term_len; ++k) {
                std::string word = "m" + std::to_string(r) + "q" + std::to_string(t) + "k" +
                                   std::to_string(k);
                record.reference.emplace_back(word);
                term.tokens.emplace_back(std::move(word));
            }
            term.clearly_audible = inaudible[t] == 0;
            if (term.clearly_audible) {
                audible_refs.push_back({static_cast<std::size_t>(r), record.terms.size()});
            }
            record.terms.push_back(std::move(term));
        }
        record.reference.emplace_back("f" + std::to_string(filler_counter++));
        record.hypothesis = record.reference;
        result.records.push_back(std::move(record));
    }

    // Corrupt the sampled audible terms plus every inaudible term; the latter
    // must never move the metric.
    std::vector<TermRef> corrupt_picks;
    std::sample(audible_refs.begin(), audible_refs.end(), std::back_inserter(corrupt_picks),
                profile.corrupted_terms, rng);
    std::uint64_t corruption_counter = 0;
    auto corrupt_term = [&](QcRecord& record, const MedicalTermAnnotation& term) {
        const std::size_t offset = term.tokens.size() == 1 ? 0 : rng() % term.tokens.size();
        record.hypothesis[term.start_index + offset] =
            Token("z" + std::to_string(corruption_counter++));
    };
    for (const TermRef& ref : corrupt_picks) {
        corrupt_term(result.records[ref.record], result.records[ref.record].terms[ref.term]);
    }
    for (QcRecord& record : result.records) {
        for (const MedicalTermAnnotation& term : record.terms) {
            if (!term.clearly_audible) corrupt_term(record, term);
        }
    }
    return result;
}

std::string ground_truth_to_json(const std::optional<EntityGroundTruth>& entities,
                                 const std::optional<EditGroundTruth>& edits,
                                 const std::optional<QcGroundTruth>& qc) {
    ordered_json doc;
    doc["schema_version"] = 1;
    if (entities) {
        ordered_json section;
        section["n_relevant"] = entities->n_relevant;
        section["n_major_free"] = entities->n_major_free;
        section["n_critical_free"] = entities->n_critical_free;
        section["n_missing"] = entities->n_missing;
        section["n_captured"] = entities->n_captured;
        section["n_inaccurate"] = entities->n_inaccurate;
        section["mdfr"] = entities->mdfr();
        section["cdfr"] = entities->cdfr();
        section["mer"] = entities->mer();
        section["cer"] = entities->cer();
        if (entities->n_captured > 0) {
            section["ier"] = entities->ier();
            section["aer"] = entities->aer();
        } else {
            section["ier"] = nullptr;
            section["aer"] = nullptr;
        }
        doc["entities"] = std::move(section);
    }
    if (edits) {
        ordered_json section;
        section["n_notes"] = edits->n_notes;
        section["n_minimally_edited"] = edits->n_minimally_edited;
        section["mnr"] = edits->mnr();
        ordered_json segments;
        segments["zero"] = edits->segment_counts[0];
        segments["under_five"] = edits->segment_counts[1];
        segments["five_to_ten"] = edits->segment_counts[2];
        segments["ten_plus"] = edits->segment_counts[3];
        section["segment_counts"] = std::move(segments);
        doc["edits"] = std::move(section);
    }
    if (qc) {
        ordered_json section;
        section["audible_terms"] = qc->audible_terms;
        section["hits"] = qc->hits();
        section["mwhr"] = qc->mwhr();
        doc["qc"] = std::move(section);
    }
    if (entities && entities->n_captured > 0 && edits && qc) {
        ComponentMetrics components;
        components.mdfr = MetricValue{entities->mdfr(), "synthetic", entities->n_relevant};
        components.cdfr = MetricValue{entities->cdfr(), "synthetic", entities->n_relevant};
        components.cer = MetricValue{entities->cer(), "synthetic", entities->n_relevant};
        components.aer = MetricValue{entities->aer(), "synthetic", entities->n_captured};
        components.mnr = MetricValue{edits->mnr(), "synthetic", edits->n_notes};
        components.mwhr = MetricValue{qc->mwhr(), "synthetic", qc->audible_terms};
        doc["deep_score"] = compute_deepscore(components).value;
    }
    return doc.dump(2) + "\n";
}

OracleAlignment oracle_edit_distance(std::span<const Token> a, std::span<const Token> b) {
    if (a.size() > kOracleMaxLength || b.size() > kOracleMaxLength) {
        throw InputTooLargeError("oracle accepts at most " + std::to_string(kOracleMaxLength) +
                                 " tokens per side");
    }

    constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
    std::vector<std::vector<std::size_t>> memo(a.size() + 1,
                                               std::vector<std::size_t>(b.size() + 1, kUnset));

    // Cost of aligning the suffixes a[i:] and b[j:].
    auto solve = [&](auto&& self, std::size_t i, std::size_t j) -> std::size_t {
        std::size_t& slot = memo[i][j];
        if (slot != kUnset) return slot;
        std::size_t best;
        if (i == a.size()) {
            best = b.size() - j;
        } else if (j == b.size()) {
            best = a.size() - i;
        } else {
            const std::size_t pair_cost =
                (a[i].normalized == b[j].normalized ? 0 : 1) + self(self, i + 1, j + 1);
            const std::size_t drop_cost = 1 + self(self, i + 1, j);
            const std::size_t emit_cost = 1 + self(self, i, j + 1);
            best = std::min({pair_cost, drop_cost, emit_cost});
        }
        slot = best;
        return best;
    };

    auto cost_at = [&solve](std::size_t i, std::size_t j) { return solve(solve, i, j); };

    OracleAlignment result;
    result.cost = cost_at(0, 0);

    // Forward walk recovering one optimal op list, solving cells on demand.
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        const std::size_t here = cost_at(i, j);
        if (i < a.size() && j < b.size()) {
            const bool eq = a[i].normalized == b[j].normalized;
            if (here == (eq ? 0 : 1) + cost_at(i + 1, j + 1)) {
                if (eq) {
                    result.ops.push_back({EditOp::Keep, i, j});
                    ++result.keeps;
                } else {
                    result.ops.push_back({EditOp::Substitute, i, j});
                    ++result.substitutions;
                }
                ++i;
                ++j;
                continue;
            }
        }
        if (i < a.size() && here == 1 + cost_at(i + 1, j)) {
            result.ops.push_back({EditOp::Delete, i, std::nullopt});
            ++result.deletions;
            ++i;
            continue;
        }
        result.ops.push_back({EditOp::Insert, std::nullopt, j});
        ++result.insertions;
        ++j;
    }
    return result;
}

}  // namespace deepscore
