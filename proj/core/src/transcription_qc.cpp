#include "deepscore/transcription_qc.hpp"

#include <optional>

#include "parallel.hpp"

namespace deepscore {

void validate_qc_record(const QcRecord& record) {
    std::vector<ValidationIssue> issues;
    for (const auto& term : record.terms) {
        if (term.tokens.empty()) {
            issues.push_back({ValidationCode::InvalidField,
                              "term '" + term.term_id + "' in record '" + record.record_id +
                                  "' has no tokens"});
            continue;
        }
        if (term.start_index + term.tokens.size() > record.reference.size()) {
            issues.push_back({ValidationCode::InconsistentAnnotation,
                              "term '" + term.term_id + "' in record '" + record.record_id +
                                  "' overruns the reference transcript"});
            continue;
        }
        for (std::size_t k = 0; k < term.tokens.size(); ++k) {
            if (term.tokens[k].normalized != record.reference[term.start_index + k].normalized) {
                issues.push_back({ValidationCode::InconsistentAnnotation,
                                  "term '" + term.term_id + "' in record '" + record.record_id +
                                      "' does not match the reference at position " +
                                      std::to_string(term.start_index + k)});
                break;
            }
        }
    }
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

namespace {

struct RecordScore {
    std::size_t hits = 0;
    std::size_t audible = 0;
    std::vector<TermMiss> misses;
};

RecordScore score_record(const QcRecord& record) {
    Alignment alignment = align(record.reference, record.hypothesis);

    // reference position -> op that consumed it
    std::vector<const AlignmentOp*> by_ref_pos(record.reference.size(), nullptr);
    for (const AlignmentOp& op : alignment.ops) {
        if (op.a_index) by_ref_pos[*op.a_index] = &op;
    }

    RecordScore score;
    for (const auto& term : record.terms) {
        if (!term.clearly_audible) continue;
        ++score.audible;
        bool hit = true;
        std::vector<std::string> replacement;
        for (std::size_t k = 0; k < term.tokens.size(); ++k) {
            const AlignmentOp* op = by_ref_pos[term.start_index + k];
            if (op == nullptr || op->op != EditOp::Keep) {
                hit = false;
                if (op != nullptr && op->op == EditOp::Substitute) {
                    replacement.push_back(record.hypothesis[*op->b_index].surface);
                }
            }
        }
        if (hit) {
            ++score.hits;
        } else {
            score.misses.push_back({record.record_id, term.term_id, std::move(replacement)});
        }
    }
    return score;
}

}  // namespace

MwhrResult compute_mwhr(std::span<const QcRecord> records, unsigned jobs) {
    std::vector<RecordScore> scores(records.size());
    detail::parallel_for(records.size(), jobs, [&](std::size_t i) {
        validate_qc_record(records[i]);
        scores[i] = score_record(records[i]);
    });

    MwhrResult result;
    for (RecordScore& score : scores) {
        result.hits += score.hits;
        result.audible_terms += score.audible;
        for (auto& miss : score.misses) result.misses.push_back(std::move(miss));
    }
    if (result.audible_terms == 0) {
        throw NoAudibleTermsError("MWHR undefined: no clearly audible terms in the sample");
    }
    result.mwhr = static_cast<double>(result.hits) / static_cast<double>(result.audible_terms);
    return result;
}

}  // namespace deepscore
