#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "deepscore/token_align.hpp"

namespace deepscore {

/// One annotated medical-term occurrence in a reference transcript. tokens
/// must reproduce the reference stream starting at start_index; a term spoken
/// several times carries one annotation per occurrence.
struct MedicalTermAnnotation {
    std::string term_id;
    std::size_t start_index = 0;
    std::vector<Token> tokens;
    bool clearly_audible = true;

    bool operator==(const MedicalTermAnnotation& other) const = default;
};

/// Reference transcript with term annotations plus the ASR hypothesis.
struct QcRecord {
    std::string record_id;
    std::vector<Token> reference;
    std::vector<Token> hypothesis;
    std::vector<MedicalTermAnnotation> terms;

    bool operator==(const QcRecord& other) const = default;
};

/// Checks each annotation against the reference stream (bounds, non-empty,
/// normalized token match). Throws ValidationError with all violations.
void validate_qc_record(const QcRecord& record);

/// A term that failed transcription and what the hypothesis put in its place
/// (substituted surfaces only; dropped words contribute nothing).
struct TermMiss {
    std::string record_id;
    std::string term_id;
    std::vector<std::string> hypothesis_tokens;

    bool operator==(const TermMiss& other) const = default;
};

struct MwhrResult {
    std::size_t hits = 0;
    std::size_t audible_terms = 0;
    double mwhr = 0.0;
    std::vector<TermMiss> misses;
};

/// Medical Word Hit Rate pooled across records: a clearly audible term is a
/// hit iff every one of its reference positions lands on a Keep op in the
/// record's alignment. Terms with clearly_audible=false are ignored entirely.
/// Throws NoAudibleTermsError when no record has an audible term.
MwhrResult compute_mwhr(std::span<const QcRecord> records, unsigned jobs = 1);

}  // namespace deepscore
