#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "deepscore/core_model.hpp"
#include "deepscore/edit_metrics.hpp"
#include "deepscore/transcription_qc.hpp"

namespace deepscore {

/// Exact defect injections, assigned to disjoint entity subsets so every
/// ground-truth rate is a plain count ratio.
struct InjectionCounts {
    std::uint64_t other_major = 0;       // Other kind, severity 4: hits MDFR only
    std::uint64_t other_critical = 0;    // Other kind, severity 5: hits MDFR and CDFR
    std::uint64_t missing_major = 0;     // MissingInformation, severity 4: hits MDFR and CER
    std::uint64_t inaccurate_major = 0;  // Inaccurate, severity 4: hits MDFR and AER
};

/// Either exact_counts (the primary mode; acceptance asserts equality) or
/// independent per-entity Bernoulli draws with the four probabilities.
struct InjectionProfile {
    std::uint64_t n_entities = 0;
    double p_major_defect = 0.0;
    double p_critical_defect = 0.0;
    double p_missing_major = 0.0;
    double p_inaccurate_major = 0.0;
    std::optional<InjectionCounts> exact_counts;
    std::uint64_t seed = 0;
};

/// Counts implied by construction. Fraction accessors use the same integer
/// divisions as the metric modules, so recovery checks can demand equality.
struct EntityGroundTruth {
    std::size_t n_relevant = 0;
    std::size_t n_major_free = 0;
    std::size_t n_critical_free = 0;
    std::size_t n_missing = 0;
    std::size_t n_captured = 0;
    std::size_t n_inaccurate = 0;

    double mdfr() const { return static_cast<double>(n_major_free) / static_cast<double>(n_relevant); }
    double cdfr() const { return static_cast<double>(n_critical_free) / static_cast<double>(n_relevant); }
    double mer() const { return static_cast<double>(n_missing) / static_cast<double>(n_relevant); }
    double cer() const { return 1.0 - mer(); }
    double ier() const { return static_cast<double>(n_inaccurate) / static_cast<double>(n_captured); }
    double aer() const { return 1.0 - ier(); }
};

struct SynthAuditResult {
    TestSet test_set;
    EntityGroundTruth truth;
};

/// Deterministic under (profile, seed). Throws InfeasibleProfileError when
/// exact counts exceed n_entities or a probability leaves [0, 1].
SynthAuditResult generate_audited_set(const InjectionProfile& profile);

struct EditCounts {
    std::uint32_t substitutions = 0;
    std::uint32_t insertions = 0;
    std::uint32_t deletions = 0;
};

/// Notes are built from tokens that are all distinct within a note, which
/// makes the minimal alignment's op counts equal the injected counts. When a
/// note mixes insertions and deletions, substitutions + deletions must leave
/// at least one interior token untouched (<= note_length - 3) so a deletion
/// can never merge with an insertion into a cheaper substitution.
struct EditInjectionProfile {
    std::uint64_t n_notes = 0;
    std::uint64_t note_length = 0;
    /// One entry applied to every note, or one entry per note.
    std::vector<EditCounts> per_note;
    std::uint64_t seed = 0;
};

/// Profile producing the classic substitution-rate mix: counts of notes in
/// the Zero / UnderFive / FiveToTen / TenPlus buckets. note_length must keep
/// the bucket boundaries honest (default 25: 1 sub = 4%, 2 = 8%, 3 = 12%).
EditInjectionProfile segment_population_profile(std::size_t zero, std::size_t under_five,
                                                std::size_t five_to_ten, std::size_t ten_plus,
                                                std::uint64_t note_length = 25,
                                                std::uint64_t seed = 0);

struct EditGroundTruth {
    std::size_t n_notes = 0;
    std::vector<EditCounts> applied;            // per note, in order
    std::vector<double> substitution_rates;     // substitutions / note_length
    std::size_t n_minimally_edited = 0;
    std::array<std::size_t, kSegmentCount> segment_counts{};

    double mnr() const { return static_cast<double>(n_minimally_edited) / static_cast<double>(n_notes); }
};

struct SynthEditsResult {
    std::vector<NoteEditPair> pairs;
    EditGroundTruth truth;
};

SynthEditsResult generate_edit_pairs(const EditInjectionProfile& profile);

/// Reference transcripts with annotated terms; corrupted_terms audible terms
/// (pooled across records) get one token mis-transcribed. Inaudible terms are
/// always corrupted too, since they must not move the metric.
struct QcInjectionProfile {
    std::uint64_t n_records = 0;
    std::uint64_t terms_per_record = 0;
    std::uint64_t corrupted_terms = 0;
    std::uint64_t inaudible_per_record = 0;
    std::uint64_t seed = 0;
};

struct QcGroundTruth {
    std::size_t audible_terms = 0;
    std::size_t corrupted = 0;

    std::size_t hits() const { return audible_terms - corrupted; }
    double mwhr() const { return static_cast<double>(hits()) / static_cast<double>(audible_terms); }
};

struct SynthQcResult {
    std::vector<QcRecord> records;
    QcGroundTruth truth;
};

SynthQcResult generate_qc_records(const QcInjectionProfile& profile);

/// Sidecar document describing a generated corpus; sections mirror whatever
/// was generated. Includes the implied DeepScore when all six rates exist.
std::string ground_truth_to_json(const std::optional<EntityGroundTruth>& entities,
                                 const std::optional<EditGroundTruth>& edits,
                                 const std::optional<QcGroundTruth>& qc);

inline constexpr std::size_t kOracleMaxLength = 12;

struct OracleAlignment {
    std::size_t cost = 0;
    std::size_t keeps = 0;
    std::size_t substitutions = 0;
    std::size_t deletions = 0;
    std::size_t insertions = 0;
    std::vector<AlignmentOp> ops;
};

/// Exhaustive memoized recursion over all alignments, written apart from the
/// production dynamic program; the verification oracle for align(). Throws
/// InputTooLargeError beyond kOracleMaxLength tokens per side.
OracleAlignment oracle_edit_distance(std::span<const Token> a, std::span<const Token> b);

}  // namespace deepscore
