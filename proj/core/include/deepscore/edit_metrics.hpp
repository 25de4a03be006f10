#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "deepscore/token_align.hpp"

namespace deepscore {

/// The AI draft of one note next to the version the user signed.
struct NoteEditPair {
    std::string note_id;
    std::vector<Token> initial_tokens;  // AI draft
    std::vector<Token> final_tokens;    // user-signed note

    bool operator==(const NoteEditPair& other) const = default;
};

/// Tokenizes both sides of a note edit.
NoteEditPair make_edit_pair(std::string note_id, std::string_view initial_text,
                            std::string_view final_text);

/// Word-level edit counts for one note. Deleted and substituted rates are
/// over the initial draft, added over the final note; an empty denominator
/// pins the rate at 0.
struct EditBreakdown {
    std::size_t n_initial = 0;
    std::size_t n_final = 0;
    std::size_t added = 0;
    std::size_t deleted = 0;
    std::size_t substituted = 0;
    std::size_t kept = 0;
    double words_added_rate = 0.0;
    double words_deleted_rate = 0.0;
    double words_substituted_rate = 0.0;

    bool operator==(const EditBreakdown& other) const = default;
};

EditBreakdown edit_breakdown(const NoteEditPair& pair);

/// Substitution-rate buckets. Zero is exactly 0; UnderFive is (0, 0.05);
/// FiveToTen is [0.05, 0.10); TenPlus is [0.10, 1]. The first three buckets
/// together are the minimally-edited population.
enum class SubstitutionSegment { Zero, UnderFive, FiveToTen, TenPlus };

inline constexpr std::size_t kSegmentCount = 4;
inline constexpr std::array<SubstitutionSegment, kSegmentCount> kAllSegments = {
    SubstitutionSegment::Zero, SubstitutionSegment::UnderFive,
    SubstitutionSegment::FiveToTen, SubstitutionSegment::TenPlus};

std::string_view to_string(SubstitutionSegment segment);

/// Throws OutOfRangeError outside [0, 1].
SubstitutionSegment segment_of(double rate);

/// Minimally-Edited Note Rate over a note population, one note one sample.
struct MnrResult {
    std::size_t n_notes = 0;
    std::size_t n_minimally_edited = 0;  // substitution rate < 0.10
    double mnr = 0.0;
    std::array<std::size_t, kSegmentCount> segment_counts{};
    std::array<double, kSegmentCount> segment_shares{};

    std::size_t count(SubstitutionSegment segment) const noexcept {
        return segment_counts[static_cast<std::size_t>(segment)];
    }
    double share(SubstitutionSegment segment) const noexcept {
        return segment_shares[static_cast<std::size_t>(segment)];
    }

    bool operator==(const MnrResult& other) const = default;
};

/// Throws EmptyInputError on an empty population. Per-note breakdowns run in
/// parallel when jobs > 1; the result does not depend on jobs.
MnrResult compute_mnr(std::span<const NoteEditPair> pairs, unsigned jobs = 1);

}  // namespace deepscore
