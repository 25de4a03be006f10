#include "deepscore/edit_metrics.hpp"

#include "parallel.hpp"

namespace deepscore {

NoteEditPair make_edit_pair(std::string note_id, std::string_view initial_text,
                            std::string_view final_text) {
    return NoteEditPair{std::move(note_id), tokenize(initial_text), tokenize(final_text)};
}

EditBreakdown edit_breakdown(const NoteEditPair& pair) {
    Alignment alignment = align(pair.initial_tokens, pair.final_tokens);

    EditBreakdown b;
    b.n_initial = pair.initial_tokens.size();
    b.n_final = pair.final_tokens.size();
    b.added = alignment.count(EditOp::Insert);
    b.deleted = alignment.count(EditOp::Delete);
    b.substituted = alignment.count(EditOp::Substitute);
    b.kept = alignment.count(EditOp::Keep);
    if (b.n_final > 0) {
        b.words_added_rate = static_cast<double>(b.added) / static_cast<double>(b.n_final);
    }
    if (b.n_initial > 0) {
        b.words_deleted_rate = static_cast<double>(b.deleted) / static_cast<double>(b.n_initial);
        b.words_substituted_rate =
            static_cast<double>(b.substituted) / static_cast<double>(b.n_initial);
    }
    return b;
}

std::string_view to_string(SubstitutionSegment segment) {
    switch (segment) {
        case SubstitutionSegment::Zero: return "zero";
        case SubstitutionSegment::UnderFive: return "under_five";
        case SubstitutionSegment::FiveToTen: return "five_to_ten";
        default: return "ten_plus";
    }
}

SubstitutionSegment segment_of(double rate) {
    if (!(rate >= 0.0) || rate > 1.0) {
        throw OutOfRangeError("substitution rate " + std::to_string(rate) + " outside [0, 1]");
    }
    if (rate == 0.0) return SubstitutionSegment::Zero;
    if (rate < 0.05) return SubstitutionSegment::UnderFive;
    if (rate < 0.10) return SubstitutionSegment::FiveToTen;
    return SubstitutionSegment::TenPlus;
}

MnrResult compute_mnr(std::span<const NoteEditPair> pairs, unsigned jobs) {
    if (pairs.empty()) throw EmptyInputError("MNR undefined: empty note population");

    std::vector<double> rates(pairs.size());
    detail::parallel_for(pairs.size(), jobs, [&](std::size_t i) {
        rates[i] = edit_breakdown(pairs[i]).words_substituted_rate;
    });

    MnrResult result;
    result.n_notes = pairs.size();
    for (double rate : rates) {
        if (rate < 0.10) ++result.n_minimally_edited;
        ++result.segment_counts[static_cast<std::size_t>(segment_of(rate))];
    }
    result.mnr = static_cast<double>(result.n_minimally_edited) /
                 static_cast<double>(result.n_notes);
    for (std::size_t s = 0; s < kSegmentCount; ++s) {
        result.segment_shares[s] = static_cast<double>(result.segment_counts[s]) /
                                   static_cast<double>(result.n_notes);
    }
    return result;
}

}  // namespace deepscore
