#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "deepscore/errors.hpp"

namespace deepscore {

/// A word as it appears in text plus the form used for comparisons.
/// normalized is a pure function of surface: outer punctuation stripped,
/// ASCII letters lowercased. Intra-word hyphens and apostrophes survive.
struct Token {
    std::string surface;
    std::string normalized;

    /// Throws Error on an empty surface.
    explicit Token(std::string surface_text);

    bool operator==(const Token& other) const = default;
};

/// Comparison form of a word: leading/trailing ASCII punctuation stripped,
/// ASCII letters lowercased. Bytes outside ASCII pass through untouched.
std::string normalize_word(std::string_view word);

/// Splits on whitespace, strips outer punctuation from each piece, and drops
/// pieces that strip to nothing. Empty text yields an empty list.
std::vector<Token> tokenize(std::string_view text);

enum class EditOp { Keep, Substitute, Delete, Insert };

std::string_view to_string(EditOp op);

/// One step of an alignment. Keep/Substitute pair a position in A with one in
/// B; Delete touches only A, Insert only B.
struct AlignmentOp {
    EditOp op;
    std::optional<std::size_t> a_index;
    std::optional<std::size_t> b_index;

    bool operator==(const AlignmentOp& other) const = default;
};

/// A minimal-unit-cost word alignment. cost equals the Levenshtein distance
/// of the normalized sequences; keeps are free, everything else costs 1.
struct Alignment {
    std::vector<AlignmentOp> ops;
    std::size_t cost = 0;

    std::size_t count(EditOp op) const noexcept;
};

/// Minimal-cost alignment of the two token sequences, compared by normalized
/// form. Ties in the traceback resolve Keep > Substitute > Delete > Insert,
/// so repeated calls return identical op lists.
Alignment align(std::span<const Token> a, std::span<const Token> b);

}  // namespace deepscore
