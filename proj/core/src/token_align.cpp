#include "deepscore/token_align.hpp"

#include <algorithm>
#include <cctype>

namespace deepscore {

namespace {

bool is_ascii_punct(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return u < 0x80 && std::ispunct(u) != 0;
}

bool is_ascii_space(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return u < 0x80 && std::isspace(u) != 0;
}

std::string_view strip_outer_punct(std::string_view piece) {
    while (!piece.empty() && is_ascii_punct(piece.front())) piece.remove_prefix(1);
    while (!piece.empty() && is_ascii_punct(piece.back())) piece.remove_suffix(1);
    return piece;
}

}  // namespace

std::string normalize_word(std::string_view word) {
    std::string_view stripped = strip_outer_punct(word);
    std::string out;
    out.reserve(stripped.size());
    for (char c : stripped) {
        unsigned char u = static_cast<unsigned char>(c);
        out.push_back(u < 0x80 ? static_cast<char>(std::tolower(u)) : c);
    }
    return out;
}

Token::Token(std::string surface_text)
    : surface(std::move(surface_text)), normalized(normalize_word(surface)) {
    if (surface.empty()) throw Error("token surface must be non-empty");
}

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_ascii_space(text[i])) ++i;
        std::size_t start = i;
        while (i < text.size() && !is_ascii_space(text[i])) ++i;
        if (i == start) continue;
        std::string_view piece = strip_outer_punct(text.substr(start, i - start));
        if (!piece.empty()) tokens.emplace_back(std::string(piece));
    }
    return tokens;
}

std::string_view to_string(EditOp op) {
    switch (op) {
        case EditOp::Keep: return "keep";
        case EditOp::Substitute: return "substitute";
        case EditOp::Delete: return "delete";
        default: return "insert";
    }
}

std::size_t Alignment::count(EditOp op) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(ops.begin(), ops.end(),
                      [op](const AlignmentOp& step) { return step.op == op; }));
}

Alignment align(std::span<const Token> a, std::span<const Token> b) {
    const std::size_t m = a.size();
    const std::size_t n = b.size();

    // Full table retained for the traceback; notes are short documents.
    std::vector<std::size_t> dp((m + 1) * (n + 1));
    auto at = [&dp, n](std::size_t i, std::size_t j) -> std::size_t& {
        return dp[i * (n + 1) + j];
    };

    for (std::size_t i = 0; i <= m; ++i) at(i, 0) = i;
    for (std::size_t j = 0; j <= n; ++j) at(0, j) = j;
    for (std::size_t i = 1; i <= m; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            bool eq = a[i - 1].normalized == b[j - 1].normalized;
            std::size_t diag = at(i - 1, j - 1) + (eq ? 0 : 1);
            std::size_t best = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
            at(i, j) = best;
        }
    }

    Alignment result;
    result.cost = at(m, n);
    result.ops.reserve(std::max(m, n));

    // Backward traceback; tie order Keep > Substitute > Delete > Insert.
    std::size_t i = m;
    std::size_t j = n;
    while (i > 0 || j > 0) {
        bool eq = i > 0 && j > 0 && a[i - 1].normalized == b[j - 1].normalized;
        if (i > 0 && j > 0 && eq && at(i, j) == at(i - 1, j - 1)) {
            result.ops.push_back({EditOp::Keep, i - 1, j - 1});
            --i;
            --j;
        } else if (i > 0 && j > 0 && !eq && at(i, j) == at(i - 1, j - 1) + 1) {
            result.ops.push_back({EditOp::Substitute, i - 1, j - 1});
            --i;
            --j;
        } else if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
            result.ops.push_back({EditOp::Delete, i - 1, std::nullopt});
            --i;
        } else {
            result.ops.push_back({EditOp::Insert, std::nullopt, j - 1});
            --j;
        }
    }
    std::reverse(result.ops.begin(), result.ops.end());
    return result;
}

}  // namespace deepscore
