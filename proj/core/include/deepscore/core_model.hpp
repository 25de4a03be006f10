#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "deepscore/errors.hpp"

namespace deepscore {

inline constexpr int kMinSeverityLevel = 1;
inline constexpr int kMaxSeverityLevel = 5;
/// Severity at or above which a defect counts as Major.
inline constexpr int kMajorSeverityLevel = 4;
inline constexpr int kCriticalSeverityLevel = 5;

/// Defect severity on the 1..5 scale: Low, Mild, Moderate, Major, Critical.
/// Ordered by level; 4 and 5 are the patient-safety-relevant band.
class Severity {
public:
    /// Throws OutOfRangeError for levels outside 1..5.
    explicit Severity(int level);

    int level() const noexcept { return level_; }
    std::string_view label() const noexcept;

    auto operator<=>(const Severity& other) const noexcept { return level_ <=> other.level_; }
    bool operator==(const Severity& other) const noexcept = default;

private:
    int level_;
};

/// Maps a numeric severity level to its labeled Severity.
Severity severity_from_level(int level);

/// Classification of a defect. MissingInformation and Inaccurate are the two
/// kinds the funnel metrics consult; any other annotation survives ingestion
/// as Other(label) and only participates in the severity-based rates.
class DefectKind {
public:
    static DefectKind missing_information();
    static DefectKind inaccurate();
    /// label must be non-empty and must not shadow a canonical kind name.
    static DefectKind other(std::string label);
    /// Canonical names map to their kinds; any other string becomes Other.
    static DefectKind from_string(std::string_view text);

    bool is_missing_information() const noexcept { return tag_ == Tag::MissingInformation; }
    bool is_inaccurate() const noexcept { return tag_ == Tag::Inaccurate; }
    bool is_other() const noexcept { return tag_ == Tag::Other; }

    /// Canonical name ("missing_information", "inaccurate") or the Other label.
    const std::string& label() const noexcept { return label_; }

    bool operator==(const DefectKind& other) const noexcept = default;

private:
    enum class Tag { MissingInformation, Inaccurate, Other };

    DefectKind(Tag tag, std::string label) : tag_(tag), label_(std::move(label)) {}

    Tag tag_;
    std::string label_;
};

inline constexpr std::string_view kMissingInformationName = "missing_information";
inline constexpr std::string_view kInaccurateName = "inaccurate";

/// A classified discrepancy between a test note and its rubric.
struct Defect {
    DefectKind kind;
    Severity severity;
    std::string note;  // optional annotation, empty when absent

    bool operator==(const Defect& other) const = default;
};

/// A key piece of medically relevant content parsed from a rubric.
struct Entity {
    std::string entity_id;
    std::string rubric_id;
    std::string text;
    bool medically_relevant = true;

    bool operator==(const Entity& other) const = default;
};

/// A piece of content in the AI test note, ideally linked to a rubric entity.
struct Snippet {
    std::string snippet_id;
    std::string note_id;
    std::string text;
    std::optional<std::string> linked_entity;

    bool operator==(const Snippet& other) const = default;
};

/// A rubric entity together with the defects the audit attached to it.
/// An empty defect list means the entity is defect-free.
struct AuditedEntity {
    Entity entity;
    std::vector<Defect> defects;

    bool defect_free() const noexcept { return defects.empty(); }
    /// True when any defect has severity >= level.
    bool has_defect_at_least(int level) const noexcept;

    bool operator==(const AuditedEntity& other) const = default;
};

/// One audited clinician-patient interaction: the rubric entities for the
/// encounter plus the snippets identified in its test note. The test note is
/// keyed by the encounter id (one note per encounter).
struct Encounter {
    std::string encounter_id;
    std::vector<AuditedEntity> entities;
    std::vector<Snippet> snippets;

    bool operator==(const Encounter& other) const = default;
};

struct TestSetMeta {
    std::string source_label;
    std::string date_range;

    bool operator==(const TestSetMeta& other) const = default;
};

/// The full collection of audited encounters that entity metrics pool over.
struct TestSet {
    std::string set_id;
    std::vector<Encounter> encounters;
    TestSetMeta meta;

    bool operator==(const TestSet& other) const = default;
};

/// Flattens every audited entity in the set, in encounter order.
std::vector<AuditedEntity> collect_audited_entities(const TestSet& set);

/// Checks every cross-reference and uniqueness invariant of a test set and
/// returns it unchanged when valid. Throws ValidationError carrying all
/// violations found (DanglingReference, DuplicateId, EmptyTestSet, ...).
/// Idempotent: a valid set validates to an equal set.
TestSet validate_test_set(TestSet raw);

}  // namespace deepscore
