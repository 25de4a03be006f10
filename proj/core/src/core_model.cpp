#include "deepscore/core_model.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace deepscore {

namespace {

std::string join_issues(const std::vector<InputIssue>& issues) {
    std::ostringstream out;
    out << issues.size() << (issues.size() == 1 ? " input error" : " input errors");
    for (const auto& issue : issues) {
        out << "\n  " << issue.file;
        if (issue.line > 0) out << ":" << issue.line;
        out << ": " << issue.message;
    }
    return out.str();
}

std::string join_issues(const std::vector<ValidationIssue>& issues) {
    std::ostringstream out;
    out << issues.size() << (issues.size() == 1 ? " validation error" : " validation errors");
    for (const auto& issue : issues) out << "\n  " << issue.message;
    return out.str();
}

}  // namespace

ParseError::ParseError(std::vector<InputIssue> issues)
    : Error(join_issues(issues)), issues_(std::move(issues)) {}

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : Error(join_issues(issues)), issues_(std::move(issues)) {}

bool ValidationError::has(ValidationCode code) const noexcept {
    return std::any_of(issues_.begin(), issues_.end(),
                       [code](const ValidationIssue& issue) { return issue.code == code; });
}

Severity::Severity(int level) : level_(level) {
    if (level < kMinSeverityLevel || level > kMaxSeverityLevel) {
        throw OutOfRangeError("severity level " + std::to_string(level) + " outside 1..5");
    }
}

std::string_view Severity::label() const noexcept {
    switch (level_) {
        case 1: return "Low";
        case 2: return "Mild";
        case 3: return "Moderate";
        case 4: return "Major";
        default: return "Critical";
    }
}

Severity severity_from_level(int level) { return Severity(level); }

DefectKind DefectKind::missing_information() {
    return DefectKind(Tag::MissingInformation, std::string(kMissingInformationName));
}

DefectKind DefectKind::inaccurate() {
    return DefectKind(Tag::Inaccurate, std::string(kInaccurateName));
}

DefectKind DefectKind::other(std::string label) {
    if (label.empty()) throw Error("Other defect kind requires a non-empty label");
    if (label == kMissingInformationName || label == kInaccurateName) {
        throw Error("Other defect kind label '" + label + "' shadows a canonical kind");
    }
    return DefectKind(Tag::Other, std::move(label));
}

DefectKind DefectKind::from_string(std::string_view text) {
    if (text == kMissingInformationName) return missing_information();
    if (text == kInaccurateName) return inaccurate();
    return other(std::string(text));
}

bool AuditedEntity::has_defect_at_least(int level) const noexcept {
    return std::any_of(defects.begin(), defects.end(),
                       [level](const Defect& d) { return d.severity.level() >= level; });
}

std::vector<AuditedEntity> collect_audited_entities(const TestSet& set) {
    std::vector<AuditedEntity> out;
    for (const auto& encounter : set.encounters) {
        out.insert(out.end(), encounter.entities.begin(), encounter.entities.end());
    }
    return out;
}

TestSet validate_test_set(TestSet raw) {
    std::vector<ValidationIssue> issues;

    std::size_t n_entities = 0;
    for (const auto& encounter : raw.encounters) n_entities += encounter.entities.size();

    if (raw.encounters.empty() || n_entities == 0) {
        issues.push_back({ValidationCode::EmptyTestSet,
                          "test set '" + raw.set_id + "' holds no audited entities"});
        throw ValidationError(std::move(issues));
    }

    std::unordered_set<std::string> encounter_ids;
    std::unordered_set<std::string> entity_ids;
    std::unordered_set<std::string> snippet_ids;
    // entity id -> owning encounter id, for linked_entity scope checks
    std::unordered_map<std::string, const Encounter*> entity_owner;

    for (const auto& encounter : raw.encounters) {
        if (!encounter_ids.insert(encounter.encounter_id).second) {
            issues.push_back({ValidationCode::DuplicateId,
                              "duplicate encounter_id '" + encounter.encounter_id + "'"});
        }
        for (const auto& audited : encounter.entities) {
            const Entity& entity = audited.entity;
            if (!entity_ids.insert(entity.entity_id).second) {
                issues.push_back({ValidationCode::DuplicateId,
                                  "duplicate entity_id '" + entity.entity_id + "'"});
            } else {
                entity_owner.emplace(entity.entity_id, &encounter);
            }
            if (entity.text.empty()) {
                issues.push_back({ValidationCode::InvalidField,
                                  "entity '" + entity.entity_id + "' has empty text"});
            }
        }
    }

    for (const auto& encounter : raw.encounters) {
        for (const auto& snippet : encounter.snippets) {
            if (!snippet_ids.insert(snippet.snippet_id).second) {
                issues.push_back({ValidationCode::DuplicateId,
                                  "duplicate snippet_id '" + snippet.snippet_id + "'"});
            }
            if (snippet.note_id != encounter.encounter_id) {
                issues.push_back({ValidationCode::DanglingReference,
                                  "snippet '" + snippet.snippet_id + "' carries note_id '" +
                                      snippet.note_id + "' but sits in encounter '" +
                                      encounter.encounter_id + "'"});
            }
            if (snippet.linked_entity) {
                auto found = entity_owner.find(*snippet.linked_entity);
                if (found == entity_owner.end()) {
                    issues.push_back({ValidationCode::DanglingReference,
                                      "snippet '" + snippet.snippet_id + "' links to unknown entity '" +
                                          *snippet.linked_entity + "'"});
                } else if (found->second->encounter_id != encounter.encounter_id) {
                    issues.push_back({ValidationCode::DanglingReference,
                                      "snippet '" + snippet.snippet_id + "' links to entity '" +
                                          *snippet.linked_entity + "' from a different encounter"});
                }
            }
        }
    }

    if (!issues.empty()) throw ValidationError(std::move(issues));
    return raw;
}

}  // namespace deepscore
