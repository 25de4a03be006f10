#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "deepscore/core_model.hpp"
#include "deepscore/edit_metrics.hpp"
#include "deepscore/transcription_qc.hpp"

namespace deepscore {

/// Record formats are UTF-8 JSON Lines; every record carries a "kind"
/// discriminator and a schema_version (currently 1, assumed when absent).
inline constexpr int kSchemaVersion = 1;

inline constexpr std::string_view kEntitiesFileName = "entities.jsonl";
inline constexpr std::string_view kSnippetsFileName = "snippets.jsonl";
inline constexpr std::string_view kEditsFileName = "edits.jsonl";
inline constexpr std::string_view kQcFileName = "qc.jsonl";
inline constexpr std::string_view kScorecardFileName = "scorecard.json";
inline constexpr std::string_view kGroundTruthFileName = "ground_truth.json";

struct BundlePaths {
    std::optional<std::filesystem::path> entities;
    std::optional<std::filesystem::path> snippets;
    std::optional<std::filesystem::path> edits;
    std::optional<std::filesystem::path> qc;

    bool any() const noexcept { return entities || snippets || edits || qc; }

    /// entities/snippets/edits/qc .jsonl files found under dir; missing files
    /// simply leave their section disabled.
    static BundlePaths from_directory(const std::filesystem::path& dir);
};

struct BundleMeta {
    std::string label;
    std::string date;

    bool operator==(const BundleMeta& other) const = default;
};

/// Everything one evaluation run may consume. Sections are independent; at
/// least one must be present.
struct DatasetBundle {
    std::optional<TestSet> test_set;
    std::optional<std::vector<NoteEditPair>> edit_pairs;
    std::optional<std::vector<QcRecord>> qc_records;
    std::string edits_source;  // provenance labels for scorecard rows
    std::string qc_source;
    BundleMeta meta;
};

/// Parses and validates every requested section. Parse problems across all
/// files are reported together as one ParseError with file/line locations;
/// cross-reference problems surface as ValidationError.
DatasetBundle load_bundle(const BundlePaths& paths, BundleMeta meta = {});

/// JSONL emission, one record per line, stable key order. Loading emitted
/// text reproduces the in-memory data field for field.
std::string entities_to_jsonl(const TestSet& set);
std::string snippets_to_jsonl(const TestSet& set);
std::string edit_pairs_to_jsonl(std::span<const NoteEditPair> pairs);
std::string qc_records_to_jsonl(std::span<const QcRecord> records);

/// Writes each present section under dir using the standard file names and
/// returns the paths it wrote.
BundlePaths write_bundle(const DatasetBundle& bundle, const std::filesystem::path& dir);

}  // namespace deepscore
