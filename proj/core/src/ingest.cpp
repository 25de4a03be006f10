#include "deepscore/ingest.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace deepscore {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
    return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string join_surfaces(std::span<const Token> tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) out += ' ';
        out += tokens[i].surface;
    }
    return out;
}

// Field access over one parsed record; every problem lands in the issue list
// with the record's file and line.
class FieldReader {
public:
    FieldReader(const json& obj, const std::string& file, std::size_t line,
                std::vector<InputIssue>& issues)
        : obj_(obj), file_(file), line_(line), issues_(issues) {}

    std::optional<std::string> string_field(const char* key, bool required) {
        const json* value = find(key, required);
        if (value == nullptr) return std::nullopt;
        if (!value->is_string()) {
            fail(key, "a string");
            return std::nullopt;
        }
        return value->get<std::string>();
    }

    std::optional<std::int64_t> int_field(const char* key, bool required) {
        const json* value = find(key, required);
        if (value == nullptr) return std::nullopt;
        if (!value->is_number_integer()) {
            fail(key, "an integer");
            return std::nullopt;
        }
        return value->get<std::int64_t>();
    }

    bool bool_field(const char* key, bool fallback) {
        const json* value = find(key, false);
        if (value == nullptr) return fallback;
        if (!value->is_boolean()) {
            fail(key, "a boolean");
            return fallback;
        }
        return value->get<bool>();
    }

    const json* array_field(const char* key, bool required) {
        const json* value = find(key, required);
        if (value == nullptr) return nullptr;
        if (!value->is_array()) {
            fail(key, "an array");
            return nullptr;
        }
        return value;
    }

    void issue(const std::string& message) {
        issues_.push_back({file_, line_, message});
        ok_ = false;
    }

    bool ok() const noexcept { return ok_; }

private:
    const json* find(const char* key, bool required) {
        auto it = obj_.find(key);
        if (it == obj_.end() || it->is_null()) {
            if (required) issue(std::string("missing field '") + key + "'");
            return nullptr;
        }
        return &*it;
    }

    void fail(const char* key, const char* expected) {
        issue(std::string("field '") + key + "' must be " + expected);
    }

    const json& obj_;
    const std::string& file_;
    std::size_t line_;
    std::vector<InputIssue>& issues_;
    bool ok_ = true;
};

struct RawEntityRecord {
    std::string encounter_id;
    AuditedEntity audited;
};

std::optional<Defect> parse_defect(const json& item, const std::string& file, std::size_t line,
                                   std::vector<InputIssue>& issues) {
    FieldReader reader(item, file, line, issues);
    auto kind_text = reader.string_field("kind", true);
    auto severity_level = reader.int_field("severity", true);
    auto note = reader.string_field("note", false);

    std::optional<DefectKind> kind;
    if (kind_text) {
        try {
            kind = DefectKind::from_string(*kind_text);
        } catch (const Error& e) {
            reader.issue(e.what());
        }
    }
    std::optional<Severity> severity;
    if (severity_level) {
        try {
            severity = severity_from_level(static_cast<int>(*severity_level));
        } catch (const OutOfRangeError& e) {
            reader.issue(e.what());
        }
    }
    if (!reader.ok() || !kind || !severity) return std::nullopt;
    return Defect{std::move(*kind), *severity, note.value_or("")};
}

std::optional<RawEntityRecord> parse_entity_record(const json& obj, const std::string& file,
                                                   std::size_t line,
                                                   std::vector<InputIssue>& issues) {
    FieldReader reader(obj, file, line, issues);
    auto encounter_id = reader.string_field("encounter_id", true);
    auto entity_id = reader.string_field("entity_id", true);
    auto text = reader.string_field("text", true);
    bool relevant = reader.bool_field("medically_relevant", true);
    if (text && text->empty()) reader.issue("field 'text' must be non-empty");

    std::vector<Defect> defects;
    bool defects_ok = true;
    if (const json* array = reader.array_field("defects", false)) {
        for (const json& item : *array) {
            if (!item.is_object()) {
                reader.issue("defect entries must be objects");
                defects_ok = false;
                continue;
            }
            if (auto defect = parse_defect(item, file, line, issues)) {
                defects.push_back(std::move(*defect));
            } else {
                defects_ok = false;
            }
        }
    }

    if (!reader.ok() || !defects_ok || !encounter_id || !entity_id || !text || text->empty()) {
        return std::nullopt;
    }
    RawEntityRecord record;
    record.encounter_id = *encounter_id;
    record.audited.entity = Entity{std::move(*entity_id), std::move(*encounter_id),
                                   std::move(*text), relevant};
    record.audited.defects = std::move(defects);
    return record;
}

std::optional<Snippet> parse_snippet_record(const json& obj, const std::string& file,
                                            std::size_t line,
                                            std::vector<InputIssue>& issues) {
    FieldReader reader(obj, file, line, issues);
    auto note_id = reader.string_field("note_id", true);
    auto snippet_id = reader.string_field("snippet_id", true);
    auto text = reader.string_field("text", true);
    auto linked = reader.string_field("linked_entity", false);
    if (!reader.ok() || !note_id || !snippet_id || !text) return std::nullopt;
    Snippet snippet{std::move(*snippet_id), std::move(*note_id), std::move(*text), std::nullopt};
    if (linked) snippet.linked_entity = std::move(*linked);
    return snippet;
}

std::optional<NoteEditPair> parse_edit_pair_record(const json& obj, const std::string& file,
                                                   std::size_t line,
                                                   std::vector<InputIssue>& issues) {
    FieldReader reader(obj, file, line, issues);
    auto note_id = reader.string_field("note_id", true);
    auto initial_text = reader.string_field("initial_text", true);
    auto final_text = reader.string_field("final_text", true);
    if (!reader.ok() || !note_id || !initial_text || !final_text) return std::nullopt;
    return make_edit_pair(std::move(*note_id), *initial_text, *final_text);
}

std::optional<QcRecord> parse_qc_record(const json& obj, const std::string& file,
                                        std::size_t line, std::vector<InputIssue>& issues) {
    FieldReader reader(obj, file, line, issues);
    auto record_id = reader.string_field("record_id", true);
    auto reference_text = reader.string_field("reference_text", true);
    auto hypothesis_text = reader.string_field("hypothesis_text", true);
    const json* terms_array = reader.array_field("terms", true);
    if (!reader.ok() || !record_id || !reference_text || !hypothesis_text ||
        terms_array == nullptr) {
        return std::nullopt;
    }

    QcRecord record;
    record.record_id = std::move(*record_id);
    record.reference = tokenize(*reference_text);
    record.hypothesis = tokenize(*hypothesis_text);

    bool terms_ok = true;
    for (const json& item : *terms_array) {
        if (!item.is_object()) {
            reader.issue("term entries must be objects");
            terms_ok = false;
            continue;
        }
        FieldReader term_reader(item, file, line, issues);
        auto term_id = term_reader.string_field("term_id", true);
        auto start_index = term_reader.int_field("start_index", true);
        auto length = term_reader.int_field("length", true);
        bool audible = term_reader.bool_field("clearly_audible", true);
        if (!term_reader.ok() || !term_id || !start_index || !length) {
            terms_ok = false;
            continue;
        }
        if (*start_index < 0 || *length < 1 ||
            static_cast<std::size_t>(*start_index + *length) > record.reference.size()) {
            term_reader.issue("term '" + *term_id + "' span [" +
                              std::to_string(*start_index) + ", " +
                              std::to_string(*start_index + *length) +
                              ") outside the reference transcript");
            terms_ok = false;
            continue;
        }
        MedicalTermAnnotation term;
        term.term_id = std::move(*term_id);
        term.start_index = static_cast<std::size_t>(*start_index);
        term.tokens.assign(record.reference.begin() + *start_index,
                           record.reference.begin() + *start_index + *length);
        term.clearly_audible = audible;
        record.terms.push_back(std::move(term));
    }
    if (!terms_ok) return std::nullopt;
    return record;
}

// Splits a file into JSON records and hands each to handle(obj, line).
template <typename Handler>
void for_each_record(const std::string& text, const std::string& file,
                     std::string_view expected_kind, std::vector<InputIssue>& issues,
                     Handler&& handle) {
    std::istringstream stream(text);
    std::string line_text;
    std::size_t line_no = 0;
    while (std::getline(stream, line_text)) {
        ++line_no;
        if (line_text.find_first_not_of(" \t\r") == std::string::npos) continue;
        json obj;
        try {
            obj = json::parse(line_text);
        } catch (const json::parse_error& e) {
            issues.push_back({file, line_no, std::string("invalid JSON: ") + e.what()});
            continue;
        }
        if (!obj.is_object()) {
            issues.push_back({file, line_no, "record must be a JSON object"});
            continue;
        }
        FieldReader reader(obj, file, line_no, issues);
        auto kind = reader.string_field("kind", true);
        if (!kind) continue;
        if (*kind != expected_kind) {
            reader.issue("unexpected record kind '" + *kind + "' (this file holds '" +
                         std::string(expected_kind) + "' records)");
            continue;
        }
        if (auto version = reader.int_field("schema_version", false)) {
            if (*version != kSchemaVersion) {
                reader.issue("unsupported schema_version " + std::to_string(*version));
                continue;
            }
        }
        if (!reader.ok()) continue;
        handle(obj, line_no);
    }
}

}  // namespace

BundlePaths BundlePaths::from_directory(const std::filesystem::path& dir) {
    BundlePaths paths;
    auto probe = [&dir](std::string_view name) -> std::optional<std::filesystem::path> {
        std::filesystem::path candidate = dir / name;
        if (std::filesystem::exists(candidate)) return candidate;
        return std::nullopt;
    };
    paths.entities = probe(kEntitiesFileName);
    paths.snippets = probe(kSnippetsFileName);
    paths.edits = probe(kEditsFileName);
    paths.qc = probe(kQcFileName);
    return paths;
}

DatasetBundle load_bundle(const BundlePaths& paths, BundleMeta meta) {
    if (!paths.any()) throw Error("a bundle needs at least one input section");
    if (paths.snippets && !paths.entities) {
        throw Error("the snippets section requires the entities section");
    }

    std::vector<InputIssue> parse_issues;
    std::vector<ValidationIssue> validation_issues;

    DatasetBundle bundle;
    bundle.meta = meta;

    if (paths.entities) {
        const std::string file = paths.entities->filename().string();
        std::vector<RawEntityRecord> raw_entities;
        for_each_record(read_text_file(*paths.entities), file, "entity_audit", parse_issues,
                        [&](const json& obj, std::size_t line) {
                            if (auto record = parse_entity_record(obj, file, line, parse_issues)) {
                                raw_entities.push_back(std::move(*record));
                            }
                        });

        std::vector<Snippet> raw_snippets;
        if (paths.snippets) {
            const std::string snippets_file = paths.snippets->filename().string();
            for_each_record(read_text_file(*paths.snippets), snippets_file, "snippet",
                            parse_issues, [&](const json& obj, std::size_t line) {
                                if (auto snippet = parse_snippet_record(obj, snippets_file, line,
                                                                        parse_issues)) {
                                    raw_snippets.push_back(std::move(*snippet));
                                }
                            });
        }

        if (parse_issues.empty()) {
            TestSet set;
            set.set_id = meta.label.empty() ? "testset" : meta.label;
            set.meta.source_label = file;
            set.meta.date_range = meta.date;

            std::unordered_map<std::string, std::size_t> encounter_index;
            for (RawEntityRecord& record : raw_entities) {
                auto [it, inserted] =
                    encounter_index.emplace(record.encounter_id, set.encounters.size());
                if (inserted) set.encounters.push_back(Encounter{record.encounter_id, {}, {}});
                set.encounters[it->second].entities.push_back(std::move(record.audited));
            }
            for (Snippet& snippet : raw_snippets) {
                auto it = encounter_index.find(snippet.note_id);
                if (it == encounter_index.end()) {
                    validation_issues.push_back(
                        {ValidationCode::DanglingReference,
                         "snippet '" + snippet.snippet_id + "' references unknown note '" +
                             snippet.note_id + "'"});
                    continue;
                }
                set.encounters[it->second].snippets.push_back(std::move(snippet));
            }

            try {
                bundle.test_set = validate_test_set(std::move(set));
            } catch (const ValidationError& e) {
                validation_issues.insert(validation_issues.end(), e.issues().begin(),
                                         e.issues().end());
            }
        }
    }

    if (paths.edits) {
        const std::string file = paths.edits->filename().string();
        std::vector<NoteEditPair> pairs;
        std::unordered_set<std::string> note_ids;
        for_each_record(read_text_file(*paths.edits), file, "edit_pair", parse_issues,
                        [&](const json& obj, std::size_t line) {
                            auto pair = parse_edit_pair_record(obj, file, line, parse_issues);
                            if (!pair) return;
                            if (!note_ids.insert(pair->note_id).second) {
                                validation_issues.push_back(
                                    {ValidationCode::DuplicateId,
                                     "duplicate note_id '" + pair->note_id + "' in " + file});
                                return;
                            }
                            pairs.push_back(std::move(*pair));
                        });
        bundle.edit_pairs = std::move(pairs);
        bundle.edits_source = file;
    }

    if (paths.qc) {
        const std::string file = paths.qc->filename().string();
        std::vector<QcRecord> records;
        std::unordered_set<std::string> record_ids;
        for_each_record(read_text_file(*paths.qc), file, "qc_record", parse_issues,
                        [&](const json& obj, std::size_t line) {
                            auto record = parse_qc_record(obj, file, line, parse_issues);
                            if (!record) return;
                            if (!record_ids.insert(record->record_id).second) {
                                validation_issues.push_back(
                                    {ValidationCode::DuplicateId,
                                     "duplicate record_id '" + record->record_id + "' in " + file});
                                return;
                            }
                            records.push_back(std::move(*record));
                        });
        bundle.qc_records = std::move(records);
        bundle.qc_source = file;
    }

    if (!parse_issues.empty()) throw ParseError(std::move(parse_issues));
    if (!validation_issues.empty()) throw ValidationError(std::move(validation_issues));
    return bundle;
}

std::string entities_to_jsonl(const TestSet& set) {
    std::string out;
    for (const Encounter& encounter : set.encounters) {
        for (const AuditedEntity& audited : encounter.entities) {
            ordered_json record;
            record["kind"] = "entity_audit";
            record["schema_version"] = kSchemaVersion;
            record["encounter_id"] = encounter.encounter_id;
            record["entity_id"] = audited.entity.entity_id;
            record["text"] = audited.entity.text;
            record["medically_relevant"] = audited.entity.medically_relevant;
            ordered_json defects = ordered_json::array();
            for (const Defect& defect : audited.defects) {
                ordered_json d;
                d["kind"] = defect.kind.label();
                d["severity"] = defect.severity.level();
                if (!defect.note.empty()) d["note"] = defect.note;
                defects.push_back(std::move(d));
            }
            record["defects"] = std::move(defects);
            out += record.dump();
            out += '\n';
        }
    }
    return out;
}

std::string snippets_to_jsonl(const TestSet& set) {
    std::string out;
    for (const Encounter& encounter : set.encounters) {
        for (const Snippet& snippet : encounter.snippets) {
            ordered_json record;
            record["kind"] = "snippet";
            record["schema_version"] = kSchemaVersion;
            record["note_id"] = snippet.note_id;
            record["snippet_id"] = snippet.snippet_id;
            record["text"] = snippet.text;
            if (snippet.linked_entity) record["linked_entity"] = *snippet.linked_entity;
            out += record.dump();
            out += '\n';
        }
    }
    return out;
}

std::string edit_pairs_to_jsonl(std::span<const NoteEditPair> pairs) {
    std::string out;
    for (const NoteEditPair& pair : pairs) {
        ordered_json record;
        record["kind"] = "edit_pair";
        record["schema_version"] = kSchemaVersion;
        record["note_id"] = pair.note_id;
        record["initial_text"] = join_surfaces(pair.initial_tokens);
        record["final_text"] = join_surfaces(pair.final_tokens);
        out += record.dump();
        out += '\n';
    }
    return out;
}

std::string qc_records_to_jsonl(std::span<const QcRecord> records) {
    std::string out;
    for (const QcRecord& record : records) {
        ordered_json obj;
        obj["kind"] = "qc_record";
        obj["schema_version"] = kSchemaVersion;
        obj["record_id"] = record.record_id;
        obj["reference_text"] = join_surfaces(record.reference);
        obj["hypothesis_text"] = join_surfaces(record.hypothesis);
        ordered_json terms = ordered_json::array();
        for (const MedicalTermAnnotation& term : record.terms) {
            ordered_json t;
            t["term_id"] = term.term_id;
            t["start_index"] = term.start_index;
            t["length"] = term.tokens.size();
            t["clearly_audible"] = term.clearly_audible;
            terms.push_back(std::move(t));
        }
        obj["terms"] = std::move(terms);
        out += obj.dump();
        out += '\n';
    }
    return out;
}

BundlePaths write_bundle(const DatasetBundle& bundle, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    BundlePaths written;
    if (bundle.test_set) {
        written.entities = dir / kEntitiesFileName;
        write_text_file(*written.entities, entities_to_jsonl(*bundle.test_set));
        written.snippets = dir / kSnippetsFileName;
        write_text_file(*written.snippets, snippets_to_jsonl(*bundle.test_set));
    }
    if (bundle.edit_pairs) {
        written.edits = dir / kEditsFileName;
        write_text_file(*written.edits, edit_pairs_to_jsonl(*bundle.edit_pairs));
    }
    if (bundle.qc_records) {
        written.qc = dir / kQcFileName;
        write_text_file(*written.qc, qc_records_to_jsonl(*bundle.qc_records));
    }
    return written;
}

}  // namespace deepscore
