#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "deepscore/ingest.hpp"
#include "deepscore/synth.hpp"

using namespace deepscore;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtureDir = DEEPSCORE_FIXTURE_DIR;

fs::path temp_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("deepscore_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_lines(const fs::path& dir, const std::string& name,
                     const std::vector<std::string>& lines) {
    fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    for (const auto& line : lines) out << line << "\n";
    return path;
}

}  // namespace

TEST_CASE("the fixture bundle loads with all three sections") {
    DatasetBundle bundle = load_bundle(BundlePaths::from_directory(kFixtureDir));

    REQUIRE(bundle.test_set.has_value());
    CHECK(bundle.test_set->encounters.size() == 3);
    CHECK(collect_audited_entities(*bundle.test_set).size() == 12);
    std::size_t snippets = 0;
    for (const auto& encounter : bundle.test_set->encounters) {
        snippets += encounter.snippets.size();
    }
    CHECK(snippets == 5);

    REQUIRE(bundle.edit_pairs.has_value());
    CHECK(bundle.edit_pairs->size() == 5);
    REQUIRE(bundle.qc_records.has_value());
    CHECK(bundle.qc_records->size() == 2);
    CHECK(bundle.qc_records->at(1).terms.size() == 3);
}

TEST_CASE("a severity outside the scale is a parse error citing its line") {
    auto dir = temp_dir("bad_severity");
    std::vector<std::string> lines;
    for (int i = 1; i <= 11; ++i) {
        lines.push_back(R"({"kind":"entity_audit","encounter_id":"enc1","entity_id":"e)" +
                        std::to_string(i) + R"(","text":"finding","defects":[]})");
    }
    lines.push_back(
        R"({"kind":"entity_audit","encounter_id":"enc1","entity_id":"e12","text":"finding",)"
        R"("defects":[{"kind":"inaccurate","severity":6}]})");
    auto path = write_lines(dir, "entities.jsonl", lines);

    try {
        load_bundle(BundlePaths{path, {}, {}, {}});
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        REQUIRE(e.issues().size() == 1);
        CHECK(e.issues()[0].line == 12);
        CHECK(e.issues()[0].file == "entities.jsonl");
    }
}

TEST_CASE("every malformed line is reported, not just the first") {
    auto dir = temp_dir("multi_error");
    auto path = write_lines(
        dir, "entities.jsonl",
        {R"({"kind":"entity_audit","encounter_id":"enc1","entity_id":"e1","text":"ok"})",
         R"(this is not json)",
         R"({"kind":"entity_audit","encounter_id":"enc1","entity_id":"e2"})",
         R"({"kind":"edit_pair","note_id":"n1","initial_text":"a","final_text":"b"})",
         R"({"kind":"entity_audit","encounter_id":"enc1","entity_id":"e3","text":""})"});

    try {
        load_bundle(BundlePaths{path, {}, {}, {}});
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        REQUIRE(e.issues().size() == 4);
        CHECK(e.issues()[0].line == 2);
        CHECK(e.issues()[1].line == 3);
        CHECK(e.issues()[2].line == 4);
        CHECK(e.issues()[3].line == 5);
    }
}

TEST_CASE("a bundle can carry only edit pairs") {
    auto dir = temp_dir("edits_only");
    auto path = write_lines(
        dir, "edits.jsonl",
        {R"({"kind":"edit_pair","note_id":"n1","initial_text":"a b c","final_text":"a b c"})"});
    DatasetBundle bundle = load_bundle(BundlePaths{{}, {}, path, {}});
    CHECK(!bundle.test_set.has_value());
    REQUIRE(bundle.edit_pairs.has_value());
    CHECK(bundle.edit_pairs->size() == 1);
    CHECK(!bundle.qc_records.has_value());
}

TEST_CASE("snippets without entities are rejected") {
    auto dir = temp_dir("snippets_only");
    auto path = write_lines(
        dir, "snippets.jsonl",
        {R"({"kind":"snippet","note_id":"enc1","snippet_id":"s1","text":"t"})"});
    CHECK_THROWS_AS(load_bundle(BundlePaths{{}, path, {}, {}}), Error);
}

TEST_CASE("an empty path set is rejected") {
    CHECK_THROWS_AS(load_bundle(BundlePaths{}), Error);
}

TEST_CASE("a snippet naming an unknown note dangles") {
    auto dir = temp_dir("dangling_note");
    auto entities = write_lines(
        dir, "entities.jsonl",
        {R"({"kind":"entity_audit","encounter_id":"enc1","entity_id":"e1","text":"finding"})"});
    auto snippets = write_lines(
        dir, "snippets.jsonl",
        {R"({"kind":"snippet","note_id":"enc9","snippet_id":"s1","text":"t","linked_entity":"e1"})"});
    try {
        load_bundle(BundlePaths{entities, snippets, {}, {}});
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.has(ValidationCode::DanglingReference));
    }
}

TEST_CASE("duplicate ids across lines are validation errors") {
    auto dir = temp_dir("dup_ids");
    auto entities = write_lines(
        dir, "entities.jsonl",
        {R"({"kind":"entity_audit","encounter_id":"enc1","entity_id":"e1","text":"one"})",
         R"({"kind":"entity_audit","encounter_id":"enc2","entity_id":"e1","text":"two"})"});
    try {
        load_bundle(BundlePaths{entities, {}, {}, {}});
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.has(ValidationCode::DuplicateId));
    }

    auto edits = write_lines(
        dir, "edits.jsonl",
        {R"({"kind":"edit_pair","note_id":"n1","initial_text":"a","final_text":"a"})",
         R"({"kind":"edit_pair","note_id":"n1","initial_text":"b","final_text":"b"})"});
    try {
        load_bundle(BundlePaths{{}, {}, edits, {}});
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.has(ValidationCode::DuplicateId));
    }
}

TEST_CASE("wrong record kinds and unknown schema versions are rejected") {
    auto dir = temp_dir("bad_kind");
    auto path = write_lines(
        dir, "edits.jsonl",
        {R"({"kind":"qc_record","record_id":"r1","reference_text":"a","hypothesis_text":"a","terms":[]})",
         R"({"kind":"edit_pair","schema_version":99,"note_id":"n1","initial_text":"a","final_text":"a"})"});
    try {
        load_bundle(BundlePaths{{}, {}, path, {}});
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        REQUIRE(e.issues().size() == 2);
        CHECK(e.issues()[0].line == 1);
        CHECK(e.issues()[1].line == 2);
    }
}

TEST_CASE("a qc term span outside the transcript is a parse error") {
    auto dir = temp_dir("bad_span");
    auto path = write_lines(
        dir, "qc.jsonl",
        {R"({"kind":"qc_record","record_id":"r1","reference_text":"two words","hypothesis_text":"two words",)"
         R"("terms":[{"term_id":"t1","start_index":1,"length":2,"clearly_audible":true}]})"});
    CHECK_THROWS_AS(load_bundle(BundlePaths{{}, {}, {}, path}), ParseError);
}

TEST_CASE("missing input files surface as io errors") {
    CHECK_THROWS_AS(load_bundle(BundlePaths{fs::path("/nonexistent/entities.jsonl"), {}, {}, {}}),
                    IoError);
}

TEST_CASE("emit then ingest reproduces the fixture bundle field for field") {
    DatasetBundle original = load_bundle(BundlePaths::from_directory(kFixtureDir));

    auto dir = temp_dir("round_trip");
    BundlePaths written = write_bundle(original, dir);
    DatasetBundle reloaded = load_bundle(written);

    REQUIRE(reloaded.test_set.has_value());
    CHECK(reloaded.test_set->encounters == original.test_set->encounters);
    CHECK(*reloaded.edit_pairs == *original.edit_pairs);
    CHECK(*reloaded.qc_records == *original.qc_records);
}

TEST_CASE("emit then ingest reproduces a synthetic corpus") {
    InjectionProfile entity_profile;
    entity_profile.n_entities = 60;
    entity_profile.exact_counts = InjectionCounts{5, 2, 4, 3};
    entity_profile.seed = 404;
    auto audit = generate_audited_set(entity_profile);

    EditInjectionProfile edit_profile;
    edit_profile.n_notes = 12;
    edit_profile.note_length = 20;
    edit_profile.per_note = {EditCounts{2, 1, 0}};
    edit_profile.seed = 405;
    auto edits = generate_edit_pairs(edit_profile);

    QcInjectionProfile qc_profile;
    qc_profile.n_records = 3;
    qc_profile.terms_per_record = 4;
    qc_profile.corrupted_terms = 2;
    qc_profile.seed = 406;
    auto qc = generate_qc_records(qc_profile);

    DatasetBundle bundle;
    bundle.test_set = audit.test_set;
    bundle.edit_pairs = edits.pairs;
    bundle.qc_records = qc.records;

    auto dir = temp_dir("round_trip_synth");
    DatasetBundle reloaded = load_bundle(write_bundle(bundle, dir));
    CHECK(reloaded.test_set->encounters == bundle.test_set->encounters);
    CHECK(*reloaded.edit_pairs == *bundle.edit_pairs);
    CHECK(*reloaded.qc_records == *bundle.qc_records);
}

TEST_CASE("medically_relevant defaults to true and absent notes stay empty") {
    auto dir = temp_dir("defaults");
    auto path = write_lines(
        dir, "entities.jsonl",
        {R"({"kind":"entity_audit","encounter_id":"enc1","entity_id":"e1","text":"finding",)"
         R"("defects":[{"kind":"inaccurate","severity":2}]})"});
    DatasetBundle bundle = load_bundle(BundlePaths{path, {}, {}, {}});
    const auto& audited = bundle.test_set->encounters[0].entities[0];
    CHECK(audited.entity.medically_relevant);
    REQUIRE(audited.defects.size() == 1);
    CHECK(audited.defects[0].note.empty());
    CHECK(audited.defects[0].kind.is_inaccurate());
}
