#include <doctest.h>

#include "deepscore/core_model.hpp"

using namespace deepscore;

namespace {

TestSet consistent_set() {
    TestSet set;
    set.set_id = "unit";
    Encounter enc;
    enc.encounter_id = "enc1";
    for (int i = 1; i <= 3; ++i) {
        AuditedEntity audited;
        audited.entity = Entity{"e" + std::to_string(i), "enc1", "finding " + std::to_string(i), true};
        enc.entities.push_back(std::move(audited));
    }
    for (int i = 1; i <= 3; ++i) {
        Snippet snippet{"s" + std::to_string(i), "enc1", "snippet " + std::to_string(i),
                        "e" + std::to_string(i)};
        enc.snippets.push_back(std::move(snippet));
    }
    set.encounters.push_back(std::move(enc));
    return set;
}

}  // namespace

TEST_CASE("severity levels map to the fixed labels") {
    CHECK(severity_from_level(1).label() == "Low");
    CHECK(severity_from_level(2).label() == "Mild");
    CHECK(severity_from_level(3).label() == "Moderate");
    CHECK(severity_from_level(4).label() == "Major");
    CHECK(severity_from_level(5).label() == "Critical");
}

TEST_CASE("severity rejects levels outside the scale") {
    CHECK_THROWS_AS(severity_from_level(0), OutOfRangeError);
    CHECK_THROWS_AS(severity_from_level(6), OutOfRangeError);
    CHECK_THROWS_AS(severity_from_level(-1), OutOfRangeError);
}

TEST_CASE("severity orders by level") {
    CHECK(Severity(1) < Severity(2));
    CHECK(Severity(5) > Severity(4));
    CHECK(Severity(3) == severity_from_level(3));
}

TEST_CASE("defect kinds round-trip through their names") {
    CHECK(DefectKind::from_string("missing_information").is_missing_information());
    CHECK(DefectKind::from_string("inaccurate").is_inaccurate());
    DefectKind other = DefectKind::from_string("formatting");
    CHECK(other.is_other());
    CHECK(other.label() == "formatting");
}

TEST_CASE("other kind labels cannot shadow canonical names") {
    CHECK_THROWS_AS(DefectKind::other("missing_information"), Error);
    CHECK_THROWS_AS(DefectKind::other("inaccurate"), Error);
    CHECK_THROWS_AS(DefectKind::other(""), Error);
}

TEST_CASE("validate_test_set accepts a fully consistent set") {
    TestSet validated = validate_test_set(consistent_set());
    REQUIRE(validated.encounters.size() == 1);
    CHECK(validated.encounters[0].entities.size() == 3);
    CHECK(validated.encounters[0].snippets.size() == 3);
}

TEST_CASE("validate_test_set is idempotent") {
    TestSet once = validate_test_set(consistent_set());
    TestSet twice = validate_test_set(once);
    CHECK(once == twice);
}

TEST_CASE("a snippet linking to an unknown entity is a dangling reference") {
    TestSet set = consistent_set();
    set.encounters[0].snippets[0].linked_entity = "e999";
    try {
        validate_test_set(std::move(set));
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.has(ValidationCode::DanglingReference));
    }
}

TEST_CASE("a snippet linking across encounters is a dangling reference") {
    TestSet set = consistent_set();
    Encounter enc2;
    enc2.encounter_id = "enc2";
    AuditedEntity audited;
    audited.entity = Entity{"e9", "enc2", "finding 9", true};
    enc2.entities.push_back(std::move(audited));
    enc2.snippets.push_back(Snippet{"s9", "enc2", "snippet 9", "e1"});  // e1 lives in enc1
    set.encounters.push_back(std::move(enc2));
    try {
        validate_test_set(std::move(set));
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.has(ValidationCode::DanglingReference));
    }
}

TEST_CASE("duplicate entity ids are rejected") {
    TestSet set = consistent_set();
    set.encounters[0].entities[1].entity.entity_id = "e1";
    try {
        validate_test_set(std::move(set));
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.has(ValidationCode::DuplicateId));
    }
}

TEST_CASE("duplicate snippet ids are rejected") {
    TestSet set = consistent_set();
    set.encounters[0].snippets[2].snippet_id = "s1";
    try {
        validate_test_set(std::move(set));
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.has(ValidationCode::DuplicateId));
    }
}

TEST_CASE("an empty test set cannot be validated") {
    try {
        validate_test_set(TestSet{});
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.has(ValidationCode::EmptyTestSet));
    }
}

TEST_CASE("every issue is reported, not just the first") {
    TestSet set = consistent_set();
    set.encounters[0].entities[1].entity.entity_id = "e1";
    set.encounters[0].snippets[0].linked_entity = "e999";
    try {
        validate_test_set(std::move(set));
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.has(ValidationCode::DuplicateId));
        CHECK(e.has(ValidationCode::DanglingReference));
        CHECK(e.issues().size() >= 2);
    }
}

TEST_CASE("collect_audited_entities flattens in encounter order") {
    TestSet set = consistent_set();
    Encounter enc2;
    enc2.encounter_id = "enc2";
    AuditedEntity audited;
    audited.entity = Entity{"e4", "enc2", "finding 4", true};
    enc2.entities.push_back(std::move(audited));
    set.encounters.push_back(std::move(enc2));

    auto flat = collect_audited_entities(set);
    REQUIRE(flat.size() == 4);
    CHECK(flat[0].entity.entity_id == "e1");
    CHECK(flat[3].entity.entity_id == "e4");
}

TEST_CASE("an entity with no defects is defect-free") {
    AuditedEntity audited;
    audited.entity = Entity{"e1", "enc1", "finding", true};
    CHECK(audited.defect_free());
    CHECK(!audited.has_defect_at_least(1));
    audited.defects.push_back({DefectKind::inaccurate(), Severity(3), ""});
    CHECK(!audited.defect_free());
    CHECK(audited.has_defect_at_least(3));
    CHECK(!audited.has_defect_at_least(4));
}
