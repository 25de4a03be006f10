#pragma once

#include <cstddef>
#include <span>

#include "deepscore/core_model.hpp"

namespace deepscore {

/// Defect-free rates over the medically relevant entities of a test set.
/// mdfr counts entities free of any severity >= 4 defect; cdfr counts
/// entities free of severity 5 defects, so mdfr <= cdfr always.
struct StatRatesResult {
    std::size_t n_entities = 0;  // relevant entities in the denominator
    std::size_t n_major_free = 0;
    std::size_t n_critical_free = 0;
    double mdfr = 0.0;
    double cdfr = 0.0;

    bool operator==(const StatRatesResult& other) const = default;
};

/// Recall-to-precision funnel. An entity is missing when it carries a
/// MissingInformation defect of severity 4 or 5; a captured entity is
/// inaccurate when it carries an Inaccurate defect of severity 4 or 5.
/// cer = 1 - mer over relevant entities; aer = 1 - ier over captured ones.
struct FunnelResult {
    std::size_t n_relevant = 0;
    std::size_t n_missing = 0;
    std::size_t n_captured = 0;
    std::size_t n_inaccurate = 0;
    double mer = 0.0;
    double cer = 0.0;
    double ier = 0.0;
    double aer = 0.0;

    bool operator==(const FunnelResult& other) const = default;
};

/// Entities with medically_relevant=false are dropped from the denominator.
/// Throws EmptyInputError when nothing relevant remains.
StatRatesResult compute_stat_rates(std::span<const AuditedEntity> entities);
StatRatesResult compute_stat_rates(const TestSet& set);

/// Throws EmptyInputError on an empty relevant population and
/// NoCapturedEntitiesError when every relevant entity is missing.
FunnelResult compute_funnel(std::span<const AuditedEntity> entities);
FunnelResult compute_funnel(const TestSet& set);

/// True when the entity counts as missing for funnel purposes.
bool is_missing_entity(const AuditedEntity& audited);
/// True when a captured entity counts as inaccurate. Missing entities are
/// never inaccurate: an omitted entity cannot be captured-but-wrong.
bool is_inaccurate_entity(const AuditedEntity& audited);

}  // namespace deepscore
