#include "deepscore/entity_metrics.hpp"

#include <algorithm>

namespace deepscore {

namespace {

bool has_major_defect_of(const AuditedEntity& audited, bool (DefectKind::*kind_check)() const) {
    return std::any_of(audited.defects.begin(), audited.defects.end(), [&](const Defect& d) {
        return (d.kind.*kind_check)() && d.severity.level() >= kMajorSeverityLevel;
    });
}

}  // namespace

bool is_missing_entity(const AuditedEntity& audited) {
    return has_major_defect_of(audited, &DefectKind::is_missing_information);
}

bool is_inaccurate_entity(const AuditedEntity& audited) {
    if (is_missing_entity(audited)) return false;
    return has_major_defect_of(audited, &DefectKind::is_inaccurate);
}

StatRatesResult compute_stat_rates(std::span<const AuditedEntity> entities) {
    StatRatesResult result;
    for (const AuditedEntity& audited : entities) {
        if (!audited.entity.medically_relevant) continue;
        ++result.n_entities;
        if (!audited.has_defect_at_least(kMajorSeverityLevel)) ++result.n_major_free;
        if (!audited.has_defect_at_least(kCriticalSeverityLevel)) ++result.n_critical_free;
    }
    if (result.n_entities == 0) {
        throw EmptyInputError("stat rates undefined: no medically relevant entities");
    }
    result.mdfr = static_cast<double>(result.n_major_free) / static_cast<double>(result.n_entities);
    result.cdfr = static_cast<double>(result.n_critical_free) / static_cast<double>(result.n_entities);
    return result;
}

StatRatesResult compute_stat_rates(const TestSet& set) {
    return compute_stat_rates(std::span<const AuditedEntity>(collect_audited_entities(set)));
}

FunnelResult compute_funnel(std::span<const AuditedEntity> entities) {
    FunnelResult result;
    for (const AuditedEntity& audited : entities) {
        if (!audited.entity.medically_relevant) continue;
        ++result.n_relevant;
        if (is_missing_entity(audited)) {
            ++result.n_missing;
        } else if (is_inaccurate_entity(audited)) {
            ++result.n_inaccurate;
        }
    }
    if (result.n_relevant == 0) {
        throw EmptyInputError("funnel undefined: no medically relevant entities");
    }
    result.n_captured = result.n_relevant - result.n_missing;
    result.mer = static_cast<double>(result.n_missing) / static_cast<double>(result.n_relevant);
    result.cer = 1.0 - result.mer;
    if (result.n_captured == 0) {
        throw NoCapturedEntitiesError("accuracy undefined: every relevant entity is missing");
    }
    result.ier = static_cast<double>(result.n_inaccurate) / static_cast<double>(result.n_captured);
    result.aer = 1.0 - result.ier;
    return result;
}

FunnelResult compute_funnel(const TestSet& set) {
    return compute_funnel(std::span<const AuditedEntity>(collect_audited_entities(set)));
}

}  // namespace deepscore
