#include <benchmark/benchmark.h>

#include "deepscore/edit_metrics.hpp"
#include "deepscore/entity_metrics.hpp"
#include "deepscore/ingest.hpp"
#include "deepscore/synth.hpp"
#include "deepscore/transcription_qc.hpp"

namespace {

using namespace deepscore;

void BM_StatRates(benchmark::State& state) {
    InjectionProfile profile;
    profile.n_entities = static_cast<std::uint64_t>(state.range(0));
    profile.exact_counts =
        InjectionCounts{profile.n_entities / 25, profile.n_entities / 100,
                        profile.n_entities / 50, profile.n_entities / 50};
    profile.seed = 7;
    const auto generated = generate_audited_set(profile);
    const auto entities = collect_audited_entities(generated.test_set);
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_stat_rates(entities));
        benchmark::DoNotOptimize(compute_funnel(entities));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StatRates)->Arg(1000)->Arg(100000);

void BM_Mnr(benchmark::State& state) {
    auto profile = segment_population_profile(430, 425, 95, 50, 200, 7);
    const auto generated = generate_edit_pairs(profile);
    const unsigned jobs = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_mnr(generated.pairs, jobs));
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(generated.pairs.size()));
}
BENCHMARK(BM_Mnr)->Arg(1)->Arg(4)->Arg(8);

void BM_Mwhr(benchmark::State& state) {
    QcInjectionProfile profile;
    profile.n_records = 50;
    profile.terms_per_record = 40;
    profile.corrupted_terms = 60;
    profile.seed = 7;
    const auto generated = generate_qc_records(profile);
    const unsigned jobs = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_mwhr(generated.records, jobs));
    }
}
BENCHMARK(BM_Mwhr)->Arg(1)->Arg(4);

void BM_EmitEntities(benchmark::State& state) {
    InjectionProfile profile;
    profile.n_entities = 5000;
    profile.exact_counts = InjectionCounts{200, 50, 100, 100};
    const auto generated = generate_audited_set(profile);
    for (auto _ : state) {
        benchmark::DoNotOptimize(entities_to_jsonl(generated.test_set));
    }
}
BENCHMARK(BM_EmitEntities);

}  // namespace

BENCHMARK_MAIN();
