#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "deepscore/token_align.hpp"

namespace {

using deepscore::Token;

std::vector<Token> note_tokens(std::size_t n, double change_rate, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution changed(change_rate);
    std::vector<Token> tokens;
    tokens.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (changed(rng)) {
            tokens.emplace_back("edit" + std::to_string(i));
        } else {
            tokens.emplace_back("word" + std::to_string(i % 600));
        }
    }
    return tokens;
}

std::string note_text(std::size_t words) {
    std::string text;
    for (std::size_t i = 0; i < words; ++i) {
        text += "assessment" + std::to_string(i % 40);
        text += i % 9 == 8 ? ". " : " ";
    }
    return text;
}

void BM_Tokenize(benchmark::State& state) {
    const std::string text = note_text(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(deepscore::tokenize(text));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Tokenize)->Arg(128)->Arg(1024)->Arg(8192);

void BM_Align(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = note_tokens(n, 0.0, 1);
    const auto b = note_tokens(n, 0.08, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(deepscore::align(a, b));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Align)->Arg(64)->Arg(256)->Arg(1024)->Arg(2048);

}  // namespace
