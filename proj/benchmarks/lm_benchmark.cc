// Copyright 2026 The glflm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "benchmark/benchmark.h"
#include "glflm/arpa.h"
#include "glflm/evaluation.h"
#include "glflm/kn_model.h"
#include "glflm/ngram_counts.h"
#include "glflm/prng.h"
#include "glflm/vocabulary.h"

namespace glflm {
namespace {

struct Fixture {
  Vocabulary vocab;
  std::vector<std::vector<WordId>> corpus;
};

// Zipf(1) word ids, sentences of 1-20 tokens.
const Fixture& Data(size_t tokens) {
  static std::map<size_t, Fixture> cache;
  auto [it, fresh] = cache.try_emplace(tokens);
  if (!fresh) return it->second;
  Fixture& f = it->second;
  const size_t types = 20000;
  for (size_t i = 0; i < types; ++i) f.vocab.Add("w" + std::to_string(i));
  std::vector<double> cdf(types);
  double total = 0;
  for (size_t r = 0; r < types; ++r) cdf[r] = total += 1.0 / (r + 1);
  SplitMix64 rng(tokens);
  for (size_t produced = 0; produced < tokens;) {
    std::vector<WordId> s(1 + rng.Uniform(20));
    for (auto& w : s) {
      const double u = static_cast<double>(rng.Next() >> 11) * 0x1.0p-53 * total;
      const size_t r = std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
      w = static_cast<WordId>(3 + std::min(r, types - 1));
    }
    produced += s.size();
    f.corpus.push_back(std::move(s));
  }
  return f;
}

void BM_Count(benchmark::State& state) {
  const Fixture& f = Data(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(CountNGrams(f.corpus, 5, f.vocab));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Count)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_CountSharded(benchmark::State& state) {
  const Fixture& f = Data(1000000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        CountNGramsSharded(f.corpus, 5, f.vocab, state.range(0)));
  }
  state.SetItemsProcessed(state.iterations() * 1000000);
}
BENCHMARK(BM_CountSharded)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Train(benchmark::State& state) {
  const Fixture& f = Data(state.range(0));
  const NGramTable counts = CountNGrams(f.corpus, 5, f.vocab);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        TrainKneserNey(counts, f.vocab, TrainConfig::UnprunedInterpolated(5)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Train)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_Query(benchmark::State& state) {
  const Fixture& f = Data(1000000);
  const NGramModel model = TrainKneserNey(
      CountNGrams(f.corpus, 5, f.vocab), f.vocab,
      state.range(0) ? TrainConfig::UnprunedInterpolated(5)
                     : TrainConfig::SrilmDefault(5));
  size_t events = 0;
  for (auto _ : state) {
    for (size_t i = 0; i < 2000; ++i) {
      const SentenceScore s = ScoreSentence(model, f.corpus[i]);
      benchmark::DoNotOptimize(s.log10_prob);
      events += s.events;
    }
  }
  state.SetItemsProcessed(events);
}
BENCHMARK(BM_Query)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ArpaWrite(benchmark::State& state) {
  const Fixture& f = Data(100000);
  const NGramModel model =
      TrainKneserNey(CountNGrams(f.corpus, 5, f.vocab), f.vocab,
                     TrainConfig::UnprunedInterpolated(5));
  for (auto _ : state) benchmark::DoNotOptimize(ArpaString(model));
}
BENCHMARK(BM_ArpaWrite)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace glflm

BENCHMARK_MAIN();
