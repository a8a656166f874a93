#include <benchmark/benchmark.h>

#include <string>

#include "aladdin/frame.hpp"
#include "aladdin/payload_codec.hpp"
#include "aladdin/pattern.hpp"
#include "aladdin/scenario.hpp"

using namespace aladdin;

namespace {

Graph offer(int extra) {
  const Iri m("http://luigis.example/offer/lunch");
  Graph g;
  g.insert(Triple{m, vocab::type(), vocab::aladdin_term("Offer")});
  g.insert(Triple{m, vocab::see_also(), Iri("http://luigis.example/menu")});
  for (int i = 0; i < extra; ++i) {
    g.insert(Triple{m, Iri("http://schema.org/itemOffered"), Literal::language("dish number " + std::to_string(i), "en")});
  }
  return g;
}

void BM_EncodeCompact(benchmark::State& state) {
  const Graph g = offer(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(encode_compact(g));
}
BENCHMARK(BM_EncodeCompact)->Arg(4)->Arg(16)->Arg(48);

void BM_DecodeCompact(benchmark::State& state) {
  const Bytes b = encode_compact(offer(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(decode_compact(b));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * b.size()));
}
BENCHMARK(BM_DecodeCompact)->Arg(4)->Arg(16)->Arg(48);

void BM_FragmentAssemble(benchmark::State& state) {
  Announcement a;
  a.beacon_id.bytes[15] = 1;
  a.payload_version = 1;
  a.payload = encode_compact(offer(40));
  const auto mtu = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    Assembler assembler;
    std::optional<Announcement> out;
    for (const auto& f : fragment(a, mtu)) out = assembler.feed(decode_frame(encode_frame(f)), SimTime::zero());
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_FragmentAssemble)->Arg(64)->Arg(254)->Arg(1500);

void BM_MatchPatterns(benchmark::State& state) {
  const Graph g = offer(static_cast<int>(state.range(0)));
  const std::vector<TriplePattern> patterns = {
      parse_pattern("?m <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://example.org/aladdin/vocab#Offer>"),
      parse_pattern("?m <http://schema.org/itemOffered> ?dish"),
  };
  for (auto _ : state) benchmark::DoNotOptimize(match_patterns(g, patterns));
}
BENCHMARK(BM_MatchPatterns)->Arg(4)->Arg(48);

void BM_CityWalk(benchmark::State& state) {
  const auto bundle = load_scenario(std::string(ALADDIN_SCENARIO_DIR) + "/city-walk");
  for (auto _ : state) benchmark::DoNotOptimize(run_scenario(bundle, 42, sim_ms(600'000)));
}
BENCHMARK(BM_CityWalk)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
