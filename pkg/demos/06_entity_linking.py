"""Link a recognized mention to a Wikidata item using recorded fixtures.

"Lazarus" matches dozens of items: a biblical figure, an IDE, songs, films,
people. Feature ranking (string match, prominence, context similarity, type
relevance) has to pull the hacker group to the top when the sentence talks
about WannaCry.
"""

from pathlib import Path

from cyents.linker import FixtureSearchClient, LinkerConfig, rank, score_components, search_candidates

FIXTURE_DIR = Path(__file__).parents[1] / "tests" / "fixtures" / "lazarus"

client = FixtureSearchClient(FIXTURE_DIR)
config = LinkerConfig.with_packaged_types()

surface = "Lazarus"
context = "Lazarus was behind the WannaCry attack"

candidates = search_candidates(surface, client)
print(f"search {surface!r}: {len(candidates)} candidates recorded")

result = rank(surface, context, candidates, config)
print(f"\ntop of the ranking (weights: match {config.w_match}, prominence "
      f"{config.w_prom}, context {config.w_ctx}, type {config.w_type}):")
for cand, score in result.ranked[:6]:
    print(f"  {score:.4f}  {cand.qid:<10} {cand.label:<22} {cand.description[:44]}")

print(f"\ndecision: {result.decision}")

print("\nfeature breakdown for the winner vs the runner-up:")
for cand, _ in result.ranked[:2]:
    parts = score_components(surface, context, cand, candidates, config.relevant_types)
    pretty = ", ".join(f"{k}={v:.3f}" for k, v in parts.items())
    print(f"  {cand.qid:<10} {pretty}")

print("\nWith an unrelated context the same mention drops to NIL:")
nil = rank(surface, "the gospel reading for next sunday morning", candidates,
           LinkerConfig(nil_threshold=0.75, relevant_types=config.relevant_types))
print(f"  best score {nil.ranked[0][1]:.3f} < threshold 0.75 -> {nil.decision}")
