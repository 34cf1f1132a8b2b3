"""Inter-annotator agreement and intersection merging.

Two annotators label the same snippet; only spans that match exactly in
boundaries and label survive into the accepted set.  The classic failure
modes show up immediately: boundary variants ("Windows" vs "Windows 7"),
split-vs-merged readings ("Microsoft Word"), and stray disagreements.
"""

from cyents.annotations import AnnotationSet, Mention, agreement, label_distribution, merge_group

TEXT = "Lazarus used Microsoft Word macros on Windows 7 against Acme Corp."


def span(surface, label):
    start = TEXT.index(surface)
    return Mention(start, start + len(surface), label)


alice = AnnotationSet("alice", {"doc": sorted([
    span("Lazarus", "Threat_Actor"),
    span("Microsoft Word", "Software_Name"),   # merged reading
    span("Windows 7", "Operating_System"),
    span("Acme Corp", "ORG"),
])})

bob = AnnotationSet("bob", {"doc": sorted([
    span("Lazarus", "Threat_Actor"),           # agrees
    span("Microsoft", "ORG"),                  # split reading
    span("Word", "Software_Name"),
    span("Windows", "Operating_System"),       # boundary variant
    span("Acme Corp", "ORG"),                  # agrees
])})

report = agreement(alice, bob)
print(f"alice: {report.count_a} spans, bob: {report.count_b} spans")
print(f"accepted (exact span+label): {report.accepted}")
print(f"acceptance rate = accepted / max = {report.acceptance_rate:.3f}")
print(f"pairwise F1 = {report.pairwise_f1:.3f}")
print("per type (alice, bob, agreed):")
for t, row in report.per_type_agreement.items():
    print(f"  {t:<18} {row}")

accepted = merge_group([alice, bob])
print("\naccepted gold standard:")
for m in accepted.entries["doc"]:
    print(f"  {m.label:<14} {TEXT[m.start:m.end]!r}")
print("distribution:", label_distribution(accepted))

print("\nBoth 'Microsoft Word' readings died (split vs merged), and the")
print("'Windows' boundary variant died too: exact-match agreement is strict.")
