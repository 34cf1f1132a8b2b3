"""Entity type registry: the two schema rounds and the label migration.

The type inventory was revised after the first annotation round: Tool folded
into Software_Name, Process became Function, Filepath widened to Path, and
File_Extension arrived.  This walk-through prints both inventories and runs
the migration over every first-round label.
"""

from cyents import schema

print("=== round 2 types by category ===")
for category in ("regex", "builtin-rule", "gazetteer", "statistical"):
    names = schema.round2.names_by_category(category)
    cyber = [n for n in names if schema.round2.types[n].origin == "cyber"]
    general = [n for n in names if schema.round2.types[n].origin == "general"]
    print(f"{category:>13}: {', '.join(cyber)}")
    if general:
        print(f"{'':>13}  (+ {len(general)} general types: {', '.join(general[:6])}, ...)")

print("\n=== round 1 -> round 2 migration ===")
for name in schema.round1.type_names():
    target = schema.migrate_label(name)
    if target != name:
        print(f"  {name:<12} -> {target}")

print("\nLookups are exact and version-scoped:")
print("  Threat_Actor in round2:", schema.lookup_type("Threat_Actor", "round2").category)
try:
    schema.lookup_type("Tool", "round2")
except schema.UnknownType as exc:
    print("  Tool in round2:", exc)

print("\nThe full schema also round-trips through JSON (see `cyents schema export`).")
