"""Rule-based recognition: format regexes and gazetteer automata.

Format types (IP addresses, hashes, ports, CVE ids, emails, URLs) match by
shape; closed-vocabulary types match from the packaged seed term lists via
an Aho-Corasick automaton.  ``prepopulate`` unions both, giving regexes
priority where they collide.
"""

from pathlib import Path

from cyents.rules import load_gazetteer_dir, match_patterns, prepopulate
from cyents.textcorpus import Document

GAZETTEER_DIR = Path(__file__).parents[1] / "src" / "cyents" / "data" / "gazetteers"

TEXT = (
    "The Ursnif banking trojan spread over SMB from 185.62.190.39:8443, "
    "dropping a .exe loader with MD5 d41d8cd98f00b204e9800998ecf8427e. "
    "It exploits CVE-2017-0144 on unpatched Windows 7 hosts, beacons to "
    "https://cdn.bad.example/u.php over HTTPS, and mails stolen data to "
    "drop@bad.example. Blue teams should watch ports 445 and port 8443."
)

doc = Document("demo", TEXT)

print("=== format matches alone ===")
for m in match_patterns(doc):
    print(f"  {m.label:<12} {TEXT[m.start:m.end]}")

gazetteers = load_gazetteer_dir(GAZETTEER_DIR)
print(f"\n=== prepopulate with {len(gazetteers)} gazetteers ===")
for m in prepopulate(doc, gazetteers).entries["demo"]:
    print(f"  {m.label:<20} {TEXT[m.start:m.end]!r}")

print("\nNote the priority rule: 'HTTPS' inside the URL is part of the URL")
print("mention, while the standalone 'HTTPS' and 'SMB' match the Protocol")
print("gazetteer; 'Windows 7' matches leftmost-longest over plain 'Windows'.")
