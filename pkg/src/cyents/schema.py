"""Entity type registry for the cybersecurity tag set.

Two schema versions exist.  The first annotation round used a provisional
type list; the second round renamed or merged several types that annotators
could not apply consistently (Tool folded into Software_Name, Process
recast as Function, Filepath generalised to Path) and added File_Extension.
``migrate_label`` maps round-1 labels onto the round-2 set.

Each type carries a ``category`` describing how mentions of it are found:

* ``regex``        -- strict surface format (IP_Address, Hash, Port, CVE)
* ``builtin-rule`` -- format-based, handled by stock recognizers (Email, URL)
* ``gazetteer``    -- closed-ish vocabulary matched from curated term lists
* ``statistical``  -- open vocabulary, left to the trained tagger

General-domain types (PERSON, ORG, DATE, ...) use the standard 18-type
general-purpose tag set and are always ``statistical``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

CATEGORIES = ("regex", "gazetteer", "statistical", "builtin-rule")
ORIGINS = ("cyber", "general")

ROUND1 = "round1"
ROUND2 = "round2"

#: Sentinel returned by migrate_label for retired labels with no replacement.
DROP = None


class UnknownType(KeyError):
    """Raised when a label is not defined in the schema version at hand."""

    def __init__(self, name, version=None):
        self.name = name
        self.version = version
        where = f" in {version}" if version else ""
        super().__init__(f"unknown entity type {name!r}{where}")


@dataclass(frozen=True)
class EntityType:
    name: str
    category: str
    origin: str
    description: str

    def __post_init__(self):
        if self.category not in CATEGORIES:
            raise ValueError(f"bad category {self.category!r} for {self.name}")
        if self.origin not in ORIGINS:
            raise ValueError(f"bad origin {self.origin!r} for {self.name}")


@dataclass(frozen=True)
class SchemaVersion:
    id: str
    types: dict[str, EntityType]
    migration: dict[str, str | None] = field(default_factory=dict)

    def __contains__(self, name):
        return name in self.types

    def type_names(self):
        return sorted(self.types)

    def names_by_category(self, category):
        return sorted(t.name for t in self.types.values() if t.category == category)

    def statistical_types(self):
        return self.names_by_category("statistical")

    def export(self) -> dict:
        """JSON-ready document: ``{version, types: [...], migration: {...}}``."""
        return {
            "version": self.id,
            "types": [
                {
                    "name": t.name,
                    "category": t.category,
                    "origin": t.origin,
                    "description": t.description,
                }
                for t in sorted(self.types.values(), key=lambda t: t.name)
            ],
            "migration": dict(sorted(self.migration.items())),
        }

    def to_json(self) -> str:
        return json.dumps(self.export(), indent=2, sort_keys=False)


def schema_from_export(doc: dict) -> SchemaVersion:
    """Inverse of :meth:`SchemaVersion.export`."""
    types = {
        t["name"]: EntityType(t["name"], t["category"], t["origin"], t["description"])
        for t in doc["types"]
    }
    return SchemaVersion(id=doc["version"], types=types, migration=dict(doc.get("migration", {})))


# --- type definitions -------------------------------------------------------

_REGEX_TYPES = {
    "IP_Address": "IPv4 or IPv6 address literal, e.g. 10.0.0.1.",
    "Hash": "MD5, SHA-1 or SHA-256 digest printed as hex.",
    "Port": "TCP/UDP port number named as such, e.g. 'port 443'.",
    "CVE": "CVE vulnerability identifier, e.g. CVE-2021-44228.",
}

_BUILTIN_TYPES = {
    "Email": "Email address.",
    "URL": "Web or FTP address including the scheme.",
}

_GAZETTEER_TYPES = {
    "Operating_System": "Operating system a sample runs on or targets, e.g. Windows 10.",
    "File_Extension": "File extension written with its dot, e.g. .exe.",
    "Attack_Type": "Kind of attack, e.g. phishing, SQL injection.",
    "Programming_Language": "Language the malware or tooling is written in.",
    "Malware_Type": "Family-independent malware class, e.g. ransomware, trojan.",
    "Protocol": "Network protocol by name, e.g. HTTPS, SMB.",
}

_STATISTICAL_CYBER = {
    "Malware_Name": "Proper name of a malware family or sample, e.g. WannaCry.",
    "Software_Name": "Named software product, library or tool.",
    "Version_Tag": "Version designator attached to software, e.g. 2.4.1 or v11.",
    "Vulnerability": "Named vulnerability other than a bare CVE id, e.g. Log4Shell.",
    "Threat_Actor": "Named attacker, group or intrusion set, e.g. Lazarus Group.",
    "Campaign": "Named attack campaign or operation.",
    "Path": "File-system path or file name.",
    "Function": "Named function, method or API call, e.g. CreateRemoteThread.",
}

# Round-1 types retired before round 2.
_ROUND1_ONLY = {
    "Filename": "Name of a file, with or without a path.",
    "Filepath": "File-system path.",
    "Tool": "Attacker or administrator tool.",
    "Process": "Named running process.",
}

# The standard 18-type general-purpose tag set.
_GENERAL_TYPES = {
    "PERSON": "People, including fictional.",
    "NORP": "Nationalities, religious and political groups.",
    "FAC": "Buildings, airports, highways, bridges.",
    "ORG": "Companies, agencies, institutions.",
    "GPE": "Countries, cities, states.",
    "LOC": "Non-GPE locations, mountain ranges, bodies of water.",
    "PRODUCT": "Physical objects, vehicles, foods (not services).",
    "EVENT": "Named hurricanes, battles, wars, sports events.",
    "WORK_OF_ART": "Titles of books, songs, etc.",
    "LAW": "Named documents made into laws.",
    "LANGUAGE": "Any named natural language.",
    "DATE": "Absolute or relative dates or periods.",
    "TIME": "Times smaller than a day.",
    "PERCENT": "Percentage, including '%'.",
    "MONEY": "Monetary values, including unit.",
    "QUANTITY": "Measurements, as of weight or distance.",
    "ORDINAL": "'first', 'second', etc.",
    "CARDINAL": "Numerals that do not fall under another type.",
}


def _build_types(cyber_specs):
    types = {}
    for name, desc in cyber_specs.items():
        if name in _REGEX_TYPES:
            cat = "regex"
        elif name in _BUILTIN_TYPES:
            cat = "builtin-rule"
        elif name in _GAZETTEER_TYPES:
            cat = "gazetteer"
        else:
            cat = "statistical"
        types[name] = EntityType(name, cat, "cyber", desc)
    for name, desc in _GENERAL_TYPES.items():
        types[name] = EntityType(name, "statistical", "general", desc)
    return types


_ROUND2_CYBER = {
    **_REGEX_TYPES,
    **_BUILTIN_TYPES,
    **_GAZETTEER_TYPES,
    **_STATISTICAL_CYBER,
}

_ROUND1_CYBER = {
    k: v for k, v in _ROUND2_CYBER.items() if k not in ("File_Extension", "Function", "Path")
}
_ROUND1_CYBER.update(_ROUND1_ONLY)

# Renames applied between rounds.  Filename had no stated successor; file
# names are degenerate paths, so it follows Filepath into Path.
_RENAMES = {
    "Tool": "Software_Name",
    "Process": "Function",
    "Filepath": "Path",
    "Filename": "Path",
}

round1 = SchemaVersion(id=ROUND1, types=_build_types(_ROUND1_CYBER))

round2 = SchemaVersion(
    id=ROUND2,
    types=_build_types(_ROUND2_CYBER),
    migration=dict(_RENAMES),
)

VERSIONS = {ROUND1: round1, ROUND2: round2}


def get_version(version_id) -> SchemaVersion:
    if isinstance(version_id, SchemaVersion):
        return version_id
    try:
        return VERSIONS[version_id]
    except KeyError:
        raise UnknownType(version_id) from None


def lookup_type(name: str, version) -> EntityType:
    """Exact-match lookup of ``name`` in a schema version."""
    version = get_version(version)
    try:
        return version.types[name]
    except KeyError:
        raise UnknownType(name, version.id) from None


def migrate_label(label: str) -> str | None:
    """Map a round-1 label to its round-2 replacement (or :data:`DROP`).

    Identity on labels that survived into round 2; raises
    :class:`UnknownType` for labels in neither version.
    """
    if label in round2.types:
        return label
    if label in _RENAMES:
        return _RENAMES[label]
    if label in round1.types:  # pragma: no cover - no such label today
        return DROP
    raise UnknownType(label)
