"""Fictional entity names.

Names are minted from syllable pools (onset + nucleus + optional coda)
and must clear two gates: every whitespace token avoids the shipped
common-English blocklist, and the full name is unique within a graph.
Heads look like "Drymorel" or "Thaldric"; a domain-flavored suffix makes
every canonical name at least two words.
"""

from __future__ import annotations

import random
from functools import lru_cache
from importlib import resources

from .errors import NameSpaceExhausted

MAX_NAME_ATTEMPTS = 1000

ONSETS = [
    "b", "br", "d", "dr", "f", "fl", "g", "gr", "h", "k", "l",
    "m", "n", "p", "r", "s", "t", "th", "tr", "v", "z",
]
NUCLEI = ["a", "a", "e", "e", "i", "o", "o", "u", "y", "au", "ia", "or"]
FINAL_CODAS = ["", "l", "r", "n", "m", "th", "s", "ric", "rel", "vel", "dor", "mar", "ski", "x"]

# Suffix vocabularies per default domain; every word here must stay off
# the blocklist (generation re-checks and skips violations).
DOMAIN_SUFFIXES: dict[str, list[str]] = {
    "Person": [],  # persons get a second minted word instead
    "Location": ["Fells", "Tarn", "Crag", "Knoll", "Shoal", "Heath", "Glen", "Moor", "Vale", "Mire"],
    "Organization": ["Syndicate", "Consortium", "Conclave", "Cartel", "Atelier", "Guildhall"],
    "Profession": [],  # two-word occupational suffix, see PROFESSION_*
    "Artifact": ["Reliquary", "Astrolabe", "Censer", "Orrery", "Diadem", "Chalice", "Talisman"],
    "Event": ["Regatta", "Masque", "Cavalcade", "Jubilee", "Moot", "Vigil", "Equinox"],
    "Creature": ["Wyrm", "Basilisk", "Marten", "Kestrel", "Civet", "Lynx", "Heron", "Grouse"],
}
PROFESSION_FIRST = ["Sluice", "Loom", "Skiff", "Byre", "Fen", "Spoor"]
PROFESSION_SECOND = ["Warden", "Shaper", "Binder", "Herder", "Scrivener", "Wrangler", "Wright"]


@lru_cache(maxsize=1)
def blocklist() -> frozenset[str]:
    """The shipped 10k-word common-English blocklist, lowercased."""
    text = resources.files("mixsd.data").joinpath("common_words.txt").read_text("utf-8")
    return frozenset(text.split())


def is_blocked(name: str) -> bool:
    """True when any whitespace token of the name is a common English word."""
    blocked = blocklist()
    return any(tok.lower() in blocked for tok in name.split())


def mint_head(rng: random.Random) -> str:
    n = rng.choice((2, 2, 3))
    parts = [rng.choice(ONSETS) + rng.choice(NUCLEI) for _ in range(n)]
    word = "".join(parts) + rng.choice(FINAL_CODAS)
    return word[:1].upper() + word[1:]


def _suffix_for(domain: str, rng: random.Random) -> str:
    if domain == "Person":
        return mint_head(rng)
    if domain == "Profession":
        choices = [
            f"{a} {b}"
            for a in PROFESSION_FIRST
            for b in PROFESSION_SECOND
            if not is_blocked(a) and not is_blocked(b)
        ]
        return rng.choice(choices)
    pool = [s for s in DOMAIN_SUFFIXES.get(domain, []) if not is_blocked(s)]
    if pool:
        return rng.choice(pool)
    return mint_head(rng)


def mint_name(domain: str, rng: random.Random, taken: set[str]) -> str:
    """A fresh multi-word canonical name for an entity of the given domain.

    Retries up to MAX_NAME_ATTEMPTS times against the blocklist and the
    set of already-taken names, then raises NameSpaceExhausted.
    """
    for _ in range(MAX_NAME_ATTEMPTS):
        name = f"{mint_head(rng)} {_suffix_for(domain, rng)}"
        if name in taken or is_blocked(name):
            continue
        return name
    raise NameSpaceExhausted(f"could not mint a fresh name for domain {domain!r}")
