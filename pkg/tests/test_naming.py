import random

import pytest

from mixsd import naming
from mixsd.errors import NameSpaceExhausted


def test_blocklist_size_and_content():
    words = naming.blocklist()
    assert len(words) == 10_000
    assert "the" in words and "answer" in words and "foundation" in words
    assert all(w == w.lower() for w in list(words)[:50])


def test_is_blocked_per_token():
    assert naming.is_blocked("Shiny Foundation")  # suffix word is common
    assert not naming.is_blocked("Drymorel Atelier")


def test_minted_names_multiword_and_clean():
    rng = random.Random(0)
    taken: set[str] = set()
    for domain in ("Person", "Location", "Organization", "Profession", "Artifact"):
        for _ in range(40):
            name = naming.mint_name(domain, rng, taken)
            taken.add(name)
            assert len(name.split()) >= 2
            assert not naming.is_blocked(name)


def test_profession_names_have_occupational_suffix():
    rng = random.Random(3)
    name = naming.mint_name("Profession", rng, set())
    assert len(name.split()) == 3  # head + two-word occupation


def test_determinism():
    a = naming.mint_name("Location", random.Random(7), set())
    b = naming.mint_name("Location", random.Random(7), set())
    assert a == b


def test_exhaustion_raises():
    rng = random.Random(1)
    taken: set[str] = set()
    # force collisions by pre-claiming every name the rng would mint
    for _ in range(200):
        taken.add(naming.mint_name("Creature", random.Random(1), set(taken)))
    with pytest.raises(NameSpaceExhausted):
        blocked_everything = naming.mint_name
        # a generator whose every candidate is already taken must give up
        rng2 = random.Random(1)

        class AlwaysTaken(set):
            def __contains__(self, item):
                return True

        blocked_everything("Creature", rng2, AlwaysTaken())
