"""Regenerate src/mixsd/data/common_words.txt.

The blocklist is the top-N English words by frequency over a large local
text corpus (package documentation, docstrings, READMEs), merged with a
hand-curated supplement of everyday vocabulary that technical prose
underrepresents.  The output is exactly TARGET_SIZE lowercase words, one
per line, LF, sorted by (frequency desc, word asc) with supplement words
pinned in.

Run from the repository root:

    python scripts/build_blocklist.py
"""

import collections
import pathlib
import re
import sys

TARGET_SIZE = 10_000

CORPUS_ROOTS = [
    "/usr/local/lib/python3.10/dist-packages",
    "/usr/lib/python3.10",
    "/usr/share/doc",
]

# Everyday words that rarely show up in technical documentation but are
# firmly common English.  Fictional entity names must avoid these too.
SUPPLEMENT = """
valley river mountain forest ocean lake beach island desert meadow hill
cliff cave waterfall stream pond shore coast harbor bay gulf plain
breakfast lunch dinner supper bread butter cheese milk meat rice soup
salad fruit apple banana orange grape lemon pear peach berry melon
coffee tea juice sugar salt pepper honey cake cookie pie chocolate
mother father sister brother uncle aunt cousin nephew niece grandmother
grandfather husband wife daughter son baby twin family neighbor friend
head shoulder elbow wrist finger thumb knee ankle toe cheek chin
forehead eyebrow eyelash lip tongue tooth throat chest stomach hip
dog cat horse cow pig sheep goat chicken duck goose rabbit mouse deer
bear wolf fox lion tiger elephant monkey snake frog fish whale shark
eagle owl crow sparrow robin pigeon bee ant spider butterfly worm
shirt pants dress skirt coat jacket sweater scarf glove sock shoe boot
hat belt button pocket collar sleeve zipper
rain snow wind storm thunder lightning fog mist cloud sunshine hail
breeze frost dew rainbow drought flood
red blue green yellow purple pink brown black white gray silver gold
kitchen bedroom bathroom hallway ceiling attic basement garage porch
fence garden lawn roof chimney stair carpet curtain pillow blanket
mirror drawer shelf cupboard
doctor nurse teacher farmer baker butcher carpenter plumber lawyer
soldier sailor pilot painter singer dancer actor writer poet
walk run jump swim climb crawl dance sing laugh cry smile frown shout
whisper eat drink sleep wake dream cook bake wash clean sweep dig
plant grow pick throw catch kick push pull carry lift drop
happy sad angry tired hungry thirsty afraid brave proud shy lonely
gentle kind cruel lazy busy quiet loud bright dark warm cool wet dry
soft hard smooth rough sweet sour bitter salty fresh stale young old
tall short fat thin wide narrow deep shallow heavy light quick slow
church temple castle palace tower bridge tunnel road street alley
market shop store bakery library museum theater hospital prison farm
mill barn stable well fountain statue monument square park playground
spring summer autumn winter morning noon evening midnight yesterday
tomorrow week month year holiday birthday wedding funeral
king queen prince princess knight duke baron emperor empress throne
crown sword shield arrow bow spear armor banner flag
boat ship canoe ferry raft sail anchor oar wagon cart sled carriage
bicycle train truck airplane rocket
moon star planet comet sky horizon sunrise sunset twilight dawn dusk
fire flame ash smoke ember coal wood stone rock sand mud clay dust
iron copper tin lead brass bronze steel glass wool silk cotton leather
rope chain nail hammer saw axe shovel rake ladder bucket basket jar
bottle cup plate bowl spoon fork knife kettle pot pan oven stove lamp
candle torch lantern bell drum flute violin piano trumpet
""".split()


def harvest_counts() -> collections.Counter:
    word_re = re.compile(r"[A-Za-z]+")
    counts: collections.Counter = collections.Counter()
    for root in CORPUS_ROOTS:
        base = pathlib.Path(root)
        if not base.exists():
            continue
        for path in base.rglob("*"):
            if path.suffix not in {".py", ".txt", ".md", ".rst"}:
                continue
            try:
                text = path.read_text(errors="ignore")
            except OSError:
                continue
            for word in word_re.findall(text):
                if 2 <= len(word) <= 24:
                    counts[word.lower()] += 1
    return counts


def main() -> int:
    out = pathlib.Path(__file__).resolve().parents[1] / "src" / "mixsd" / "data" / "common_words.txt"
    counts = harvest_counts()
    supplement = sorted(set(SUPPLEMENT))
    ranked = [w for w, _ in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))]
    chosen = list(supplement)
    seen = set(chosen)
    for word in ranked:
        if len(chosen) >= TARGET_SIZE:
            break
        if word not in seen:
            chosen.append(word)
            seen.add(word)
    if len(chosen) < TARGET_SIZE:
        print(f"corpus too small: {len(chosen)} words", file=sys.stderr)
        return 1
    chosen.sort()
    out.write_text("\n".join(chosen) + "\n", encoding="utf-8")
    print(f"wrote {len(chosen)} words to {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
