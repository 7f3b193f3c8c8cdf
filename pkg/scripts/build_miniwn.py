#!/usr/bin/env python3
"""Generate the miniature WordNet fixture under fixtures/miniwn/.

The synset inventory below is declared by hand; this script only computes
the byte offsets and renders the WNDB text format. It also writes
manifest.json, the audited ground truth the parser tests compare against.
"""

import json
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "fixtures" / "miniwn"

HEADER = (
    "  1 miniwn fixture database\n"
    "  2 hand-built miniature lexicon for tests\n"
    "  3 format: WordNet 3.x database layout\n"
)

# (key, pos_code, lex_filenum, lemmas, definition, examples, pointers)
# pointers: (symbol, target_key)
SYNSETS = [
    # ---- nouns ----------------------------------------------------------
    ("n.entity", "n", 3, ["entity"],
     "that which is perceived or known to have its own distinct existence",
     [],
     [("~", "n.object"), ("~", "n.abstraction")]),
    ("n.object", "n", 3, ["object", "physical_object"],
     "a tangible and visible entity",
     ["it was full of rackets, balls and other objects"],
     [("@", "n.entity"), ("~", "n.land"), ("~", "n.animal"), ("~", "n.plant")]),
    ("n.abstraction", "n", 3, ["abstraction"],
     "a general concept formed by extracting common features from specific examples",
     [],
     [("@", "n.entity"), ("~", "n.institution"), ("~", "n.run_score"),
      ("~", "n.speed")]),
    ("n.land", "n", 17, ["land", "dry_land"],
     "the solid part of the earth's surface",
     ["the plane turned away from the sea and moved back over land"],
     [("@", "n.object"), ("~", "n.bank_river")]),
    ("n.institution", "n", 14, ["institution", "establishment"],
     "an organization founded and united for a specific purpose",
     [],
     [("@", "n.abstraction"), ("~", "n.bank_fin")]),
    ("n.bank_fin", "n", 14, ["bank", "depository_financial_institution"],
     "a financial institution that accepts deposits and channels the money "
     "into lending activities",
     ["he cashed a check at the bank"],
     [("@", "n.institution")]),
    ("n.bank_river", "n", 17, ["bank", "riverbank"],
     "the land alongside a river or a body of water",
     ["they walked along the river bank"],
     [("@", "n.land")]),
    ("n.animal", "n", 5, ["animal", "creature"],
     "a living organism characterized by voluntary movement",
     [],
     [("@", "n.object"), ("~", "n.dog"), ("~", "n.man")]),
    ("n.dog", "n", 5, ["dog", "domestic_dog"],
     "a member of the genus canis bred in a great many varieties",
     ["the dog barked all night"],
     [("@", "n.animal")]),
    ("n.man", "n", 18, ["man", "adult_male"],
     "an adult male person",
     [],
     [("@", "n.animal")]),
    ("n.plant", "n", 20, ["plant", "flora"],
     "a living organism lacking the power of locomotion",
     [],
     [("@", "n.object"), ("~", "n.tree"), ("~", "n.fruit")]),
    ("n.tree", "n", 20, ["tree"],
     "a tall perennial woody plant having a main trunk",
     ["he planted a tree by the river"],
     [("@", "n.plant")]),
    ("n.fruit", "n", 20, ["fruit"],
     "the ripened reproductive body of a seed plant",
     [],
     [("@", "n.plant")]),
    ("n.run_score", "n", 4, ["run"],
     "a score in baseball made by a runner touching all four bases safely",
     ["the yankees scored three runs"],
     [("@", "n.abstraction")]),
    ("n.speed", "n", 7, ["speed", "swiftness"],
     "a rate that is rapid",
     [],
     [("@", "n.abstraction"), ("=", "a.fast")]),
    # ---- verbs ----------------------------------------------------------
    ("v.move", "v", 38, ["travel", "go", "move"],
     "change location; move, travel, or proceed",
     ["how fast does your new car go"],
     [("~", "v.run_fast"), ("~", "v.walk")]),
    ("v.control", "v", 41, ["control", "command"],
     "exercise authoritative control or power over",
     ["control the budget"],
     [("~", "v.run_operate")]),
    ("v.run_fast", "v", 38, ["run"],
     "move fast by using one's legs",
     ["the children ran to the store"],
     [("@", "v.move")]),
    ("v.run_operate", "v", 41, ["run", "operate"],
     "direct or control; projects, businesses, etc.",
     ["she is running a relief operation in the bank"],
     [("@", "v.control")]),
    ("v.walk", "v", 38, ["walk"],
     "use one's feet to advance; advance by steps",
     ["walk along the beach"],
     [("@", "v.move")]),
    # ---- adjectives -----------------------------------------------------
    ("a.fast", "a", 0, ["fast", "speedy"],
     "acting or moving or capable of acting or moving quickly",
     ["fast film", "a fast car"],
     [("&", "a.quick"), ("!", "a.slow"), ("=", "n.speed")]),
    ("a.quick", "a", 0, ["quick"],
     "accomplished rapidly and without delay",
     ["a quick inspection"],
     [("&", "a.fast"), ("+", "r.quickly")]),
    ("a.slow", "a", 0, ["slow"],
     "not moving quickly; proceeding at a low rate of speed",
     [],
     [("!", "a.fast"), ("^", "a.sluggish")]),
    ("a.sluggish", "s", 0, ["sluggish"],
     "moving slowly",
     ["a sluggish stream"],
     [("&", "a.slow")]),
    ("a.happy", "a", 0, ["happy", "glad"],
     "enjoying or showing or marked by joy or pleasure",
     ["a happy smile"],
     []),
    ("a.bright", "a", 0, ["bright"],
     "emitting or reflecting light readily or in large amounts",
     ["the sun was bright"],
     []),
    # ---- adverbs --------------------------------------------------------
    ("r.quickly", "r", 2, ["quickly", "rapidly"],
     "with speed",
     ["he works quickly"],
     [("+", "a.quick")]),
    ("r.slowly", "r", 2, ["slowly"],
     "without speed",
     ["he spoke slowly"],
     [("!", "r.quickly")]),
]

EXCEPTIONS = {
    "noun": [("men", ["man"])],
    "verb": [("ran", ["run"])],
    "adj": [],
    "adv": [],
}

POS_NAME = {"n": "noun", "v": "verb", "a": "adjective", "s": "adjective",
            "r": "adverb"}
FILE_SUFFIX = {"n": "noun", "v": "verb", "a": "adj", "s": "adj", "r": "adv"}
RELATION_BY_SYMBOL = {
    "@": "hypernym", "~": "hyponym", "&": "similar_to", "^": "also_see",
    "!": "antonym", "=": "attribute", "+": "derivationally_related",
}
# declared by hand from the taxonomy above
MAX_DEPTH = {"noun": 4, "verb": 2, "adjective": 1, "adverb": 1}


def render_data_line(entry, offsets):
    key, code, lexfile, lemmas, definition, examples, pointers = entry
    parts = [f"{offsets[key]:08d}", f"{lexfile:02d}", code, f"{len(lemmas):02x}"]
    for lemma in lemmas:
        parts += [lemma, "0"]
    parts.append(f"{len(pointers):03d}")
    for symbol, target_key in pointers:
        target_code = target_key.split(".")[0].replace("s", "a")
        # pointers into data.adj may target satellite synsets
        target_entry = next(e for e in SYNSETS if e[0] == target_key)
        parts += [symbol, f"{offsets[target_key]:08d}", target_entry[1], "0000"]
    if code == "v":
        parts.append("00")
    gloss = definition + "".join(f'; "{ex}"' for ex in examples)
    return " ".join(parts) + " | " + gloss


def main():
    OUT.mkdir(parents=True, exist_ok=True)

    by_file = {}
    for entry in SYNSETS:
        by_file.setdefault(FILE_SUFFIX[entry[1]], []).append(entry)

    # pass 1: measure offsets with dummy values (all offsets fixed width)
    offsets = {e[0]: 0 for e in SYNSETS}
    for suffix, entries in by_file.items():
        position = len(HEADER.encode())
        for entry in entries:
            offsets[entry[0]] = position
            position += len(render_data_line(entry, offsets).encode()) + 1

    # pass 2: render with real offsets
    for suffix, entries in by_file.items():
        lines = [render_data_line(e, offsets) for e in entries]
        (OUT / f"data.{suffix}").write_text(HEADER + "\n".join(lines) + "\n",
                                            encoding="utf-8")

    # index files: lemma -> ordered senses (declaration order = sense order)
    for suffix, entries in by_file.items():
        senses = {}
        for entry in entries:
            for lemma in entry[3]:
                senses.setdefault(lemma, []).append(entry)
        lines = []
        for lemma in sorted(senses):
            entry_list = senses[lemma]
            symbols = []
            for entry in entry_list:
                for symbol, _ in entry[6]:
                    if symbol not in symbols:
                        symbols.append(symbol)
            pos_code = entry_list[0][1].replace("s", "a")
            parts = [lemma, pos_code, str(len(entry_list)), str(len(symbols))]
            parts += symbols
            parts += [str(len(entry_list)), "0"]
            parts += [f"{offsets[e[0]]:08d}" for e in entry_list]
            lines.append(" ".join(parts))
        (OUT / f"index.{suffix}").write_text(HEADER + "\n".join(lines) + "\n",
                                             encoding="utf-8")

    for suffix, pairs in EXCEPTIONS.items():
        body = "".join(f"{surface} {' '.join(lemmas)}\n"
                       for surface, lemmas in pairs)
        (OUT / f"{suffix}.exc").write_text(body, encoding="utf-8")

    manifest = {
        "counts": {},
        "max_depth": MAX_DEPTH,
        "exceptions": {
            {"noun": "noun", "verb": "verb", "adj": "adjective",
             "adv": "adverb"}[suffix]: [[surface, lemmas]
                                        for surface, lemmas in pairs]
            for suffix, pairs in EXCEPTIONS.items()},
        "synsets": [],
    }
    counts = {}
    for entry in SYNSETS:
        key, code, lexfile, lemmas, definition, examples, pointers = entry
        pos = POS_NAME[code]
        counts[pos] = counts.get(pos, 0) + 1
        manifest["synsets"].append({
            "key": key,
            "pos": pos,
            "lemmas": lemmas,
            "definition": definition,
            "examples": examples,
            "relations": [[RELATION_BY_SYMBOL[s], t] for s, t in pointers],
        })
    manifest["counts"] = counts
    (OUT / "manifest.json").write_text(
        json.dumps(manifest, indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8")
    print(f"wrote {len(SYNSETS)} synsets to {OUT}")


if __name__ == "__main__":
    main()
