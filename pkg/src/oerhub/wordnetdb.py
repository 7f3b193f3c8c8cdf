"""Parser for the standard WordNet 3.x database file layout.

Reads ``index.{noun,verb,adj,adv}``, ``data.{noun,verb,adj,adv}`` and the
``{pos}.exc`` exception files from a directory into an immutable in-memory
lexical database. Satellite adjective synsets (type ``s``) are folded into
the adjective POS. Unresolvable pointers are a hard load error.
"""

from __future__ import annotations

import enum
import re
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

from .errors import LoadError, ParseError, UsageError


class POS(str, enum.Enum):
    NOUN = "noun"
    VERB = "verb"
    ADJECTIVE = "adjective"
    ADVERB = "adverb"


# file-name suffix per POS
_POS_SUFFIX = {
    POS.NOUN: "noun",
    POS.VERB: "verb",
    POS.ADJECTIVE: "adj",
    POS.ADVERB: "adv",
}

# one-letter synset-type codes as they appear in data files and pointers
_POS_BY_CODE = {
    "n": POS.NOUN,
    "v": POS.VERB,
    "a": POS.ADJECTIVE,
    "s": POS.ADJECTIVE,  # satellites folded into adjective
    "r": POS.ADVERB,
}
_CODE_BY_POS = {POS.NOUN: "n", POS.VERB: "v", POS.ADJECTIVE: "a", POS.ADVERB: "r"}

_RELATION_BY_SYMBOL = {
    "@": "hypernym",
    "@i": "hypernym",
    "~": "hyponym",
    "~i": "hyponym",
    "&": "similar_to",
    "^": "also_see",
    "!": "antonym",
    "=": "attribute",
    "+": "derivationally_related",
}

TAXONOMIC_POS = (POS.NOUN, POS.VERB)


@dataclass(frozen=True, order=True)
class SynsetId:
    pos: POS
    offset: int


@dataclass
class Synset:
    id: SynsetId
    lemmas: list[str]
    gloss: str                       # definition only, examples split out
    examples: list[str]
    relations: list[tuple[str, SynsetId]]
    lex_filenum: int = 0
    lex_ids: list[int] = field(default_factory=list)


@dataclass
class LexicalDatabase:
    synsets: dict[SynsetId, Synset]
    index: dict[tuple[str, POS], list[SynsetId]]
    exceptions: dict[tuple[str, POS], list[str]]
    max_depth: dict[POS, int]


_EXAMPLE_RE = re.compile(r'"([^"]*)"')


def split_gloss(raw: str) -> tuple[str, list[str]]:
    """Split a raw gloss into (definition, examples).

    Double-quoted segments are example sentences; everything else, joined
    on the ``;`` separators, is the definition.
    """
    examples = _EXAMPLE_RE.findall(raw)
    without = _EXAMPLE_RE.sub("", raw)
    parts = [p.strip() for p in without.split(";")]
    definition = "; ".join(p for p in parts if p)
    return definition, examples


def _parse_data_line(filename: str, line_no: int, line: str) -> Synset:
    try:
        head, _, gloss_raw = line.partition("|")
        fields = head.split()
        offset = int(fields[0])
        lex_filenum = int(fields[1])
        ss_code = fields[2]
        pos = _POS_BY_CODE[ss_code]
        w_cnt = int(fields[3], 16)
        lemmas = []
        lex_ids = []
        i = 4
        for _ in range(w_cnt):
            lemmas.append(fields[i].lower())
            lex_ids.append(int(fields[i + 1], 16))
            i += 2
        p_cnt = int(fields[i])
        i += 1
        relations: list[tuple[str, SynsetId]] = []
        for _ in range(p_cnt):
            symbol, tgt_offset, tgt_pos_code = fields[i], fields[i + 1], fields[i + 2]
            # fields[i + 3] is the lexical source/target byte pair; synset level only
            i += 4
            kind = _RELATION_BY_SYMBOL.get(symbol)
            if kind is not None:
                relations.append((kind, SynsetId(_POS_BY_CODE[tgt_pos_code], int(tgt_offset))))
        if not lemmas:
            raise ValueError("synset has no words")
        definition, examples = split_gloss(gloss_raw.strip())
        return Synset(
            id=SynsetId(pos, offset),
            lemmas=lemmas,
            gloss=definition,
            examples=examples,
            relations=relations,
            lex_filenum=lex_filenum,
            lex_ids=lex_ids,
        )
    except (IndexError, ValueError, KeyError) as exc:
        raise ParseError(filename, line_no, f"malformed data line: {exc}") from exc


def dump_data_line(s: Synset) -> str:
    """Re-serialize a synset as a WNDB data record (debug dump).

    Verb frame counts are emitted as zero; the line re-parses to an equal
    synset.
    """
    code = _CODE_BY_POS[s.id.pos]
    parts = [f"{s.id.offset:08d}", f"{s.lex_filenum:02d}", code, f"{len(s.lemmas):02x}"]
    for lemma, lex_id in zip(s.lemmas, s.lex_ids or [0] * len(s.lemmas)):
        parts.append(lemma)
        parts.append(f"{lex_id:x}")
    parts.append(f"{len(s.relations):03d}")
    symbol_by_kind = {
        "hypernym": "@", "hyponym": "~", "similar_to": "&", "also_see": "^",
        "antonym": "!", "attribute": "=", "derivationally_related": "+",
    }
    for kind, target in s.relations:
        parts.append(symbol_by_kind[kind])
        parts.append(f"{target.offset:08d}")
        parts.append(_CODE_BY_POS[target.pos])
        parts.append("0000")
    if s.id.pos is POS.VERB:
        parts.append("00")
    gloss = s.gloss
    for ex in s.examples:
        gloss += f'; "{ex}"'
    return " ".join(parts) + " | " + gloss


def _iter_content_lines(path: Path):
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if line.startswith(" ") or not line.strip():
                continue  # license header / blank
            yield line_no, line.rstrip("\n")


def _parse_index_line(filename: str, line_no: int, line: str,
                      pos: POS) -> tuple[str, list[SynsetId]]:
    try:
        fields = line.split()
        lemma = fields[0].lower()
        p_cnt = int(fields[3])
        i = 4 + p_cnt
        sense_cnt = int(fields[i])
        offsets = fields[i + 2: i + 2 + sense_cnt]
        if len(offsets) != sense_cnt:
            raise ValueError("offset count does not match sense count")
        return lemma, [SynsetId(pos, int(o)) for o in offsets]
    except (IndexError, ValueError) as exc:
        raise ParseError(filename, line_no, f"malformed index line: {exc}") from exc


def _compute_max_depth(synsets: dict[SynsetId, Synset], pos: POS) -> int:
    """Longest hypernym chain, counted in nodes, over one POS taxonomy."""
    depth: dict[SynsetId, int] = {}

    def chain_len(sid: SynsetId) -> int:
        if sid in depth:
            return depth[sid]
        depth[sid] = 1  # cycle guard; WNDB taxonomies are acyclic
        parents = [t for kind, t in synsets[sid].relations if kind == "hypernym"]
        d = 1 + max((chain_len(p) for p in parents), default=0)
        depth[sid] = d
        return d

    return max((chain_len(sid) for sid in synsets if sid.pos is pos), default=0)


def load_database(dir_path) -> LexicalDatabase:
    """Parse a WordNet 3.x database directory into a LexicalDatabase."""
    directory = Path(dir_path)
    present = [pos for pos in POS if (directory / f"index.{_POS_SUFFIX[pos]}").exists()]
    if not present:
        raise LoadError("no index files found")

    synsets: dict[SynsetId, Synset] = {}
    for pos in present:
        data_path = directory / f"data.{_POS_SUFFIX[pos]}"
        if not data_path.exists():
            raise LoadError(f"missing data file for {pos.value}")
        for line_no, line in _iter_content_lines(data_path):
            s = _parse_data_line(data_path.name, line_no, line)
            synsets[s.id] = s

    # every pointer must resolve inside the loaded database
    for s in synsets.values():
        for kind, target in s.relations:
            if target not in synsets:
                raise LoadError(
                    f"dangling {kind} pointer {target.pos.value}:{target.offset:08d} "
                    f"in synset {s.id.pos.value}:{s.id.offset:08d} ({s.lemmas[0]})")
        if s.id.pos not in TAXONOMIC_POS:
            if any(kind == "hypernym" for kind, _ in s.relations):
                raise LoadError(
                    f"hypernym edge on non-taxonomic synset "
                    f"{s.id.pos.value}:{s.id.offset:08d}")

    index: dict[tuple[str, POS], list[SynsetId]] = {}
    for pos in present:
        index_path = directory / f"index.{_POS_SUFFIX[pos]}"
        for line_no, line in _iter_content_lines(index_path):
            lemma, ids = _parse_index_line(index_path.name, line_no, line, pos)
            for sid in ids:
                if sid not in synsets:
                    raise LoadError(
                        f"index entry {lemma!r} references missing synset "
                        f"{sid.pos.value}:{sid.offset:08d}")
            index[(lemma, pos)] = ids

    exceptions: dict[tuple[str, POS], list[str]] = {}
    for pos in present:
        exc_path = directory / f"{_POS_SUFFIX[pos]}.exc"
        if not exc_path.exists():
            continue
        for line_no, line in _iter_content_lines(exc_path):
            fields = line.split()
            if len(fields) < 2:
                raise ParseError(exc_path.name, line_no, "exception line needs surface and lemma")
            exceptions[(fields[0].lower(), pos)] = [f.lower() for f in fields[1:]]

    max_depth = {pos: _compute_max_depth(synsets, pos) for pos in present}
    return LexicalDatabase(synsets=synsets, index=index,
                           exceptions=exceptions, max_depth=max_depth)


def lookup_senses(db: LexicalDatabase, lemma: str, pos: POS) -> list[Synset]:
    """Senses of (lemma, pos) in index-file order; empty when absent."""
    return [db.synsets[sid] for sid in db.index.get((lemma, pos), [])]


# suffix detachment rules, tried in order
_DETACHMENT_RULES: dict[POS, list[tuple[str, str]]] = {
    POS.NOUN: [("s", ""), ("ses", "s"), ("xes", "x"), ("zes", "z"),
               ("ches", "ch"), ("shes", "sh"), ("men", "man"), ("ies", "y")],
    POS.VERB: [("s", ""), ("ies", "y"), ("es", "e"), ("es", ""),
               ("ed", "e"), ("ed", ""), ("ing", "e"), ("ing", "")],
    POS.ADJECTIVE: [("er", ""), ("est", ""), ("er", "e"), ("est", "e")],
    POS.ADVERB: [],
}


def morph_normalize(db: LexicalDatabase, surface: str, pos: POS) -> list[str]:
    """Candidate base lemmas for a surface form, most specific first.

    Exception-file matches come first, then rule detachments that are
    present in the index, then the surface itself if indexed.
    """
    surface = surface.lower()
    candidates: list[str] = []
    candidates.extend(db.exceptions.get((surface, pos), []))
    for suffix, replacement in _DETACHMENT_RULES[pos]:
        if surface.endswith(suffix) and len(surface) > len(suffix):
            lemma = surface[: len(surface) - len(suffix)] + replacement
            if (lemma, pos) in db.index:
                candidates.append(lemma)
    if (surface, pos) in db.index:
        candidates.append(surface)
    seen = set()
    unique = []
    for c in candidates:
        if c not in seen:
            seen.add(c)
            unique.append(c)
    return unique


def path_length_over(db: LexicalDatabase, a: SynsetId, b: SynsetId,
                     kinds: frozenset[str]) -> int | None:
    """Shortest undirected path in nodes over the given relation kinds.

    a == b counts as 1; returns None when disconnected.
    """
    if a == b:
        return 1
    seen = {a}
    frontier = deque([(a, 1)])
    while frontier:
        node, dist = frontier.popleft()
        for kind, target in db.synsets[node].relations:
            if kind not in kinds or target in seen:
                continue
            if target == b:
                return dist + 1
            seen.add(target)
            frontier.append((target, dist + 1))
    return None


_TAXONOMY_KINDS = frozenset({"hypernym", "hyponym"})


def hypernym_path_length(db: LexicalDatabase, a: SynsetId, b: SynsetId) -> int | None:
    """Shortest hypernym/hyponym path between same-POS noun or verb synsets,
    counted in nodes (a == b -> 1); None when disconnected."""
    if a.pos != b.pos:
        raise UsageError("POS mismatch")
    if a.pos not in TAXONOMIC_POS:
        raise UsageError(f"no taxonomy for {a.pos.value}")
    if a not in db.synsets or b not in db.synsets:
        raise UsageError("synset not in database")
    return path_length_over(db, a, b, _TAXONOMY_KINDS)
