"""Semantic similarity and word-sense choice over the lexical database.

Nouns and verbs are disambiguated by gloss-overlap scoring; adjectives and
adverbs by a mix of local-context similarity and relation-graph path
similarity. The tooltip builder assembles per-POS definitions and ranked
synonyms for a highlighted word.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import NotFoundError, UsageError
from .stopwords import STOPWORDS, content_tokens
from .textutil import tokenize
from .wordnetdb import (
    POS,
    TAXONOMIC_POS,
    LexicalDatabase,
    Synset,
    SynsetId,
    hypernym_path_length,
    lookup_senses,
    morph_normalize,
    path_length_over,
)

DEFAULT_ALPHA = 0.5
DEFAULT_WINDOW = 5
DEFAULT_SYNONYM_LIMIT = 10

# fallback depth for the similar_to/also_see graph of adjectives and adverbs,
# which have no hypernym taxonomy
RELATION_GRAPH_DEPTH = 10
_RELATION_GRAPH_KINDS = frozenset({"similar_to", "also_see"})


@dataclass
class ContextWindow:
    """Lowercase content tokens drawn from around a highlighted word,
    the word itself excluded."""

    tokens: list[str]
    radius: int = DEFAULT_WINDOW


@dataclass
class SenseScore:
    synset: SynsetId
    score: float
    method: str  # "lesk" | "combined"


@dataclass
class PosEntry:
    definitions: list[tuple[int, str]]       # (sense number, gloss)
    synonyms: list[tuple[str, float]]        # sorted per tooltip contract


@dataclass
class TooltipPayload:
    word: str
    per_pos: dict[POS, PosEntry] = field(default_factory=dict)


def make_context_window(text_tokens: list[str], target_index: int,
                        radius: int = DEFAULT_WINDOW) -> ContextWindow:
    """Window of up to ``radius`` tokens on each side of the target token,
    lowercased and stopword-filtered, excluding the target itself."""
    lo = max(0, target_index - radius)
    hi = min(len(text_tokens), target_index + radius + 1)
    around = [t.lower() for i, t in enumerate(text_tokens[lo:hi], start=lo)
              if i != target_index]
    return ContextWindow(tokens=content_tokens(around), radius=radius)


def lch_similarity(db: LexicalDatabase, a: SynsetId, b: SynsetId) -> float:
    """Path similarity -ln(len / 2D) over the hypernym taxonomy.

    ``len`` is the shortest path counted in nodes (a == b -> 1); D is the
    taxonomy depth for the POS. Disconnected pairs score exactly 0.
    """
    if a.pos != b.pos:
        raise UsageError("POS mismatch")
    if a.pos not in TAXONOMIC_POS:
        raise UsageError(f"no taxonomy for {a.pos.value}")
    depth = db.max_depth[a.pos]
    length = hypernym_path_length(db, a, b)
    if length is None:
        length = 2 * depth
    return -math.log(length / (2 * depth))


def _relation_graph_similarity(db: LexicalDatabase, a: SynsetId, b: SynsetId) -> float:
    """Same formula family over the undirected similar_to/also_see graph,
    scaled into [0, 1] so it can mix with Jaccard context scores."""
    depth = RELATION_GRAPH_DEPTH
    length = path_length_over(db, a, b, _RELATION_GRAPH_KINDS)
    if length is None or length > 2 * depth:
        length = 2 * depth
    return -math.log(length / (2 * depth)) / math.log(2 * depth)


def lesk_overlap_score(bag_a: list[str], bag_b: list[str]) -> int:
    """Adapted-Lesk phrasal overlap between two token sequences.

    Repeatedly removes the longest common contiguous phrase from both
    sequences, scoring it length squared; phrases made entirely of function
    words are removed without scoring. Deterministic and symmetric: among
    equally long phrases the occurrence pair with the smallest unordered
    position pair (in original coordinates) wins, so swapping the arguments
    mirrors every removal.
    """
    # fragments carry their original start offset; matches never span removals
    frags_a: list[tuple[int, list[str]]] = [(0, list(bag_a))] if bag_a else []
    frags_b: list[tuple[int, list[str]]] = [(0, list(bag_b))] if bag_b else []
    total = 0
    while True:
        best = _longest_common_phrase(frags_a, frags_b)
        if best is None:
            break
        phrase, (ai, ap), (bi, bp) = best
        n = len(phrase)
        if any(tok not in STOPWORDS for tok in phrase):
            total += n * n
        _remove(frags_a, ai, ap, n)
        _remove(frags_b, bi, bp, n)
    return total


def _longest_common_phrase(frags_a, frags_b):
    """Longest contiguous phrase common to any fragment pair.

    Returns (phrase, (frag index, pos) in a, (frag index, pos) in b) or None.
    Preference among equal lengths: smaller min(start_a, start_b), then
    smaller max(start_a, start_b), then smaller start_a — a swap-invariant
    order over the original token coordinates.
    """
    best = None
    best_key = None
    for ai, (ga, fa) in enumerate(frags_a):
        for bi, (gb, fb) in enumerate(frags_b):
            # classic O(n*m) longest-common-substring table over tokens
            m = len(fb)
            prev = [0] * (m + 1)
            for i in range(1, len(fa) + 1):
                cur = [0] * (m + 1)
                for j in range(1, m + 1):
                    if fa[i - 1] == fb[j - 1]:
                        n = cur[j] = prev[j - 1] + 1
                        pa, pb = ga + i - n, gb + j - n
                        key = (-n, min(pa, pb), max(pa, pb), pa)
                        if best_key is None or key < best_key:
                            best_key = key
                            best = (fa[i - n:i], (ai, i - n), (bi, j - n))
                prev = cur
    return best


def _remove(frags, frag_idx, pos, n):
    start, frag = frags[frag_idx]
    replacement = []
    if pos:
        replacement.append((start, frag[:pos]))
    if pos + n < len(frag):
        replacement.append((start + pos + n, frag[pos + n:]))
    frags[frag_idx: frag_idx + 1] = replacement


def signature_tokens(db: LexicalDatabase, sid: SynsetId) -> list[str]:
    """Gloss + example + lemma tokens of a synset, in that order."""
    s = db.synsets[sid]
    tokens = tokenize(s.gloss)
    for ex in s.examples:
        tokens.extend(tokenize(ex))
    for lemma in s.lemmas:
        tokens.extend(tokenize(lemma.replace("_", " ")))
    return tokens


def _hypernym_signature(db: LexicalDatabase, sid: SynsetId) -> list[str]:
    tokens: list[str] = []
    for kind, target in db.synsets[sid].relations:
        if kind == "hypernym":
            tokens.extend(signature_tokens(db, target))
    return tokens


def lesk_relatedness(db: LexicalDatabase, a: SynsetId, b: SynsetId) -> int:
    """Overlap summed over the (self, hypernym) signature pairs of both
    synsets; POS without hypernyms contribute zero on those legs."""
    sig_a = signature_tokens(db, a)
    sig_b = signature_tokens(db, b)
    hyp_a = _hypernym_signature(db, a)
    hyp_b = _hypernym_signature(db, b)
    return (lesk_overlap_score(sig_a, sig_b)
            + lesk_overlap_score(sig_a, hyp_b)
            + lesk_overlap_score(hyp_a, sig_b)
            + lesk_overlap_score(hyp_a, hyp_b))


def context_score(ctx: ContextWindow, db: LexicalDatabase, sid: SynsetId) -> float:
    """Jaccard similarity between the context tokens and the synset's
    stopword-filtered signature tokens."""
    a = set(ctx.tokens)
    b = set(content_tokens(signature_tokens(db, sid)))
    if not a or not b:
        return 0.0
    union = a | b
    return len(a & b) / len(union)


def _combined_score(db, ctx, chosen: SynsetId, candidate: SynsetId,
                    alpha: float) -> float:
    return (alpha * context_score(ctx, db, candidate)
            + (1 - alpha) * _relation_graph_similarity(db, chosen, candidate))


def choose_sense(db: LexicalDatabase, lemma: str, pos: POS,
                 ctx: ContextWindow, alpha: float = DEFAULT_ALPHA) -> SenseScore:
    """Pick the sense of (lemma, pos) best matching the local context.

    Nouns/verbs use gloss overlap against the context; adjectives/adverbs
    mix context similarity with relation-graph similarity to the first
    sense. Ties keep the earliest sense in index order.
    """
    senses = lookup_senses(db, lemma, pos)
    if not senses:
        raise NotFoundError(f"no {pos.value} senses for {lemma!r}")
    if pos in TAXONOMIC_POS:
        scored = [(float(lesk_overlap_score(ctx.tokens, signature_tokens(db, s.id))), s)
                  for s in senses]
        method = "lesk"
    else:
        first = senses[0].id
        scored = [(alpha * context_score(ctx, db, s.id)
                   + (1 - alpha) * _relation_graph_similarity(db, first, s.id), s)
                  for s in senses]
        method = "combined"
    best_score, best = scored[0]
    for score, s in scored[1:]:
        if score > best_score:
            best_score, best = score, s
    return SenseScore(synset=best.id, score=best_score, method=method)


def rank_synonyms(db: LexicalDatabase, lemma: str, pos: POS, ctx: ContextWindow,
                  k: int = DEFAULT_SYNONYM_LIMIT,
                  alpha: float = DEFAULT_ALPHA) -> list[tuple[str, float]]:
    """Top-k co-lemmas of (lemma, pos) scored against the chosen sense.

    Candidates are the union of lemmas over all senses minus the query
    lemma; a candidate in several synsets takes its best score. Sorted by
    score descending, ties by lemma.
    """
    senses = lookup_senses(db, lemma, pos)
    if not senses:
        raise NotFoundError(f"no {pos.value} senses for {lemma!r}")
    chosen = choose_sense(db, lemma, pos, ctx, alpha=alpha).synset
    best: dict[str, float] = {}
    for sense in senses:
        for candidate in sense.lemmas:
            if candidate == lemma:
                continue
            if pos in TAXONOMIC_POS:
                score = float(lesk_relatedness(db, sense.id, chosen))
            else:
                score = _combined_score(db, ctx, chosen, sense.id, alpha)
            if candidate not in best or score > best[candidate]:
                best[candidate] = score
    ranked = sorted(best.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:k]


def build_tooltip(db: LexicalDatabase, word: str, ctx: ContextWindow,
                  k: int = DEFAULT_SYNONYM_LIMIT,
                  alpha: float = DEFAULT_ALPHA) -> TooltipPayload:
    """Per-POS definitions and ranked synonyms for a highlighted word.

    POS where no candidate lemma has senses are omitted; an unknown word
    yields an empty payload.
    """
    payload = TooltipPayload(word=word)
    for pos in POS:
        lemma = None
        for candidate in morph_normalize(db, word, pos):
            if (candidate, pos) in db.index:
                lemma = candidate
                break
        if lemma is None:
            continue
        senses = lookup_senses(db, lemma, pos)
        definitions = [(n, s.gloss) for n, s in enumerate(senses, start=1)]
        synonyms = [(cand, score)
                    for cand, score in rank_synonyms(db, lemma, pos, ctx, k=k, alpha=alpha)
                    if cand != word.lower()]
        payload.per_pos[pos] = PosEntry(definitions=definitions, synonyms=synonyms)
    return payload
