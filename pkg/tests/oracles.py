"""Independent brute-force oracles the main implementations are checked
against. These deliberately use different algorithms from the package
code (Floyd-Warshall instead of BFS, sentinel substitution instead of
fragment lists, full rescans instead of posting lists)."""

import math

from oerhub.stopwords import STOPWORDS
from oerhub.textutil import tokenize


# -- shortest paths over the taxonomy (all-pairs Floyd-Warshall) ----------

def all_pairs_path_nodes(db, pos, kinds=("hypernym", "hyponym")):
    """node-count distances between every same-POS pair; None if apart."""
    nodes = [sid for sid in db.synsets if sid.pos is pos]
    idx = {sid: i for i, sid in enumerate(nodes)}
    n = len(nodes)
    inf = float("inf")
    dist = [[inf] * n for _ in range(n)]
    for i in range(n):
        dist[i][i] = 0
    for sid in nodes:
        for kind, target in db.synsets[sid].relations:
            if kind in kinds and target.pos is pos:
                i, j = idx[sid], idx[target]
                dist[i][j] = dist[j][i] = 1
    for k in range(n):
        for i in range(n):
            dik = dist[i][k]
            if dik == inf:
                continue
            for j in range(n):
                alt = dik + dist[k][j]
                if alt < dist[i][j]:
                    dist[i][j] = alt
    result = {}
    for a in nodes:
        for b in nodes:
            d = dist[idx[a]][idx[b]]
            result[(a, b)] = None if d == inf else int(d) + 1  # edges -> nodes
    return result


def max_depth_oracle(db, pos):
    """Exhaustive enumeration of every hypernym chain."""
    best = 0
    for sid in db.synsets:
        if sid.pos is not pos:
            continue
        stack = [(sid, 1, {sid})]
        while stack:
            node, length, seen = stack.pop()
            best = max(best, length)
            for kind, target in db.synsets[node].relations:
                if kind == "hypernym" and target not in seen:
                    stack.append((target, length + 1, seen | {target}))
    return best


# -- adapted-Lesk overlap -------------------------------------------------

def lesk_overlap_oracle(seq_a, seq_b):
    """Enumerate every common contiguous phrase each round; consume the
    longest (smallest unordered position pair, then position in a) by
    replacing its tokens with side-specific sentinels so later phrases
    cannot cross it."""
    a = list(seq_a)
    b = list(seq_b)
    counter = [0]

    def taken_a():
        counter[0] += 1
        return f"\x00a{counter[0]}"

    def taken_b():
        counter[0] += 1
        return f"\x00b{counter[0]}"

    total = 0
    while True:
        best = None  # (-n, min(i, j), max(i, j), i, j)
        for i in range(len(a)):
            for j in range(len(b)):
                n = 0
                while (i + n < len(a) and j + n < len(b)
                       and not a[i + n].startswith("\x00")
                       and a[i + n] == b[j + n]):
                    n += 1
                    candidate = (-n, min(i, j), max(i, j), i, j)
                    if best is None or candidate < best:
                        best = candidate
        if best is None:
            break
        n, i, j = -best[0], best[3], best[4]
        phrase = a[i:i + n]
        if any(tok not in STOPWORDS for tok in phrase):
            total += n * n
        for k in range(n):
            a[i + k] = taken_a()
            b[j + k] = taken_b()
    return total


# -- naive BM25 rescan ----------------------------------------------------

def bm25_oracle(docs, query_terms, weights, k1=1.2, b=0.75, phrases=()):
    """Score every document by rescanning raw field text; returns
    {doc_id: score} for docs with positive scores that satisfy phrases."""
    tokenized = {d.doc_id: {f: tokenize(t) for f, t in d.fields.items()}
                 for d in docs}
    n_docs = len(docs)
    field_names = {f for d in docs for f in d.fields}
    avg_len = {}
    for f in field_names:
        lengths = [len(tokenized[d.doc_id][f]) for d in docs if f in d.fields]
        avg_len[f] = sum(lengths) / len(lengths) if lengths else 0.0

    scores = {}
    for d in docs:
        score = 0.0
        for f, tokens in tokenized[d.doc_id].items():
            dl = len(tokens)
            for term in query_terms:
                tf = tokens.count(term)
                if tf == 0:
                    continue
                df = sum(1 for other in docs
                         if f in other.fields and term in tokenized[other.doc_id][f])
                idf = math.log((n_docs - df + 0.5) / (df + 0.5) + 1)
                denom = tf + k1 * (1 - b + b * dl / avg_len[f])
                score += weights.get(f, 0.0) * idf * tf * (k1 + 1) / denom
        if score > 0 and all(_has_phrase(tokenized[d.doc_id], p) for p in phrases):
            scores[d.doc_id] = score
    return scores


def _has_phrase(fields_tokens, phrase):
    for tokens in fields_tokens.values():
        for start in range(len(tokens) - len(phrase) + 1):
            if tokens[start:start + len(phrase)] == list(phrase):
                return True
    return False
