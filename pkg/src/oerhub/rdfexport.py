"""Talks and transcripts as RDF triples, serialized as N-Triples, with a
single triple-pattern matcher over the generated graph."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, ValidationError

RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
BIBO_AV_DOCUMENT = "http://purl.org/ontology/bibo/AudioVisualDocument"
BIBO_DOCUMENT = "http://purl.org/ontology/bibo/Document"
DCT_TITLE = "http://purl.org/dc/terms/title"
DCT_DESCRIPTION = "http://purl.org/dc/terms/description"
DCT_CREATOR = "http://purl.org/dc/terms/creator"
DCT_LANGUAGE = "http://purl.org/dc/terms/language"
DCT_IS_PART_OF = "http://purl.org/dc/terms/isPartOf"
MA_DURATION = "http://www.w3.org/ns/ma-ont#duration"
XSD_INTEGER = "http://www.w3.org/2001/XMLSchema#integer"
SCHEMA_TEXT = "http://schema.org/text"


@dataclass(frozen=True)
class Literal:
    value: str
    language: str | None = None
    datatype: str | None = None


@dataclass(frozen=True)
class Triple:
    subject: str                       # absolute IRI
    predicate: str                     # absolute IRI
    object: "str | Literal"            # IRI or literal


def _is_absolute_iri(iri: str) -> bool:
    return bool(re.match(r"^[A-Za-z][A-Za-z0-9+.-]*:", iri))


def export_graph(store, base_iri: str) -> list[Triple]:
    """All talk and transcript triples for the store, deterministically
    sorted by subject, predicate, object."""
    if not _is_absolute_iri(base_iri):
        raise ValidationError("base_iri must be absolute")
    base = base_iri.rstrip("/")
    triples: list[Triple] = []
    for talk in store.talks.values():
        subject = f"{base}/talk/{talk.id}"
        triples.append(Triple(subject, RDF_TYPE, BIBO_AV_DOCUMENT))
        if talk.title:
            triples.append(Triple(subject, DCT_TITLE, Literal(talk.title, language="en")))
        if talk.description:
            triples.append(Triple(subject, DCT_DESCRIPTION,
                                  Literal(talk.description, language="en")))
        if talk.speaker:
            triples.append(Triple(subject, DCT_CREATOR, Literal(talk.speaker)))
        if talk.duration_s:
            triples.append(Triple(subject, MA_DURATION,
                                  Literal(str(talk.duration_s), datatype=XSD_INTEGER)))
        for language, transcript in talk.transcripts.items():
            t_subject = f"{subject}/transcript/{language}"
            text = " ".join(cue.text for cue in transcript.cues)
            triples.append(Triple(t_subject, RDF_TYPE, BIBO_DOCUMENT))
            triples.append(Triple(t_subject, DCT_LANGUAGE, Literal(language)))
            triples.append(Triple(t_subject, DCT_IS_PART_OF, subject))
            triples.append(Triple(t_subject, SCHEMA_TEXT, Literal(text, language=language)))
    return sorted(triples, key=_sort_key)


def _sort_key(t: Triple):
    if isinstance(t.object, Literal):
        obj_key = (1, t.object.value, t.object.language or "", t.object.datatype or "")
    else:
        obj_key = (0, t.object, "", "")
    return (t.subject, t.predicate, obj_key)


_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _escape_literal(value: str) -> str:
    return "".join(_ESCAPES.get(ch, ch) for ch in value)


_UNESCAPES = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t"}


def _unescape_literal(value: str) -> str:
    out = []
    i = 0
    while i < len(value):
        ch = value[i]
        if ch == "\\":
            if i + 1 >= len(value) or value[i + 1] not in _UNESCAPES:
                raise ValueError(f"bad escape at {i}")
            out.append(_UNESCAPES[value[i + 1]])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _term_to_text(obj) -> str:
    if isinstance(obj, Literal):
        text = f'"{_escape_literal(obj.value)}"'
        if obj.language:
            text += f"@{obj.language}"
        elif obj.datatype:
            text += f"^^<{obj.datatype}>"
        return text
    if not _is_absolute_iri(obj):
        raise ValidationError(f"relative IRI {obj!r}")
    return f"<{obj}>"


def serialize_ntriples(triples: list[Triple]) -> str:
    """One ``<s> <p> o .`` line per triple, N-Triples literal escaping."""
    lines = []
    for t in triples:
        for iri in (t.subject, t.predicate):
            if not _is_absolute_iri(iri):
                raise ValidationError(f"relative IRI {iri!r}")
        lines.append(f"<{t.subject}> <{t.predicate}> {_term_to_text(t.object)} .\n")
    return "".join(lines)


_TRIPLE_RE = re.compile(
    r'^<([^>]*)>\s+<([^>]*)>\s+'
    r'(?:<([^>]*)>|"((?:[^"\\]|\\.)*)"(?:@([A-Za-z][A-Za-z0-9-]*)|\^\^<([^>]*)>)?)'
    r'\s*\.\s*$')


def parse_ntriples(text: str) -> list[Triple]:
    """Reader for the module's own serialization (round-trip oracle)."""
    triples = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        m = _TRIPLE_RE.match(line)
        if m is None:
            raise ParseError("<ntriples>", line_no, "malformed triple")
        subject, predicate, obj_iri, lit, lang, datatype = m.groups()
        if obj_iri is not None:
            obj: str | Literal = obj_iri
        else:
            try:
                value = _unescape_literal(lit)
            except ValueError as exc:
                raise ParseError("<ntriples>", line_no, str(exc)) from exc
            obj = Literal(value, language=lang, datatype=datatype)
        triples.append(Triple(subject, predicate, obj))
    return triples


def match_pattern(graph: list[Triple], s: str | None = None, p: str | None = None,
                  o=None) -> list[Triple]:
    """Triples matching the bound positions; None matches anything."""
    return [t for t in graph
            if (s is None or t.subject == s)
            and (p is None or t.predicate == p)
            and (o is None or t.object == o)]
