"""Textually salient term extraction: TF-IDF, sentiment, and entities.

Keywords from the three detectors are combined into one set and every
transcript occurrence of a keyword becomes a textual cue event anchored at
that word's time interval.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from importlib import resources

from .errors import EmptyCorpus, SchemaError
from .timeline import CueEvent, CueKind, Modality, Transcript, WORD_RE

ENTITIES_SCHEMA = "cuefuse-entities/1"

# spaCy-style labels folded onto the four categories we keep
_ENTITY_KIND_ALIASES = {
    "person": "person", "per": "person",
    "org": "org", "organization": "org",
    "location": "location", "loc": "location", "gpe": "location",
    "event": "event",
}
ENTITY_KINDS = ("person", "org", "location", "event")


def tokenize(text: str) -> list[str]:
    """Lowercased word tokens; punctuation stripped, contractions kept whole."""
    return WORD_RE.findall(text.replace("’", "'").lower())


@dataclass(frozen=True)
class Lexicon:
    """Sentiment lexicon: lowercase token -> valence in [-1, 1]."""

    entries: dict

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, token: str) -> bool:
        return token in self.entries

    def valence(self, token: str) -> float:
        return self.entries.get(token, 0.0)


@dataclass(frozen=True)
class EntityAnnotation:
    token: str
    kind: str
    sentence_index: int


@dataclass(frozen=True)
class KeywordEntry:
    sources: frozenset  # subset of {TFIDF, SENTIMENT, ENTITY} cue kinds
    score: float


@dataclass(frozen=True)
class KeywordSet:
    """Combined keyword map: lowercase token -> (source flags, score)."""

    entries: dict

    def __contains__(self, token: str) -> bool:
        return token in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def tokens(self) -> list[str]:
        return sorted(self.entries)


def _load_data_lines(name: str) -> list[str]:
    text = resources.files("cuefuse.data").joinpath(name).read_text(encoding="utf-8")
    return [line.strip() for line in text.splitlines()
            if line.strip() and not line.startswith("#")]


def default_stopwords() -> frozenset:
    """The fixed English stopword list shipped with the package."""
    return frozenset(_load_data_lines("stopwords.txt"))


def load_lexicon(path) -> Lexicon:
    """Read a sentiment lexicon file: one 'token<TAB>valence' per line."""
    entries = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise SchemaError(f"{path}:{lineno}: expected 'token<TAB>valence'")
            token, raw = parts
            valence = float(raw)
            if not -1.0 <= valence <= 1.0 or not math.isfinite(valence):
                raise SchemaError(f"{path}:{lineno}: valence {valence} outside [-1, 1]")
            entries[token.lower()] = valence
    return Lexicon(entries=entries)


def default_lexicon() -> Lexicon:
    entries = {}
    for line in _load_data_lines("sentiment_lexicon.tsv"):
        token, raw = line.split("\t")
        entries[token.lower()] = float(raw)
    return Lexicon(entries=entries)


def default_gazetteer() -> dict:
    """Small built-in entity gazetteer: token -> kind."""
    out = {}
    for line in _load_data_lines("gazetteer.tsv"):
        token, kind = line.split("\t")
        out[token.lower()] = kind
    return out


def load_entities(path) -> list[EntityAnnotation]:
    """Read external NER annotations: {entities:[{token, kind, sentence_index}]}."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: unreadable JSON ({exc})") from exc
    tag = doc.get("schema")
    if tag is not None and tag != ENTITIES_SCHEMA:
        raise SchemaError(f"{path}: schema '{tag}', expected '{ENTITIES_SCHEMA}'")
    if "entities" not in doc:
        raise SchemaError(f"{path}: missing field 'entities'")
    out = []
    for e in doc["entities"]:
        for key in ("token", "kind", "sentence_index"):
            if key not in e:
                raise SchemaError(f"{path}: entity missing '{key}'")
        out.append(EntityAnnotation(token=str(e["token"]).lower(),
                                    kind=str(e["kind"]).lower(),
                                    sentence_index=int(e["sentence_index"])))
    return out


def tfidf_scores(sentences: list[list[str]], stopwords: frozenset) -> dict:
    """Smoothed TF-IDF over a transcript's sentences.

    Documents are the individual sentences; idf = ln((1+N)/(1+df)) + 1 so
    that tiny corpora (a few sentences per clip) never produce zero or
    negative weights. A token's score is its best single-sentence tf * idf.
    """
    if not sentences:
        raise EmptyCorpus("tf-idf needs at least one sentence")
    n = len(sentences)
    df = Counter()
    for tokens in sentences:
        df.update(set(tokens))
    scores: dict = {}
    for tokens in sentences:
        counts = Counter(tokens)
        for token, tf in counts.items():
            if token in stopwords:
                continue
            idf = math.log((1 + n) / (1 + df[token])) + 1.0
            score = tf * idf
            if score > scores.get(token, 0.0):
                scores[token] = score
    return scores


def sentiment_terms(sentences: list[list[str]], lexicon: Lexicon,
                    intensity_threshold: float = 0.4) -> set:
    """Emotionally charged tokens from high-intensity sentences.

    Sentence intensity is the mean |valence| of its in-lexicon tokens; only
    sentences at or above the threshold contribute, and only their tokens
    with |valence| >= 0.3.
    """
    if len(lexicon) == 0:
        raise ValueError("lexicon is empty")
    out: set = set()
    for tokens in sentences:
        valences = [abs(lexicon.valence(t)) for t in tokens if t in lexicon]
        if not valences:
            continue
        intensity = sum(valences) / len(valences)
        if intensity >= intensity_threshold:
            out.update(t for t in tokens if t in lexicon and abs(lexicon.valence(t)) >= 0.3)
    return out


def entity_terms(annotations: list[EntityAnnotation] | None = None,
                 tokens: list[str] | None = None,
                 gazetteer: dict | None = None) -> set:
    """Entity tokens: ingested annotations unioned with gazetteer matches.

    Only person/org/location/event categories count; spaCy-style labels
    (PERSON, ORG, GPE, LOC, EVENT) are folded onto them.
    """
    out: set = set()
    for ann in annotations or []:
        kind = _ENTITY_KIND_ALIASES.get(ann.kind.lower())
        if kind in ENTITY_KINDS:
            out.add(ann.token.lower())
    if gazetteer and tokens:
        for token in tokens:
            kind = _ENTITY_KIND_ALIASES.get(str(gazetteer.get(token, "")).lower())
            if kind in ENTITY_KINDS:
                out.add(token)
    return out


def build_keywords(transcript: Transcript, tfidf: dict, sentiment: set,
                   entities: set, top_k: int = 5,
                   stopwords: frozenset | None = None):
    """Combine the three keyword sources and emit textual cue events.

    The keyword set is the top_k TF-IDF tokens (ties broken
    lexicographically) unioned with sentiment and entity tokens, stopwords
    excluded. Every transcript occurrence of a keyword yields one cue event
    per source flag, anchored at the word's own interval.

    Returns (KeywordSet, list of CueEvent).
    """
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    if stopwords is None:
        stopwords = default_stopwords()
    ranked = sorted(tfidf.items(), key=lambda kv: (-kv[1], kv[0]))
    top_tfidf = {token for token, _ in ranked[:top_k]}

    entries: dict = {}
    for token, kind in [(t, CueKind.TFIDF) for t in top_tfidf] + \
                       [(t, CueKind.SENTIMENT) for t in sentiment] + \
                       [(t, CueKind.ENTITY) for t in entities]:
        if not token or token in stopwords:
            continue
        prev = entries.get(token)
        sources = {kind} if prev is None else set(prev.sources) | {kind}
        entries[token] = KeywordEntry(sources=frozenset(sources),
                                      score=float(tfidf.get(token, 0.0)))

    events = []
    for sentence in transcript.sentences:
        for word in sentence.words:
            entry = entries.get(word.norm)
            if entry is None:
                continue
            for kind in sorted(entry.sources, key=lambda k: k.value):
                strength = entry.score if kind is CueKind.TFIDF else 1.0
                events.append(CueEvent(modality=Modality.TEXTUAL, kind=kind,
                                       time=word.interval, strength=strength))
    return KeywordSet(entries=entries), events


def textual_cue_events(transcript: Transcript,
                       lexicon: Lexicon | None = None,
                       annotations: list[EntityAnnotation] | None = None,
                       gazetteer: dict | None = None,
                       top_k: int = 5,
                       intensity_threshold: float = 0.4,
                       stopwords: frozenset | None = None):
    """Full textual path over a transcript. Returns (KeywordSet, cues)."""
    if stopwords is None:
        stopwords = default_stopwords()
    if lexicon is None:
        lexicon = default_lexicon()
    sentences = [list(s.tokens) for s in transcript.sentences]
    tfidf = tfidf_scores(sentences, stopwords)
    sentiment = sentiment_terms(sentences, lexicon, intensity_threshold)
    flat = [t for tokens in sentences for t in tokens]
    entities = entity_terms(annotations, flat, gazetteer if gazetteer is not None
                            else default_gazetteer())
    return build_keywords(transcript, tfidf, sentiment, entities, top_k, stopwords)
