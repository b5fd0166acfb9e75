"""Cross-modal alignment: promote transcript words to bonus words.

A word coinciding temporally with cues from additional modalities becomes a
bonus word. The canonical rule promotes textual keywords backed by at least
one audio or visual cue; two opt-in extensions also promote non-keyword
words that are either hit by both non-textual modalities or hit once with
high strength.
"""

from __future__ import annotations

from dataclasses import dataclass

from .text_cues import KeywordSet, default_stopwords
from .timeline import CueEvent, Modality, TimedWord, Transcript, overlap


@dataclass(frozen=True)
class FusionConfig:
    tolerance: float = 0.25          # seconds of slack around each word
    promote_multi_nontextual: bool = True   # non-keyword hit by audio AND visual
    promote_strong_single: bool = True      # non-keyword hit once, strongly
    strong_strength: float = 2.5


@dataclass(frozen=True)
class BonusWord:
    token: str
    modalities: frozenset          # subset of Modality
    weight: float                  # 1 + 0.5 per modality beyond the first
    occurrences: tuple[TimedWord, ...]

    def to_dict(self) -> dict:
        return {
            "token": self.token,
            "modalities": sorted(m.value for m in self.modalities),
            "weight": self.weight,
            "occurrences": [[w.interval.start, w.interval.end] for w in self.occurrences],
        }


def _coincides(word_iv, cue_iv) -> bool:
    # zero-length cues (single-frame events) count when their instant falls
    # inside the expanded word; pure length-overlap would never see them
    if overlap(word_iv, cue_iv) > 0:
        return True
    if cue_iv.length == 0 and word_iv.contains(cue_iv.start):
        return True
    if word_iv.length == 0 and cue_iv.contains(word_iv.start):
        return True
    return False


def align_words_to_cues(transcript: Transcript, cues: list[CueEvent],
                        tolerance: float = 0.25) -> dict:
    """Map each word position to the modalities whose cues coincide with it.

    Returns {(sentence_index, word_index): {Modality: max cue strength}}.
    A word is hit by a modality when any cue of that modality overlaps the
    word's interval expanded by `tolerance` on both sides.
    """
    if tolerance < 0:
        raise ValueError("tolerance must be >= 0")
    hits: dict = {}
    for sentence in transcript.sentences:
        for wi, word in enumerate(sentence.words):
            expanded = word.interval.expanded(tolerance)
            got: dict = {}
            for cue in cues:
                if _coincides(expanded, cue.time):
                    prev = got.get(cue.modality, 0.0)
                    got[cue.modality] = max(prev, cue.strength)
            if got:
                hits[(sentence.index, wi)] = got
    return hits


def select_bonus_words(transcript: Transcript, alignment: dict,
                       keywords: KeywordSet,
                       stopwords: frozenset | None = None,
                       config: FusionConfig = FusionConfig()) -> list[BonusWord]:
    """Apply the promotion rules over the word/cue alignment.

    Canonical rule: a textual keyword hit by >= 1 non-textual modality.
    Extensions (per config): a non-keyword hit by both audio and visual, or
    by a single non-textual modality with strength >= strong_strength.
    Stopwords never qualify; one BonusWord per distinct token.
    """
    if stopwords is None:
        stopwords = default_stopwords()

    occurrences: dict = {}   # token -> [TimedWord]
    merged: dict = {}        # token -> {Modality: max strength}
    for sentence in transcript.sentences:
        for wi, word in enumerate(sentence.words):
            token = word.norm
            if not token:
                continue
            occurrences.setdefault(token, []).append(word)
            for modality, strength in alignment.get((sentence.index, wi), {}).items():
                bucket = merged.setdefault(token, {})
                bucket[modality] = max(bucket.get(modality, 0.0), strength)

    out = []
    for token in sorted(occurrences):
        if token in stopwords:
            continue
        hit = merged.get(token, {})
        nontextual = {m for m in hit if m is not Modality.TEXTUAL}
        is_keyword = token in keywords

        promoted = False
        modalities: set = set()
        if is_keyword and nontextual:
            promoted = True
            modalities = {Modality.TEXTUAL} | nontextual
        elif not is_keyword and config.promote_multi_nontextual and len(nontextual) >= 2:
            promoted = True
            modalities = nontextual
        elif not is_keyword and config.promote_strong_single and any(
                hit[m] >= config.strong_strength for m in nontextual):
            promoted = True
            modalities = nontextual
        if not promoted:
            continue
        out.append(BonusWord(
            token=token,
            modalities=frozenset(modalities),
            weight=1.0 + 0.5 * (len(modalities) - 1),
            occurrences=tuple(occurrences[token]),
        ))
    return out


def bonus_words(transcript: Transcript, cues: list[CueEvent], keywords: KeywordSet,
                stopwords: frozenset | None = None,
                config: FusionConfig = FusionConfig()) -> list[BonusWord]:
    """Alignment + promotion in one step."""
    alignment = align_words_to_cues(transcript, cues, config.tolerance)
    return select_bonus_words(transcript, alignment, keywords, stopwords, config)
