import math
from pathlib import Path

import pytest

from cuefuse import TimedSentence, TimedWord, TimeInterval, Transcript

FIXTURES = Path(__file__).parent / "fixtures"


def make_sentence(text: str, start: float, index: int = 0,
                  word_dur: float = 0.4) -> TimedSentence:
    words = []
    t = start
    for w in text.split():
        words.append(TimedWord(text=w, interval=TimeInterval(t, t + word_dur)))
        t += word_dur
    return TimedSentence(words=tuple(words),
                         interval=TimeInterval(start, t),
                         index=index)


def make_transcript(texts, video_id: str = "test", start: float = 0.0,
                    word_dur: float = 0.4, gap: float = 0.4) -> Transcript:
    sentences = []
    t = start
    for i, text in enumerate(texts):
        s = make_sentence(text, t, index=i, word_dur=word_dur)
        sentences.append(s)
        t = s.interval.end + gap
    return Transcript(sentences=tuple(sentences), video_id=video_id)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def assert_close(a, b, tol=1e-9):
    assert math.isfinite(a) and math.isfinite(b) and abs(a - b) <= tol, (a, b)
