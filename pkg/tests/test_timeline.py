import math
import random

import pytest

from cuefuse import (CueEvent, CueKind, Modality, Segment, TimeInterval, VideoMeta,
                     merge_adjacent, overlap, to_frame_range)
from cuefuse.errors import IntervalOutOfVideo, InvalidInterval


def seg(start, end, meta=None, indices=(0,), text="x"):
    meta = meta or VideoMeta(fps=24.0, duration=100.0)
    return Segment(interval=TimeInterval(start, end),
                   frame_range=to_frame_range(TimeInterval(start, end), meta),
                   sentence_indices=tuple(indices), text=text)


class TestTimeInterval:
    def test_rejects_backwards(self):
        with pytest.raises(InvalidInterval):
            TimeInterval(2.0, 1.0)

    def test_rejects_negative(self):
        with pytest.raises(InvalidInterval):
            TimeInterval(-0.1, 1.0)

    def test_rejects_nonfinite(self):
        with pytest.raises(InvalidInterval):
            TimeInterval(0.0, math.inf)

    def test_zero_length_is_legal(self):
        assert TimeInterval(3.0, 3.0).length == 0.0


class TestOverlap:
    def test_partial(self):
        assert overlap(TimeInterval(0, 10), TimeInterval(5, 15)) == 5.0

    def test_touching(self):
        assert overlap(TimeInterval(0, 5), TimeInterval(5, 9)) == 0.0

    def test_self(self):
        assert overlap(TimeInterval(2, 4), TimeInterval(2, 4)) == 2.0

    def test_symmetric_and_bounded(self):
        rng = random.Random(11)
        for _ in range(300):
            a = sorted(rng.uniform(0, 20) for _ in range(2))
            b = sorted(rng.uniform(0, 20) for _ in range(2))
            ia, ib = TimeInterval(*a), TimeInterval(*b)
            assert overlap(ia, ib) == overlap(ib, ia)
            assert overlap(ia, ib) <= min(ia.length, ib.length) + 1e-12


class TestToFrameRange:
    META = VideoMeta(fps=24.0, duration=10.0, frame_count=240)

    def test_basic(self):
        assert to_frame_range(TimeInterval(0.0, 1.0), self.META) == (0, 24)

    def test_zero_length(self):
        assert to_frame_range(TimeInterval(0.0, 0.0), self.META) == (0, 0)

    def test_clamped_to_last_frame(self):
        assert to_frame_range(TimeInterval(9.9, 10.0), self.META) == (237, 239)

    def test_start_past_video(self):
        with pytest.raises(IntervalOutOfVideo):
            to_frame_range(TimeInterval(10.0, 10.2), self.META)

    def test_end_past_slack(self):
        with pytest.raises(IntervalOutOfVideo):
            to_frame_range(TimeInterval(1.0, 10.6), self.META)

    def test_monotone_nesting(self):
        rng = random.Random(5)
        for _ in range(200):
            s, e = sorted(rng.uniform(0, 10) for _ in range(2))
            grow = rng.uniform(0, 1)
            inner = TimeInterval(s, e)
            outer = TimeInterval(max(0.0, s - grow), min(10.0, e + grow))
            fi = to_frame_range(inner, self.META)
            fo = to_frame_range(outer, self.META)
            assert fo[0] <= fi[0] and fi[1] <= fo[1]


class TestMergeAdjacent:
    def test_small_gap_merges(self):
        merged = merge_adjacent([seg(0, 2), seg(2.1, 4)], gap_tolerance=0.2)
        assert len(merged) == 1
        assert merged[0].interval == TimeInterval(0, 4)
        assert merged[0].sentence_indices == (0, 0)

    def test_large_gap_kept(self):
        segments = [seg(0, 2), seg(5, 6)]
        assert merge_adjacent(segments, gap_tolerance=0.2) == segments

    def test_empty(self):
        assert merge_adjacent([], gap_tolerance=0.2) == []

    def test_idempotent(self):
        rng = random.Random(3)
        for _ in range(50):
            t = 0.0
            segments = []
            for i in range(rng.randint(1, 8)):
                t += rng.uniform(0.0, 1.0)
                end = t + rng.uniform(0.1, 2.0)
                segments.append(seg(t, end, indices=(i,)))
                t = end
            once = merge_adjacent(segments, 0.25)
            twice = merge_adjacent(once, 0.25)
            assert once == twice
            for a, b in zip(once, once[1:]):
                assert b.interval.start > a.interval.end


class TestVideoMeta:
    def test_frame_count_derived(self):
        assert VideoMeta(fps=24.0, duration=10.0).frame_count == 240

    def test_inconsistent_frame_count_rejected(self):
        with pytest.raises(InvalidInterval):
            VideoMeta(fps=24.0, duration=10.0, frame_count=300)


class TestCueEvent:
    def test_kind_must_match_modality(self):
        with pytest.raises(InvalidInterval):
            CueEvent(modality=Modality.AUDIO, kind=CueKind.HEAD_MOVE,
                     time=TimeInterval(0, 1), strength=1.0)

    def test_valid(self):
        e = CueEvent(modality=Modality.VISUAL, kind=CueKind.EMOTION_SHIFT,
                     time=TimeInterval(1, 2), strength=0.9)
        assert e.time.length == 1.0
