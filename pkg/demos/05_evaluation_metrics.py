#!/usr/bin/env python3
"""Tour of the evaluation metrics on small, checkable inputs.

Every metric is shown on a pair where the right answer is easy to verify
by hand: n-gram overlaps, the longest common subsequence, clipped BLEU
with its brevity penalty, embedding similarity, interval IoU matching,
frame rasterization, and rank correlations with ties.
"""

import numpy as np

from cuefuse import (TimeInterval, TokenEmbeddings, VideoMeta, bertscore, bleu,
                     frame_prf, jaccard, kendall_tau, length_ratio, rouge_l, rouge_n,
                     spearman_rho, temporal_f1)

cand = "the cat sat on the mat".split()
ref = "the cat lay on the same mat".split()

print("candidate:", " ".join(cand))
print("reference:", " ".join(ref))
for n in (1, 2):
    p, r, f1 = rouge_n(cand, ref, n)
    print(f"  rouge-{n}: P={p:.4f} R={r:.4f} F1={f1:.4f}")
p, r, f1 = rouge_l(cand, ref)
print(f"  rouge-L: P={p:.4f} R={r:.4f} F1={f1:.4f}")
print(f"  bleu:    {bleu(cand, ref):.4f} (brevity penalty applies, 6 < 7 tokens)")
print(f"  length ratio vs a 24-token source: {length_ratio(cand, ['w'] * 24):.4f}")
print(f"  jaccard of token sets: {jaccard(cand, ref):.4f}")

print("\nEmbedding similarity (greedy cosine matching):")
cand_emb = TokenEmbeddings(tokens=("cat", "mat"),
                           vectors=np.array([[1.0, 0.0], [0.6, 0.8]]), dim=2)
ref_emb = TokenEmbeddings(tokens=("cat",),
                          vectors=np.array([[1.0, 0.0]]), dim=2)
p, r, f1 = bertscore(cand_emb, ref_emb)
print(f"  P={p:.4f} (mean of cosines 1.0 and 0.6), R={r:.4f}, F1={f1:.4f}")

print("\nSegment matching (IoU > 0.5 counts):")
cases = [
    ([TimeInterval(0, 10)], [TimeInterval(5, 15)], "IoU 5/15 = 0.33"),
    ([TimeInterval(0, 10)], [TimeInterval(1, 10)], "IoU 9/10 = 0.90"),
]
for c, r_, label in cases:
    p, rec, f1 = temporal_f1(c, r_)
    print(f"  {label}: F1 = {f1:.4f}")

meta = VideoMeta(fps=24.0, duration=20.0)
p, rec, f1 = frame_prf([TimeInterval(0, 4.99)], [TimeInterval(0, 9.99)], meta)
print(f"  frame-level: candidate covers 5 cells of the reference's 10 -> "
      f"P={p:.2f} R={rec:.2f}")

print("\nRank correlations:")
print(f"  tau  [1,2,3] vs [1,3,2]   = {kendall_tau([1, 2, 3], [1, 3, 2]):.4f}")
print(f"  tau  with ties            = {kendall_tau([1, 1, 2, 3], [1, 2, 2, 3]):.4f}")
print(f"  rho  [1,2,3,4] vs [1,3,2,4] = {spearman_rho([1, 2, 3, 4], [1, 3, 2, 4]):.4f}")
print(f"  rho  reversal             = {spearman_rho([1, 2, 3], [3, 2, 1]):.4f}")
