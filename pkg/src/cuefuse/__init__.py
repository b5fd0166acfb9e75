"""cuefuse: multimodal cue fusion for extractive video summarization.

Timestamped textual, audio and visual cue streams are fused into
bonus-word-weighted extractive summaries (text plus segment cut-lists),
with a full evaluation suite against reference summaries.
"""

from .timeline import (CueEvent, CueKind, Modality, Segment, TimedSentence, TimedWord,
                       TimeInterval, Transcript, VideoMeta, merge_adjacent, overlap,
                       to_frame_range)
from .audio_cues import (AudioBuffer, AudioConfig, FeatureSeries, Frames, ZScoreSeries,
                         audio_cue_events, detect_audio_cues, estimate_pitch,
                         frame_signal, hammarberg_index, interpolate_contour,
                         rms_energy, zscore)
from .visual_cues import (DisplacementSeries, VisualConfig, detect_emotion_transitions,
                          detect_head_cues, dynamic_threshold, fixed_threshold,
                          nose_displacement, visual_cue_events)
from .text_cues import (EntityAnnotation, KeywordSet, Lexicon, build_keywords,
                        default_lexicon, default_stopwords, entity_terms,
                        load_entities, load_lexicon, sentiment_terms, textual_cue_events,
                        tfidf_scores, tokenize)
from .fusion import (BonusWord, FusionConfig, align_words_to_cues, bonus_words,
                     select_bonus_words)
from .summarizer import (DiversityMode, EdmundsonCues, SentenceWeights, Summary,
                         SummaryConfig, WeightsMode, compile_segments,
                         diversity_filter, dump_summary, edmundson_summarize,
                         load_summary, select_candidates, sentence_weights, summarize)
from .metrics import (MetricsReport, TemporalMetrics, TextMetrics, bertscore, bleu,
                      evaluate_pair, frame_prf, jaccard, kendall_tau, length_ratio,
                      rouge_l, rouge_n, spearman_rho, temporal_f1)
from .render import (CutList, dump_cutlist, load_cutlist, parse_srt, render_cutlist,
                     render_report, render_srt)
from .ingest import (EmotionFrame, PgtSummary, PoseFrame, TokenEmbeddings,
                     dump_transcript, load_audio_features, load_embeddings,
                     load_emotion, load_pgt, load_pose, load_transcript,
                     load_visual_streams, load_wav)
from .pipeline import (PipelineConfig, run_baseline, run_consistency, run_evaluate,
                       run_pipeline)
from . import errors

__version__ = "0.1.0"
