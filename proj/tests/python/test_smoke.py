"""Smoke tests for the python bindings."""

import os
import sys

module_dir = os.environ.get("ACSIM_MODULE_DIR")
if module_dir:
    sys.path.insert(0, module_dir)

import _acsim as acsim  # noqa: E402


def make_corpus(num_videos=20, frames=(200, 200), gt_fraction=(0.05, 0.05), seed=7):
    cfg = acsim.CorpusConfig(
        num_videos=num_videos,
        frames=frames,
        gt_fraction=gt_fraction,
        num_classes=10,
        seed=seed,
    )
    return acsim.generate_corpus(cfg)


def test_corpus_generation_is_deterministic():
    a = make_corpus()
    b = make_corpus()
    assert [v.gt_start for v in a] == [v.gt_start for v in b]
    assert all(1 <= v.gt_start <= v.gt_end <= v.num_frames for v in a)


def test_segment_enumeration_and_sampling():
    assert acsim.enumerate_segments(5, 2) == 4
    video = make_corpus(num_videos=1)[0]
    clip = acsim.sample_clip(video, "continuous", 1, 16, segment=4)
    assert clip.frame_indices == list(range(4, 20))
    sparse = acsim.sample_clip(video, "sparse", 1, 8, seed=3)
    assert len(sparse.frame_indices) == 8
    assert sorted(sparse.frame_indices) == sparse.frame_indices


def test_acs_weights_match_reference():
    state = acsim.AcsState(4, 2)
    state.scores = [2.0, -1.0, 0.0, 3.0]
    assert acsim.segment_weights(state, 4) == [3.0, 1.0, 4.0]
    dist = acsim.segment_distribution(state, 4)
    assert abs(sum(dist) - 1.0) < 1e-12
    assert dist == [3 / 8, 1 / 8, 4 / 8]


def test_score_update_and_activation():
    state = acsim.AcsState(10, 2)
    fb = acsim.PredictionFeedback(
        segment_index=2, predicted_label=1, predicted_confidence=0.8, true_label=1
    )
    acsim.update_scores(state, fb)
    assert state.scores[1] == state.scores[2] == 0.8
    cfg = acsim.AcsConfig()
    assert not acsim.maybe_activate(state, cfg, 0)


def test_lr_schedule_endpoints():
    plan = acsim.SchedulePlan.for_total(10000)
    assert acsim.lr_at(0, plan) == 1e-2
    assert acsim.lr_main(0, plan) == plan.eta_max
    assert acsim.lr_main(plan.main_iters, plan) == plan.eta_min


def test_simulation_run_and_evaluate():
    cfg = acsim.SimConfig()
    cfg.corpus = acsim.CorpusConfig(
        num_videos=50, frames=(200, 200), gt_fraction=(0.05, 0.05),
        num_classes=10, seed=3,
    )
    cfg.epochs = 10
    cfg.seed = 3
    report = acsim.run(cfg)
    assert len(report.rows) == 10
    assert report.rows[0].activated_fraction == 0.0
    assert 0.0 <= report.final_noise_rate <= 1.0

    corpus = acsim.generate_corpus(cfg.corpus)
    cfg.oracle_p_fg = 1.0
    cfg.oracle_p_bg = 1.0
    top1, top5 = acsim.evaluate(cfg, corpus, 1)
    assert top1 == 1.0 and top5 == 1.0


def test_multihead_batches():
    datasets = [acsim.DatasetSpec(0, 9000, 4), acsim.DatasetSpec(1, 1000, 4)]
    batch = acsim.compose_batch(datasets, 1000, strategy="proportional", seed=1)
    share = sum(1 for (_, d, _) in batch if d == 0) / len(batch)
    assert 0.85 < share < 0.95
