"""Experiment suites: full pipeline runs, feature ablations, cycle sweeps,
and interpretation of fitted models.

Every run is deterministic given (inputs, configuration, seed); reports
carry no timestamps, so repeated runs are byte-identical.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

from scipy import special

from .dataset import build_dataset, schedule_windows
from .errors import DataError
from .evaluate import (
    evaluate_predictions,
    evaluation_report,
    random_baseline,
    wilson_interval,
)
from .features import FEATURE_NAMES, SCALAR_FEATURES, extract_features
from .model import fit, win_log_odds

ABLATION_MODES = ("drop_one", "single_only")


@dataclass
class PipelineInputs:
    """Everything the modeling stages need, loaded once up front."""

    corpus: object  # CorpusTable
    synsets: list  # output of eligible_synsets
    clusters: object  # CatVarClusters
    births: dict  # (lemma, corpus POS) -> year
    syllable_exceptions: dict = field(default_factory=dict)
    half_width: int = 5


def load_pipeline_inputs(corpus_paths, lexicon_path, catvar_path=None,
                         syllables_path=None, half_width=5, workers=1):
    """Load all raw inputs into a PipelineInputs bundle.

    The corpus vocabulary filter covers the eligible synset members plus
    every cluster member, so categorial variations can be birth-dated.
    Returns (inputs, lexicon, corpus load report).
    """
    from ._util import open_maybe_gzip
    from .corpus import UnigramKey, birth_years, load_corpus
    from .features import load_syllable_exceptions
    from .lexicon import eligible_synsets, load_catvar, load_lexicon

    with open_maybe_gzip(lexicon_path) as handle:
        lexicon = load_lexicon(handle)
    synsets = eligible_synsets(lexicon)
    if catvar_path:
        with open_maybe_gzip(catvar_path) as handle:
            clusters = load_catvar(handle)
    else:
        clusters = load_catvar(iter(()))
    filter_keys = {m.corpus_key() for s in synsets for m in s.members}
    filter_keys.update(UnigramKey(lemma, pos) for lemma, pos in clusters.members())
    table, report = load_corpus(corpus_paths, filter_keys, workers=workers)
    exceptions = {}
    if syllables_path:
        with open_maybe_gzip(syllables_path) as handle:
            exceptions = load_syllable_exceptions(handle)
    inputs = PipelineInputs(
        corpus=table,
        synsets=synsets,
        clusters=clusters,
        births={(k.lemma, k.pos): y for k, y in birth_years(table).items()},
        syllable_exceptions=exceptions,
        half_width=half_width,
    )
    return inputs, lexicon, report


@dataclass(frozen=True)
class AblationSpec:
    mode: str  # drop_one | single_only
    feature: str

    def __post_init__(self):
        if self.mode not in ABLATION_MODES:
            raise DataError(f"unknown ablation mode {self.mode!r}")
        if self.feature not in FEATURE_NAMES:
            raise DataError(f"unknown feature {self.feature!r}")


def _births_by_pair(births):
    return {(k.lemma, k.pos) if hasattr(k, "lemma") else k: v
            for k, v in births.items()}


def run_nbcp(train_window, test_window, inputs, features=FEATURE_NAMES,
             seed=0, workers=1):
    """Train on one window, score the next, and evaluate at synset level.

    The future period of the training window (the present of the test
    window) is the only future data the model ever sees.
    """
    births = _births_by_pair(inputs.births)
    train_ds = build_dataset(inputs.synsets, inputs.corpus, train_window,
                             inputs.half_width, workers=workers)
    test_ds = build_dataset(inputs.synsets, inputs.corpus, test_window,
                            inputs.half_width, workers=workers)
    train_vectors = extract_features(train_ds, inputs.clusters, births,
                                     inputs.syllable_exceptions, workers=workers)
    test_vectors = extract_features(test_ds, inputs.clusters, births,
                                    inputs.syllable_exceptions, workers=workers)
    model = fit(train_vectors, features=features)
    # rank by log-odds: same argmax as the probability, but immune to
    # float saturation at 0/1
    log_odds = {v.sense: win_log_odds(model, v.without_class())
                for v in test_vectors}
    counts, scores, outcomes = evaluate_predictions(test_ds.snapshots, log_odds)
    _, random_scores, _ = random_baseline(test_ds.snapshots, seed)
    report = evaluation_report(counts, scores)
    report["train"] = train_ds.summary()
    report["test"] = test_ds.summary()
    report["features"] = list(features)
    report["random_percent"] = {
        "precision": round(100.0 * random_scores.precision, 1),
        "recall": round(100.0 * random_scores.recall, 1),
        "f_score": round(100.0 * random_scores.f_score, 1),
    }
    report["random"] = {
        "precision": random_scores.precision,
        "recall": random_scores.recall,
        "f_score": random_scores.f_score,
        "seed": seed,
    }
    return {
        "report": report,
        "model": model,
        "train_vectors": train_vectors,
        "test_vectors": test_vectors,
        "test_dataset": test_ds,
        "outcomes": outcomes,
    }


def _wilson_overlap(f1, f2, n1, n2):
    """True when the 95% Wilson bands of two scores overlap.

    Stand-in significance rule for F-score deltas; the bands treat each
    score as a proportion of evaluated synsets.
    """
    lo1, hi1 = wilson_interval(round(f1 * n1), n1) if n1 else (0.0, 1.0)
    lo2, hi2 = wilson_interval(round(f2 * n2), n2) if n2 else (0.0, 1.0)
    return not (hi1 < lo2 or hi2 < lo1)


def run_ablation(spec, train_window, test_window, inputs, seed=0, workers=1):
    """F-score delta for one ablation variant.

    drop_one: F(all features minus one) - F(all features).
    single_only: F(one feature alone) - F(random baseline).
    """
    if spec.mode == "drop_one":
        features = tuple(f for f in FEATURE_NAMES if f != spec.feature)
        variant = run_nbcp(train_window, test_window, inputs, features,
                           seed=seed, workers=workers)
        baseline = run_nbcp(train_window, test_window, inputs, FEATURE_NAMES,
                            seed=seed, workers=workers)
        f_variant = variant["report"]["metrics"]["f_score"]
        f_baseline = baseline["report"]["metrics"]["f_score"]
    else:
        variant = run_nbcp(train_window, test_window, inputs, (spec.feature,),
                           seed=seed, workers=workers)
        f_variant = variant["report"]["metrics"]["f_score"]
        f_baseline = variant["report"]["random"]["f_score"]
    n = variant["report"]["counts"]["synsets"]
    delta = f_variant - f_baseline
    return {
        "mode": spec.mode,
        "feature": spec.feature,
        "f_variant": f_variant,
        "f_baseline": f_baseline,
        "delta": delta,
        "delta_percent": round(100.0 * delta, 2),
        "significant_95": not _wilson_overlap(f_variant, f_baseline, n, n),
        "significance_rule": "non-overlapping 95% Wilson intervals (stand-in)",
    }


def run_cycle_sweep(cycles, inputs, anchor_year=2000, floor_year=1800,
                    seed=0, workers=1):
    """Per-cycle, per-test-window summary rows, keyed by the future period."""
    rows = []
    skipped = []
    for cycle in cycles:
        try:
            pairs = schedule_windows(cycle, anchor_year, floor_year)
        except DataError as exc:
            skipped.append({"cycle": cycle, "reason": str(exc)})
            continue
        for train_window, test_window in pairs:
            run = run_nbcp(train_window, test_window, inputs, seed=seed,
                           workers=workers)
            report = run["report"]
            rows.append({
                "cycle": cycle,
                "future": test_window.future,
                "window": test_window.label(),
                "f_nbcp": report["metrics_percent"]["f_score"],
                "f_random": report["random_percent"]["f_score"],
                "percent_changed": report["test"]["change_percent"],
                "synsets": report["counts"]["synsets"],
            })
    return {"rows": rows, "skipped": skipped}


def welch_t_test(mean1, var1, n1, mean2, var2, n2, alpha=0.05):
    """Two-tailed unpaired t test with unequal variances.

    Returns (t, degrees of freedom, p, significant at the given level).
    Both variances zero with equal means is reported as not significant.
    """
    if n1 < 2 or n2 < 2:
        raise DataError("welch_t_test needs at least two samples per group")
    if var1 < 0 or var2 < 0:
        raise DataError("negative variance")
    se2 = var1 / n1 + var2 / n2
    if se2 == 0:
        if mean1 == mean2:
            return 0.0, float(n1 + n2 - 2), 1.0, False
        return math.inf, float(n1 + n2 - 2), 0.0, True
    t = (mean1 - mean2) / math.sqrt(se2)
    df = se2 ** 2 / (
        (var1 / n1) ** 2 / (n1 - 1) + (var2 / n2) ** 2 / (n2 - 1)
    )
    p = 2.0 * float(special.stdtr(df, -abs(t)))
    return t, df, p, p < alpha


@dataclass(frozen=True)
class InterpretationRow:
    dimension: str
    loser_mean: float
    winner_mean: float
    difference: float  # winner_mean - loser_mean
    significant: bool


def _interpret_dimension(name, params):
    p0, p1 = params
    if p0.sample_count >= 2 and p1.sample_count >= 2:
        _, _, _, significant = welch_t_test(
            p1.mean, p1.variance, p1.sample_count,
            p0.mean, p0.variance, p0.sample_count,
        )
    else:
        significant = False
    return InterpretationRow(name, p0.mean, p1.mean, p1.mean - p0.mean, significant)


def interpret_model(model, top_k=12):
    """Loser/winner Gaussian means per dimension, with t-test significance.

    Returns (scalar feature rows, top-k trigram rows ordered by decreasing
    absolute mean gap).  The trigram block is analyzed dimension by
    dimension rather than as one feature.
    """
    scalar_rows = [
        _interpret_dimension(name, model.scalar_params[name])
        for name in SCALAR_FEATURES
        if name in model.scalar_params
    ]
    trigram_rows = [
        _interpret_dimension(tri, model.trigram_params[tri])
        for tri in model.trigram_dims
    ]
    trigram_rows.sort(key=lambda r: (-abs(r.difference), r.dimension))
    return scalar_rows, trigram_rows[:top_k]


def interpretation_tables(model, top_k=12):
    """JSON-ready rendition of interpret_model output."""
    scalar_rows, trigram_rows = interpret_model(model, top_k)
    def render(row, suggest=False):
        out = {
            "dimension": row.dimension,
            "loser_mean": row.loser_mean,
            "winner_mean": row.winner_mean,
            "difference": row.difference,
            "significant_95": row.significant,
        }
        if suggest:
            out["suggests"] = "winner" if row.difference > 0 else "loser"
        return out
    return {
        "scalar_features": [render(r) for r in scalar_rows],
        "top_trigrams": [render(r, suggest=True) for r in trigram_rows],
    }
