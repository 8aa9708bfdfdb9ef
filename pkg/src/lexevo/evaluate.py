"""Synset-level evaluation: winner selection, contingency cells, metrics,
Wilson intervals, and the seeded uniform-random baseline.

A prediction counts as true positive only when the synset changed leader
and the predicted word is the actual future leader; a stable synset
predicted wrongly is a false positive, and so on (changed/stable crossed
with right/wrong).
"""

import hashlib
import logging
import statistics as _stats
from dataclasses import dataclass

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ContingencyCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    @property
    def total(self):
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f_score: float


def predict_synset_winner(probabilities):
    """Sense with the highest win probability; ties take the smallest id."""
    if len(probabilities) < 2:
        raise ValueError("need at least two candidate senses")
    best = max(probabilities.values())
    tied = sorted((s for s, p in probabilities.items() if p == best), key=str)
    if len(tied) > 1:
        log.info("probability tie among %s; picking %s", tied, tied[0])
    return tied[0]


def classify_outcome(present_leader, future_leader, predicted):
    """Map one synset outcome to its contingency cell name."""
    changed = future_leader != present_leader
    right = predicted == future_leader
    if changed and right:
        return "tp"
    if changed and not right:
        return "fn"
    if right:
        return "tn"
    return "fp"


def metrics(counts):
    """Precision, recall, F from contingency counts; division by zero is 0."""
    precision = counts.tp / (counts.tp + counts.fp) if counts.tp + counts.fp else 0.0
    recall = counts.tp / (counts.tp + counts.fn) if counts.tp + counts.fn else 0.0
    f_score = (
        2.0 * precision * recall / (precision + recall) if precision + recall else 0.0
    )
    return Metrics(precision, recall, f_score)


def wilson_interval(successes, n, confidence=0.95):
    """Wilson score interval for a binomial proportion."""
    if n <= 0:
        raise ValueError("n must be positive")
    if not 0 <= successes <= n:
        raise ValueError("successes outside [0, n]")
    z = _stats.NormalDist().inv_cdf(0.5 + confidence / 2.0)
    p = successes / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = (z / denom) * ((p * (1 - p) / n + z * z / (4 * n * n)) ** 0.5)
    return max(center - half, 0.0), min(center + half, 1.0)


def evaluate_predictions(snapshots, probabilities):
    """Score per-word probabilities at the synset level.

    probabilities maps SenseId -> win probability and must cover every
    member of every snapshot.  Returns (ContingencyCounts, Metrics,
    per-synset outcome rows).
    """
    tallies = {"tp": 0, "fp": 0, "fn": 0, "tn": 0}
    outcomes = []
    for snapshot in snapshots:
        per_sense = {s: probabilities[s] for s in snapshot.counts}
        predicted = predict_synset_winner(per_sense)
        cell = classify_outcome(
            snapshot.present_leader, snapshot.future_leader, predicted
        )
        tallies[cell] += 1
        outcomes.append({
            "synset_id": snapshot.synset.id,
            "present_leader": str(snapshot.present_leader),
            "future_leader": str(snapshot.future_leader),
            "predicted": str(predicted),
            "cell": cell,
        })
    counts = ContingencyCounts(**tallies)
    return counts, metrics(counts), outcomes


def evaluation_report(counts, scores, confidence=0.95):
    """JSON-ready report: counts, percentage metrics, Wilson intervals."""
    n = counts.total
    report = {
        "counts": {
            "tp": counts.tp, "fp": counts.fp, "fn": counts.fn, "tn": counts.tn,
            "synsets": n,
        },
        "metrics_percent": {
            "precision": round(100.0 * scores.precision, 1),
            "recall": round(100.0 * scores.recall, 1),
            "f_score": round(100.0 * scores.f_score, 1),
        },
        "metrics": {
            "precision": scores.precision,
            "recall": scores.recall,
            "f_score": scores.f_score,
        },
    }
    if n > 0:
        report["wilson_95"] = {
            name: list(wilson_interval(round(value * n), n, confidence))
            for name, value in (
                ("precision", scores.precision),
                ("recall", scores.recall),
                ("f_score", scores.f_score),
            )
        }
    return report


def outcomes_to_tsv(outcomes):
    lines = ["synset_id\tpresent_leader\tfuture_leader\tpredicted\tcell"]
    for row in outcomes:
        lines.append("\t".join(row[k] for k in
                               ("synset_id", "present_leader", "future_leader",
                                "predicted", "cell")))
    return "\n".join(lines) + "\n"


def _uniform_draw(seed, synset_id, sense):
    """Deterministic uniform(0,1) from (seed, synset, sense) hashing.

    Hash-derived draws make the baseline independent of evaluation order
    and worker count.
    """
    digest = hashlib.sha256(f"{seed}:{synset_id}:{sense}".encode()).digest()
    return int.from_bytes(digest[:8], "big") / 2.0 ** 64


def random_baseline(snapshots, seed):
    """Uniform-score baseline: every word draws its probability i.i.d.

    No cross-word normalization is applied; as with the learned model,
    only winner-vs-loser for each word individually is simulated.
    """
    probabilities = {}
    for snapshot in snapshots:
        for sense in snapshot.counts:
            probabilities[sense] = _uniform_draw(seed, snapshot.synset.id, sense)
    return evaluate_predictions(snapshots, probabilities)


def random_baseline_spread(snapshots, seeds):
    """Mean and stdev of baseline metrics across several seeds.

    Multi-seed reporting is an extension over the usual single-run
    number, so reports carry an explicit flag.
    """
    runs = [random_baseline(snapshots, seed)[1] for seed in seeds]
    def agg(name):
        values = [getattr(m, name) for m in runs]
        return {
            "mean": _stats.fmean(values),
            "stdev": _stats.stdev(values) if len(values) > 1 else 0.0,
        }
    return {
        "seeds": list(seeds),
        "multi_seed_extension": True,
        "precision": agg("precision"),
        "recall": agg("recall"),
        "f_score": agg("f_score"),
    }
