"""Train/test dataset assembly over scheduled time windows.

Windows are anchored at the most recent sampling year (2000 by default)
and stepped backwards by the cycle length until the floor year (1800).
Consecutive period triples form past/present/future windows; each train
window is the test window shifted back by one cycle.
"""

import json
from collections import Counter
from dataclasses import dataclass, field

from ._util import parallel_map
from .corpus import DEFAULT_HALF_WIDTH, period_count
from .errors import DataError
from .lexicon import SenseId, Synset

REMOVAL_DEAD_WORD = "dead_word"
REMOVAL_TIE = "tie"


@dataclass(frozen=True, order=True)
class TimeWindow:
    past: int
    present: int
    future: int

    def __post_init__(self):
        if not self.past < self.present < self.future:
            raise ValueError("window years must be strictly increasing")
        if self.future - self.present != self.present - self.past:
            raise ValueError("window periods must be evenly spaced")

    @property
    def cycle(self):
        return self.present - self.past

    def label(self):
        return f"{self.past}_{self.present}_{self.future}"


def sampling_periods(cycle, anchor_year=2000, floor_year=1800):
    """Sampling years anchor, anchor-cycle, ... down to >= floor, ascending."""
    if cycle < 1:
        raise ValueError("cycle must be positive")
    periods = []
    year = anchor_year
    while year >= floor_year:
        periods.append(year)
        year -= cycle
    return sorted(periods)


def schedule_windows(cycle, anchor_year=2000, floor_year=1800,
                     min_cycle=30, max_cycle=60):
    """Chronological (train, test) window pairs for a cycle length.

    Requires at least four sampling periods (one train/test pair).
    """
    if not min_cycle <= cycle <= max_cycle:
        raise DataError(f"cycle {cycle} outside [{min_cycle}, {max_cycle}]")
    periods = sampling_periods(cycle, anchor_year, floor_year)
    if len(periods) < 4:
        raise DataError(f"cycle {cycle} yields only {len(periods)} periods; need 4")
    windows = [
        TimeWindow(periods[i], periods[i + 1], periods[i + 2])
        for i in range(len(periods) - 2)
    ]
    return [(windows[i], windows[i + 1]) for i in range(len(windows) - 1)]


@dataclass(frozen=True)
class MemberCounts:
    past: int
    present: int
    future: int


@dataclass(frozen=True)
class SynsetSnapshot:
    """One synset's smoothed counts at a window's three periods.

    Only built for synsets that passed the removal rules, so the present
    and future leaders are unique and every present count is positive.
    """

    synset: Synset
    counts: dict  # SenseId -> MemberCounts

    def _leader(self, getter):
        best = max(self.counts.values(), key=getter)
        return next(s for s, c in self.counts.items() if getter(c) == getter(best))

    @property
    def present_leader(self):
        return self._leader(lambda c: c.present)

    @property
    def future_leader(self):
        return self._leader(lambda c: c.future)

    @property
    def changed(self):
        return self.present_leader != self.future_leader


def build_snapshot(synset, corpus, window, half_width=DEFAULT_HALF_WIDTH):
    """Return (snapshot, None) or (None, removal reason).

    A synset is removed as dead_word when any member has a zero present
    count, and as tie when the maximum present or future count is shared.
    """
    counts = {}
    for member in synset.members:
        series = corpus.series(member.corpus_key())
        counts[member] = MemberCounts(
            period_count(series, window.past, half_width),
            period_count(series, window.present, half_width),
            period_count(series, window.future, half_width),
        )
    if any(c.present == 0 for c in counts.values()):
        return None, REMOVAL_DEAD_WORD
    presents = [c.present for c in counts.values()]
    futures = [c.future for c in counts.values()]
    if presents.count(max(presents)) > 1 or futures.count(max(futures)) > 1:
        return None, REMOVAL_TIE
    return SynsetSnapshot(synset, counts), None


@dataclass
class Dataset:
    window: TimeWindow
    snapshots: list
    removal_log: Counter = field(default_factory=Counter)

    @property
    def synset_count(self):
        return len(self.snapshots)

    @property
    def word_count(self):
        return sum(len(s.counts) for s in self.snapshots)

    @property
    def words_per_synset(self):
        return self.word_count / self.synset_count if self.snapshots else 0.0

    @property
    def change_fraction(self):
        if not self.snapshots:
            return 0.0
        return sum(1 for s in self.snapshots if s.changed) / len(self.snapshots)

    def summary(self):
        return {
            "window": [self.window.past, self.window.present, self.window.future],
            "synsets": self.synset_count,
            "words": self.word_count,
            "words_per_synset": round(self.words_per_synset, 4),
            "change_percent": round(100.0 * self.change_fraction, 4),
            "removals": dict(self.removal_log),
        }


def build_dataset(synsets, corpus, window, half_width=DEFAULT_HALF_WIDTH, workers=1):
    """Apply the removal rules to every synset; order-independent result."""
    results = parallel_map(
        lambda synset: build_snapshot(synset, corpus, window, half_width),
        synsets,
        workers=workers,
    )
    snapshots = []
    removal_log = Counter()
    for snapshot, reason in results:
        if snapshot is not None:
            snapshots.append(snapshot)
        else:
            removal_log[reason] += 1
    return Dataset(window, snapshots, removal_log)


def _period_leader(synset, counts, previous):
    """Leader lemma for one period under the Table-3 style tie rules.

    Zero total inherits the previous leader; a tie keeps the previous
    leader when it is among the maxima, else the smallest tied lemma.
    """
    total = sum(counts.values())
    if total == 0:
        return previous
    best = max(counts.values())
    tied = sorted(lemma for lemma, count in counts.items() if count == best)
    if len(tied) == 1:
        return tied[0]
    if previous in tied:
        return previous
    return tied[0]


def change_statistics(synsets, corpus, periods, half_width=DEFAULT_HALF_WIDTH):
    """Cumulative histogram of leadership changes across sampling periods.

    Counts changes between consecutive periods for every synset (no
    step-4 removals are applied).  Returns a dict with per-synset change
    counts summarized as cumulative (>= n) rows.
    """
    if len(periods) < 2:
        raise DataError("need at least two periods for change statistics")
    periods = sorted(periods)
    change_counts = []
    for synset in synsets:
        previous = None
        changes = 0
        for period in periods:
            counts = {
                m.lemma: period_count(corpus.series(m.corpus_key()), period, half_width)
                for m in synset.members
            }
            leader = _period_leader(synset, counts, previous)
            if previous is not None and leader != previous:
                changes += 1
            previous = leader
        change_counts.append(changes)
    total = len(change_counts)
    max_changes = len(periods) - 1
    rows = []
    for n in range(1, max_changes + 1):
        count = sum(1 for c in change_counts if c >= n)
        rows.append({
            "at_least": n,
            "synsets": count,
            "percent": round(100.0 * count / total, 4) if total else 0.0,
        })
    return {"total_synsets": total, "rows": rows}


def write_dataset(dataset, tsv_path, json_path=None):
    """Serialize a dataset: member-count TSV plus a JSON summary sidecar."""
    from ._util import atomic_write_json, atomic_write_text

    lines = ["synset_id\tsense_id\tpast\tpresent\tfuture"]
    for snapshot in dataset.snapshots:
        for sense, c in snapshot.counts.items():
            lines.append(
                f"{snapshot.synset.id}\t{sense}\t{c.past}\t{c.present}\t{c.future}"
            )
    atomic_write_text(tsv_path, "\n".join(lines) + "\n")
    if json_path is not None:
        atomic_write_json(json_path, dataset.summary())


def read_dataset(tsv_path, json_path):
    """Reload a serialized dataset (synsets reconstructed from sense ids)."""
    with open(json_path, encoding="utf-8") as handle:
        summary = json.load(handle)
    window = TimeWindow(*summary["window"])
    groups = {}
    with open(tsv_path, encoding="utf-8") as handle:
        header = handle.readline()
        if not header.startswith("synset_id\t"):
            raise DataError(f"{tsv_path}: missing dataset header")
        for line in handle:
            if not line.strip():
                continue
            synset_id, sense_text, past, present, future = line.rstrip("\n").split("\t")
            sense = SenseId.parse(sense_text)
            groups.setdefault(synset_id, []).append(
                (sense, MemberCounts(int(past), int(present), int(future)))
            )
    snapshots = []
    for synset_id, members in groups.items():
        synset = Synset(synset_id, members[0][0].pos, tuple(s for s, _ in members))
        snapshots.append(SynsetSnapshot(synset, dict(members)))
    removals = Counter(summary.get("removals", {}))
    return Dataset(window, snapshots, removals)
