import io

import pytest

from lexevo.corpus import CorpusTable, UnigramKey
from lexevo.dataset import (
    TimeWindow,
    build_dataset,
    build_snapshot,
    change_statistics,
    read_dataset,
    schedule_windows,
    write_dataset,
)
from lexevo.errors import DataError
from lexevo.lexicon import load_lexicon


def synset(*lemmas, pos="n"):
    text = f"x1\t{pos}\t" + ",".join(lemmas) + "\n"
    return load_lexicon(io.StringIO(text)).synsets[0]


def table_for(series_by_lemma, pos="NOUN"):
    return CorpusTable({
        UnigramKey(lemma, pos): series for lemma, series in series_by_lemma.items()
    })


class TestTimeWindow:
    def test_valid(self):
        w = TimeWindow(1850, 1900, 1950)
        assert w.cycle == 50

    def test_rejects_unordered(self):
        with pytest.raises(ValueError):
            TimeWindow(1900, 1850, 1950)

    def test_rejects_uneven_spacing(self):
        with pytest.raises(ValueError):
            TimeWindow(1850, 1900, 1960)


class TestScheduleWindows:
    def test_fifty_year_cycle_schedule(self):
        pairs = schedule_windows(50)
        assert pairs == [
            (TimeWindow(1800, 1850, 1900), TimeWindow(1850, 1900, 1950)),
            (TimeWindow(1850, 1900, 1950), TimeWindow(1900, 1950, 2000)),
        ]

    def test_sixty_year_cycle_single_pair(self):
        pairs = schedule_windows(60)
        assert pairs == [(TimeWindow(1820, 1880, 1940), TimeWindow(1880, 1940, 2000))]

    def test_thirty_year_cycle_futures(self):
        futures = [test.future for _, test in schedule_windows(30)]
        assert futures == [1910, 1940, 1970, 2000]

    def test_train_future_is_test_present(self):
        for cycle in (30, 40, 50, 60):
            for train, test in schedule_windows(cycle):
                assert train.future == test.present
                assert test.past - train.past == cycle

    def test_cycle_bounds_enforced(self):
        with pytest.raises(DataError):
            schedule_windows(20)
        with pytest.raises(DataError):
            schedule_windows(70)

    def test_too_few_periods_rejected(self):
        with pytest.raises(DataError):
            schedule_windows(60, anchor_year=2000, floor_year=1900)


WINDOW = TimeWindow(1850, 1900, 1950)


class TestBuildSnapshot:
    def test_normal_snapshot(self):
        table = table_for({
            "alpha": {1850: 5, 1900: 20, 1950: 30},
            "beta": {1850: 10, 1900: 10, 1950: 5},
        })
        snapshot, reason = build_snapshot(synset("alpha", "beta"), table, WINDOW)
        assert reason is None
        assert snapshot.present_leader.lemma == "alpha"
        assert snapshot.future_leader.lemma == "alpha"
        assert snapshot.changed is False

    def test_dead_word_removal(self):
        table = table_for({"alpha": {1900: 5, 1950: 5}, "beta": {1950: 9}})
        snapshot, reason = build_snapshot(synset("alpha", "beta"), table, WINDOW)
        assert snapshot is None
        assert reason == "dead_word"

    def test_present_tie_removal(self):
        table = table_for({
            "alpha": {1900: 10, 1950: 1},
            "beta": {1900: 10, 1950: 2},
            "gamma": {1900: 4, 1950: 3},
        })
        snapshot, reason = build_snapshot(synset("alpha", "beta", "gamma"), table, WINDOW)
        assert reason == "tie"

    def test_future_tie_removal(self):
        table = table_for({
            "alpha": {1900: 10, 1950: 5},
            "beta": {1900: 4, 1950: 5},
        })
        _, reason = build_snapshot(synset("alpha", "beta"), table, WINDOW)
        assert reason == "tie"

    def test_leaders_match_bruteforce(self):
        table = table_for({
            "alpha": {1850: 1, 1900: 7, 1950: 2},
            "beta": {1850: 9, 1900: 6, 1950: 8},
        })
        snapshot, _ = build_snapshot(synset("alpha", "beta"), table, WINDOW)
        best_present = max(snapshot.counts.items(), key=lambda kv: kv[1].present)[0]
        best_future = max(snapshot.counts.items(), key=lambda kv: kv[1].future)[0]
        assert snapshot.present_leader == best_present
        assert snapshot.future_leader == best_future


class TestBuildDataset:
    def three_synsets(self):
        rows = "a\tn\tone,two\nb\tn\tthree,four\nc\tn\tfive,six\n"
        return load_lexicon(io.StringIO(rows)).synsets

    def test_counts_partition(self):
        table = table_for({
            "one": {1900: 5, 1950: 9}, "two": {1900: 3, 1950: 1},
            "three": {1950: 2}, "four": {1900: 2, 1950: 4},  # three dead
            "five": {1900: 7, 1950: 7}, "six": {1900: 7, 1950: 2},  # present tie
        })
        ds = build_dataset(self.three_synsets(), table, WINDOW)
        assert ds.synset_count == 1
        assert ds.removal_log == {"dead_word": 1, "tie": 1}
        assert ds.synset_count + sum(ds.removal_log.values()) == 3

    def test_change_statistic(self):
        table = table_for({
            "one": {1900: 5, 1950: 9}, "two": {1900: 3, 1950: 10},  # changed
            "three": {1900: 4, 1950: 5}, "four": {1900: 2, 1950: 4},
            "five": {1900: 7, 1950: 8}, "six": {1900: 6, 1950: 2},
        })
        ds = build_dataset(self.three_synsets(), table, WINDOW)
        assert ds.synset_count == 3
        assert ds.change_fraction == pytest.approx(1 / 3)

    def test_empty_input(self):
        ds = build_dataset([], table_for({}), WINDOW)
        assert ds.synset_count == 0
        assert ds.word_count == 0
        assert ds.change_fraction == 0.0

    def test_worker_count_invariance(self):
        table = table_for({
            "one": {1900: 5, 1950: 9}, "two": {1900: 3, 1950: 1},
            "three": {1900: 1, 1950: 2}, "four": {1900: 2, 1950: 4},
            "five": {1900: 7, 1950: 7}, "six": {1900: 6, 1950: 2},
        })
        reference = build_dataset(self.three_synsets(), table, WINDOW, workers=1)
        for workers in (2, 8):
            ds = build_dataset(self.three_synsets(), table, WINDOW, workers=workers)
            assert [s.synset.id for s in ds.snapshots] == [
                s.synset.id for s in reference.snapshots
            ]
            assert ds.removal_log == reference.removal_log


class TestChangeStatistics:
    def test_transition_counting(self):
        # leaders A A B B A over five periods -> 2 changes
        table = table_for({
            "aaa": {1800: 9, 1850: 9, 1900: 1, 1950: 1, 2000: 9},
            "bbb": {1800: 1, 1850: 1, 1900: 9, 1950: 9, 2000: 1},
        })
        stats = change_statistics(
            [synset("aaa", "bbb")], table, [1800, 1850, 1900, 1950, 2000]
        )
        by_threshold = {row["at_least"]: row["synsets"] for row in stats["rows"]}
        assert by_threshold == {1: 1, 2: 1, 3: 0, 4: 0}

    def test_constant_leader(self):
        table = table_for({
            "aaa": {1800: 9, 1900: 9, 2000: 9},
            "bbb": {1800: 1, 1900: 1, 2000: 1},
        })
        stats = change_statistics([synset("aaa", "bbb")], table, [1800, 1900, 2000])
        assert all(row["synsets"] == 0 for row in stats["rows"])

    def test_zero_period_inherits_leader(self):
        table = table_for({
            "aaa": {1800: 9, 2000: 9},
            "bbb": {1800: 1, 2000: 1},
        })
        stats = change_statistics([synset("aaa", "bbb")], table, [1800, 1900, 2000])
        assert stats["rows"][0]["synsets"] == 0

    def test_requires_two_periods(self):
        with pytest.raises(DataError):
            change_statistics([], table_for({}), [1900])


class TestDatasetSerialization:
    def test_roundtrip(self, tmp_path):
        table = table_for({
            "one": {1850: 2, 1900: 5, 1950: 9},
            "two": {1850: 4, 1900: 3, 1950: 1},
        })
        ds = build_dataset([synset("one", "two")], table, WINDOW)
        tsv = tmp_path / "dataset.tsv"
        sidecar = tmp_path / "dataset.json"
        write_dataset(ds, str(tsv), str(sidecar))
        loaded = read_dataset(str(tsv), str(sidecar))
        assert loaded.window == ds.window
        assert loaded.synset_count == ds.synset_count
        original = {str(s): c for s, c in ds.snapshots[0].counts.items()}
        restored = {str(s): c for s, c in loaded.snapshots[0].counts.items()}
        assert restored == original
