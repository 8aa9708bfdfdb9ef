"""Per-word feature vectors: length, characters, and corpus trajectory.

Each word in a surviving snapshot gets eight features plus the target
class (1 when the word leads its synset in the future).  The trigram
block is a sparse binary vector over boundary-extended letter trigrams
that no other synset member shares.
"""

from dataclasses import dataclass, replace
from typing import Optional

from .corpus import birth_year
from .errors import DataError
from .lexicon import SenseId, categorial_variation_count

VOWELS = "aeiou"

SCALAR_FEATURES = (
    "normalized_length",
    "syllable_count",
    "shared_ngrams",
    "categorial_variations",
    "relative_growth",
    "linear_extrapolation",
    "present_age",
)

FEATURE_NAMES = SCALAR_FEATURES + ("unique_ngrams",)


def boundary_trigrams(lemma):
    """Ordered, de-duplicated trigrams of |lemma|.

    The bars make prefix and suffix trigrams distinct from interior ones:
    'ecstatic' yields |ec, ecs, cst, sta, tat, ati, tic, ic|.
    """
    padded = f"|{lemma}|"
    seen = []
    for i in range(len(padded) - 2):
        tri = padded[i:i + 3]
        if tri not in seen:
            seen.append(tri)
    return tuple(seen)


def partition_trigrams(lemma, synset_lemmas):
    """Split a member's trigrams into unique and shared.

    Returns (unique trigrams in order, shared fraction).  Shared means
    present in at least one other member of the synset.
    """
    own = boundary_trigrams(lemma)
    others = set()
    for other in synset_lemmas:
        if other != lemma:
            others.update(boundary_trigrams(other))
    unique = tuple(tri for tri in own if tri not in others)
    shared_fraction = (len(own) - len(unique)) / len(own)
    return unique, shared_fraction


def _is_vowel_at(lemma, i):
    ch = lemma[i]
    if ch in VOWELS:
        return True
    if ch != "y" or i == 0:
        return False
    # y is vocalic only away from other vowels
    if lemma[i - 1] in VOWELS:
        return False
    if i + 1 < len(lemma) and lemma[i + 1] in VOWELS:
        return False
    return True


def syllable_count(lemma, exceptions=None):
    """Heuristic syllable count with an optional per-lemma override table.

    Counts maximal vowel groups, dropping a terminal silent 'e' (kept in
    consonant + 'le' endings), floored at 1.
    """
    if exceptions and lemma in exceptions:
        return exceptions[lemma]
    groups = 0
    in_group = False
    for i in range(len(lemma)):
        if _is_vowel_at(lemma, i):
            if not in_group:
                groups += 1
            in_group = True
        else:
            in_group = False
    if (
        lemma.endswith("e")
        and (len(lemma) < 2 or not _is_vowel_at(lemma, len(lemma) - 2))
        and not (
            lemma.endswith("le")
            and len(lemma) >= 3
            and not _is_vowel_at(lemma, len(lemma) - 3)
        )
    ):
        groups -= 1
    return max(groups, 1)


def load_syllable_exceptions(source):
    """Parse a lemma<TAB>count override file ('#' comments allowed)."""
    exceptions = {}
    for line_number, line in enumerate(source, start=1):
        line = line.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise DataError(f"syllable exceptions line {line_number}: expected 2 columns")
        exceptions[fields[0]] = int(fields[1])
    return exceptions


def relative_frequencies(snapshot):
    """Per member (f1, f2): past and present frequency relative to the synset.

    When the past total is zero, f1 is 0 for every member.
    """
    past_total = sum(c.past for c in snapshot.counts.values())
    present_total = sum(c.present for c in snapshot.counts.values())
    if present_total <= 0:
        raise DataError("snapshot has zero present total")
    out = {}
    for sense, c in snapshot.counts.items():
        f1 = c.past / past_total if past_total > 0 else 0.0
        f2 = c.present / present_total
        out[sense] = (f1, f2)
    return out


@dataclass(frozen=True)
class FeatureVector:
    sense: SenseId
    synset_id: str
    normalized_length: float
    syllable_count: int
    unique_ngrams: tuple
    shared_ngrams: float
    categorial_variations: int
    relative_growth: float
    linear_extrapolation: float
    present_age: int
    target_class: Optional[int] = None

    def scalar(self, name):
        return float(getattr(self, name))

    def without_class(self):
        return replace(self, target_class=None)


def make_feature_vector(member, snapshot, clusters, births, window,
                        syllable_exceptions=None, include_class=True):
    """Assemble the full vector for one member of a snapshot.

    births maps (lemma, corpus POS tag) pairs to first-attestation years
    and must cover every snapshot member (they all have nonzero present
    counts, so a missing birth year signals a corpus/dataset mismatch).
    """
    lemmas = snapshot.synset.lemmas()
    max_len = max(len(l) for l in lemmas)
    unique, shared_fraction = partition_trigrams(member.lemma, lemmas)
    key = member.corpus_key()
    born = births.get((key.lemma, key.pos))
    if born is None:
        raise DataError(f"no birth year for {key.token()}")
    rel = relative_frequencies(snapshot)
    f1, f2 = rel[member]
    target = None
    if include_class:
        target = 1 if snapshot.future_leader == member else 0
    return FeatureVector(
        sense=member,
        synset_id=snapshot.synset.id,
        normalized_length=len(member.lemma) / max_len,
        syllable_count=syllable_count(member.lemma, syllable_exceptions),
        unique_ngrams=unique,
        shared_ngrams=shared_fraction,
        categorial_variations=categorial_variation_count(
            (key.lemma, key.pos), window.present, clusters, births
        ),
        relative_growth=f2 - f1,
        linear_extrapolation=2.0 * f2 - f1,
        present_age=window.present - born,
        target_class=target,
    )


def extract_features(dataset, clusters, births, syllable_exceptions=None,
                     include_class=True, workers=1):
    """Feature vectors for every word of every snapshot in a dataset."""
    from ._util import parallel_map

    def one_snapshot(snapshot):
        return [
            make_feature_vector(
                member, snapshot, clusters, births, dataset.window,
                syllable_exceptions, include_class,
            )
            for member in snapshot.counts
        ]

    vectors = []
    for group in parallel_map(one_snapshot, dataset.snapshots, workers=workers):
        vectors.extend(group)
    return vectors


_FEATURE_TSV_HEADER = (
    "synset_id\tsense_id\tnormalized_length\tsyllable_count\tshared_ngrams\t"
    "categorial_variations\trelative_growth\tlinear_extrapolation\t"
    "present_age\ttarget_class\tunique_ngrams"
)


def write_feature_vectors(vectors, path):
    """Dump vectors as TSV; floats use repr so the file round-trips exactly."""
    from ._util import atomic_write_text

    lines = [_FEATURE_TSV_HEADER]
    for v in vectors:
        target = "" if v.target_class is None else str(v.target_class)
        lines.append("\t".join([
            v.synset_id,
            str(v.sense),
            repr(v.normalized_length),
            str(v.syllable_count),
            repr(v.shared_ngrams),
            str(v.categorial_variations),
            repr(v.relative_growth),
            repr(v.linear_extrapolation),
            str(v.present_age),
            target,
            ",".join(v.unique_ngrams),
        ]))
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_feature_vectors(path):
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().rstrip("\n")
        if header != _FEATURE_TSV_HEADER:
            raise DataError(f"{path}: unexpected feature file header")
        vectors = []
        for line in handle:
            if not line.strip():
                continue
            fields = line.rstrip("\n").split("\t")
            if len(fields) != 11:
                raise DataError(f"{path}: bad feature row {fields!r}")
            (synset_id, sense_text, norm_len, syll, shared, catvar,
             growth, extrap, age, target, trigrams) = fields
            vectors.append(FeatureVector(
                sense=SenseId.parse(sense_text),
                synset_id=synset_id,
                normalized_length=float(norm_len),
                syllable_count=int(syll),
                unique_ngrams=tuple(t for t in trigrams.split(",") if t),
                shared_ngrams=float(shared),
                categorial_variations=int(catvar),
                relative_growth=float(growth),
                linear_extrapolation=float(extrap),
                present_age=int(age),
                target_class=int(target) if target else None,
            ))
    return vectors
