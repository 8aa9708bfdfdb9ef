"""Synset lexicon and categorial-variation clusters.

The lexicon file is a complete sense inventory for its parts of speech:

    synset_id<TAB>pos<TAB>lemma1,lemma2,...

with pos in {n, v, a, r} (adjective satellites 's' are folded into 'a').
Cluster files hold one comma-separated list of lemma_POS tokens per line.
Lines starting with '#' are ignored in both formats.
"""

import re
from dataclasses import dataclass, field

from .corpus import UnigramKey
from .errors import DataError, RowParseError

# lexicon pos letter -> corpus tag
POS_TO_CORPUS = {"n": "NOUN", "v": "VERB", "a": "ADJ", "r": "ADV"}
CORPUS_TO_POS = {v: k for k, v in POS_TO_CORPUS.items()}

_ELIGIBLE_RE = re.compile(r"[a-z]{3,}")


@dataclass(frozen=True, order=True)
class SenseId:
    """A sense rendered as lemma#pos#k, e.g. rapt#a#1."""

    lemma: str
    pos: str
    sense_number: int

    def __str__(self):
        return f"{self.lemma}#{self.pos}#{self.sense_number}"

    @classmethod
    def parse(cls, text):
        parts = text.split("#")
        if len(parts) != 3 or parts[1] not in POS_TO_CORPUS:
            raise ValueError(f"bad sense id {text!r}")
        return cls(parts[0], parts[1], int(parts[2]))

    def corpus_key(self):
        return UnigramKey(self.lemma, POS_TO_CORPUS[self.pos])


@dataclass(frozen=True)
class Synset:
    id: str
    pos: str
    members: tuple

    def lemmas(self):
        return [m.lemma for m in self.members]


@dataclass
class Lexicon:
    synsets: list = field(default_factory=list)
    sense_count: dict = field(default_factory=dict)  # (lemma, pos) -> int


def load_lexicon(source):
    """Build a Lexicon from a TSV sense-inventory export.

    Duplicate synset ids and empty member lists are fatal.  Sense numbers
    are assigned by order of appearance of (lemma, pos) in the file.
    """
    lexicon = Lexicon()
    seen_ids = set()
    for line_number, line in enumerate(source, start=1):
        line = line.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise DataError(f"lexicon line {line_number}: expected 3 columns")
        synset_id, pos, members_field = fields
        if pos == "s":
            pos = "a"
        if pos not in POS_TO_CORPUS:
            raise DataError(f"lexicon line {line_number}: unknown pos {pos!r}")
        if synset_id in seen_ids:
            raise DataError(f"lexicon line {line_number}: duplicate synset id {synset_id}")
        seen_ids.add(synset_id)
        lemmas = [l for l in members_field.split(",") if l]
        if not lemmas:
            raise DataError(f"lexicon line {line_number}: empty member list")
        if len(set(lemmas)) != len(lemmas):
            raise DataError(f"lexicon line {line_number}: repeated lemma in synset")
        members = []
        for lemma in lemmas:
            count = lexicon.sense_count.get((lemma, pos), 0) + 1
            lexicon.sense_count[(lemma, pos)] = count
            members.append(SenseId(lemma, pos, count))
        lexicon.synsets.append(Synset(synset_id, pos, tuple(members)))
    return lexicon


def is_eligible_lemma(lemma):
    """True iff the lemma is all lowercase letters and at least 3 long."""
    return bool(_ELIGIBLE_RE.fullmatch(lemma))


def eligible_synsets(lexicon):
    """Synsets where every member is eligible and monosemous, size >= 2.

    A synset containing any polysemous member is dropped entirely.
    File order is preserved.
    """
    kept = []
    for synset in lexicon.synsets:
        if len(synset.members) < 2:
            continue
        ok = all(
            is_eligible_lemma(m.lemma)
            and lexicon.sense_count.get((m.lemma, m.pos), 0) == 1
            for m in synset.members
        )
        if ok:
            kept.append(synset)
    return kept


@dataclass
class CatVarClusters:
    """Derivational clusters of (lemma, corpus POS tag) pairs."""

    clusters: list = field(default_factory=list)

    def __post_init__(self):
        self._index = {}
        for cluster in self.clusters:
            for member in cluster:
                if member in self._index:
                    raise DataError(f"{member} appears in more than one cluster")
                self._index[member] = cluster

    def cluster_of(self, member):
        return self._index.get(member)

    def members(self):
        return list(self._index)


def load_catvar(source):
    """Parse a cluster file; malformed tokens are fatal with a line number."""
    clusters = []
    for line_number, line in enumerate(source, start=1):
        line = line.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        cluster = set()
        for token in line.split(","):
            token = token.strip()
            try:
                key = UnigramKey.from_token(token)
            except ValueError as exc:
                raise RowParseError(str(exc), line_number) from exc
            cluster.add((key.lemma, key.pos))
        clusters.append(frozenset(cluster))
    return CatVarClusters(clusters)


def categorial_variation_count(word, present, clusters, births):
    """Number of other cluster members already born by the present year.

    word is a (lemma, corpus POS tag) pair.  births maps such pairs to
    first-attestation years; members missing from births contribute 0,
    and a word in no cluster scores 0.
    """
    cluster = clusters.cluster_of(word)
    if cluster is None:
        return 0
    count = 0
    for member in cluster:
        if member == word:
            continue
        born = births.get(member)
        if born is not None and born <= present:
            count += 1
    return count
