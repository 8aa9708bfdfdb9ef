import os

import pytest

from lexevo.experiments import load_pipeline_inputs

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def bundle_paths(name):
    base = os.path.join(FIXTURES, name)
    return {
        "corpus": os.path.join(base, "corpus.tsv"),
        "lexicon": os.path.join(base, "lexicon.tsv"),
        "catvar": os.path.join(base, "catvar.tsv"),
        "syllables": os.path.join(base, "syllables.tsv"),
    }


@pytest.fixture(scope="session")
def rapture_paths():
    return bundle_paths("rapture")


@pytest.fixture(scope="session")
def synthetic_paths():
    return bundle_paths("synthetic")


@pytest.fixture(scope="session")
def rapture_inputs(rapture_paths):
    inputs, lexicon, _ = load_pipeline_inputs(
        [rapture_paths["corpus"]], rapture_paths["lexicon"],
        rapture_paths["catvar"], rapture_paths["syllables"],
    )
    return inputs


@pytest.fixture(scope="session")
def synthetic_inputs(synthetic_paths):
    inputs, _, _ = load_pipeline_inputs(
        [synthetic_paths["corpus"]], synthetic_paths["lexicon"],
    )
    return inputs
