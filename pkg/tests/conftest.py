import pytest

from ftsynth import pipeline
from ftsynth.kg import Iri
from ftsynth.ontology import Vocabulary

V = Vocabulary()


def ns(local: str) -> Iri:
    return V.iri(local)


@pytest.fixture(scope="session")
def fixture_path():
    return pipeline.FIXTURE


@pytest.fixture(scope="session")
def lycoming():
    return pipeline.run(pipeline.FIXTURE)
