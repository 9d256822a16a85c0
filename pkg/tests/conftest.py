import pathlib

import pytest

from beliefmerge import Profile, parse

DATA_DIR = pathlib.Path(__file__).parent / "data"

# Four co-owners vote on three construction projects (S, T, P); building two
# or more raises the rent (I).  Two owners want everything built, one wants
# nothing built and no rent increase, one wants T and P but no increase.
CO_OWNERS_CONSTRAINT = "((S & T) | (S & P) | (T & P)) -> I"
CO_OWNERS_KBS = (
    "S & T & P",
    "S & T & P",
    "!S & !T & !P & !I",
    "T & P & !I",
)


@pytest.fixture
def co_owners() -> Profile:
    return Profile(tuple(parse(kb) for kb in CO_OWNERS_KBS),
                   parse(CO_OWNERS_CONSTRAINT))


@pytest.fixture
def co_owners_path() -> pathlib.Path:
    return DATA_DIR / "co_owners.profile"


# Two KBs that disagree in a way a single-variable forget can only partly
# repair: {p} restores consistency, and so does {q, r}, but no subset of
# either does.  Separates cardinality-minimal from inclusion-minimal merging.
@pytest.fixture
def split_vote() -> Profile:
    return Profile((parse("!p & !q & !r & !s"),
                    parse("((p & !q & !r) | (!p & q & r)) & !s")))
