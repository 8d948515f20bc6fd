import pytest
from hypothesis import strategies as st

from ut3check.identities import Z4
from ut3check.words import Identity, Letter, Word, parse_identity


@pytest.fixture
def z4():
    return parse_identity(Z4)


def words(max_letter=4, max_len=8, stars=False):
    letter = st.builds(Letter, st.integers(1, max_letter), st.booleans() if stars else st.just(False))
    return st.lists(letter, min_size=1, max_size=max_len).map(lambda ls: Word(tuple(ls)))


def identities(max_letter=4, max_len=8, stars=False):
    return st.builds(lambda u, v: Identity(u, v, involutory=u.has_stars or v.has_stars),
                     words(max_letter, max_len, stars), words(max_letter, max_len, stars))
