import pytest

from segline.lexicon import Lexicon

# Hebrew script for the trigram  xšbnw  š.mhpkny  hw'
PREV, WORD, NEXT = "חשבנו", "שמהפכני", "הוא"
PREV_T, WORD_T, NEXT_T = "xšbnw", "šmhpkny", "hw'"

# the worked lookup example, tag strings in their published order
LOOKUP_EXAMPLE = [
    ("lex_whole", "_"),
    ("lex_so_far", "ADV|NOUN|VERB"),
    ("lex_remaining", "_"),
    ("lex_remain_m1", "_"),
    ("lex_remain_m2", "ADJ|NOUN|CPLXN"),
    ("lex_from_m4", "_"),
    ("lex_from_m3", "_"),
    ("lex_from_m2", "ADV|NOUN|VERB"),
    ("lex_from_m1", "ADP|ADV"),
    ("lex_to_p1", "_"),
    ("lex_to_p2", "NOUN|VERB"),
    ("lex_to_p3", "_"),
    ("lex_to_p4", "_"),
    ("lex_prev", "VERB"),
    ("lex_next", "PRON|COP"),
]


def _example_entries(smh, mhpkny, mh, hpk, prev, nxt):
    return {
        smh: {"ADV", "NOUN", "VERB"},
        mhpkny: {"ADJ", "NOUN", "CPLXN"},
        mh: {"ADP", "ADV"},
        hpk: {"NOUN", "VERB"},
        prev: {"VERB"},
        nxt: {"COP", "PRON"},
    }


@pytest.fixture
def example_lexicon():
    return Lexicon(_example_entries("שמה", "מהפכני", "מה", "הפכ", PREV, NEXT))


@pytest.fixture
def example_lexicon_translit():
    return Lexicon(_example_entries("šmh", "mhpkny", "mh", "hpk", PREV_T, NEXT_T))


_ACCEPTANCE = []


@pytest.fixture
def criterion():
    """Record one pass/fail line for the acceptance summary."""
    def record(label, ok, detail=""):
        _ACCEPTANCE.append((label, None if ok is None else bool(ok), detail))
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _ACCEPTANCE:
        status = "SKIP" if ok is None else ("PASS" if ok else "FAIL")
        terminalreporter.write_line(f"{status}  {label}" + (f"  ({detail})" if detail else ""))
