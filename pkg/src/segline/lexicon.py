"""Full-form lexicon with coarse POS tags, substring lookup and name expansion."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

MISS = "_"
TAG_SEP = "|"
DEFAULT_TAG = "X"
COMPLEX_MARKER = "CPLX"

UNIVERSAL_TAGS = frozenset({
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM", "PART",
    "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
    # copula, as in the Hebrew Treebank tagset
    "COP",
})
NOMINAL_TAGS = frozenset({"NOUN", "PROPN", "ADJ"})

# ו ה ב ל כ מ ש, plus ו followed by each of the others
_HEB_PROCLITICS = ("ו", "ה", "ב", "ל", "כ", "מ", "ש")
DEFAULT_PREFIX_PARTICLES = frozenset(_HEB_PROCLITICS) | frozenset(
    "ו" + p for p in _HEB_PROCLITICS[1:])
_LAT_PROCLITICS = ("w", "h", "b", "l", "k", "m", "š")
TRANSLIT_PREFIX_PARTICLES = frozenset(_LAT_PROCLITICS) | frozenset(
    "w" + p for p in _LAT_PROCLITICS[1:])


class LexiconFormatError(ValueError):
    def __init__(self, message: str, line_no: int, path: str | None = None):
        prefix = f"{path}:" if path else ""
        super().__init__(f"{prefix}{line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class TagMap:
    """Maps source (e.g. MILA) tags to the coarse tagset.

    Sources listed in ``complex_sources`` become ``CPLX`` + the first letter
    of their target (NOUN -> CPLXN). Anything not covered by ``rules`` keeps
    its name when it already is a coarse tag and otherwise becomes ``X``.
    """

    rules: Mapping[str, str] = field(default_factory=dict)
    complex_sources: frozenset[str] = frozenset()
    default: str = DEFAULT_TAG

    def __call__(self, source: str) -> str:
        target = self.rules.get(source)
        if target is None:
            if source in UNIVERSAL_TAGS or source.startswith(COMPLEX_MARKER):
                return source
            return self.default
        if source in self.complex_sources:
            return COMPLEX_MARKER + target[0]
        return target

    @classmethod
    def load(cls, path) -> "TagMap":
        rules = {}
        complex_sources = set()
        with open(path, encoding="utf-8") as f:
            for line_no, line in enumerate(f, 1):
                line = line.rstrip("\r\n")
                if not line or line.startswith("#"):
                    continue
                cols = line.split("\t")
                if len(cols) not in (2, 3) or not cols[0] or not cols[1]:
                    raise LexiconFormatError(f"bad tag map line {line!r}", line_no, str(path))
                rules[cols[0]] = cols[1]
                if len(cols) == 3:
                    if cols[2] != COMPLEX_MARKER:
                        raise LexiconFormatError(
                            f"third column must be {COMPLEX_MARKER!r}", line_no, str(path))
                    complex_sources.add(cols[0])
        return cls(rules, frozenset(complex_sources))


class Lexicon:
    """Multimap from surface form to a non-empty set of coarse tags.

    Instances are treated as immutable; :func:`expand_lexicon` returns a new one.
    """

    def __init__(self, entries: Mapping[str, Iterable[str]] | None = None):
        self._entries: dict[str, frozenset[str]] = {}
        for form, tags in (entries or {}).items():
            tags = frozenset(tags)
            if form and tags:
                self._entries[form] = tags
        self._joined = {f: TAG_SEP.join(sorted(t)) for f, t in self._entries.items()}

    def lookup(self, form: str) -> str:
        """Sorted, '|'-joined tags of ``form``; ``'_'`` when unattested."""
        return self._joined.get(form, MISS)

    def tags(self, form: str) -> frozenset[str]:
        return self._entries.get(form, frozenset())

    def __contains__(self, form):
        return form in self._entries

    def __len__(self):
        return len(self._entries)

    def __eq__(self, other):
        return isinstance(other, Lexicon) and self._entries == other._entries

    def items(self):
        return self._entries.items()

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for form in sorted(self._entries):
                for tag in sorted(self._entries[form]):
                    f.write(f"{form}\t{tag}\n")


def lookup(lex: Lexicon, form: str) -> str:
    return lex.lookup(form)


def parse_lexicon_lines(lines: Iterable[str], tagmap: TagMap | None = None,
                        path: str | None = None) -> Lexicon:
    tagmap = tagmap or TagMap()
    entries: dict[str, set[str]] = {}
    for line_no, line in enumerate(lines, 1):
        line = line.rstrip("\r\n")
        if not line or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2 or not cols[0] or not cols[1]:
            raise LexiconFormatError(f"expected 'form\\ttag', got {line!r}", line_no, path)
        entries.setdefault(cols[0], set()).add(tagmap(cols[1]))
    return Lexicon(entries)


def load_lexicon(path, tagmap: TagMap | None = None) -> Lexicon:
    with open(path, encoding="utf-8") as f:
        return parse_lexicon_lines(f, tagmap, str(path))


def load_names(paths) -> list[str]:
    """Read name-list files (one name per line) into whitespace tokens."""
    if isinstance(paths, (str, Path)):
        paths = [paths]
    names = []
    for p in paths:
        with open(p, encoding="utf-8") as f:
            for line in f:
                names.extend(line.split())
    return names


def is_spurious_name(name: str, lex: Lexicon, prefix_particles: Iterable[str],
                     nominal_tags: frozenset[str] = NOMINAL_TAGS) -> bool:
    """True if ``name`` reads as particle + attested nominal (l'l = l + 'l)."""
    for p in prefix_particles:
        if len(p) < len(name) and name.startswith(p):
            if lex.tags(name[len(p):]) & nominal_tags:
                return True
    return False


def expand_lexicon(lex: Lexicon, names: Iterable[str],
                   prefix_particles: Iterable[str] = DEFAULT_PREFIX_PARTICLES,
                   nominal_tags: frozenset[str] = NOMINAL_TAGS) -> Lexicon:
    """Add names as PROPN, skipping those that decompose into a prefix
    particle plus a nominal form of the base lexicon."""
    prefix_particles = tuple(prefix_particles)
    entries = {f: set(t) for f, t in lex.items()}
    for name in names:
        if not name or "PROPN" in entries.get(name, ()):
            continue
        if is_spurious_name(name, lex, prefix_particles, nominal_tags):
            continue
        entries.setdefault(name, set()).add("PROPN")
    return Lexicon(entries)
