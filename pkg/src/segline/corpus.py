"""Super-token data model, segmentation files and gold-analysis conversion.

Segmentation file format (UTF-8, LF line endings)::

    # comment lines start with '#'
    bbyt<TAB>b|byt
    xšbnw<TAB>xšbnw
                                  <- blank line ends a sentence
    ...

The analysed input format consumed by :func:`convert_analysis_file` has the
same layout but a space separated analysis column (``bbyt<TAB>b h byt``).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

logger = logging.getLogger(__name__)


class CorpusFormatError(ValueError):
    """A line of a corpus file does not conform to the format."""

    def __init__(self, message: str, line_no: int | None = None, path: str | None = None):
        where = ""
        if path is not None:
            where += f"{path}:"
        if line_no is not None:
            where += f"{line_no}: "
        super().__init__(where + message)
        self.line_no = line_no
        self.path = path


class UnalignableTokenError(ValueError):
    """Gold sub-tokens cannot be aligned to the surface string."""


@dataclass(frozen=True)
class SuperToken:
    """An orthographic unit; ``boundaries`` holds the indices i such that a
    boundary follows character i."""

    text: str
    boundaries: frozenset[int] = frozenset()

    def __post_init__(self):
        if not self.text:
            raise ValueError("empty super-token")
        object.__setattr__(self, "boundaries", frozenset(self.boundaries))
        for b in self.boundaries:
            if not 0 <= b < len(self.text) - 1:
                raise ValueError(f"boundary {b} out of range for {self.text!r}")

    @classmethod
    def from_subtokens(cls, subtokens: Sequence[str]) -> "SuperToken":
        if not subtokens or any(not s for s in subtokens):
            raise ValueError(f"empty sub-token in {subtokens!r}")
        bounds = []
        pos = 0
        for sub in subtokens[:-1]:
            pos += len(sub)
            bounds.append(pos - 1)
        return cls("".join(subtokens), frozenset(bounds))

    @property
    def subtokens(self) -> list[str]:
        return split_at(self.text, self.boundaries)

    @property
    def is_segmented(self) -> bool:
        return bool(self.boundaries)

    def __len__(self):
        return len(self.text)


def split_at(text: str, boundaries: Iterable[int]) -> list[str]:
    """Split ``text`` after every index in ``boundaries``."""
    parts = []
    start = 0
    for b in sorted(boundaries):
        parts.append(text[start:b + 1])
        start = b + 1
    parts.append(text[start:])
    return parts


@dataclass(frozen=True)
class Sentence:
    supertokens: tuple[SuperToken, ...]

    def __post_init__(self):
        object.__setattr__(self, "supertokens", tuple(self.supertokens))
        if not self.supertokens:
            raise ValueError("empty sentence")

    @property
    def texts(self) -> list[str]:
        return [t.text for t in self.supertokens]

    def __len__(self):
        return len(self.supertokens)

    def __iter__(self) -> Iterator[SuperToken]:
        return iter(self.supertokens)

    def __getitem__(self, i):
        return self.supertokens[i]


@dataclass(frozen=True)
class Corpus:
    sentences: tuple[Sentence, ...] = ()
    # filled in by the constraints module when a model is trained
    attested_affixes: object = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))

    def supertokens(self) -> Iterator[SuperToken]:
        for sent in self.sentences:
            yield from sent.supertokens

    @property
    def n_supertokens(self) -> int:
        return sum(len(s) for s in self.sentences)

    def __len__(self):
        return len(self.sentences)

    def __iter__(self) -> Iterator[Sentence]:
        return iter(self.sentences)

    def with_boundaries(self, boundaries: Sequence[Sequence[Iterable[int]]]) -> "Corpus":
        """Same texts, new boundary sets (one list per sentence)."""
        if len(boundaries) != len(self.sentences):
            raise ValueError("sentence count mismatch")
        sents = []
        for sent, bsets in zip(self.sentences, boundaries):
            if len(bsets) != len(sent):
                raise ValueError("super-token count mismatch")
            sents.append(Sentence(tuple(SuperToken(t.text, frozenset(b))
                                        for t, b in zip(sent, bsets))))
        return Corpus(tuple(sents))

    def unsegmented(self) -> "Corpus":
        return self.with_boundaries([[()] * len(s) for s in self.sentences])


def _iter_blocks(lines: Iterable[str], path: str | None):
    """Yield lists of (line_no, line) per sentence, skipping comments."""
    block = []
    for line_no, raw in enumerate(lines, 1):
        line = raw.rstrip("\n")
        if line.endswith("\r"):
            line = line[:-1]
        if line.startswith("#"):
            continue
        if not line.strip():
            if block:
                yield block
                block = []
            continue
        block.append((line_no, line))
    if block:
        yield block


def _split_columns(line: str, line_no: int, path: str | None) -> tuple[str, str]:
    cols = line.split("\t")
    if len(cols) != 2 or not cols[0] or not cols[1]:
        raise CorpusFormatError(f"expected '<supertoken>\\t<analysis>', got {line!r}",
                                line_no, path)
    return cols[0], cols[1]


def parse_segmentation_lines(lines: Iterable[str], path: str | None = None) -> Corpus:
    sents = []
    for block in _iter_blocks(lines, path):
        toks = []
        for line_no, line in block:
            text, analysis = _split_columns(line, line_no, path)
            subs = analysis.split("|")
            if "".join(subs) != text or any(not s for s in subs):
                raise CorpusFormatError(
                    f"sub-tokens {analysis!r} do not concatenate to {text!r}", line_no, path)
            toks.append(SuperToken.from_subtokens(subs))
        sents.append(Sentence(tuple(toks)))
    return Corpus(tuple(sents))


def parse_segmentation_file(path) -> Corpus:
    path = Path(path)
    with open(path, encoding="utf-8", newline="") as f:
        return parse_segmentation_lines(f, str(path))


def format_corpus(corpus: Corpus) -> str:
    """Canonical text of a corpus: one sentence block per sentence, blocks
    separated by a single blank line."""
    blocks = []
    for sent in corpus:
        blocks.append("".join(f"{t.text}\t{'|'.join(t.subtokens)}\n" for t in sent))
    return "\n".join(blocks)


def serialize_corpus(corpus: Corpus, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(format_corpus(corpus))


def convert_gold_analysis(supertoken_text: str, gold_subtokens: Sequence[str]) -> frozenset[int]:
    """Reduce a morphological analysis to surface boundaries.

    Sub-tokens are aligned greedily left to right. Any sub-token that does not
    match the surface at the cursor verbatim (inserted articles, base forms) is
    dropped. Characters left over once the analysis is exhausted become one
    trailing sub-token, e.g. a restored clitic pronoun.

    >>> sorted(convert_gold_analysis("bbyt", ["b", "h", "byt"]))
    [0]
    >>> sorted(convert_gold_analysis("byth", ["byt", "šl", "hy'"]))
    [2]
    """
    if not supertoken_text:
        raise ValueError("empty super-token")
    if not gold_subtokens:
        raise ValueError("empty analysis")
    n = len(supertoken_text)
    cursor = 0
    bounds = set()
    for sub in gold_subtokens:
        if cursor >= n:
            break
        if sub and supertoken_text.startswith(sub, cursor):
            cursor += len(sub)
            if cursor < n:
                bounds.add(cursor - 1)
    if cursor == 0 and len(gold_subtokens) > 1:
        raise UnalignableTokenError(
            f"no sub-token of {list(gold_subtokens)!r} aligns with {supertoken_text!r}")
    return frozenset(bounds)


@dataclass
class ConversionResult:
    corpus: Corpus
    unalignable: list[tuple[int, str, str]] = field(default_factory=list)

    @property
    def n_converted(self) -> int:
        return self.corpus.n_supertokens


def convert_analysis_lines(lines: Iterable[str], path: str | None = None) -> ConversionResult:
    """Convert ``supertoken<TAB>sub1 sub2 ...`` blocks to a boundary corpus.

    Unalignable super-tokens are logged and left out of their sentence.
    """
    sents = []
    bad = []
    for block in _iter_blocks(lines, path):
        toks = []
        for line_no, line in block:
            text, analysis = _split_columns(line, line_no, path)
            gold = analysis.split()
            try:
                toks.append(SuperToken(text, convert_gold_analysis(text, gold)))
            except UnalignableTokenError as e:
                logger.warning("line %d: %s", line_no, e)
                bad.append((line_no, text, analysis))
        if toks:
            sents.append(Sentence(tuple(toks)))
    return ConversionResult(Corpus(tuple(sents)), bad)


def convert_analysis_file(path) -> ConversionResult:
    path = Path(path)
    with open(path, encoding="utf-8") as f:
        return convert_analysis_lines(f, str(path))
