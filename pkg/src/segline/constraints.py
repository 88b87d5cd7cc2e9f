"""Post-processing of predicted boundaries.

Two rules, applied in order:

1. no boundary between two ASCII letters/digits (foreign words, numbers);
2. every sub-token before the stem must be an attested prefix and every
   sub-token after it an attested suffix. The stem is the longest sub-token,
   leftmost on ties. Violations are repaired one boundary at a time, always
   dropping the least probable boundary next to an offending sub-token.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .corpus import Corpus, split_at

_ASCII_ALNUM = re.compile(r"[A-Za-z0-9]")


@dataclass(frozen=True)
class AffixInventory:
    prefixes: frozenset[str] = frozenset()
    suffixes: frozenset[str] = frozenset()

    def to_json(self):
        return {"prefixes": sorted(self.prefixes), "suffixes": sorted(self.suffixes)}

    @classmethod
    def from_json(cls, d) -> "AffixInventory":
        return cls(frozenset(d["prefixes"]), frozenset(d["suffixes"]))


def stem_index(subtokens: list[str]) -> int:
    return max(range(len(subtokens)), key=lambda k: (len(subtokens[k]), -k))


def collect_affixes(corpus: Corpus) -> AffixInventory:
    prefixes, suffixes = set(), set()
    for tok in corpus.supertokens():
        if not tok.boundaries:
            continue
        subs = tok.subtokens
        s = stem_index(subs)
        prefixes.update(subs[:s])
        suffixes.update(subs[s + 1:])
    return AffixInventory(frozenset(prefixes), frozenset(suffixes))


def _alnum_pair(text: str, i: int) -> bool:
    return bool(_ASCII_ALNUM.fullmatch(text[i])) and bool(_ASCII_ALNUM.fullmatch(text[i + 1]))


def _violations(text: str, bounds: list[int], inv: AffixInventory) -> list[int]:
    """Indices (into ``bounds``) of boundaries adjacent to a bad sub-token."""
    subs = split_at(text, bounds)
    s = stem_index(subs)
    bad = set()
    for k, sub in enumerate(subs):
        if (k < s and sub not in inv.prefixes) or (k > s and sub not in inv.suffixes):
            # sub-token k lies between boundary k-1 and boundary k
            if k > 0:
                bad.add(k - 1)
            if k < len(bounds):
                bad.add(k)
    return sorted(bad)


def apply(supertoken: str, boundaries: Iterable[int],
          probs: Mapping[int, float] | None = None,
          inv: AffixInventory | None = None) -> frozenset[int]:
    """Return the subset of ``boundaries`` that survives both rules.

    ``inv=None`` skips the affix rule. Missing probabilities count as 0.5.
    """
    probs = probs or {}
    bounds = sorted(b for b in set(boundaries) if not _alnum_pair(supertoken, b))
    if inv is None:
        return frozenset(bounds)
    while bounds:
        bad = _violations(supertoken, bounds, inv)
        if not bad:
            break
        drop = min(bad, key=lambda k: (probs.get(bounds[k], 0.5), bounds[k]))
        del bounds[drop]
    return frozenset(bounds)
