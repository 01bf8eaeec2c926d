"""Text normalization and tokenization used by clustering, matching, and judging."""

from __future__ import annotations

import re

_WHITESPACE = re.compile(r"\s+")
_TOKEN = re.compile(r"[a-z0-9]+")

# A bare option token such as "b", "(b)", "b)", "3." used by multiple-choice
# shaped answers.
_OPTION_SHAPED = re.compile(r"^\(?[a-z0-9]\)?[.):]?$")


def normalize(text: str) -> str:
    """Casefold, trim, and collapse internal whitespace."""
    return _WHITESPACE.sub(" ", text.casefold().strip())


def tokens(text: str) -> set[str]:
    return set(_TOKEN.findall(normalize(text)))


def token_list(text: str) -> list[str]:
    return _TOKEN.findall(normalize(text))


def jaccard(a: set[str], b: set[str]) -> float:
    if not a and not b:
        return 1.0
    union = a | b
    if not union:
        return 0.0
    return len(a & b) / len(union)


def is_option_shaped(text: str) -> bool:
    return bool(_OPTION_SHAPED.match(normalize(text)))
