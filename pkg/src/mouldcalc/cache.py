"""Versioned JSON cache for mould values, reloadable across runs."""

from __future__ import annotations

import hashlib
import json
import os

from .errors import CacheError
from .moulds import Mould
from .saddlenode import BivariateSeries, field_to_json
from .scalars import CQ
from .series import TruncatedSeries
from .words import word_key

CACHE_VERSION = 1
CACHE_DIR_ENV = "MOULDCALC_CACHE_DIR"


def field_hash(A: BivariateSeries) -> str:
    """Stable content hash of a field (canonical JSON form)."""
    payload = json.dumps(field_to_json(A), sort_keys=True,
                         separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def default_cache_dir() -> str:
    return os.environ.get(CACHE_DIR_ENV, os.path.join(".", ".mouldcache"))


def cache_path(A: BivariateSeries, x_order: int, directory=None) -> str:
    directory = directory or default_cache_dir()
    return os.path.join(directory,
                        f"{field_hash(A)[:16]}-x{x_order}.json")


def save_mould_cache(path, mould: Mould, fhash: str) -> None:
    entries = []
    memo = {tuple(w): mould.value(w) for w in mould.known_words()}
    for w in sorted(memo, key=word_key):
        entries.append({"word": list(w),
                        "coeffs": [c.to_quad() for c in memo[w].coeffs]})
    doc = {"version": CACHE_VERSION, "field_hash": fhash,
           "x_order": mould.x_order, "entries": entries}
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, separators=(",", ": "))
        fh.write("\n")


def load_mould_cache(path, fhash: str, x_order: int) -> dict:
    """Entries for Mould.preload; raises CacheError on any mismatch or
    malformation."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CacheError(f"unreadable cache file {path}: {exc}") from exc
    try:
        if doc["version"] != CACHE_VERSION:
            raise CacheError(f"cache version {doc['version']} != "
                             f"{CACHE_VERSION}")
        if doc["field_hash"] != fhash:
            raise CacheError("cache belongs to a different field")
        if doc["x_order"] < x_order:
            raise CacheError(f"cache x_order {doc['x_order']} < {x_order}")
        entries = {}
        for e in doc["entries"]:
            word = tuple(int(n) for n in e["word"])
            entries[word] = TruncatedSeries(
                [CQ.from_quad(q) for q in e["coeffs"]], doc["x_order"])
        return entries
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        if isinstance(exc, CacheError):
            raise
        raise CacheError(f"malformed cache file {path}: {exc}") from exc
