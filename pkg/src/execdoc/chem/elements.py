"""Embedded element table (standard atomic weights); never fetched at run time."""

import json
from functools import lru_cache
from importlib import resources

from ..errors import UnknownElementError


@lru_cache(maxsize=None)
def _table():
    return json.loads((resources.files("execdoc") / "data" / "elements.json").read_text())


def table_source() -> str:
    t = _table()
    return f"{t['source']} (table version {t['version']})"


def is_element(symbol: str) -> bool:
    return symbol in _table()["weights"]


def atomic_weight(symbol: str) -> float:
    try:
        return _table()["weights"][symbol]
    except KeyError:
        raise UnknownElementError(f"unknown element symbol {symbol!r}") from None
