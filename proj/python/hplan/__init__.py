"""Footstep planning with homotopy-class heuristics.

Documents are the same JSON files the CLI and HTTP service use; functions
accept either parsed objects or JSON text.
"""

import json

from . import _hplan
from ._hplan import FormatError, InvalidQuery, InvalidSegment

__all__ = [
    "FormatError",
    "InvalidQuery",
    "InvalidSegment",
    "Service",
    "load",
    "plan",
    "reduce",
    "signature",
    "suffix_set",
]


def _text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def load(path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def signature(world, points):
    """Returns (word, reduced word) for a list of [x, y, surface_id] points."""
    return _hplan.signature(_text(world), _text(points))


def reduce(world, word):
    return _hplan.reduce(_text(world), word)


def suffix_set(world, words):
    return set(_hplan.suffix_set(_text(world), list(words)))


def plan(world, query, refpaths=None):
    """Runs one query and returns the plan record as a dict."""
    refs = "" if refpaths is None else _text(refpaths)
    return json.loads(_hplan.plan(_text(world), _text(query), refs))


class Service:
    """Route handlers of the HTTP service without a socket.

    Each method returns (status, body); JSON bodies are decoded.
    """

    def __init__(self, world):
        self._impl = _hplan.Service(_text(world))

    @staticmethod
    def _decode(response):
        status, body, content_type = response
        return status, json.loads(body) if content_type == "application/json" else body

    def world(self):
        return self._decode(self._impl.get_world())

    def post_refpath(self, body):
        return self._decode(self._impl.post_refpath(_text(body)))

    def delete_refpath(self, ref_id):
        return self._decode(self._impl.delete_refpath(ref_id))

    def post_plan(self, body):
        return self._decode(self._impl.post_plan(_text(body)))

    def get_plan(self, plan_id):
        return self._decode(self._impl.get_plan(plan_id))

    def heuristic(self, plan_id, index, fmt="csv"):
        return self._decode(self._impl.get_heuristic(plan_id, str(index), fmt))
