"""Rigorous certificates of rotational chaos for annulus maps.

Configurations and certificates are plain dicts with the same layout as the
JSON files read and written by the rotchaos command line tool.
"""

import json

from . import _core
from ._core import Error, Interval, cos, exp, hex, sin, sqr

__all__ = ["Error", "Interval", "certify", "cos", "exp", "explore", "hex", "load", "render", "replay", "sin", "sqr"]

KINDS = ("dpd", "visit", "chaos", "chain", "markov")


def load(path):
    with open(path) as f:
        return json.load(f)


def certify(kind, config, budget=0):
    """Run one certification and return the certificate document."""
    return json.loads(_core.certify(kind, json.dumps(config), budget))


def explore(config):
    """Float (non-rigorous) candidate boxes, best first."""
    return json.loads(_core.explore(json.dumps(config)))


def replay(document, deep=False):
    """Re-check a certificate; returns claimed, agrees, enclosures_recomputed, mismatches."""
    return _core.replay(json.dumps(document), deep)


def render(document, view="cover"):
    return _core.render(json.dumps(document), view)
