"""Conserved quantities of phase-oscillator ensembles."""

import json

from ._phaseinv import *  # noqa: F401,F403
from ._phaseinv import __version__, certify_json, preset_json


def certify(seed=1, points=20):
    """Run the certification battery and return the report as a dict."""
    return json.loads(certify_json(seed, points))


def preset(name):
    """Return a named preset configuration as a dict."""
    return json.loads(preset_json(name))
