"""Exact symbolic checks for the extended Toda hierarchy."""

import json

from ._core import (
    TruncationExhausted,
    check_ids,
    dress,
    explain,
    fixtures,
    kdv_hirota,
    parse_xpoly,
    pipelines,
)
from ._core import run_json as _run_json

__all__ = [
    "TruncationExhausted",
    "check_ids",
    "dress",
    "explain",
    "fixtures",
    "kdv_hirota",
    "parse_xpoly",
    "pipelines",
    "run",
]


def run(fixture="", pipeline="", config="", jobs=0):
    """Run a pipeline and return the report as a dict.

    `config` is the text of an INI configuration (same format as the CLI).
    """
    return json.loads(_run_json(config=config, fixture=fixture, pipeline=pipeline, jobs=jobs))
