"""Exact-arithmetic toolkit for valuations dominating 2-dimensional regular
local rings: generating sequences, quadratic transforms, associated graded
rings, and ramification invariants."""

__version__ = "0.1.0"


def scenario_path(name):
    """Filesystem path of a shipped scenario file, e.g. scenario_path("v1")."""
    from importlib.resources import files
    return files("valtool") / "scenarios" / ("%s.scn" % name)
