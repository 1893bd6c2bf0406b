"""Composition operators on the little Lipschitz space of rooted trees."""

import json

from ._treelip import affine_orbit, comb_map, distance, run, theorem_keys

__all__ = ["CliError", "affine_orbit", "comb_map", "distance", "report", "run", "theorem_keys"]


class CliError(RuntimeError):
    def __init__(self, status, error):
        super().__init__(f"exit {status}: {error.get('kind')}: {error.get('message')}")
        self.status = status
        self.kind = error.get("kind")
        self.message = error.get("message")


def report(*args):
    """Runs a CLI command and returns the parsed JSON report."""
    status, out, err = run([str(a) for a in args])
    if status != 0:
        raise CliError(status, json.loads(err)["error"])
    return json.loads(out)
