"""Exception types shared across the package.

Two failure families matter to callers: bad input (wrong dimensions, bad
JSON, out-of-range parameters) and geometric contract violations found at
run time (unbounded halfspace systems, degeneracies, failed retries). The
CLI maps InputError to exit code 2.
"""


class InputError(ValueError):
    """Malformed caller input: dimension mismatch, bad schema, bad parameter."""


class GeometryError(RuntimeError):
    """A geometric operation could not satisfy its contract on this input."""
