"""Process-wide switches.

``paranoid`` turns on the dual-route cross checks (block route against the
whole-matrix route) inside the spectral operations. It is off by default
for library use and can be enabled with ``QTDRAZIN_PARANOID=1``, with the
:func:`paranoid` context manager, or per call via the ``paranoid=`` keyword.
"""

from __future__ import annotations

import contextlib
import os
import threading

_state = threading.local()

_DEFAULT = os.environ.get("QTDRAZIN_PARANOID", "0").lower() in ("1", "true", "yes")


def paranoid_enabled() -> bool:
    return getattr(_state, "paranoid", _DEFAULT)


def set_paranoid(flag: bool) -> None:
    _state.paranoid = bool(flag)


@contextlib.contextmanager
def paranoid(flag: bool = True):
    previous = paranoid_enabled()
    set_paranoid(flag)
    try:
        yield
    finally:
        set_paranoid(previous)


def resolve(flag: bool | None) -> bool:
    return paranoid_enabled() if flag is None else bool(flag)
