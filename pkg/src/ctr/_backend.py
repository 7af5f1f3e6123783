"""Pick the compiled core when it imports, else the pure-Python one.

CTR_BACKEND=python forces the fallback; CTR_BACKEND=compiled makes a missing
extension an error instead of a silent downgrade.
"""
import importlib
import os

from . import _pycore

_choice = os.environ.get("CTR_BACKEND", "").strip().lower()


def load(name=None):
    """Return a core module by name ('compiled' or 'python'); default is the active one."""
    name = (name or "").lower()
    if name == "python":
        return _pycore
    if name in ("compiled", "c"):
        return importlib.import_module("._ccore", __package__)
    return core


def available():
    names = ["python"]
    try:
        load("compiled")
        names.insert(0, "compiled")
    except ImportError:
        pass
    return names


if _choice == "python":
    core = _pycore
elif _choice == "compiled":
    core = load("compiled")
else:
    try:
        core = load("compiled")
    except ImportError:
        core = _pycore

NAME = core.NAME
