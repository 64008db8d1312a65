"""Independent oracles: eigensolvers, manufactured fields, convergence
measurement and the verification suites.

Submodules are imported lazily so that the core modules can depend on the
eigensolver without pulling in the suites.
"""

import importlib

_SUBMODULES = ("eigen", "fields", "sampling", "convergence", "suites")


def __getattr__(name):
    if name in _SUBMODULES:
        return importlib.import_module(f"{__name__}.{name}")
    raise AttributeError(name)
