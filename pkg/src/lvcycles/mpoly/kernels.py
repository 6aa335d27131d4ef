"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``LVCYCLES_PURE_PYTHON=1`` to force the fallback.
"""
import os

BACKEND = "python"
if os.environ.get("LVCYCLES_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._ckernels import add_terms, iadd_terms, mul_terms, mul_terms_trunc, divexact_terms  # noqa: F401

        BACKEND = "cython"
    except ImportError:
        pass
if BACKEND == "python":
    from ._kernels_py import add_terms, iadd_terms, mul_terms, mul_terms_trunc, divexact_terms  # noqa: F401
