# cython: language_level=3, boundscheck=False, wraparound=False
"""Cython term kernels.  Same contract as accesskit._kernels.pure.

Coefficients stay exact Python Fractions; the win over the pure version is
the removal of interpreter dispatch in the pair loops and cheaper exponent
tuple construction.
"""

from fractions import Fraction

cimport cython
from cpython.tuple cimport PyTuple_GET_SIZE, PyTuple_GET_ITEM, PyTuple_New, PyTuple_SET_ITEM
from cpython.ref cimport Py_INCREF

IMPLEMENTATION = "cython"


cdef inline tuple _tuple_add(tuple ea, tuple eb):
    cdef Py_ssize_t n = PyTuple_GET_SIZE(ea)
    cdef Py_ssize_t i
    cdef tuple out = PyTuple_New(n)
    cdef object s
    for i in range(n):
        s = (<object>PyTuple_GET_ITEM(ea, i)) + (<object>PyTuple_GET_ITEM(eb, i))
        Py_INCREF(s)
        PyTuple_SET_ITEM(out, i, s)
    return out


def mul_terms(dict a, dict b):
    """Multiply two term maps."""
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    cdef dict out = {}
    cdef tuple ea, eb, e
    cdef object ca, cb, c
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = _tuple_add(ea, eb)
            c = out.get(e)
            if c is None:
                out[e] = ca * cb
            else:
                c = c + ca * cb
                if c:
                    out[e] = c
                else:
                    del out[e]
    return out


def add_terms(dict a, dict b):
    """Add two term maps."""
    cdef dict out = dict(a)
    cdef tuple e
    cdef object c, cur
    for e, c in b.items():
        cur = out.get(e)
        if cur is None:
            out[e] = c
        else:
            cur = cur + c
            if cur:
                out[e] = cur
            else:
                del out[e]
    return out


def addmul_terms(dict acc, object coeff, shift, dict src):
    """In-place ``acc += coeff * x^shift * src``.  Returns ``acc``."""
    cdef tuple e, es
    cdef object c, cur
    if not coeff:
        return acc
    if shift is None:
        for e, c in src.items():
            cur = acc.get(e)
            if cur is None:
                acc[e] = coeff * c
            else:
                cur = cur + coeff * c
                if cur:
                    acc[e] = cur
                else:
                    del acc[e]
        return acc
    cdef tuple sh = <tuple>shift
    for e, c in src.items():
        es = _tuple_add(e, sh)
        cur = acc.get(es)
        if cur is None:
            acc[es] = coeff * c
        else:
            cur = cur + coeff * c
            if cur:
                acc[es] = cur
            else:
                del acc[es]
    return acc


def scale_terms(dict a, object coeff):
    """Multiply every coefficient by a nonzero scalar."""
    if not coeff:
        return {}
    cdef dict out = {}
    cdef tuple e
    cdef object c
    for e, c in a.items():
        out[e] = c * coeff
    return out


def eval_terms(dict terms, tuple values):
    """Evaluate a term map at a point given as a tuple of Fractions."""
    cdef object total = Fraction(0)
    cdef tuple e
    cdef object c, v
    cdef Py_ssize_t i, n
    cdef object p
    for e, c in terms.items():
        v = c
        n = PyTuple_GET_SIZE(e)
        for i in range(n):
            p = <object>PyTuple_GET_ITEM(e, i)
            if p:
                v = v * (<object>PyTuple_GET_ITEM(values, i)) ** p
        total = total + v
    return total
