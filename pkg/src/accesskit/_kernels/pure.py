"""Pure-Python term kernels: the hot inner loops of polynomial arithmetic.

A term map is a plain dict mapping exponent tuples to nonzero Fraction
coefficients.  These functions are the only place where term maps are
manipulated term-by-term; everything above works through them so that the
compiled extension (``accesskit._kernels.fast``) can be swapped in at import
time.
"""

from fractions import Fraction

IMPLEMENTATION = "pure"


def mul_terms(a, b):
    """Multiply two term maps."""
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
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


def add_terms(a, b):
    """Add two term maps."""
    out = dict(a)
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


def addmul_terms(acc, coeff, shift, src):
    """In-place ``acc += coeff * x^shift * src``.  Returns ``acc``."""
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
    for e, c in src.items():
        es = tuple(x + y for x, y in zip(e, shift))
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


def scale_terms(a, coeff):
    """Multiply every coefficient by a nonzero scalar."""
    if not coeff:
        return {}
    return {e: c * coeff for e, c in a.items()}


def eval_terms(terms, values):
    """Evaluate a term map at a point given as a tuple of Fractions."""
    total = Fraction(0)
    for e, c in terms.items():
        v = c
        for i, p in enumerate(e):
            if p:
                v = v * values[i] ** p
        total += v
    return total
