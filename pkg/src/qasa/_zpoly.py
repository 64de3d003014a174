"""Dense integer polynomials stored as tuples of ints (constant term first).

Internal helpers for :mod:`qasa.scalars`.  A polynomial is a tuple whose last
entry is nonzero; the zero polynomial is ``()``.
"""

from __future__ import annotations

from math import gcd

ZERO: tuple = ()
ONE: tuple = (1,)


def trim(p):
    n = len(p)
    while n and p[n - 1] == 0:
        n -= 1
    return tuple(p[:n])


def add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return trim(out)


def neg(a):
    return tuple(-c for c in a)


def sub(a, b):
    return add(a, neg(b))


def scale(a, c):
    if c == 0:
        return ZERO
    return tuple(x * c for x in a)


def mul(a, b):
    if not a or not b:
        return ZERO
    if len(a) == 1:
        return scale(b, a[0])
    if len(b) == 1:
        return scale(a, b[0])
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def shift(a, k):
    """Multiply by x**k, k >= 0."""
    if not a or k == 0:
        return a
    return (0,) * k + tuple(a)


def content(a):
    g = 0
    for c in a:
        g = gcd(g, c)
        if g == 1:
            break
    return g


def primitive(a):
    g = content(a)
    if g in (0, 1):
        return a
    return tuple(c // g for c in a)


def low_order(a):
    """Index of the lowest nonzero coefficient."""
    for i, c in enumerate(a):
        if c:
            return i
    raise ValueError("zero polynomial")


def pseudo_rem(a, b):
    """Pseudo-remainder of a by b (b nonzero)."""
    db = len(b) - 1
    lb = b[-1]
    r = list(a)
    while len(r) - 1 >= db and r:
        lr = r[-1]
        k = len(r) - 1 - db
        r = [c * lb for c in r]
        for j, c in enumerate(b):
            r[j + k] -= lr * c
        r = list(trim(r))
    return tuple(r)


def gcd_poly(a, b):
    """Primitive gcd over Z[x], normalized with positive leading coefficient."""
    if not a:
        return primitive_pos(b)
    if not b:
        return primitive_pos(a)
    if len(a) == 1 or len(b) == 1:
        return ONE
    a = primitive(a)
    b = primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = pseudo_rem(a, b)
        a, b = b, primitive(r)
    if len(a) == 1:
        return ONE
    return primitive_pos(a)


def primitive_pos(a):
    a = primitive(a)
    if a and a[-1] < 0:
        a = neg(a)
    return a


def divexact(a, b):
    """Exact quotient a / b over Z[x]; raises if the division is not exact."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(b) == 1:
        c = b[0]
        out = []
        for x in a:
            qq, rr = divmod(x, c)
            if rr:
                raise ArithmeticError("inexact division")
            out.append(qq)
        return tuple(out)
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    if len(r) - 1 < db:
        if r:
            raise ArithmeticError("inexact division")
        return ZERO
    out = [0] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        lr = r[k + db]
        if lr == 0:
            continue
        qq, rr = divmod(lr, lb)
        if rr:
            raise ArithmeticError("inexact division")
        out[k] = qq
        for j, c in enumerate(b):
            r[j + k] -= qq * c
    if any(r):
        raise ArithmeticError("inexact division")
    return trim(out)


def evaluate_mod(a, x, p):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc
