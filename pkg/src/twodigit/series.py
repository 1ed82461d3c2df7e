"""Infinite families of admissible expanding polynomials and the 3-part
partition counts behind the quadratic family.

Family tags: 1a 1b 2a 2b 2c 3a 3b 4a 4b 5 6 7.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import intpoly
from .errors import CriteriaDisagreement, ValidationError
from .intpoly import IntPolynomial

TAGS = ("1a", "1b", "2a", "2b", "2c", "3a", "3b", "4a", "4b", "5", "6", "7")

ARITY = {
    "1a": 2, "1b": 2, "2a": 2, "2b": 2, "2c": 2, "3a": 2, "3b": 2,
    "4a": 3, "4b": 3, "5": 2, "6": 2, "7": 3,
}


# ---- dense polynomial helpers on ascending int lists ----

def _mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _add(p, q):
    n = max(len(p), len(q))
    return [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]


def _mono(k, c=1):
    return [0] * k + [c]


def _binom(k, s=1):
    """``1 + s z^k``"""
    return _add([1], _mono(k, s))


def _divexact(num, den):
    """Exact polynomial division; raises if there is a remainder."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        if c % lead:
            raise ValidationError("division is not exact")
        q = c // lead
        out[i] = q
        for j, b in enumerate(den):
            num[i + j] -= q * b
    if any(num):
        raise ValidationError("division is not exact")
    return out


@dataclass(frozen=True)
class SeriesId:
    tag: str
    params: tuple
    sign: int = 1

    def __str__(self):
        s = "" if self.tag != "6" else ("+" if self.sign > 0 else "-")
        return f"S{self.tag}{s}{self.params}"


def is_bad_vector(n1: int, n2: int, n3: int) -> bool:
    """True iff the vector is proportional to ``(3x+s, 3y+s, 3z+s)``, s in {1, 2}.

    Divide out the largest common power of 3; the vector is bad iff the three
    components then share a nonzero residue mod 3.
    """
    v = [int(n1), int(n2), int(n3)]
    if min(v) < 1:
        raise ValidationError("components must be natural numbers")
    while all(x % 3 == 0 for x in v):
        v = [x // 3 for x in v]
    r = {x % 3 for x in v}
    return len(r) == 1 and r != {0}


def unit_circle_obstruction(m: int, q: int, k: int) -> bool:
    """Whether ``(1 - z^m)(1 - z^q)(1 + z^k) + 1`` vanishes on the unit circle.

    Equality in the acute-triangle argument forces ``1 - z^m = 1 - z^q`` and
    ``1 + z^k`` onto the ray at angle pi/3 (or its conjugate), i.e.
    ``z^m = z^q = e^{-i pi/3}`` and ``z^k = e^{2 i pi/3}``. Writing
    ``z = e^{i pi Y / (3g)}`` with g = gcd(m, q, k) turns this into
    congruences mod 6 with finitely many Y to try.
    """
    g = math.gcd(m, q, k)
    m1, q1, k1 = m // g, q // g, k // g
    for Y in range(6 * g):
        if (m1 * Y + 1) % 6 == 0 and (q1 * Y + 1) % 6 == 0 and (k1 * Y - 2) % 6 == 0:
            return True
    return False


def violation(sid: SeriesId):
    """Name of the violated validity clause, or None if the parameters are valid."""
    tag, p = sid.tag, sid.params
    if tag not in TAGS:
        return f"unknown series tag {tag!r}"
    if len(p) != ARITY[tag]:
        return f"series {tag} takes {ARITY[tag]} parameters"
    if any(int(x) < 1 for x in p):
        return "parameters must be natural numbers"
    if tag == "6" and sid.sign not in (1, -1):
        return "sign must be +1 or -1"
    if tag in ("1a", "1b", "2a", "2b", "2c"):
        m, q = p
        g = math.gcd(m, q)
        if tag == "2b":
            if not q > m:
                return "requires q > m"
        elif not m > q:
            return "requires m > q"
        if tag == "1b" and not ((m // g) % 2 == 1 and (q // g) % 2 == 1):
            return "requires m/gcd and q/gcd odd"
        if tag in ("2a", "2b") and (q // g) % 2 == 0:
            return "requires q/gcd odd"
        if tag == "2c" and (m // g) % 2 == (q // g) % 2:
            return "requires m/gcd and q/gcd of different parity"
    if tag == "4a" and is_bad_vector(*p):
        return f"{tuple(p)} is a bad vector"
    if tag == "4b":
        m, q, k = p
        if (m - q) % 3 == 0 and (k + m) % 3 == 0:
            return "m = q and k = -m modulo 3 is excluded"
    if tag == "5":
        m, q = p
        if (m - q) % 4 == 0:
            return "requires m != q modulo 4"
    return None


_classical_violation = violation


def _expand(sid: SeriesId) -> list:
    tag, p = sid.tag, [int(x) for x in sid.params]
    if tag == "1a":
        m, q = p
        g = math.gcd(m, q)
        return _divexact(_add(_add(_mono(m), _mono(q)), [-2]), _add([-1], _mono(g)))
    if tag == "1b":
        m, q = p
        g = math.gcd(m, q)
        return _divexact(_add(_add(_mono(m), _mono(q)), [2]), _add([1], _mono(g)))
    if tag == "2a":
        m, q = p
        return _add(_add(_mono(m), _mono(q, -1)), [2])
    if tag == "2b":
        m, q = p
        return _add(_add(_mono(q), _mono(m, -1)), [-2])
    if tag == "2c":
        m, q = p
        return _add(_add(_mono(m), _mono(q)), [2])
    if tag == "3a":
        m, q = p
        return _add(_mul(_binom(m), _binom(q)), [1])
    if tag == "3b":
        m, q = p
        return _add(_mul(_add(_mono(m), [-1]), _add(_mono(q), [-1])), [1])
    if tag == "4a":
        m, q, k = p
        return _add(_mul(_mul(_binom(m), _binom(q)), _binom(k)), [1])
    if tag == "4b":
        m, q, k = p
        return _add(_mul(_mul(_binom(m, -1), _binom(q, -1)), _binom(k)), [1])
    if tag == "5":
        m, q = p
        t1 = _add(_binom(m), _mono(2 * m))
        t2 = _add(_binom(q), _mono(2 * q))
        return _add(_mul(t1, t2), [1])
    if tag == "6":
        m, r = p
        t = _add(_binom(r, sid.sign), _mono(2 * r))
        return _add(_mul(_binom(m), t), [1])
    if tag == "7":
        a, b, k = p
        acc = _mul(_binom(a), _binom(b))
        for j in range(k + 1):
            acc = _mul(acc, _binom((2 ** j) * (a + b)))
        return _add(acc, [1])
    raise ValidationError(f"unknown series tag {tag!r}")


def corrected_violation(sid: SeriesId):
    """``violation`` plus the unit-circle obstruction for family 4b."""
    why = violation(sid)
    if why is None and sid.tag == "4b" and unit_circle_obstruction(*sid.params):
        why = "a root lies on the unit circle (z^m = z^q = e^{-i pi/3}, z^k = e^{2i pi/3})"
    return why


def generate(sid: SeriesId, force: bool = False) -> IntPolynomial:
    """Expanded polynomial of a series member.

    Parameters are validated first; ``force=True`` skips the validity
    predicate and instead runs the exact expanding test on the result.
    """
    why = corrected_violation(sid)
    if why is not None and not force:
        raise ValidationError(f"series {sid.tag}: {why}")
    p = IntPolynomial(_expand(sid))
    if force and not intpoly.is_expanding(p):
        raise ValidationError(f"{intpoly.format_poly(p)} is not expanding")
    return p


def parameter_grid(tag: str, max_degree: int = 12, corrected: bool = True):
    """Valid members of a family, on the standard sweep grid.

    1x/2x: m, q <= max_degree. 3x/4x/7: degree <= max_degree.
    5: m, q <= 5. 6: m + 2r <= max_degree, both signs.
    With ``corrected=False`` only the classical validity clauses are applied.
    """
    violation = corrected_violation if corrected else _classical_violation
    out = []
    N = max_degree
    if tag in ("1a", "1b", "2a", "2b", "2c"):
        for m in range(1, N + 1):
            for q in range(1, N + 1):
                s = SeriesId(tag, (m, q))
                if violation(s) is None:
                    out.append(s)
    elif tag in ("3a", "3b"):
        for m in range(1, N):
            for q in range(1, N - m + 1):
                out.append(SeriesId(tag, (m, q)))
    elif tag in ("4a", "4b"):
        for m in range(1, N):
            for q in range(1, N):
                for k in range(1, N - m - q + 1):
                    s = SeriesId(tag, (m, q, k))
                    if violation(s) is None:
                        out.append(s)
    elif tag == "5":
        for m in range(1, 6):
            for q in range(1, 6):
                s = SeriesId(tag, (m, q))
                if violation(s) is None:
                    out.append(s)
    elif tag == "6":
        for m in range(1, N):
            for r in range(1, (N - m) // 2 + 1):
                for sign in (1, -1):
                    out.append(SeriesId("6", (m, r), sign))
    elif tag == "7":
        for k in range(1, 8):
            for a in range(1, N):
                for b in range(1, N):
                    if (a + b) * 2 ** (k + 1) <= N:
                        out.append(SeriesId("7", (a, b, k)))
    else:
        raise ValidationError(f"unknown series tag {tag!r}")
    return out


# ---- partitions into three parts ----

def count_partitions3(d: int) -> int:
    """Unordered triples n1 <= n2 <= n3 of natural numbers summing to d."""
    if d < 0:
        raise ValidationError("d must be nonnegative")
    c = 0
    for a in range(1, d // 3 + 1):
        for b in range(a, (d - a) // 2 + 1):
            if d - a - b >= b:
                c += 1
    return c


def partitions3(d: int):
    for a in range(1, d // 3 + 1):
        for b in range(a, (d - a) // 2 + 1):
            if d - a - b >= b:
                yield (a, b, d - a - b)


def count_partitions3_nonneg(n: int) -> int:
    """Triples of nonnegative integers summing to n, order ignored."""
    if n < 0:
        return 0
    return count_partitions3(n + 3)


def count_good_partitions_brute(d: int) -> int:
    return sum(1 for t in partitions3(d) if not is_bad_vector(*t))


def count_good_partitions_formula(d: int) -> int:
    """``b(d) - sum_j [P(d/3^{j+1} - 1) + P(d/3^{j+1} - 2)]`` where P counts
    partitions into three nonnegative parts; the sum runs over j with
    ``3^{j+1} | d``.
    """
    total = count_partitions3(d)
    a = d
    while a % 3 == 0 and a > 0:
        a //= 3
        total -= count_partitions3_nonneg(a - 1) + count_partitions3_nonneg(a - 2)
    return total


def count_good_partitions(d: int) -> int:
    """Number of good 3-part partitions of d, by brute force, cross-checked."""
    if d < 3:
        raise ValidationError("d must be at least 3")
    brute = count_good_partitions_brute(d)
    formula = count_good_partitions_formula(d)
    if brute != formula:
        raise CriteriaDisagreement(f"good partitions of {d}: {brute} by enumeration, {formula} by formula")
    return brute


def quadratic_family_bounds(d: int):
    """Lower and upper bound for the good-partition count when 3 | d."""
    lo = Fraction(d * d, 16) - Fraction(43 * d, 36) - Fraction(5, 6)
    hi = Fraction(7 * d * d, 108) + Fraction(5 * d, 12) + Fraction(2, 3)
    return lo, hi


def omega(d: int) -> Fraction:
    """``b(d) - d(d-1)/12``."""
    return count_partitions3(d) - Fraction(d * (d - 1), 12)


def classical_bound_interval(d: int):
    """Interval ``(d(d-1) - r(r-1))/12 +- 1/2`` with r = d mod 3, as classically
    quoted for the number of 3-part partitions. It fails for some d."""
    r = d % 3
    c = Fraction(d * (d - 1) - r * (r - 1), 12)
    return c - Fraction(1, 2), c + Fraction(1, 2)


def classical_bound_failures(dmax: int) -> list:
    """Values of d <= dmax where the quoted interval misses the true count."""
    out = []
    for d in range(1, dmax + 1):
        lo, hi = classical_bound_interval(d)
        if not lo <= count_partitions3(d) <= hi:
            out.append(d)
    return out
