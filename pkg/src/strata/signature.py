"""Stratum signatures: Euler constraint, optimal counts, exceptions.

A signature is a genus together with a multiset of prong numbers and an
orientability sign.  Two-prong entries carry no information and are
dropped on construction.
"""

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import OddParity, SignatureParseError

# (genus, prongs, sign or None for "either sign") -> reason
EXCEPTIONS = {
    (1, (3, 1), None): "(1,3) is not realizable in genus 1",
    (1, (), "-"): "the empty signature is not realizable nonorientably in genus 1",
    (2, (5, 3), None): "(3,5) is not realizable in genus 2",
    (2, (6,), "-"): "(6) is not realizable nonorientably in genus 2",
}


@dataclass(frozen=True)
class Signature:
    genus: int
    prongs: tuple
    sign: str = "-"

    def __post_init__(self):
        if self.sign not in ("+", "-"):
            raise SignatureParseError(f"sign must be '+' or '-', got {self.sign!r}")
        if self.genus < 0:
            raise SignatureParseError("genus must be nonnegative")
        ps = []
        for m in self.prongs:
            m = int(m)
            if m < 1:
                raise SignatureParseError(f"prong numbers must be positive, got {m}")
            if m != 2:
                ps.append(m)
        object.__setattr__(self, "prongs", tuple(sorted(ps, reverse=True)))

    @property
    def orientable(self):
        return self.sign == "+"

    @property
    def n_odd(self):
        return sum(1 for m in self.prongs if m % 2)

    @property
    def n_even(self):
        return sum(1 for m in self.prongs if m % 2 == 0)

    def parity_ok(self):
        """Orientable signatures may only have even entries."""
        return not (self.orientable and self.n_odd)

    def __str__(self):
        return format_signature(self)


def euler_residual(sig):
    """Sum of (2 - m)/2 over the prongs, minus 2 - 2g. Zero iff admissible."""
    return sum((Fraction(2 - m, 2) for m in sig.prongs), Fraction(0)) - (2 - 2 * sig.genus)


def optimal_count(sig):
    """Number of curve pairs in an optimal configuration for ``sig``."""
    if sig.n_odd % 2:
        raise OddParity(f"odd number of odd entries in {sig}")
    if sig.orientable:
        return sig.genus + sig.n_odd // 2
    return sig.genus - 1 + sig.n_odd // 2


def is_exceptional(sig):
    """Reason string if ``sig`` is one of the four unrealizable cases, else None."""
    for (g, prongs, sign), reason in EXCEPTIONS.items():
        if sig.genus == g and sig.prongs == prongs and sign in (None, sig.sign):
            return reason
    return None


def is_admissible(sig):
    return euler_residual(sig) == 0 and sig.parity_ok()


_TEXT = re.compile(r"^\s*g\s*=\s*(\d+)\s+R\s*=\s*([0-9,\s]*?)\s*(?:s\s*=\s*([+-]))?\s*$")


def parse_prongs(text):
    text = (text or "").strip()
    if not text or text in ("()", "{}", "-"):
        return ()
    try:
        return tuple(int(p) for p in text.strip("()").split(",") if p.strip())
    except ValueError as exc:
        raise SignatureParseError(f"bad prong list {text!r}") from exc


def parse_signature(text):
    """Parse the text form ``g=2 R=1,3,4,4 s=-``; sign defaults to '-'."""
    m = _TEXT.match(text)
    if not m:
        raise SignatureParseError(f"cannot parse signature {text!r}")
    return Signature(int(m.group(1)), parse_prongs(m.group(2)), m.group(3) or "-")


def format_signature(sig):
    return f"g={sig.genus} R={','.join(str(m) for m in sorted(sig.prongs))} s={sig.sign}"


def enumerate_signatures(genus, max_total):
    """All admissible signatures of ``genus`` with prong sum at most ``max_total``.

    Both signs are listed when all entries are even.  Exceptional
    signatures are included; callers filter them.
    """
    # sum(m - 2) = 4g - 4: entries >= 3 push up, ones pull down by 1 each
    target = 4 * genus - 4
    out = []

    def emit(bigs):
        ones = sum(m - 2 for m in bigs) - target
        if ones < 0 or sum(bigs) + ones > max_total:
            return
        prongs = tuple(bigs) + (1,) * ones
        if not prongs and genus != 1:
            return
        sig = Signature(genus, prongs, "-")
        if sig.n_odd % 2:
            return
        out.append(sig)
        if sig.n_odd == 0:
            out.append(Signature(genus, prongs, "+"))

    def rec(max_part, bigs):
        emit(bigs)
        for m in range(min(max_part, max_total - sum(bigs)), 2, -1):
            rec(m, bigs + [m])

    rec(max_total, [])
    return out
