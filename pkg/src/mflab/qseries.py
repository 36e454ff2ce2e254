"""Truncated q-expansions with fractional exponents.

A series is sum_{n >= 0} c_n q^{(ell + n*sig)/D}: integer leading
numerator ell, lattice step sig >= 1 and exponent denominator D.  The
step keeps eta expansions dense (eta itself has gap 1, eta(z/2) gap 1/2)
and is divided out whenever possible, so integer-exponent forms end up
on the plain q-lattice.

Coefficients are complex floats by default; eta products can be built in
an exact integer mode, which is used to validate the float pipeline.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from math import gcd, pi

import numpy as np

TWO_PI_I = 2j * pi
DEFAULT_ORDER = 512


class QSeriesError(ValueError):
    pass


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class FracQSeries:
    """Truncated series sum_n c_n q^{(ell + n*sig)/D} with metadata."""

    def __init__(self, D, ell, coef, sig=1, weight=None, level=None, label="", exact=False):
        if D < 1 or sig < 1:
            raise QSeriesError("denominator and lattice step must be positive")
        self.D = int(D)
        self.ell = int(ell)
        self.sig = int(sig)
        self.exact = bool(exact)
        self.coef = list(coef) if exact else np.asarray(coef, dtype=complex)
        self.weight = weight
        self.level = level
        self.label = label

    # -- basics --------------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.coef)

    def exponent(self, n: int) -> Fraction:
        return Fraction(self.ell + n * self.sig, self.D)

    def exponents(self) -> np.ndarray:
        return (self.ell + self.sig * np.arange(self.order)) / self.D

    def leading_exponent(self) -> Fraction:
        return Fraction(self.ell, self.D)

    def horizon(self) -> Fraction:
        """First exponent beyond the stored range."""
        return Fraction(self.ell + self.order * self.sig, self.D)

    def as_float(self) -> "FracQSeries":
        if not self.exact:
            return self
        return FracQSeries(self.D, self.ell, [complex(c) for c in self.coef], self.sig,
                           self.weight, self.level, self.label, exact=False)

    def __repr__(self):
        return (f"FracQSeries({self.label or 'anon'}: lead {self.ell}/{self.D}, "
                f"step {self.sig}/{self.D}, {self.order} coeffs, k={self.weight}, N={self.level})")

    def reduce_lattice(self) -> "FracQSeries":
        """Divide out the common content of (D, ell, sig)."""
        g = gcd(gcd(self.D, self.ell), self.sig)
        if g == 1:
            return self
        return FracQSeries(self.D // g, self.ell // g, self.coef, self.sig // g,
                           self.weight, self.level, self.label, exact=self.exact)

    def strip(self) -> "FracQSeries":
        coef = self.coef
        n0 = 0
        while n0 < len(coef) and coef[n0] == 0:
            n0 += 1
        if n0 == 0:
            return self
        return FracQSeries(self.D, self.ell + n0 * self.sig, coef[n0:], self.sig,
                           self.weight, self.level, self.label, exact=self.exact)

    def truncate_exponent(self, emax) -> "FracQSeries":
        """Keep coefficients with exponent < emax."""
        x = Fraction(emax) * self.D - self.ell
        n = 0 if x <= 0 else int(-((-x) // self.sig))
        n = max(0, min(n, self.order))
        return FracQSeries(self.D, self.ell, self.coef[:n], self.sig,
                           self.weight, self.level, self.label, exact=self.exact)

    # -- lattice alignment -----------------------------------------------------

    def _on_grid(self, D: int, ell0: int, sig: int, length: int):
        """Coefficient array of self on the grid (ell0 + m*sig)/D, m < length."""
        f = D // self.D
        myell, mysig = self.ell * f, self.sig * f
        if self.exact:
            out = [0] * length
        else:
            out = np.zeros(length, dtype=complex)
        for n in range(self.order):
            pos = myell + n * mysig - ell0
            if pos < 0 or pos % sig:
                raise QSeriesError("lattice misalignment")
            m = pos // sig
            if m >= length:
                break
            out[m] = self.coef[n]
        return out

    def _common_grid(self, other: "FracQSeries"):
        D = _lcm(self.D, other.D)
        fa, fb = D // self.D, D // other.D
        la, lb = self.ell * fa, other.ell * fb
        sa, sb = self.sig * fa, other.sig * fb
        return D, (la, sa), (lb, sb)

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other: "FracQSeries") -> "FracQSeries":
        D, (la, sa), (lb, sb) = self._common_grid(other)
        ell0 = min(la, lb)
        sig = gcd(gcd(sa, sb), abs(la - lb)) or max(sa, sb)
        end = min(la + sa * self.order, lb + sb * other.order)
        length = max(0, -((ell0 - end) // sig))  # ceil((end-ell0)/sig)
        exact = self.exact and other.exact
        a = self._on_grid(D, ell0, sig, length)
        b = other._on_grid(D, ell0, sig, length)
        if exact:
            coef = [x + y for x, y in zip(a, b)]
        else:
            coef = np.asarray(a) + np.asarray(b)
        w = self.weight if self.weight == other.weight else None
        out = FracQSeries(D, ell0, coef, sig, w, _lcm_level(self, other), exact=exact)
        return out.strip().reduce_lattice()

    def scale(self, c) -> "FracQSeries":
        exact = self.exact and isinstance(c, (int, Fraction))
        if exact:
            coef = [c * v for v in self.coef]
        else:
            coef = np.asarray(self.as_float().coef) * complex(c)
        return FracQSeries(self.D, self.ell, coef, self.sig, self.weight, self.level,
                           self.label, exact=exact)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __mul__(self, other: "FracQSeries") -> "FracQSeries":
        D, (la, sa), (lb, sb) = self._common_grid(other)
        sig = gcd(sa, sb)
        ell0 = la + lb
        end = ell0 + min(sa * self.order, sb * other.order)  # truncation-correct horizon
        length = max(0, (end - ell0) // sig)
        w = None
        if self.weight is not None and other.weight is not None:
            w = self.weight + other.weight
        exact = self.exact and other.exact
        if exact:
            coef = [0] * length
            for i, ai in enumerate(self.coef):
                if ai == 0:
                    continue
                base = i * sa
                for j, bj in enumerate(other.coef):
                    pos = base + j * sb
                    if pos >= end - ell0:
                        break
                    if bj:
                        coef[pos // sig] += ai * bj
        else:
            # dense arrays on the common sig-grid, then one convolution
            La = (self.order - 1) * (sa // sig) + 1 if self.order else 0
            Lb = (other.order - 1) * (sb // sig) + 1 if other.order else 0
            coef = np.zeros(length, dtype=complex)
            if La and Lb:
                a = np.zeros(La, dtype=complex)
                a[:: sa // sig] = self.as_float().coef
                b = np.zeros(Lb, dtype=complex)
                b[:: sb // sig] = other.as_float().coef
                conv = np.convolve(a, b)
                coef[: min(length, len(conv))] = conv[:length]
        out = FracQSeries(D, ell0, coef, sig, w, _lcm_level(self, other), exact=exact)
        return out.reduce_lattice()

    def pow(self, e: int) -> "FracQSeries":
        if e == 0:
            one = [1] if self.exact else np.array([1.0 + 0j])
            return FracQSeries(1, 0, one, 1, 0, self.level, exact=self.exact)
        if e < 0:
            return self.invert().pow(-e)
        out, base, k = None, self, e
        while k:
            if k & 1:
                out = base if out is None else out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def invert(self) -> "FracQSeries":
        """Formal inverse on the same lattice; needs c_0 != 0."""
        if self.order == 0 or self.coef[0] == 0:
            raise QSeriesError("cannot invert a series with zero leading coefficient")
        n = self.order
        w = -self.weight if self.weight is not None else None
        if self.exact:
            c0 = self.coef[0]
            inv0 = 1 if c0 == 1 else (-1 if c0 == -1 else Fraction(1, c0))
            coef = [0] * n
            coef[0] = inv0
            for m in range(1, n):
                s = 0
                for i in range(1, m + 1):
                    if self.coef[i]:
                        s += self.coef[i] * coef[m - i]
                coef[m] = -inv0 * s
        else:
            coef = np.zeros(n, dtype=complex)
            coef[0] = 1 / self.coef[0]
            for m in range(1, n):
                coef[m] = -coef[0] * np.dot(self.coef[1 : m + 1], coef[m - 1 :: -1])
        return FracQSeries(self.D, -self.ell, coef, self.sig, w, self.level, exact=self.exact)

    def derive(self) -> "FracQSeries":
        """d/dz with q = e(z): termwise factor 2 pi i * exponent."""
        f = self.as_float()
        w = self.weight + 2 if self.weight is not None else None
        return FracQSeries(f.D, f.ell, f.coef * (TWO_PI_I * f.exponents()), f.sig,
                           w, f.level, f.label, exact=False)

    def antiderivative(self, n: int = 1) -> "FracQSeries":
        """n-th termwise antiderivative c_m -> c_m/(2 pi i e_m)^n; n < 0 derives.

        For n >= 1 all exponents must be strictly positive (series
        cuspidal at infinity); otherwise a constant term would leave the
        lattice.
        """
        if n == 0:
            return self
        f = self.as_float().strip()
        e = f.exponents()
        if n >= 1 and f.order and e[0] <= 0:
            raise QSeriesError("antiderivative needs strictly positive exponents")
        fac = (TWO_PI_I * e) ** (-n) if n > 0 else (TWO_PI_I * e) ** (-n)
        w = self.weight - 2 * n if self.weight is not None else None
        return FracQSeries(f.D, f.ell, f.coef * fac, f.sig, w, f.level, exact=False)


def _lcm_level(a, b):
    if a.level is None or b.level is None:
        return a.level if a.level is not None else b.level
    return _lcm(a.level, b.level)


def series_arith(op: str, *args) -> FracQSeries:
    """Dispatch add|mul|pow|invert|derive."""
    table = {
        "add": lambda: args[0] + args[1],
        "mul": lambda: args[0] * args[1],
        "pow": lambda: args[0].pow(args[1]),
        "invert": lambda: args[0].invert(),
        "derive": lambda: args[0].derive(),
    }
    try:
        return table[op]()
    except KeyError:
        raise QSeriesError(f"unknown series operation {op!r}") from None


# ---------------------------------------------------------------------------
# eta products


def _pentagonal_unit(order: int):
    """Integer coefficients of prod_{n>=1}(1 - x^n) up to x^(order-1)."""
    c = [0] * order
    if order:
        c[0] = 1
    k = 1
    while k * (3 * k - 1) // 2 < order:
        s = -1 if k % 2 == 1 else 1
        for g in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            if g < order:
                c[g] += s
        k += 1
    return c


def eta_qexp(t, order: int = DEFAULT_ORDER, exact: bool = True) -> FracQSeries:
    """q^(t/24) prod_{n>=1} (1 - q^(t n)), truncated to `order` lattice terms.

    The exponent lattice is t/24 + t*Z_{>=0}; for t = 1 the leading
    exponent is 1/24 and the first coefficients are 1, -1, -1, 0, 0, 1.
    """
    t = Fraction(t)
    if t <= 0:
        raise QSeriesError("eta scale must be positive")
    if order < 1:
        raise QSeriesError("order must be >= 1")
    lead = t / 24
    D = _lcm(lead.denominator, t.denominator)
    coef = _pentagonal_unit(order)
    f = FracQSeries(D, int(lead * D), coef, int(t * D), weight=Fraction(1, 2),
                    label=f"eta({t})", exact=True)
    f = f.reduce_lattice()
    return f if exact else f.as_float()


def eta_quotient(factors, order: int = DEFAULT_ORDER, exact: bool = False,
                 weight=None, level=None, label="") -> FracQSeries:
    """Product of eta powers; factors is a list of (scale t, integer exponent e).

    `order` counts coefficients of the final series on its reduced
    lattice; each factor is expanded far enough to make those exact.
    """
    factors = [(Fraction(t), int(e)) for t, e in factors]
    if not factors:
        raise QSeriesError("empty eta quotient")
    lead = sum(t * e for t, e in factors) / 24
    step = _frac_gcd([t for t, _ in factors])
    horizon = lead + step * order
    out = None
    for t, e in factors:
        nterms = int((horizon - t / 24) / t) + 2
        f = eta_qexp(t, order=max(nterms, 1), exact=exact)
        if not exact:
            f = f.as_float()
        part = f.pow(e).truncate_exponent(horizon)
        out = part if out is None else (out * part).truncate_exponent(horizon)
    out = out.truncate_exponent(horizon).reduce_lattice()
    if out.order > order:
        out = FracQSeries(out.D, out.ell, out.coef[:order], out.sig,
                          out.weight, out.level, out.label, exact=out.exact)
    out.weight = weight if weight is not None else Fraction(sum(e for _, e in factors), 2)
    out.level = level
    out.label = label or "eta-quotient"
    return out


# ---------------------------------------------------------------------------
# builtin forms and file IO


class FormLibraryEntry:
    def __init__(self, label: str, series: FracQSeries, note: str = ""):
        self.label = label
        self.series = series
        self.note = note


_BUILTIN_RECIPES = {
    "delta": ([(1, 24)], 12, 1),
    "f11": ([(1, 2), (11, 2)], 2, 11),
    "f4_11": ([(1, 4), (11, 4)], 4, 11),
    "eta4": ([(1, 4)], 2, None),
    "kz_integrand": ([(Fraction(1, 2), 8), (2, 8), (1, -12)], 2, None),
}


@lru_cache(maxsize=64)
def _builtin_series(label: str, order: int) -> FracQSeries:
    try:
        factors, weight, level = _BUILTIN_RECIPES[label]
    except KeyError:
        raise QSeriesError(f"unknown builtin form {label!r}") from None
    return eta_quotient(factors, order=order, exact=False, weight=weight,
                        level=level, label=label)


def builtin_form(label: str, order: int = DEFAULT_ORDER) -> FormLibraryEntry:
    """Built-in eta quotients.

    delta         weight 12, level 1 cusp form eta(z)^24
    f11           weight 2, level 11 cusp form eta(z)^2 eta(11z)^2
    f4_11         weight 4, level 11 cusp form (f11 squared)
    eta4          eta(z)^4: weight-2 theta-group cusp form with character
    kz_integrand  eta(z/2)^8 eta(2z)^8 eta(z)^-12
    """
    return FormLibraryEntry(label, _builtin_series(label, order),
                            "eta quotient, validated against exact integer expansion")


def save_form(entry: FormLibraryEntry, path):
    """Write a q-expansion file (decimal strings round-trip doubles exactly).

    The file format has no lattice-step field, so the series is expanded
    to the dense 1/D grid first.
    """
    f = entry.series.as_float()
    coef = np.zeros(max((f.order - 1) * f.sig + 1, 0), dtype=complex)
    if f.order:
        coef[:: f.sig] = f.coef
    payload = {
        "label": entry.label,
        "weight": None if f.weight is None else float(f.weight),
        "level": f.level,
        "exponent_denominator": f.D,
        "leading_numerator": f.ell,
        "coefficients": [[repr(c.real), repr(c.imag)] for c in coef],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh)


def load_form(path, order: int | None = None) -> FormLibraryEntry:
    """Read and validate a q-expansion file written by save_form."""
    with open(path) as fh:
        payload = json.load(fh)
    for key in ("label", "weight", "level", "exponent_denominator",
                "leading_numerator", "coefficients"):
        if key not in payload:
            raise QSeriesError(f"q-expansion file missing field {key!r}")
    D = int(payload["exponent_denominator"])
    if D < 1:
        raise QSeriesError("exponent denominator must be positive")
    coef = np.array([float(re) + 1j * float(im) for re, im in payload["coefficients"]],
                    dtype=complex)
    if order is not None and len(coef) < order:
        raise QSeriesError(f"file provides {len(coef)} coefficients, {order} required")
    f = FracQSeries(D, int(payload["leading_numerator"]), coef, 1,
                    payload["weight"], payload["level"], payload["label"], exact=False)
    label = payload["label"]
    if label in _BUILTIN_RECIPES:
        ref = _builtin_series(label, 8).as_float()
        probe = f.strip().reduce_lattice()
        if probe.leading_exponent() != ref.leading_exponent():
            raise QSeriesError(f"file leading exponent mismatches builtin {label!r}")
        if payload["weight"] is not None and float(payload["weight"]) != float(ref.weight):
            raise QSeriesError(f"declared weight {payload['weight']} mismatches {label!r}")
    return FormLibraryEntry(label, f.strip().reduce_lattice())
