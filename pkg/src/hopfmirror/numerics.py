"""Complex arithmetic at a fixed modular parameter and theta series.

All exponents that the rest of the package produces are exact rationals;
they are turned into floating complex numbers only here, through
:func:`qpow`, so that cancellation never happens in floating point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .errors import InsufficientDataError

TWO_PI_I = 2j * math.pi

Rational = Fraction | int


@dataclass(frozen=True)
class ModularParam:
    tau: complex

    def __post_init__(self) -> None:
        if not complex(self.tau).imag > 0:
            raise ValueError(f"tau must lie in the upper half plane, got {self.tau!r}")

    @cached_property
    def q(self) -> complex:
        return cmath.exp(TWO_PI_I * self.tau)

    @property
    def log_q(self) -> complex:
        """The branch of log q equal to 2*pi*i*tau."""
        return TWO_PI_I * self.tau


def frac_part(r: Rational) -> Fraction:
    r = Fraction(r)
    return r - math.floor(r)


def qpow(mp: ModularParam, tau_exp: Rational, phase: Rational = 0) -> complex:
    """Return exp(2 pi i (tau * tau_exp + phase)).

    The phase is reduced mod 1 before conversion to float.
    """
    return cmath.exp(TWO_PI_I * (mp.tau * float(tau_exp) + float(frac_part(phase))))


@dataclass(frozen=True)
class ThetaSpec:
    """Characteristics and argument of a theta series.

    The series is sum over l of N^((l + c')^2 / 2) * (e^(2 pi i c'') z^pz x^px)^(l + c')
    with nome N = q^nome_power. Powers of z and x are taken through one fixed
    branch of log z, log x, so that integral total exponents come out exact.
    """

    c_prime: Fraction
    c_dblprime: Fraction
    nome_power: Fraction
    arg_exponents: tuple[Fraction, Fraction] = (Fraction(0), Fraction(1))

    def __post_init__(self) -> None:
        if self.nome_power <= 0:
            raise ValueError("nome_power must be positive")


def _log_arg(spec: ThetaSpec, z: complex, x: complex) -> complex:
    if z == 0 or x == 0:
        raise ValueError("theta is evaluated on C* x C*")
    pz, px = spec.arg_exponents
    out = TWO_PI_I * float(spec.c_dblprime)
    if pz:
        out += float(pz) * cmath.log(z)
    if px:
        out += float(px) * cmath.log(x)
    return out


def _term(log_nome: complex, log_arg: complex, u: float) -> complex:
    return cmath.exp(log_nome * (u * u / 2) + log_arg * u)


def theta_window(
    spec: ThetaSpec, mp: ModularParam, z: complex, x: complex, eps: float
) -> tuple[int, int]:
    """Smallest symmetric-enough range [lo, hi] of l whose tail is below eps.

    Each tail is bounded by the geometric series started at the first omitted
    term, which is valid once consecutive term ratios drop under 1/2.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    log_nome = mp.log_q * float(spec.nome_power)
    r = log_nome.real
    y = _log_arg(spec, z, x).real
    c = float(spec.c_prime)
    centre = round(-y / r - c)

    def log_mag(ell: int) -> float:
        u = ell + c
        return r * u * u / 2 + y * u

    budget = math.log(eps / 4)
    hi = centre
    while True:
        # ratio of term hi+2 to hi+1, and size of the first omitted term
        ratio = math.exp(r * (hi + 1 + c + 0.5) + y)
        if ratio < 0.5 and log_mag(hi + 1) + math.log(2) < budget:
            break
        hi += 1
    lo = centre
    while True:
        ratio = math.exp(r * (-(lo - 1 + c) + 0.5) - y)
        if ratio < 0.5 and log_mag(lo - 1) + math.log(2) < budget:
            break
        lo -= 1
    return lo, hi


def theta_sum(
    spec: ThetaSpec, mp: ModularParam, z: complex, x: complex, lo: int, hi: int
) -> complex:
    log_nome = mp.log_q * float(spec.nome_power)
    log_arg = _log_arg(spec, z, x)
    c = float(spec.c_prime)
    return sum((_term(log_nome, log_arg, ell + c) for ell in range(lo, hi + 1)), 0j)


def theta(
    spec: ThetaSpec, mp: ModularParam, z: complex, x: complex, eps: float = 1e-12
) -> complex:
    """Theta series with absolute truncation error at most eps."""
    lo, hi = theta_window(spec, mp, z, x, eps)
    return theta_sum(spec, mp, z, x, lo, hi)


class Decay(str, Enum):
    SUPER_EXPONENTIAL = "super_exponential"
    NOT_SUPER_EXPONENTIAL = "not_super_exponential"


def decay_classify(weighted_coeffs: Sequence[tuple[int, complex]]) -> Decay:
    """Heuristic test of lim |c|^(1/|w|) = 0 on a finite sample.

    Works with s_w = -log max|c|^(1/|w|) per weight magnitude. Over the tail
    half of the magnitudes s must be strictly increasing, and its increments
    must not die out (a sequence converging to a finite limit, like
    |c| = 2^-|w|, has shrinking or zero increments).
    """
    if len(weighted_coeffs) < 6:
        raise InsufficientDataError("need at least 6 samples")
    best: dict[int, float] = {}
    for w, c in weighted_coeffs:
        if w == 0:
            continue
        mag = abs(c)
        s = math.inf if mag == 0 else -math.log(mag) / abs(w)
        best[abs(w)] = min(best.get(abs(w), math.inf), s)
    if len(best) < 3:
        raise InsufficientDataError("need at least 3 distinct nonzero weight magnitudes")
    seq = [best[w] for w in sorted(best)]
    tail = seq[len(seq) // 2 :]
    if len(tail) < 2:
        tail = seq[-2:]
    if all(math.isinf(s) for s in tail):
        return Decay.SUPER_EXPONENTIAL
    if any(math.isinf(s) for s in tail):
        tail = [s for s in tail if not math.isinf(s)]
        if len(tail) < 2:
            return Decay.SUPER_EXPONENTIAL
    steps = [b - a for a, b in zip(tail, tail[1:])]
    if any(step <= 1e-12 for step in steps):
        return Decay.NOT_SUPER_EXPONENTIAL
    if steps[-1] < 0.5 * steps[0]:
        return Decay.NOT_SUPER_EXPONENTIAL
    return Decay.SUPER_EXPONENTIAL
