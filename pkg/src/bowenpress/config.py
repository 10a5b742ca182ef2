"""INI-file construction of systems, potentials, measures, and targets.

Sections: [system], [potential], optional [measure], optional [target],
optional [run] for numeric defaults the CLI can override.  List-valued
fields use ';' between entries and spaces inside matrix rows, e.g.

    [system]
    kind = shift
    alphabet_size = 2
    transitions = 11;10

    [potential]
    kind = cocycle
    matrices = 1 0;0 1|2 0;0 1
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass

import numpy as np

from . import measures as ms
from . import potentials as pots
from .cover import FULL_TARGET, Target
from .systems import CircleSystem, SymbolicSystem


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split(";") if tok.strip())

def _matrix(text: str) -> tuple[tuple[float, ...], ...]:
    return tuple(
        tuple(float(v) for v in row.split())
        for row in text.split(";") if row.strip()
    )

def _bit_rows(text: str) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(c) for c in row.strip()) for row in text.split(";"))


def build_system(sec) -> SymbolicSystem | CircleSystem:
    kind = sec.get("kind", "shift")
    if kind == "circle":
        return CircleSystem(degree=sec.getint("degree"))
    if kind != "shift":
        raise ValueError(f"unknown system kind {kind!r}")
    m = sec.getint("alphabet_size")
    trans = sec.get("transitions", fallback=None)
    return SymbolicSystem(
        alphabet_size=m,
        transitions=_bit_rows(trans) if trans else None,
        metric_base=sec.getfloat("metric_base", fallback=np.e),
    )


def build_potential(sec, system):
    kind = sec.get("kind")
    if kind == "additive":
        return pots.AdditivePotential(values=_floats(sec.get("values")))
    if kind == "cocycle":
        mats = tuple(_matrix(tok) for tok in sec.get("matrices").split("|"))
        return pots.CocyclePotential(matrices=mats)
    if kind == "circle_constant":
        return pots.CircleLipschitzPotential(
            func=pots.constant_function(sec.getfloat("value", fallback=0.0)))
    if kind == "circle_cosine":
        return pots.CircleLipschitzPotential(
            func=pots.cosine_function(sec.getfloat("amplitude", fallback=1.0)))
    if kind == "circle_sawtooth":
        return pots.CircleLipschitzPotential(
            func=pots.sawtooth_function(sec.getfloat("scale", fallback=1.0)))
    raise ValueError(f"unknown potential kind {kind!r}")


def _stationary(rows) -> tuple[float, ...]:
    """Left fixed vector of a row-stochastic matrix, by eigenvector."""
    P = np.asarray(rows, dtype=float)
    vals, vecs = np.linalg.eig(P.T)
    i = int(np.argmin(np.abs(vals - 1.0)))
    v = np.real(vecs[:, i])
    v = np.abs(v)
    return tuple(float(x) for x in v / v.sum())


def build_measure(sec, system):
    kind = sec.get("kind")
    if kind == "bernoulli":
        return ms.BernoulliMeasure(probs=_floats(sec.get("probs")))
    if kind == "markov":
        rows = _matrix(sec.get("rows"))
        init = sec.get("initial", fallback=None)
        initial = _floats(init) if init else _stationary(rows)
        return ms.MarkovMeasure(rows=rows, initial=initial)
    if kind == "lebesgue":
        return ms.LebesgueMeasure()
    raise ValueError(f"unknown measure kind {kind!r}")


def build_target(sec) -> Target:
    kind = sec.get("kind", "full")
    if kind == "full":
        return FULL_TARGET
    words = tuple(
        tuple(int(c) for c in w.strip())
        for w in sec.get("words").split(";") if w.strip()
    )
    return Target(kind="cylinders", words=words)


@dataclass(frozen=True)
class RunSpec:
    system: object
    potential: object
    measure: object | None
    target: Target
    run: dict


def load_config(path: str) -> RunSpec:
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise FileNotFoundError(path)
    system = build_system(cp["system"])
    potential = build_potential(cp["potential"], system)
    measure = (
        build_measure(cp["measure"], system) if cp.has_section("measure")
        else None
    )
    target = build_target(cp["target"]) if cp.has_section("target") else FULL_TARGET
    run = dict(cp["run"]) if cp.has_section("run") else {}
    return RunSpec(system=system, potential=potential, measure=measure,
                   target=target, run=run)
