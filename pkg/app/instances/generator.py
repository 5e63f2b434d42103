"""Deterministic generators for the instance families, and the random-coloring baseline."""
from typing import Union

import numpy as np

from ..config.logging_config import logger
from ..core.rng import Stream, make_rng
from ..models.instances import GeneratorSpec
from ..models.set_systems import ConstraintSet, SetSystem

# baseline colorings are drawn in chunks of this many rows
_BASELINE_CHUNK = 256


def _bernoulli(spec: GeneratorSpec, rng: np.random.Generator) -> SetSystem:
    mask = rng.random((spec.m, spec.n)) < float(spec.param)
    return SetSystem(n=spec.n, sets=tuple(tuple(np.flatnonzero(row).tolist()) for row in mask))


def _k_uniform(spec: GeneratorSpec, rng: np.random.Generator) -> SetSystem:
    k = int(spec.param)
    sets = tuple(tuple(sorted(rng.choice(spec.n, size=k, replace=False).tolist())) for _ in range(spec.m))
    return SetSystem(n=spec.n, sets=sets)


def _low_degree(spec: GeneratorSpec, rng: np.random.Generator) -> SetSystem:
    """Every element joins exactly min(t, m) distinct sets."""
    degree = min(int(spec.param), spec.m)
    members = [[] for _ in range(spec.m)]
    for i in range(spec.n):
        for j in rng.choice(spec.m, size=degree, replace=False):
            members[int(j)].append(i)
    return SetSystem(n=spec.n, sets=tuple(tuple(s) for s in members))


def _matrix_gaussian(spec: GeneratorSpec, rng: np.random.Generator) -> ConstraintSet:
    rows = rng.standard_normal((spec.m, spec.n))
    norms = np.linalg.norm(rows, axis=1, keepdims=True)
    return ConstraintSet.from_rows(rows / norms, n=spec.n)


def generate(spec: GeneratorSpec) -> Union[SetSystem, ConstraintSet]:
    """Instance described by a GeneratorSpec; identical inputs give bit-identical instances."""
    rng = make_rng(spec.seed, Stream.INSTANCE)
    if spec.kind == "bernoulli":
        instance = _bernoulli(spec, rng)
    elif spec.kind == "k-uniform":
        instance = _k_uniform(spec, rng)
    elif spec.kind == "low-degree":
        instance = _low_degree(spec, rng)
    elif spec.kind == "singleton":
        instance = SetSystem(n=spec.n, sets=tuple((i,) for i in range(spec.n)))
    else:
        instance = _matrix_gaussian(spec, rng)
    logger.debug(f"Generated {spec.kind} instance: n={spec.n}, m={instance.m}, seed={spec.seed}")
    return instance


def random_coloring_baseline(instance: Union[SetSystem, ConstraintSet], samples: int, seed: int) -> np.ndarray:
    """Max discrepancy max_j |<chi, v_j>| of `samples` uniformly random colorings."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if isinstance(instance, SetSystem):
        rows = np.zeros((instance.m, instance.n))
        for j, s in enumerate(instance.sets):
            rows[j, list(s)] = 1.0
    else:
        rows = np.asarray(instance.rows)
    rng = make_rng(seed, Stream.BASELINE)
    out = np.empty(samples)
    for start in range(0, samples, _BASELINE_CHUNK):
        k = min(_BASELINE_CHUNK, samples - start)
        chi = rng.choice(np.array([-1.0, 1.0]), size=(k, rows.shape[1]))
        sums = chi @ rows.T
        out[start:start + k] = np.max(np.abs(sums), axis=1, initial=0.0)
    return out
