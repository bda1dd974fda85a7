"""Batch verification over files or seeded random instances."""

from __future__ import annotations

import os
import random
from fractions import Fraction
from typing import Optional, Sequence

from .centered import is_perfectly_centered, verify_fvthm, verify_mainthm_pc
from .errors import PolysumError
from .flag import (GradedPoset, dsrshort_pairs, flag_vector, from_face_lattice,
                   is_eulerian, verify_bayer_billera, verify_dsrshort, verify_nestthm)
from .generate import rand_box, rand_cross, rand_low_dim, rand_polytope
from .minkowski import (MinkowskiSum, minkowski_sum, perturb_to_general_position,
                        verify_lem_euler, verify_lem_summand, verify_lemface,
                        verify_maincor, verify_maincor2, verify_mainthm, verify_thm_delta)
from .polytope import VPolytope, euler_check, f_vector
from .report import VerifierReport, fmt_rat

SUM_IDENTITIES = ("mainthm", "maincor", "maincor2", "delta", "lemface", "summand")
POLYTOPE_IDENTITIES = ("euler", "fvthm", "pc")
FLAG_IDENTITIES = ("bb", "dsrshort", "nestthm")
IDENTITIES = SUM_IDENTITIES + POLYTOPE_IDENTITIES + FLAG_IDENTITIES
DEFAULT_A = (Fraction(1),)

# keeps random 4-dimensional triple sums at desk scale
VERTEX_CAP = {(2, 2): 10, (2, 3): 10, (3, 2): 10, (3, 3): 8, (4, 2): 8, (4, 3): 6}


def max_retries() -> int:
    return int(os.environ.get("POLYSUM_MAX_RETRIES", "16"))


def _instance_rng(kind: str, seed: int, index: int) -> random.Random:
    return random.Random(f"{kind}:{seed}:{index}")


def random_full_sum(seed: int, index: int, d: Optional[int] = None,
                    vertices: Optional[int] = None) -> list[VPolytope]:
    """2 or 3 full-dimensional summands; one in three instances repeats a
    scaled copy of the first summand so that perturbation has work to do."""
    rng = _instance_rng("full", seed, index)
    d = d or rng.choice((2, 3, 4))
    r = rng.choice((2, 3))
    cap = VERTEX_CAP.get((d, r), 10)
    out = []
    for j in range(r):
        n = vertices or rng.randint(d + 1, cap)
        out.append(rand_polytope(d, n, rng, name=f"P{j + 1}"))
    if rng.randrange(3) == 0:
        shift = [Fraction(rng.randint(-4, 4), 4) for _ in range(d)]
        out[-1] = VPolytope([tuple(2 * x + s for x, s in zip(v, shift)) for v in out[0].vertices],
                            name=f"P{r}")
    return out


def random_mixed_sum(seed: int, index: int, d: Optional[int] = None,
                     vertices: Optional[int] = None) -> list[VPolytope]:
    """Summands of mixed dimension, at least one below the ambient one."""
    rng = _instance_rng("mixed", seed, index)
    d = d or rng.choice((2, 3, 4))
    r = rng.choice((2, 3))
    dims = [rng.randint(1, d) for _ in range(r)]
    if all(k == d for k in dims):
        dims[rng.randrange(r)] = rng.randint(1, d - 1)
    out = []
    for j, k in enumerate(dims):
        n = vertices or rng.randint(k + 1, min(VERTEX_CAP.get((d, r), 10), 2 * k + 3))
        if k == d:
            out.append(rand_polytope(d, n, rng, name=f"P{j + 1}"))
        else:
            out.append(rand_low_dim(d, k, n, rng, name=f"P{j + 1}"))
    return out


def random_polytope_instance(seed: int, index: int, d: Optional[int] = None,
                             vertices: Optional[int] = None) -> VPolytope:
    rng = _instance_rng("poly", seed, index)
    d = d or rng.choice((2, 3, 4))
    n = vertices or rng.randint(d + 1, 10)
    return rand_polytope(d, n, rng, name=f"R{index}")


def random_centered_instance(seed: int, index: int, d: Optional[int] = None) -> VPolytope:
    """Boxes and cross-polytopes centred at the origin are perfectly centered."""
    rng = _instance_rng("pc", seed, index)
    d = d or rng.choice((2, 3))
    make = rand_box if index % 2 == 0 else rand_cross
    return make(d, rng, name=f"C{index}")


def _aggregate(identity: str, reports: Sequence[VerifierReport], what: str) -> VerifierReport:
    failing = [r for r in reports if not r.passed]
    return VerifierReport(identity, Fraction(len(failing)), Fraction(0),
                          diagnostics=[{what: len(reports)}] + [r.to_json() for r in failing[:5]])


def sum_reports(identity: str, ms: MinkowskiSum, a_values=DEFAULT_A) -> list[VerifierReport]:
    sd = ms.decomposition
    d = ms.d
    if identity == "mainthm":
        return [verify_mainthm(ms, sd)]
    if identity == "maincor":
        return [verify_maincor(ms, a, sd) for a in a_values]
    if identity == "maincor2":
        return [verify_maincor2(ms, sd)]
    if identity == "delta":
        return [verify_thm_delta(ms, k, sd) for k in range(d)]
    if identity == "summand":
        return [verify_lem_summand(ms, i, k, sd) for i in range(ms.r) for k in range(d)]
    if identity == "lemface":
        lat = ms.lattice
        reps = [verify_lemface(lat.faces[i], sd) for i in lat.nonempty() if sd.exact[i]]
        return [_aggregate("lemface", reps, "exact_faces")]
    raise PolysumError(f"unknown sum identity {identity!r}")


def _flag_of(obj):
    if isinstance(obj, GradedPoset):
        return flag_vector(obj), obj
    poset = from_face_lattice(obj.lattice)
    return flag_vector(poset), None


def polytope_reports(identity: str, obj) -> list[VerifierReport]:
    if identity in FLAG_IDENTITIES:
        fv, poset = _flag_of(obj)
        pre = []
        violations = []
        if poset is not None:
            ok = is_eulerian(poset)
            pre.append(VerifierReport("eulerian", Fraction(0 if ok else 1), Fraction(0)))
            if not ok:
                violations.append("poset is not Eulerian")
        if identity == "bb":
            reps = [verify_bayer_billera(fv)]
        elif identity == "dsrshort":
            reps = [verify_dsrshort(fv, i, k) for i, k in dsrshort_pairs(fv.d)]
        else:
            reps = [verify_nestthm(fv)]
        for r in reps:
            r.violations.extend(violations)
        return pre + reps
    if isinstance(obj, GradedPoset):
        raise PolysumError(f"identity {identity!r} needs polytope input, got a poset")
    if identity == "euler":
        lat = obj.lattice
        return [euler_check(f_vector(lat))] + [verify_lem_euler(lat, k) for k in range(lat.d)]
    if identity == "fvthm":
        return [verify_fvthm(obj)]
    if identity == "pc":
        return [is_perfectly_centered(obj), verify_mainthm_pc(obj)]
    raise PolysumError(f"unknown identity {identity!r}")


def _instance_record(index, name, reports, extra=None) -> dict:
    rec = {"index": index, "name": name,
           "reports": [r.to_json() for r in reports],
           "pass": all(r.passed for r in reports)}
    rec.update(extra or {})
    return rec


def run_sum_instance(identity: str, index: int, summands, perturb_seed: Optional[int],
                     a_values=DEFAULT_A) -> dict:
    extra = {}
    if perturb_seed is not None:
        before = list(summands)
        summands = perturb_to_general_position(summands, perturb_seed, max_retries())
        extra["perturb_seed"] = perturb_seed
        extra["rotated"] = any(a is not b for a, b in zip(before, summands))
    ms = minkowski_sum(summands)
    extra["d"] = ms.d
    extra["summand_dims"] = [s.dim for s in ms.summands]
    extra["f_vector"] = list(f_vector(ms.lattice).counts)
    return _instance_record(index, ms.polytope.name, sum_reports(identity, ms, a_values), extra)


def verify_batch(identity: str, inputs: Sequence = (), *, random_count: int = 0, seed: int = 0,
                 d: Optional[int] = None, vertices: Optional[int] = None,
                 a_values=DEFAULT_A) -> dict:
    """Run one identity on file inputs (one instance) or on random instances.

    For sum identities all inputs are summands of a single sum; otherwise
    each input is its own instance.
    """
    if identity not in IDENTITIES:
        raise PolysumError(f"unknown identity {identity!r}; choose from {', '.join(IDENTITIES)}")
    records = []
    if random_count:
        for idx in range(random_count):
            if identity in SUM_IDENTITIES:
                make = random_mixed_sum if identity == "maincor2" else random_full_sum
                summands = make(seed, idx, d, vertices)
                records.append(run_sum_instance(identity, idx, summands, seed * 1000 + idx, a_values))
            else:
                p = (random_centered_instance(seed, idx, d) if identity in ("fvthm", "pc")
                     else random_polytope_instance(seed, idx, d, vertices))
                records.append(_instance_record(idx, p.name, polytope_reports(identity, p),
                                                {"f_vector": list(f_vector(p.lattice).counts)}))
    elif identity in SUM_IDENTITIES:
        if not inputs:
            raise PolysumError("no summands given")
        if any(isinstance(x, GradedPoset) for x in inputs):
            raise PolysumError(f"identity {identity!r} needs polytope inputs")
        records.append(run_sum_instance(identity, 0, list(inputs), None, a_values))
    else:
        if not inputs:
            raise PolysumError("no inputs given")
        for idx, obj in enumerate(inputs):
            name = getattr(obj, "name", f"poset{idx}")
            records.append(_instance_record(idx, name, polytope_reports(identity, obj)))
    return {
        "identity": identity,
        "seed": seed if random_count else None,
        "a": [fmt_rat(a) for a in a_values] if identity == "maincor" else None,
        "instances": records,
        "passed": sum(1 for r in records if r["pass"]),
        "total": len(records),
    }
