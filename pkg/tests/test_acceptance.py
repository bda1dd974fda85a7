"""Acceptance criteria. Each test prints one PASS/FAIL line, repeated in the
terminal summary. All comparisons are exact."""

import json
import os
import random
import subprocess
import sys
import time
from fractions import Fraction
from itertools import product

import pytest

from polysum.batch import random_full_sum, random_mixed_sum
from polysum.centered import pc_sum_lattice, verify_fvthm
from polysum.flag import (dsrshort_pairs, flag_vector, from_face_lattice,
                          verify_bayer_billera, verify_dsrshort, verify_nestthm)
from polysum.generate import rand_polytope
from polysum.minkowski import (decompose_faces, is_relatively_general_position, minkowski_sum,
                               perturb_to_general_position, verify_lem_euler, verify_lem_summand,
                               verify_lemface, verify_maincor, verify_maincor2, verify_mainthm,
                               verify_thm_delta)
from polysum.polytope import VPolytope, dual_face_map, euler_check, f_vector, polar_dual

import conftest
from conftest import cube, diamond, dseg, hseg, octahedron, square, triangle, vseg
from oracles import minkowski_polygon_edge_merge

SEED = 2026
COUNT = 50
A_VALUES = (Fraction(0), Fraction(1), Fraction(-3), Fraction(7, 2))


def record(n, ok, text):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {text}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def segment3(axis):
    return VPolytope([(0, 0, 0), tuple(int(i == axis) for i in range(3))], name=f"e{axis}")


@pytest.fixture(scope="module")
def instances():
    start = time.perf_counter()
    originals, sums = [], []
    for i in range(COUNT):
        summands = random_full_sum(SEED, i)
        originals.append(summands)
        sums.append(minkowski_sum(perturb_to_general_position(summands, SEED * 1000 + i, 16)))
    for ms in sums:
        ms.decomposition
    return originals, sums, time.perf_counter() - start


@pytest.fixture(scope="module")
def hand_sums():
    return {
        "octagon": minkowski_sum([square(), diamond()]),
        "hexagon": minkowski_sum([square(), dseg()]),
        "parallelogram": minkowski_sum([hseg(), vseg()]),
        "cube": minkowski_sum([segment3(0), segment3(1), segment3(2)]),
    }


@pytest.fixture(scope="module")
def lattices(instances, hand_sums):
    """Every face lattice the acceptance run computes, by label."""
    _, sums, _ = instances
    out = {}
    for i, ms in enumerate(sums):
        out[f"sum{i}"] = ms.lattice
        for j, s in enumerate(ms.summands):
            out[f"sum{i}.P{j + 1}"] = s.lattice
    for name, ms in hand_sums.items():
        out[name] = ms.lattice
        for j, s in enumerate(ms.summands):
            out[f"{name}.P{j + 1}"] = s.lattice
    for make in (cube, octahedron, triangle, square):
        p = make()
        out[p.name] = p.lattice
        out[p.name + "*"] = polar_dual(p).lattice
        out[p.name + "+dual"] = pc_sum_lattice(p)
    return out


def test_criterion_01_mainthm_random(instances):
    originals, sums, build = instances
    start = time.perf_counter()
    reports = [verify_mainthm(ms) for ms in sums]
    elapsed = build + time.perf_counter() - start
    shape_ok = all(2 <= len(s) <= 3 and s[0].ambient_dim in (2, 3, 4)
                   and all(p.is_full_dimensional and len(p.vertices) <= 10 for p in s)
                   for s in originals)
    gp = sum(1 for ms in sums if is_relatively_general_position(ms.decomposition))
    passed = sum(1 for r in reports if r.passed and r.lhs == 0 and not r.advisory)
    dims = sorted({ms.d for ms in sums})
    ok = record(1, passed == COUNT and gp == COUNT and shape_ok and elapsed <= 120,
                f"mainthm {passed}/{COUNT} exact zero, general position {gp}/{COUNT}, "
                f"d in {dims}, {elapsed:.1f}s")
    assert ok


def test_criterion_02_maincor_affine_in_a(instances):
    _, sums, _ = instances
    good = 0
    for ms in sums:
        reps = {a: verify_maincor(ms, a) for a in A_VALUES}
        slope = reps[1].lhs - reps[0].lhs
        affine = all(r.lhs == reps[0].lhs + slope * a for a, r in reps.items())
        expected = all(r.rhs == a * (1 - ms.r) * (1 - (-1) ** ms.d) for a, r in reps.items())
        if affine and expected and all(r.passed for r in reps.values()):
            good += 1
    ok = record(2, good == COUNT, f"maincor at a in {{0, 1, -3, 7/2}}: {good}/{COUNT} instances exact")
    assert ok


def test_criterion_03_maincor2(hand_sums):
    hexa = verify_maincor2(hand_sums["hexagon"])
    para = verify_maincor2(hand_sums["parallelogram"])
    random_ok = 0
    lower = 0
    for i in range(20):
        summands = random_mixed_sum(SEED, i)
        ms = minkowski_sum(perturb_to_general_position(summands, SEED * 1000 + i, 16))
        lower += any(s.dim < ms.d for s in ms.summands)
        rep = verify_maincor2(ms)
        if rep.passed and not rep.advisory and is_relatively_general_position(ms.decomposition):
            random_ok += 1
    ok = (hexa.lhs == hexa.rhs == -1 and para.lhs == para.rhs == -2
          and random_ok == 20 and lower == 20)
    record(3, ok, f"maincor2 hexagon {hexa.lhs}={hexa.rhs}, two segments {para.lhs}={para.rhs}, "
                  f"random mixed {random_ok}/20")
    assert ok


def test_criterion_04_negative_control():
    ms = minkowski_sum([square(), hseg()])
    rep = verify_maincor2(ms)
    gp = is_relatively_general_position(ms.decomposition)
    ok = rep.lhs == 1 and rep.rhs == -1 and not rep.passed and rep.advisory and not gp
    record(4, ok, f"square + parallel segment: lhs={rep.lhs} rhs={rep.rhs}, general position {gp}, "
                  f"failure expected and observed")
    assert ok


def test_criterion_05_perturbation():
    details = []
    ok = True
    for make, seed in ((cube, 1), (square, 2)):
        summands = [make(), make()]
        before = f_vector(minkowski_sum(summands).lattice).counts
        rotated = perturb_to_general_position(summands, seed, max_retries=16)
        ms = minkowski_sum(rotated)
        after = f_vector(ms.lattice).counts
        ok &= is_relatively_general_position(ms.decomposition)
        ok &= all(f_vector(p.lattice) == f_vector(q.lattice) for p, q in zip(rotated, summands))
        ok &= len(after) == len(before) and all(x >= y for x, y in zip(after, before))
        details.append(f"{summands[0].name}+{summands[0].name} {before}->{after}")
    record(5, ok, "perturbation within 16 retries: " + ", ".join(details))
    assert ok


def test_criterion_06_face_identities(instances, hand_sums):
    _, sums, _ = instances
    checked = failed = 0
    for ms in list(sums) + list(hand_sums.values()):
        sd = ms.decomposition
        reps = [verify_thm_delta(ms, k, sd) for k in range(ms.d)]
        reps += [verify_lem_summand(ms, i, k, sd) for i in range(ms.r) for k in range(ms.d)]
        for lat in [ms.lattice] + [s.lattice for s in ms.summands]:
            reps += [verify_lem_euler(lat, k) for k in range(lat.d)]
        lat = ms.lattice
        reps += [verify_lemface(lat.faces[i], sd) for i in lat.nonempty() if sd.exact[i]]
        checked += len(reps)
        failed += sum(1 for r in reps if not r.passed)
    ok = record(6, failed == 0 and checked > 0,
                f"thm_delta, lem_euler, lem_summand, lemface: {checked - failed}/{checked} checks "
                f"on {len(sums) + len(hand_sums)} sums")
    assert ok


def test_criterion_07_fvthm():
    expected = {"cube": (24, 48, 26), "triangle": (6, 6), "square": (8, 8)}
    parts = []
    ok = True
    for make in (cube, triangle, square):
        p = make()
        rep = verify_fvthm(p)
        routes = rep.diagnostics[0]
        want = list(expected[p.name])
        ok &= rep.passed and routes["predicted"] == routes["chains"] == routes["direct"] == want
        parts.append(f"{p.name} {tuple(routes['predicted'])}")
    direct = f_vector(minkowski_sum([cube(), octahedron()]).lattice).counts
    ok &= direct == expected["cube"]
    record(7, ok, "prediction = chain lattice = direct sum: " + ", ".join(parts))
    assert ok


def test_criterion_08_flag_relations(lattices):
    bad = []
    relations = 0
    for name, lat in lattices.items():
        fv = flag_vector(from_face_lattice(lat))
        reps = [verify_nestthm(fv), verify_bayer_billera(fv)]
        reps += [verify_dsrshort(fv, i, k) for i, k in dsrshort_pairs(fv.d)]
        relations += reps[1].diagnostics[0]["relations"] + len(reps) - 1
        if not all(r.passed for r in reps):
            bad.append(name)
    ok = record(8, not bad and len(lattices) >= 60,
                f"nestthm, Bayer-Billera, dsrshort on {len(lattices)} lattices "
                f"({relations} relations), failures: {bad or 'none'}")
    assert ok


def test_criterion_09_infrastructure(lattices, instances, hand_sums):
    euler_bad = [n for n, lat in lattices.items() if not euler_check(f_vector(lat)).passed]

    order_ok = True
    for make in (cube, octahedron):
        p = make()
        lat, dlat = p.lattice, polar_dual(p).lattice
        proper = [lat.faces[i] for i in lat.nonempty() if 0 <= lat.faces[i].dim < p.dim]
        dual = {f: dual_face_map(lat, dlat, f) for f in proper}
        for g, f in product(proper, repeat=2):
            order_ok &= (g.vertices <= f.vertices) == (dual[f].vertices <= dual[g].vertices)

    rng = random.Random(SEED)
    _, sums, _ = instances
    all_sums = list(sums) + list(hand_sums.values())
    witness_ok = all(decompose_faces(ms, rng).parts == ms.decomposition.parts
                     for ms in all_sums for _ in range(20))

    merge_ok = 0
    for i in range(20):
        prng = random.Random(f"polygons:{SEED}:{i}")
        a = rand_polytope(2, prng.randint(3, 10), prng)
        b = rand_polytope(2, prng.randint(3, 10), prng)
        merged = minkowski_polygon_edge_merge([a.vertices, b.vertices])
        ms = minkowski_sum([a, b])
        if set(merged) == set(ms.polytope.vertices) and f_vector(ms.lattice).counts == (len(merged),) * 2:
            merge_ok += 1

    ok = not euler_bad and order_ok and witness_ok and merge_ok == 20
    record(9, ok, f"Euler on {len(lattices) - len(euler_bad)}/{len(lattices)} hulls, dual order "
                  f"reversal {'ok' if order_ok else 'broken'}, witness independence "
                  f"{'ok' if witness_ok else 'broken'} (20 trials x {len(all_sums)} sums), "
                  f"edge merge {merge_ok}/20")
    assert ok


SUITE_SCRIPT = """
import sys
from polysum.batch import IDENTITIES, verify_batch
from polysum.io import dump_json
from fractions import Fraction
out = {}
for ident in IDENTITIES:
    a = (Fraction(0), Fraction(7, 2)) if ident == "maincor" else (Fraction(1),)
    out[ident] = verify_batch(ident, random_count=3, seed=int(sys.argv[1]), a_values=a)
sys.stdout.write(dump_json(out))
"""


def test_criterion_10_determinism():
    runs = []
    for hashseed in ("1", "2"):
        env = dict(os.environ, PYTHONHASHSEED=hashseed)
        proc = subprocess.run([sys.executable, "-c", SUITE_SCRIPT, str(SEED)], env=env,
                              capture_output=True, check=True)
        runs.append(proc.stdout)
    data = json.loads(runs[0])
    all_pass = all(v["passed"] == v["total"] for v in data.values())
    ok = record(10, runs[0] == runs[1] and all_pass,
                f"two batch runs over {len(data)} identities (hash seeds 1, 2): "
                f"{'byte-identical' if runs[0] == runs[1] else 'DIFFERENT'}, {len(runs[0])} bytes")
    assert ok
