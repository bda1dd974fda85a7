import random
from fractions import Fraction

import pytest

from polysum.errors import GeometryError, PerturbationError, PreconditionError
from polysum.generate import rand_polytope
from polysum.minkowski import (cayley_rotation, check_reconstruction, decompose_faces, delta_vector,
                               is_relatively_general_position, minkowski_sum, normal_cone,
                               perturb_to_general_position, random_skew, relint_witness,
                               verify_lem_euler, verify_lem_summand, verify_lemface,
                               verify_maincor, verify_maincor2, verify_mainthm, verify_thm_delta)
from polysum.polytope import f_vector
from polysum.exact import identity, mat_mul

from conftest import cube, diamond, dseg, hseg, octahedron, square, unit_square, vseg
from oracles import f_vector_bruteforce, minkowski_polygon_edge_merge


@pytest.fixture(scope="module")
def octagon():
    return minkowski_sum([square(), diamond()])


@pytest.fixture(scope="module")
def hexagon():
    return minkowski_sum([square(), dseg()])


@pytest.fixture(scope="module")
def cube_oct():
    return minkowski_sum([cube(), octahedron()])


@pytest.fixture(scope="module")
def parallelogram():
    return minkowski_sum([hseg(), vseg()])


def top(ms):
    return ms.lattice.faces[-1]


def test_sum_examples(octagon, cube_oct, parallelogram):
    assert f_vector(octagon.lattice).counts == (8, 8)
    assert f_vector(parallelogram.lattice).counts == (4, 4)
    assert f_vector(cube_oct.lattice).counts == (24, 48, 26)


def test_sum_f_vectors_match_bruteforce(octagon, cube_oct):
    sums16 = [tuple(a + b for a, b in zip(u, v)) for u in square().vertices for v in diamond().vertices]
    assert f_vector_bruteforce(sums16) == (8, 8)
    sums48 = [tuple(a + b for a, b in zip(u, v)) for u in cube().vertices for v in octahedron().vertices]
    assert f_vector_bruteforce(sums48) == (24, 48, 26)


def test_sum_dimension_mismatch():
    with pytest.raises(GeometryError):
        minkowski_sum([square(), cube()])


def test_normal_cone_examples():
    sq = square()
    lat = sq.lattice
    facet = lat.faces[lat.index({sq.vertex_index((1, 1)), sq.vertex_index((1, -1))})]
    cone = normal_cone(sq, facet)
    assert cone.generators == ((1, 0),) and cone.dim == 1
    vert = lat.faces[lat.index({sq.vertex_index((1, 1))})]
    cone = normal_cone(sq, vert)
    assert set(cone.generators) == {(1, 0), (0, 1)} and cone.dim == 2
    c = cube()
    for i in c.lattice.nonempty():
        f = c.lattice.faces[i]
        assert normal_cone(c, f).dim == 3 - f.dim
    with pytest.raises(GeometryError):
        normal_cone(sq, lat.faces[0])


def test_relint_witness_examples():
    sq = square()
    lat = sq.lattice
    vert = lat.faces[lat.index({sq.vertex_index((1, 1))})]
    assert relint_witness(normal_cone(sq, vert), sq) == (1, 1)
    facet = lat.faces[lat.index({sq.vertex_index((1, 1)), sq.vertex_index((1, -1))})]
    assert relint_witness(normal_cone(sq, facet), sq) == (1, 0)
    c = cube()
    for i in c.lattice.faces_of_dim(2):
        cone = normal_cone(c, c.lattice.faces[i])
        assert relint_witness(cone, c) == cone.generators[0]


def test_decomposition_octagon_edge(octagon):
    sd = octagon.decomposition
    sq, dia = octagon.summands
    lat = octagon.lattice
    edge = next(i for i in lat.faces_of_dim(1) if sd.witnesses[i] == (1, 0))
    parts = sd.part_faces(edge)
    assert {sq.vertices[v] for v in parts[0].vertices} == {(1, 1), (1, -1)}
    assert {dia.vertices[v] for v in parts[1].vertices} == {(2, 0)}
    assert sd.exact[edge]


def test_decomposition_parallelogram_top(parallelogram):
    sd = parallelogram.decomposition
    i = parallelogram.lattice.top
    assert [f.dim for f in sd.part_faces(i)] == [1, 1] and sd.exact[i]


def test_decomposition_doubled_cube():
    ms = minkowski_sum([cube(), cube()])
    sd = ms.decomposition
    for i in ms.lattice.faces_of_dim(2):
        assert [f.dim for f in sd.part_faces(i)] == [2, 2]
        assert not sd.exact[i]


def test_general_position_examples(octagon):
    assert is_relatively_general_position(octagon.decomposition)
    assert not is_relatively_general_position(minkowski_sum([cube(), cube()]).decomposition)
    rect = minkowski_sum([unit_square(), hseg()])
    assert not is_relatively_general_position(rect.decomposition)


def test_delta_examples(octagon, parallelogram, cube_oct):
    assert delta_vector(top(octagon), octagon.decomposition).values[:2] == (0, 0)
    assert delta_vector(top(parallelogram), parallelogram.decomposition).values[:2] == (0, 2)
    assert delta_vector(top(cube_oct), cube_oct.decomposition).values[:3] == (10, 24, 12)


def test_mainthm_examples(octagon, cube_oct):
    assert verify_mainthm(octagon).passed
    rep = verify_mainthm(cube_oct)
    assert rep.passed and rep.lhs == 0 and not rep.advisory


def test_mainthm_negative_control():
    rect = minkowski_sum([unit_square(), hseg()])
    assert delta_vector(top(rect), rect.decomposition).values[:2] == (-2, -1)
    rep = verify_mainthm(rect)
    assert rep.lhs == 1 and not rep.passed and rep.advisory


def test_maincor_examples(octagon, cube_oct):
    rep = verify_maincor(octagon, 5)
    assert rep.passed and rep.lhs == 0 == rep.rhs
    rep = verify_maincor(cube_oct, 1)
    assert rep.lhs == -2 == rep.rhs
    assert verify_maincor(cube_oct, 0).lhs == verify_mainthm(cube_oct).lhs


def test_maincor_is_affine_in_a(cube_oct):
    values = {a: verify_maincor(cube_oct, a).lhs for a in (0, 1, 2, Fraction(-7, 3))}
    slope = values[1] - values[0]
    for a, v in values.items():
        assert v == values[0] + slope * a


def test_maincor2_examples(parallelogram, hexagon, cube_oct):
    rep = verify_maincor2(parallelogram)
    assert rep.lhs == -2 == rep.rhs
    assert f_vector(hexagon.lattice).counts == (6, 6)
    assert delta_vector(top(hexagon), hexagon.decomposition).values[:2] == (0, 1)
    rep = verify_maincor2(hexagon)
    assert rep.lhs == -1 == rep.rhs
    rep = verify_maincor2(cube_oct)
    assert rep.rhs == 0 and rep.passed


def test_thm_delta_examples(octagon, hexagon, cube_oct):
    assert verify_thm_delta(octagon, 0).passed
    rep = verify_thm_delta(hexagon, 1)
    assert rep.rhs == 1 and rep.lhs == 1
    assert verify_thm_delta(cube_oct, 2).passed
    with pytest.raises(PreconditionError):
        verify_thm_delta(octagon, 2)


def test_thm_delta_without_general_position():
    for ms in (minkowski_sum([cube(), cube()]), minkowski_sum([unit_square(), hseg()])):
        for k in range(ms.d):
            assert verify_thm_delta(ms, k).passed


def test_lemface_examples(parallelogram, octagon):
    sd = parallelogram.decomposition
    rep = verify_lemface(top(parallelogram), sd)
    assert rep.passed and rep.diagnostics[0]["p_delta"] == ["0", "2", "1"]
    for i in parallelogram.lattice.faces_of_dim(0):
        assert verify_lemface(parallelogram.lattice.faces[i], sd).passed
    sd = octagon.decomposition
    for i in octagon.lattice.faces_of_dim(1):
        rep = verify_lemface(octagon.lattice.faces[i], sd)
        assert rep.passed and rep.diagnostics[0]["p_delta"] == ["-1"]


def test_lemface_rejects_inexact_face():
    ms = minkowski_sum([cube(), cube()])
    with pytest.raises(PreconditionError):
        verify_lemface(top(ms), ms.decomposition)


def test_lem_euler_examples():
    c = cube()
    assert verify_lem_euler(c.lattice, 1).passed
    assert verify_lem_euler(c.lattice, 0).passed
    assert verify_lem_euler(square().lattice, 0).passed
    with pytest.raises(PreconditionError):
        verify_lem_euler(c.lattice, 3)


def test_lem_summand_examples(octagon, hexagon):
    rep = verify_lem_summand(octagon, 0, 0)
    assert rep.passed and rep.lhs == 0
    rep = verify_lem_summand(hexagon, 1, 1)
    assert rep.lhs == -1 == rep.rhs
    assert verify_lem_summand(hexagon, 1, 0).rhs == 0
    assert verify_lem_summand(hexagon, 1, 0).passed
    with pytest.raises(PreconditionError):
        verify_lem_summand(hexagon, 2, 0)
    with pytest.raises(PreconditionError):
        verify_lem_summand(hexagon, 0, 2)


def test_cayley_rotation_is_orthogonal():
    rng = random.Random(3)
    q = cayley_rotation(random_skew(4, Fraction(1, 64), rng))
    qt = [list(col) for col in zip(*q)]
    assert mat_mul(qt, q) == identity(4)


def test_perturb_cube_pair():
    c = cube()
    before = f_vector(minkowski_sum([c, c]).lattice).counts
    out = perturb_to_general_position([c, cube()], seed=1)
    ms = minkowski_sum(out)
    assert is_relatively_general_position(ms.decomposition)
    assert all(f_vector(p.lattice) == f_vector(c.lattice) for p in out)
    assert all(a >= b for a, b in zip(f_vector(ms.lattice).counts, before))


def test_perturb_square_pair():
    out = perturb_to_general_position([square(), square()], seed=2)
    ms = minkowski_sum(out)
    assert is_relatively_general_position(ms.decomposition)
    assert f_vector(ms.lattice).counts[0] == 8 > 4


def test_perturb_no_op(octagon):
    summands = list(octagon.summands)
    out = perturb_to_general_position(summands, seed=0)
    assert all(a is b for a, b in zip(out, summands))


def test_perturb_gives_up():
    with pytest.raises(PerturbationError) as err:
        perturb_to_general_position([square(), square()], seed=0, max_retries=0)
    assert err.value.diagnostics["general_position"] is False
    assert err.value.diagnostics["f_before"] == [4, 4]
    with pytest.raises(PreconditionError):
        perturb_to_general_position([square()], seed=0)


@pytest.mark.parametrize("seed", range(4))
def test_reconstruction_and_dim_bound(seed):
    rng = random.Random(seed)
    d = rng.choice((2, 3))
    ms = minkowski_sum([rand_polytope(d, 6, rng), rand_polytope(d, 5, rng), rand_polytope(d, 4, rng)])
    sd = ms.decomposition
    assert check_reconstruction(sd) == []
    for i, parts in sd.parts.items():
        assert ms.lattice.faces[i].dim <= sum(f.dim for f in sd.part_faces(i))


def test_reconstruction_on_degenerate_sums():
    for ms in (minkowski_sum([cube(), cube()]), minkowski_sum([unit_square(), hseg()])):
        assert check_reconstruction(ms.decomposition) == []


@pytest.mark.parametrize("make", [lambda: minkowski_sum([square(), diamond()]),
                                  lambda: minkowski_sum([cube(), cube()]),
                                  lambda: minkowski_sum([rand_polytope(3, 7, 9), rand_polytope(3, 6, 10)])])
def test_witness_independence(make):
    ms = make()
    base = ms.decomposition.parts
    rng = random.Random(17)
    for _ in range(3):
        assert decompose_faces(ms, rng).parts == base


@pytest.mark.parametrize("seed", range(10))
def test_edge_merge_oracle(seed):
    rng = random.Random(seed)
    a = rand_polytope(2, rng.randint(3, 8), rng)
    b = rand_polytope(2, rng.randint(3, 8), rng)
    ms = minkowski_sum([a, b])
    merged = minkowski_polygon_edge_merge([a.vertices, b.vertices])
    assert set(merged) == set(ms.polytope.vertices)
    assert f_vector(ms.lattice).counts == (len(merged), len(merged))
    assert len(merged) == len(a.vertices) + len(b.vertices)
