"""Acceptance suite: eight end-to-end criteria, one test and one verdict line
each. Every test is self-contained, uses exact arithmetic throughout, and
asserts its own wall-clock budget.
"""

import random
import time
from fractions import Fraction

from tropms.chern import (
    CANONICAL_FAN,
    CompleteFan,
    newton_polytope,
    stability_discriminant,
    total_chern,
)
from tropms.covers import euler_genus, riemann_hurwitz_genus
from tropms.generators import (
    cube2_multisection,
    cube_o1_multisection,
    planted_multisection,
    rank3_multisection,
    simplex5_multisection,
)
from tropms.gluing import (
    TRIVIAL,
    TorusElement,
    bar_complex,
    coboundary_gluing,
    edge_lift_id,
    holonomy_around_cycle,
    obstruction_class,
    triple_cocycle,
    trivial_gluing,
    vertex_edge_flags,
)
from tropms.graphs import (
    build_G0,
    build_G0_tilde,
    endomorphism_witness,
    find_minimal_cycles,
    general_simplicity,
    is_simple_rank2,
)
from tropms.laurent import (
    verify_cocycle,
    verify_constant_independence,
    verify_duality,
)


def _weight_pairs(bound):
    return [
        (m, n)
        for m in range(-bound, bound + 1)
        for n in range(-bound, bound + 1)
        if m != n
    ]


def _random_admissible(rng):
    """Three-plus-three nonzero rationals with product of all six equal -1."""
    while True:
        a = tuple(Fraction(rng.randint(-6, 6), rng.randint(1, 6)) for _ in range(3))
        b2 = tuple(Fraction(rng.randint(-6, 6), rng.randint(1, 6)) for _ in range(2))
        partial = a[0] * a[1] * a[2] * b2[0] * b2[1]
        if partial != 0:
            return a, b2 + (Fraction(-1) / partial,)


def _random_coboundary(msec, rng):
    """Coboundary gluing data over random vertex and edge potentials."""
    cover = msec.cover
    lam_vertex = {}
    for v in cover.base.vertices:
        for lid in cover.vertex_lift_ids(v.id):
            if rng.random() < 0.4:
                lam_vertex[lid] = TorusElement.single(
                    (rng.randint(-2, 2), rng.randint(-2, 2)),
                    Fraction(rng.randint(1, 6), rng.randint(1, 6)),
                )
    lam_edge = {}
    for e in cover.base.edges:
        for lift in range(cover.degree):
            if rng.random() < 0.3:
                lam_edge[edge_lift_id(e.id, lift)] = Fraction(
                    rng.randint(1, 6), rng.randint(1, 6)
                )
    return coboundary_gluing(msec, lam_vertex, lam_edge)


def test_cocycle_identity_random_constants():
    """Transition cocycle closes exactly for 50 random admissible constant
    tuples at every weight pair up to 5; under five seconds."""
    rng = random.Random(20260823)
    start = time.monotonic()
    checked = 0
    for m, n in _weight_pairs(5):
        for _ in range(50):
            a, b = _random_admissible(rng)
            assert verify_cocycle(m, n, a, b), (m, n, a, b)
            checked += 1
    elapsed = time.monotonic() - start
    assert checked == 110 * 50
    assert elapsed < 5.0, f"took {elapsed:.2f}s"


def test_gauge_and_duality_identities():
    """Constant-gauge conjugation and the duality identity hold exactly for
    every weight pair up to 5; under five seconds."""
    rng = random.Random(5)
    start = time.monotonic()
    for m, n in _weight_pairs(5):
        a, b = _random_admissible(rng)
        assert verify_constant_independence(m, n, a, b), (m, n, a, b)
        assert verify_duality(m, n), (m, n)
    elapsed = time.monotonic() - start
    assert elapsed < 5.0, f"took {elapsed:.2f}s"


def test_total_chern_closed_form_and_discriminant():
    """Total Chern class equals 1 + (m+n)H + (m^2+n^2-mn)H^2 and the
    discriminant equals -3(m-n)^2, exactly, for all pairs up to 4; under two
    seconds."""
    start = time.monotonic()
    for m, n in _weight_pairs(4):
        total = total_chern(m, n)
        assert total.h0 == 1
        assert total.h1 == m + n
        assert total.h2 == m * m + n * n - m * n
        delta, verdict = stability_discriminant(m, n)
        assert delta == -3 * (m - n) ** 2
        assert verdict == "stable"
    elapsed = time.monotonic() - start
    assert elapsed < 2.0, f"took {elapsed:.2f}s"


def test_genus_counts_for_generated_covers():
    """Generated covers with 74, 58, 48, 36 branch vertices have genus 36,
    28, 23, 17, matching the ramification count; under two seconds."""
    start = time.monotonic()
    cases = (
        (lambda: simplex5_multisection(74), 74, 36),
        (lambda: simplex5_multisection(58), 58, 28),
        (cube2_multisection, 48, 23),
        (cube_o1_multisection, 36, 17),
    )
    for build, branch_count, genus in cases:
        msec = build()
        assert len(msec.cover.branch_vertices) == branch_count
        assert euler_genus(msec.cover) == genus
        assert riemann_hurwitz_genus(branch_count) == genus
    elapsed = time.monotonic() - start
    assert elapsed < 2.0, f"took {elapsed:.2f}s"


def test_simplicity_verdicts_across_examples():
    """Both simplex presets and the gap-1 cube cover report simple; a planted
    unbranched 2-cell flips to not_simple with a validated endomorphism
    certificate; the rank-3 cover has an empty pair graph and satisfies the
    general criterion; under five seconds."""
    start = time.monotonic()
    for build in (
        lambda: simplex5_multisection(74),
        lambda: simplex5_multisection(58),
        cube_o1_multisection,
    ):
        assert is_simple_rank2(build()).tag == "simple"

    planted = planted_multisection()
    verdict = is_simple_rank2(planted)
    assert verdict.tag == "not_simple"
    witness = endomorphism_witness(planted, trivial_gluing(), verdict.witnesses[0])
    assert witness.ok and witness.zero_extension
    assert all(passed for _, _, passed in witness.edge_checks)

    rank3 = rank3_multisection()
    pair_graph = build_G0_tilde(rank3)
    assert not pair_graph.vertices and not pair_graph.edges
    general = general_simplicity(rank3, local_bundles_asserted=True)
    assert general.tag == "smoothable"
    assert any("criterion satisfied" in reason for reason in general.reasons)
    elapsed = time.monotonic() - start
    assert elapsed < 5.0, f"took {elapsed:.2f}s"


def test_obstruction_solver_on_random_cochains():
    """200 random coboundary cochains are declared trivial with splittings
    rechecked chain by chain; 20 planted non-coboundaries are declared
    nontrivial with the predicted witness; under thirty seconds."""
    start = time.monotonic()
    msec = cube2_multisection()
    rng = random.Random(6)
    bar = bar_complex(msec)
    chains = sorted({(t, e, f) for t, e, f, _ in bar.triangles})
    for _ in range(200):
        g = _random_coboundary(msec, rng)
        c = triple_cocycle(msec, g)
        report = obstruction_class(c, msec)
        assert report.trivial and report.witness == 1
        k = report.cochain
        for tail, elift, flift in chains:
            lhs = k[(elift, flift)] * k[(tail, elift)] / k[(tail, flift)]
            assert lhs == c[(tail, elift, flift)]

    flags = sorted(vertex_edge_flags(msec))
    vecs = ((1, 0), (0, 1), (1, 1))
    planted_count = 0
    position = 0
    while planted_count < 20:
        flag = flags[position % len(flags)]
        position += 1
        tamper = TorusElement.single(
            vecs[planted_count % 3], Fraction(2 + planted_count % 3)
        )
        expected = obstruction_class(
            triple_cocycle(msec, {flag: tamper}), msec
        ).witness
        if expected == 1:
            continue
        g = dict(_random_coboundary(msec, rng))
        g[flag] = g.get(flag, TRIVIAL) * tamper
        report = obstruction_class(triple_cocycle(msec, g), msec)
        assert not report.trivial
        assert report.witness == expected
        assert report.cochain is None
        planted_count += 1
    elapsed = time.monotonic() - start
    assert elapsed < 30.0, f"took {elapsed:.2f}s"


def test_holonomy_trivial_on_minimal_cycles():
    """100 random valid gluing data sets give holonomy exactly 1 around every
    minimal cycle of the planted-cycle cover; under ten seconds."""
    start = time.monotonic()
    msec = planted_multisection()
    cycles = find_minimal_cycles(build_G0(msec))
    assert cycles
    rng = random.Random(7)
    for _ in range(100):
        g = _random_coboundary(msec, rng)
        for cycle, fid in cycles:
            assert holonomy_around_cycle(msec, g, list(cycle), fid) == 1
    elapsed = time.monotonic() - start
    assert elapsed < 10.0, f"took {elapsed:.2f}s"


def _random_continuous_slopes(fan, rng):
    """Integer slopes, one per cone, continuous across every ray and lying in
    the box [-4, 4]^2."""

    def perp(r):
        return (-r[1], r[0])

    while True:
        u = [(rng.randint(-4, 4), rng.randint(-4, 4))]
        if fan is CANONICAL_FAN:
            t = rng.randint(-4, 4)
            steps = [perp(fan.rays[1]), perp(fan.rays[2])]
            ts = [t, t]
        else:
            s, t = rng.randint(-4, 4), rng.randint(-4, 4)
            steps = [perp(fan.rays[1]), perp(fan.rays[2]), perp(fan.rays[3])]
            ts = [s, t, s]
        for coef, step in zip(ts, steps):
            x, y = u[-1]
            u.append((x + coef * step[0], y + coef * step[1]))
        if all(-4 <= x <= 4 and -4 <= y <= 4 for x, y in u):
            return u


def test_newton_polytope_against_box_scan():
    """Newton polytope lattice points agree with an exhaustive bounding-box
    scan for 100 random continuous piecewise linear functions with slopes in
    [-4, 4]^2; under ten seconds."""
    start = time.monotonic()
    square_fan = CompleteFan([(1, 0), (0, 1), (-1, 0), (0, -1)])
    rng = random.Random(88)
    for trial in range(100):
        fan = CANONICAL_FAN if trial % 2 == 0 else square_fan
        slopes = _random_continuous_slopes(fan, rng)
        poly = newton_polytope(fan, slopes)
        scan = set()
        for x in range(-8, 9):
            for y in range(-8, 9):
                ok = True
                for i, (ux, uy) in enumerate(slopes):
                    for rx, ry in fan.cone_rays(i):
                        if (ux - x) * rx + (uy - y) * ry < 0:
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    scan.add((x, y))
        assert set(poly.lattice_points) == scan, (fan.rays, slopes)
    elapsed = time.monotonic() - start
    assert elapsed < 10.0, f"took {elapsed:.2f}s"
