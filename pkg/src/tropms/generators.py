"""Worked examples: triangulated sphere bases and branched-cover sections.

Four deterministic generators:

  cube2        side-2 cube surface triangulated corner-to-center; its dual is
               a trivalent base with 48 vertices. The all-vertex double cover
               with weights (2, 1) has genus 23.
  cube-o1      same base, branch at 36 of the 48 vertices, weights (1, 0);
               the cover has genus 17.
  simplex5     boundary of the 3-simplex dilated by 5; the dual base has 100
               vertices and 24 singular markers. Branch presets of sizes 74
               and 58 give covers of genus 36 and 28, weights (2, 1).
  rank3-cube   cube2 base carrying rank-3 fans and a degree-3 totally
               ramified cover with a fixed three-sheet slope table.

Branch presets were found once by a seeded parity search and are frozen below;
every builder revalidates the cheap invariants (counts, parities, matchings,
genus) at construction time and raises RuntimeError when one fails.
"""

from __future__ import annotations

import random
from dataclasses import replace
from fractions import Fraction

from .complexes import (
    PolyhedralSurface,
    VertexFan,
    combinatorial_dual,
    orient_cycles,
    surface_from_cycles,
    validate_surface,
)
from .covers import (
    BranchedCover,
    MultiSection,
    build_double_cover,
    check_condition_E,
    euler_genus,
    riemann_hurwitz_genus,
    validate_cover,
    validate_multisection,
)
from .gluing import GluingData, TorusElement, coboundary_gluing, validate_gluing

EXAMPLE_NAMES = ("simplex5", "cube2", "cube-o1", "rank3-cube")

STANDARD_FAN_RAYS = ((1, 0), (0, 1), (-1, -1))
RANK3_FAN_RAYS = ((2, 1), (-1, 0), (-1, -1))

# per cone, the slopes of sheets 0, 1, 2
RANK3_SLOPE_TABLE = (
    ((0, -3), (-1, -1), (4, -3)),
    ((-1, -2), (-2, 0), (-2, 3)),
    ((0, 0), (-1, 3), (4, -2)),
)

CUBE_O1_UNBRANCHED = (
    "fx0.00b", "fx0.01a", "fx1.00b", "fx1.01a", "fx1.01b", "fx1.11a",
    "fy0.00a", "fy0.10b", "fy1.00a", "fy1.10b", "fz1.01b", "fz1.11a",
)

# leaves the boundary of the 2-cell "p001" entirely unbranched, and no other
PLANTED_UNBRANCHED = (
    "fx0.00a", "fx0.01a", "fx0.10b", "fx0.11b", "fy0.00b", "fy0.01a",
    "fy0.10b", "fy0.11a", "fz0.01a", "fz0.10b", "fz1.01a", "fz1.10b",
)
PLANTED_FACE = "p001"

# simplex5 analogue: only the triangular 2-cell "q0005" is fully unbranched
PLANTED_TRIANGLE_UNBRANCHED = (
    "f0.d012", "f0.d030", "f0.d111", "f0.d300", "f0.u004", "f0.u013",
    "f0.u130", "f0.u211", "f0.u400", "f1.d003", "f1.d012", "f1.d021",
    "f1.d102", "f1.d111", "f1.d120", "f1.u004", "f1.u022", "f1.u040",
    "f1.u103", "f2.u004", "f3.d012", "f3.d111", "f3.d300", "f3.u103",
    "f3.u211", "f3.u400",
)
PLANTED_TRIANGLE_FACE = "q0005"

SIMPLEX5_UNBRANCHED = {
    74: (
        "f0.d021", "f0.d102", "f0.d120", "f0.u013", "f0.u022", "f0.u040",
        "f0.u202", "f0.u220", "f1.d003", "f1.d021", "f1.d030", "f1.u004",
        "f1.u013", "f1.u022", "f2.d201", "f2.u031", "f2.u040", "f2.u130",
        "f2.u211", "f2.u220", "f2.u301", "f2.u310", "f2.u400", "f3.d003",
        "f3.d012", "f3.u022",
    ),
    58: (
        "f0.d012", "f0.d021", "f0.d030", "f0.d120", "f0.d210", "f0.u103",
        "f0.u130", "f0.u301", "f1.d012", "f1.d102", "f1.d111", "f1.d120",
        "f1.d201", "f1.u004", "f1.u013", "f1.u022", "f1.u040", "f1.u112",
        "f1.u130", "f1.u301", "f2.d030", "f2.d120", "f2.d201", "f2.d300",
        "f2.u013", "f2.u031", "f2.u040", "f2.u103", "f2.u130", "f2.u211",
        "f2.u301", "f2.u400", "f3.d021", "f3.d102", "f3.d300", "f3.u112",
        "f3.u130", "f3.u202", "f3.u211", "f3.u220", "f3.u301", "f3.u310",
    ),
}


def _require(cond: bool, what: str) -> None:
    if not cond:
        raise RuntimeError(f"example generator invariant failed: {what}")


def _mark(s: PolyhedralSurface, cell_id: str, token: str) -> None:
    c = s.cells[cell_id]
    s.cells[cell_id] = replace(c, singular_markers=c.singular_markers + (token,))


def _attach_trivalent_fans(
    s: PolyhedralSurface,
    rays,
    quad_corner_first: bool = False,
) -> None:
    """One fan per vertex, the given rays assigned to outgoing edges in
    counterclockwise corner order, optionally starting the chain at the corner
    lying on a quadrilateral 2-cell."""
    for v in s.vertices:
        chain = s.corners(v.id)
        _require(len(chain) == 3, f"vertex {v.id} is not trivalent")
        if quad_corner_first:
            sizes = [len(s.cells[f].faces) for f, _, _ in chain]
            _require(sizes.count(4) == 1, f"vertex {v.id} has {sizes.count(4)} quad corners")
            p = sizes.index(4)
            chain = chain[p:] + chain[:p]
        fan_rays = tuple((rays[i], out) for i, (_, out, _) in enumerate(chain))
        cones = tuple((f, (i, (i + 1) % 3)) for i, (f, _, _) in enumerate(chain))
        s.fans[v.id] = VertexFan(v.id, fan_rays, cones)


# -- cube2 --------------------------------------------------------------------

_CUBE_FACES = {
    "fz1": ((0, 0, 2), (2, 0, 2), (2, 2, 2), (0, 2, 2)),
    "fz0": ((0, 0, 0), (0, 2, 0), (2, 2, 0), (2, 0, 0)),
    "fx1": ((2, 0, 0), (2, 2, 0), (2, 2, 2), (2, 0, 2)),
    "fx0": ((0, 0, 0), (0, 0, 2), (0, 2, 2), (0, 2, 0)),
    "fy1": ((0, 2, 0), (0, 2, 2), (2, 2, 2), (2, 2, 0)),
    "fy0": ((0, 0, 0), (2, 0, 0), (2, 0, 2), (0, 0, 2)),
}


def _cube2_triangles() -> dict[str, tuple[str, ...]]:
    """Subdivide each cube face into a 2x2 grid of squares and each square
    into two triangles along its cube-corner-to-face-center diagonal."""

    def pid(c):
        return f"p{c[0]}{c[1]}{c[2]}"

    tris = {}
    for fid, (a0, b0, c0, d0) in _CUBE_FACES.items():

        def grid(st, tt):
            return tuple(
                a0[k] + (b0[k] - a0[k]) * st // 2 + (d0[k] - a0[k]) * tt // 2
                for k in range(3)
            )

        for a in (0, 1):
            for b in (0, 1):
                sq = (grid(a, b), grid(a + 1, b), grid(a + 1, b + 1), grid(a, b + 1))
                corner_pos = [(0, 0), (1, 0), (1, 1), (0, 1)].index((a, b))
                q = [sq[(corner_pos + i) % 4] for i in range(4)]
                tris[f"{fid}.{a}{b}a"] = (pid(q[0]), pid(q[1]), pid(q[2]))
                tris[f"{fid}.{a}{b}b"] = (pid(q[0]), pid(q[2]), pid(q[3]))
    return tris


def cube2_base() -> PolyhedralSurface:
    """Dual of the triangulated side-2 cube: 48 trivalent vertices, 72 edges,
    26 two-cells, standard fans everywhere. The eight 2-cells dual to cube
    corners carry a cone-point marker each."""
    primal = surface_from_cycles(_cube2_triangles())
    for v in primal.vertices:
        if set(v.id[1:]) <= {"0", "2"}:
            _mark(primal, v.id, "cone-point")
    base = combinatorial_dual(primal)
    _attach_trivalent_fans(base, STANDARD_FAN_RAYS)
    base.asserted.pop("dual-no-fans", None)
    _require(validate_surface(base).ok, "cube2 base validation")
    _require(len(base.vertices) == 48, "cube2 base must have 48 vertices")
    marked = [c for c in base.cells.values() if c.singular_markers]
    _require(len(marked) == 8, "cube2 base must carry 8 cone-point markers")
    return base


def cube2_multisection() -> MultiSection:
    """Double cover branched over all 48 base vertices, weights (2, 1)."""
    base = cube2_base()
    branch = frozenset(v.id for v in base.vertices)
    _require(check_condition_E(base, branch), "cube2 branch parity")
    msec = build_double_cover(base, branch, 2, 1, label="cube2")
    _require(
        euler_genus(msec.cover) == 23 == riemann_hurwitz_genus(len(branch)),
        "cube2 cover genus",
    )
    return msec


def cube_o1_multisection() -> MultiSection:
    """Double cover branched over 36 of the 48 base vertices, weights (1, 0);
    no 2-cell has a fully unbranched boundary."""
    base = cube2_base()
    branch = frozenset(v.id for v in base.vertices) - set(CUBE_O1_UNBRANCHED)
    _require(len(branch) == 36, "cube-o1 must branch over 36 vertices")
    _require(check_condition_E(base, branch), "cube-o1 branch parity")
    _require(
        all(
            any(v in branch for v in base.boundary_cycle(f.id))
            for f in base.faces2
        ),
        "cube-o1 must touch every 2-cell boundary",
    )
    msec = build_double_cover(base, branch, 1, 0, label="cube-o1")
    _require(euler_genus(msec.cover) == 17, "cube-o1 cover genus")
    return msec


def planted_multisection() -> MultiSection:
    """Like cube-o1 but with the boundary of one 2-cell kept entirely
    unbranched, defeating simplicity there; weights (2, 1)."""
    base = cube2_base()
    branch = frozenset(v.id for v in base.vertices) - set(PLANTED_UNBRANCHED)
    _require(len(branch) == 36, "planted example must branch over 36 vertices")
    _require(check_condition_E(base, branch), "planted branch parity")
    full = [
        f.id
        for f in base.faces2
        if all(v not in branch for v in base.boundary_cycle(f.id))
    ]
    _require(full == [PLANTED_FACE], "exactly one fully unbranched 2-cell")
    msec = build_double_cover(base, branch, 2, 1, label="planted")
    _require(euler_genus(msec.cover) == 17, "planted cover genus")
    return msec


# -- simplex5 -----------------------------------------------------------------


def _simplex5_triangles() -> dict[str, tuple[str, ...]]:
    """Standard triangulation of each of the four facets of the dilated
    3-simplex, consistently oriented."""

    def qid(c):
        return "q" + "".join(str(x) for x in c)

    tris = {}
    for zi in range(4):
        rest = [j for j in range(4) if j != zi]

        def pt(x, y, z):
            c = [0, 0, 0, 0]
            c[rest[0]], c[rest[1]], c[rest[2]] = x, y, z
            return qid(c)

        for x in range(5):
            for y in range(5 - x):
                z = 4 - x - y
                tris[f"f{zi}.u{x}{y}{z}"] = (
                    pt(x + 1, y, z), pt(x, y + 1, z), pt(x, y, z + 1),
                )
        for x in range(4):
            for y in range(4 - x):
                z = 3 - x - y
                tris[f"f{zi}.d{x}{y}{z}"] = (
                    pt(x, y + 1, z + 1), pt(x + 1, y, z + 1), pt(x + 1, y + 1, z),
                )
    return orient_cycles(tris)


def simplex5_base() -> PolyhedralSurface:
    """Dual of the triangulated simplex boundary: 100 trivalent vertices, 150
    edges, 52 two-cells, standard fans everywhere. The 24 two-cells dual to
    points interior to simplex edges carry a focus-focus marker each."""
    primal = surface_from_cycles(_simplex5_triangles())
    for v in primal.vertices:
        coords = [int(ch) for ch in v.id[1:]]
        if coords.count(0) == 2 and min(c for c in coords if c) >= 1:
            _mark(primal, v.id, "focus-focus")
    base = combinatorial_dual(primal)
    _attach_trivalent_fans(base, STANDARD_FAN_RAYS)
    base.asserted.pop("dual-no-fans", None)
    _require(validate_surface(base).ok, "simplex5 base validation")
    _require(len(base.vertices) == 100, "simplex5 base must have 100 vertices")
    marked = [c for c in base.cells.values() if c.singular_markers]
    _require(len(marked) == 24, "simplex5 base must carry 24 singular markers")
    return base


def simplex5_multisection(branch_count: int = 74) -> MultiSection:
    """Double cover of the simplex5 base with 74 or 58 branch vertices,
    weights (2, 1); genus 36 or 28."""
    if branch_count not in SIMPLEX5_UNBRANCHED:
        raise ValueError(
            f"branch_count must be one of {sorted(SIMPLEX5_UNBRANCHED)}, "
            f"got {branch_count}"
        )
    base = simplex5_base()
    unbranched = set(SIMPLEX5_UNBRANCHED[branch_count])
    branch = frozenset(v.id for v in base.vertices) - unbranched
    _require(len(branch) == branch_count, "simplex5 branch count")
    _require(check_condition_E(base, branch), "simplex5 branch parity")
    _require(
        all(
            any(v in branch for v in base.boundary_cycle(f.id))
            for f in base.faces2
        ),
        "simplex5 branch must touch every 2-cell boundary",
    )
    msec = build_double_cover(base, branch, 2, 1, label=f"simplex5-{branch_count}")
    genus = euler_genus(msec.cover)
    _require(
        genus == riemann_hurwitz_genus(branch_count) == {74: 36, 58: 28}[branch_count],
        "simplex5 cover genus",
    )
    return msec


def planted_triangle_multisection() -> MultiSection:
    """Simplex5 cover with the triangular 2-cell at one simplex corner kept
    entirely unbranched; weights (2, 1), 74 branch vertices, genus 36."""
    base = simplex5_base()
    branch = frozenset(v.id for v in base.vertices) - set(
        PLANTED_TRIANGLE_UNBRANCHED
    )
    _require(len(branch) == 74, "planted triangle must branch over 74 vertices")
    _require(check_condition_E(base, branch), "planted triangle branch parity")
    full = [
        f.id
        for f in base.faces2
        if all(v not in branch for v in base.boundary_cycle(f.id))
    ]
    _require(full == [PLANTED_TRIANGLE_FACE], "exactly one fully unbranched 2-cell")
    _require(
        len(base.cells[PLANTED_TRIANGLE_FACE].faces) == 3,
        "the planted 2-cell must be a triangle",
    )
    msec = build_double_cover(base, branch, 2, 1, label="planted-triangle")
    _require(euler_genus(msec.cover) == 36, "planted triangle cover genus")
    return msec


# -- rank3-cube ---------------------------------------------------------------


def _gf3_edge_voltages(s: PolyhedralSurface) -> dict[str, int]:
    """Cyclic-shift exponents making the corner walk rotate sheets by one at
    every vertex; crossing a wall with the lexicographically first coface on
    the near side adds the exponent, the reverse crossing subtracts it."""
    eids = sorted(e.id for e in s.edges)
    eidx = {e: i for i, e in enumerate(eids)}
    n = len(eids)
    pivots: dict[int, list[int]] = {}
    for v in s.vertices:
        row = [0] * (n + 1)
        for f_here, _, wall in s.corners(v.id):
            first = s.cofaces(wall)[0]
            sign = 1 if f_here == first else -1
            row[eidx[wall]] = (row[eidx[wall]] + sign) % 3
        row[n] = 1
        for c, prow in pivots.items():
            if row[c]:
                mult = row[c] * pow(prow[c], -1, 3) % 3
                row = [(x - mult * y) % 3 for x, y in zip(row, prow)]
        lead = next((c for c in range(n) if row[c]), None)
        if lead is None:
            _require(row[n] == 0, "rank-3 voltage system is inconsistent")
            continue
        pivots[lead] = row
    g = [0] * n
    for c in sorted(pivots, reverse=True):
        row = pivots[c]
        acc = row[n]
        for c2 in range(c + 1, n):
            acc = (acc - row[c2] * g[c2]) % 3
        g[c] = acc * pow(row[c], -1, 3) % 3
    return {e: g[eidx[e]] for e in eids}


def rank3_base() -> PolyhedralSurface:
    """The cube2 base with rank-3 fans: rays (2,1), (-1,0), (-1,-1) assigned
    in corner order starting at each vertex's quadrilateral corner."""
    primal = surface_from_cycles(_cube2_triangles())
    for v in primal.vertices:
        if set(v.id[1:]) <= {"0", "2"}:
            _mark(primal, v.id, "cone-point")
    base = combinatorial_dual(primal)
    _attach_trivalent_fans(base, RANK3_FAN_RAYS, quad_corner_first=True)
    base.asserted.pop("dual-no-fans", None)
    _require(validate_surface(base).ok, "rank3-cube base validation")
    return base


def rank3_multisection() -> MultiSection:
    """Degree-3 cover of the rank3 base, totally ramified over every vertex,
    with the fixed slope table applied per cone and sheet."""
    base = rank3_base()
    voltages = _gf3_edge_voltages(base)
    matchings = {e: tuple((s + g) % 3 for s in range(3)) for e, g in voltages.items()}
    branch = frozenset(v.id for v in base.vertices)
    ram = {v: ((0, 1, 2),) for v in branch}
    cover = BranchedCover(base, 3, matchings, branch, ram)
    _require(validate_cover(cover).ok, "rank3-cube cover validation")
    _require(
        all(
            len(cyc) == 9
            for v in base.vertices
            for cyc in cover.lift_cycles(v.id)
        ),
        "rank3-cube must be totally ramified at every vertex",
    )
    _require(cover.is_connected(), "rank3-cube total space must be connected")
    _require(euler_genus(cover) == 46, "rank3-cube cover genus")
    slopes = {}
    for v in base.vertices:
        lid = f"{v.id}#0"
        fan = base.fans[v.id]
        for fid, (i, _) in fan.cones:
            for sheet in range(3):
                slopes[(lid, fid, sheet)] = RANK3_SLOPE_TABLE[i][sheet]
    msec = MultiSection(cover, slopes, label="rank3-cube")
    _require(validate_multisection(msec).ok, "rank3-cube slope data")
    return msec


# -- gluing data for the worked examples --------------------------------------


def seeded_coboundary_gluing(msec: MultiSection, seed: int = 0) -> GluingData:
    """Deterministic nontrivial-looking gluing data with trivial obstruction:
    the coboundary of seeded vertex and edge potentials."""
    rng = random.Random(seed)
    cover = msec.cover
    vertex_lifts = sorted(
        lid for v in cover.base.vertices for lid in cover.vertex_lift_ids(v.id)
    )
    lam_vertex = {}
    for lid in vertex_lifts[:: max(1, len(vertex_lifts) // 6)]:
        vec = (rng.randint(-2, 2), rng.randint(-2, 2))
        scalar = Fraction(rng.randint(1, 5), rng.randint(1, 5))
        lam_vertex[lid] = TorusElement.single(vec, scalar)
    lam_edge = {}
    for e in sorted(e.id for e in cover.base.edges)[::17]:
        for lift in range(cover.degree):
            lam_edge[f"{e}~{lift}"] = Fraction(rng.randint(1, 7), rng.randint(1, 7))
    g = coboundary_gluing(msec, lam_vertex, lam_edge)
    _require(validate_gluing(msec, g).ok, "seeded gluing validation")
    return g
