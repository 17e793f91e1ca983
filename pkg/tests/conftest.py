"""Shared hand-built fixtures: small closed surfaces with standard fans."""

from tropms.complexes import Cell, PolyhedralSurface, VertexFan

STD = ((1, 0), (0, 1), (-1, -1))


def attach_standard_fans(s: PolyhedralSurface) -> None:
    """Give every trivalent vertex the standard fan, rays assigned to outgoing
    edges in counterclockwise corner order."""
    for v in s.vertices:
        chain = s.corners(v.id)
        if len(chain) != 3:
            raise ValueError(f"vertex {v.id} is not trivalent")
        rays = tuple((STD[i], out) for i, (_, out, _) in enumerate(chain))
        cones = tuple((f, (i, (i + 1) % 3)) for i, (f, _, _) in enumerate(chain))
        s.fans[v.id] = VertexFan(v.id, rays, cones)


def build_closed_surface(face_cycles: dict[str, tuple[str, ...]],
                         asserted: dict[str, bool] | None = None) -> PolyhedralSurface:
    """Assemble a surface from oriented boundary cycles of its 2-cells."""
    cells: dict[str, Cell] = {}
    edge_ids: dict[frozenset, str] = {}
    for cyc in face_cycles.values():
        for v in cyc:
            cells.setdefault(v, Cell(v, 0))
        for i, v in enumerate(cyc):
            w = cyc[(i + 1) % len(cyc)]
            key = frozenset((v, w))
            if key not in edge_ids:
                eid = "e" + "".join(sorted((v, w)))
                edge_ids[key] = eid
                cells[eid] = Cell(eid, 1, tuple(sorted((v, w))))
    orientation = {}
    for fid, cyc in face_cycles.items():
        es = tuple(
            edge_ids[frozenset((cyc[i], cyc[(i + 1) % len(cyc)]))]
            for i in range(len(cyc))
        )
        cells[fid] = Cell(fid, 2, es)
        orientation[fid] = tuple(cyc)
    return PolyhedralSurface(cells, {}, orientation, dict(asserted or {}))


def tetrahedron() -> PolyhedralSurface:
    s = build_closed_surface(
        {
            "fABC": ("A", "B", "C"),
            "fACD": ("A", "C", "D"),
            "fADB": ("A", "D", "B"),
            "fBDC": ("B", "D", "C"),
        },
        {"regular": True},
    )
    attach_standard_fans(s)
    return s


def cube_surface() -> PolyhedralSurface:
    """Surface of the unit cube: 8 trivalent vertices, outward-oriented faces."""

    def v(x, y, z):
        return f"v{x}{y}{z}"

    faces = {
        "fz1": (v(0, 0, 1), v(1, 0, 1), v(1, 1, 1), v(0, 1, 1)),
        "fz0": (v(0, 0, 0), v(0, 1, 0), v(1, 1, 0), v(1, 0, 0)),
        "fx1": (v(1, 0, 0), v(1, 1, 0), v(1, 1, 1), v(1, 0, 1)),
        "fx0": (v(0, 0, 0), v(0, 0, 1), v(0, 1, 1), v(0, 1, 0)),
        "fy1": (v(0, 1, 0), v(0, 1, 1), v(1, 1, 1), v(1, 1, 0)),
        "fy0": (v(0, 0, 0), v(1, 0, 0), v(1, 0, 1), v(0, 0, 1)),
    }
    s = build_closed_surface(faces)
    attach_standard_fans(s)
    return s
