"""Left-right Cayley complexes over a finite group.

The complex on (G, A, B) has two vertex copies of G.  Vertices in V0 are
indexed 0..|G|-1 and vertices in V1 are indexed |G|..2|G|-1, both in the
group's canonical element ordering.  Edges join g in one copy to a*g and
to g*b in the other copy.  Faces are the 4-cycles

    {g_0, (a g)_1, (g b)_1, (a g b)_0}

identified by triples (g, a, b); the triples (g, a, b) and
(a g b, a^-1, b^-1) describe the same face, and the canonical
representative is the lexicographically smaller triple of group-element
indices.  Faces are numbered by sorting canonical triples, which fixes
the qubit ordering of every code built on the complex.

Local views use the same form on both sides: phi_v(a, b) is the face
with corner set {v, a v, v b, a v b}.  For v in V0 that face has triple
(v, a, b); for v in V1 it is the face containing v reached through the
a-labelled and b-labelled edges at v, with triple (a v, a^-1, b).  Under
total non-conjugacy each phi_v is a bijection onto the Delta^2 incident
faces.

The complex is immutable after construction; spectral computation is a
pure function of the stored adjacency structure and may run concurrently
on distinct complexes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict

import numpy as np

from .groups import DihedralGroup, GeneratorSet, check_tnc

__all__ = ["LeftRightCayleyComplex", "Face", "SpectralReport", "ComplexError", "build_complex"]

_EIG_TOL = 1e-9


class ComplexError(ValueError):
    """Raised when (G, A, B) does not define a valid complex."""


@dataclass(frozen=True)
class Face:
    """Canonical face record: triple (g, a, b) and its four vertices.

    ``vertices`` holds (g_0, (ag)_1, (gb)_1, (agb)_0) as global vertex
    indices (V1 offset by |G|).
    """

    id: int
    g: int
    a: int
    b: int
    vertices: tuple[int, int, int, int]


@dataclass(frozen=True)
class GraphSpectrum:
    """Eigenvalue summary of one regular graph.

    ``lambda2`` is the second-largest eigenvalue in the signed descending
    order (multiplicities counted).  ``nontrivial_radius`` is the largest
    absolute eigenvalue after removing one copy of +degree and, for
    bipartite graphs, one copy of -degree; the Ramanujan flag compares it
    against 2*sqrt(degree - 1).
    """

    degree: float
    lambda1: float
    lambda2: float
    nontrivial_radius: float
    ramanujan: bool


@dataclass(frozen=True)
class SpectralReport:
    left: GraphSpectrum
    right: GraphSpectrum
    lrcc: GraphSpectrum
    weyl_bound: float  # Delta + min(lambda2_left, lambda2_right)
    spectrum_symmetric: bool
    bound_satisfied: bool

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


def _graph_spectrum(adj: np.ndarray, degree: int) -> GraphSpectrum:
    eigs = np.linalg.eigvalsh(adj.astype(np.float64))
    lam1 = float(eigs[-1])
    lam2 = float(eigs[-2])
    rest = list(eigs)
    # Remove the trivial eigenvalue(s): one +degree, one -degree if bipartite.
    hi = max(range(len(rest)), key=lambda i: rest[i])
    rest.pop(hi)
    if rest and abs(min(rest) + degree) < 1e-7:
        lo = min(range(len(rest)), key=lambda i: rest[i])
        rest.pop(lo)
    radius = float(max((abs(x) for x in rest), default=0.0))
    ram = bool(radius <= 2.0 * math.sqrt(degree - 1) + _EIG_TOL)
    return GraphSpectrum(float(degree), lam1, lam2, float(radius), ram)


class LeftRightCayleyComplex:
    """Vertex bipartition, canonical face set, local views, spectra."""

    def __init__(self, group: DihedralGroup, gen_a: GeneratorSet, gen_b: GeneratorSet):
        if gen_a.group != group or gen_b.group != group:
            raise ComplexError("generator sets must belong to the given group")
        witness = check_tnc(group, gen_a, gen_b)
        if witness is not None:
            a, b, g = witness
            raise ComplexError(
                "total non-conjugacy violated: "
                f"{group.element_name(a)}*{group.element_name(g)} = "
                f"{group.element_name(g)}*{group.element_name(b)}"
            )
        self.group = group
        self.gen_a = gen_a
        self.gen_b = gen_b
        self.n_vertices_per_side = group.order
        self._check_generates()
        self._build_faces()
        self._build_local_views()

    # ── construction ──────────────────────────────────────────────────

    def _check_generates(self):
        g = self.group
        gens = set(self.gen_a.elements) | set(self.gen_b.elements)
        reached = {g.identity}
        frontier = [g.identity]
        while frontier:
            x = frontier.pop()
            for s in gens:
                y = g.multiply(s, x)
                if y not in reached:
                    reached.add(y)
                    frontier.append(y)
        if len(reached) != g.order:
            raise ComplexError(
                f"A u B generates only {len(reached)} of {g.order} elements"
            )
        # Connectivity of the combined graph (left-A and right-B moves).
        reached = {g.identity}
        frontier = [g.identity]
        while frontier:
            x = frontier.pop()
            nbrs = [g.multiply(a, x) for a in self.gen_a.elements]
            nbrs += [g.multiply(x, b) for b in self.gen_b.elements]
            for y in nbrs:
                if y not in reached:
                    reached.add(y)
                    frontier.append(y)
        if len(reached) != g.order:
            raise ComplexError("combined left/right Cayley graph is disconnected")

    def _canonical_triple(self, g: int, a: int, b: int) -> tuple[int, int, int]:
        grp = self.group
        agb = grp.multiply(grp.multiply(a, g), b)
        alt = (agb, grp.invert(a), grp.invert(b))
        return min((g, a, b), alt)

    def _build_faces(self):
        grp = self.group
        triples = set()
        for g in grp.elements():
            for a in self.gen_a.elements:
                for b in self.gen_b.elements:
                    triples.add(self._canonical_triple(g, a, b))
        order = grp.order
        faces = []
        index = {}
        for fid, (g, a, b) in enumerate(sorted(triples)):
            ag = grp.multiply(a, g)
            gb = grp.multiply(g, b)
            agb = grp.multiply(ag, b)
            verts = (g, order + ag, order + gb, agb)
            if len(set(verts)) != 4:
                raise ComplexError("face with repeated vertices despite TNC")
            faces.append(Face(fid, g, a, b, verts))
            index[(g, a, b)] = fid
        self.faces: list[Face] = faces
        self._face_index = index
        expected = self.gen_a.delta * self.gen_b.delta * order // 2
        if len(faces) != expected:
            raise ComplexError(
                f"face count {len(faces)} != Delta_A*Delta_B*|G|/2 = {expected}"
            )

    def _face_id(self, g: int, a: int, b: int) -> int:
        return self._face_index[self._canonical_triple(g, a, b)]

    def _build_local_views(self):
        grp = self.group
        da, db = self.gen_a.delta, self.gen_b.delta
        order = grp.order
        self._view0 = np.empty((order, da, db), dtype=np.int64)
        self._view1 = np.empty((order, da, db), dtype=np.int64)
        incidence = [[] for _ in range(2 * order)]
        for v in grp.elements():
            for ia, a in enumerate(self.gen_a.elements):
                for ib, b in enumerate(self.gen_b.elements):
                    self._view0[v, ia, ib] = self._face_id(v, a, b)
                    # Face {u, a u, u b, a u b} for u in V1 has triple (a u, a^-1, b).
                    self._view1[v, ia, ib] = self._face_id(
                        grp.multiply(a, v), grp.invert(a), b
                    )
            if len(set(self._view0[v].ravel())) != da * db:
                raise ComplexError(f"local view at V0 vertex {v} is not a bijection")
            if len(set(self._view1[v].ravel())) != da * db:
                raise ComplexError(f"local view at V1 vertex {v} is not a bijection")
            incidence[v] = [int(f) for f in self._view0[v].ravel()]
            incidence[order + v] = [int(f) for f in self._view1[v].ravel()]
        self.incidence = incidence

    # ── queries ───────────────────────────────────────────────────────

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def local_view(self, vertex: int) -> np.ndarray:
        """(Delta_A, Delta_B) array of face ids; entry (ia, ib) is the face
        {v, a v, v b, a v b} for the ia-th element of A and ib-th of B."""
        order = self.group.order
        if not 0 <= vertex < 2 * order:
            raise ComplexError(f"vertex {vertex} out of range")
        if vertex < order:
            return self._view0[vertex].copy()
        return self._view1[vertex - order].copy()

    # ── spectra ───────────────────────────────────────────────────────

    def left_cayley_adjacency(self) -> np.ndarray:
        grp = self.group
        n = grp.order
        adj = np.zeros((n, n), dtype=np.int64)
        for g in range(n):
            for a in self.gen_a.elements:
                adj[g, grp.multiply(a, g)] += 1
        return adj

    def right_cayley_adjacency(self) -> np.ndarray:
        grp = self.group
        n = grp.order
        adj = np.zeros((n, n), dtype=np.int64)
        for g in range(n):
            for b in self.gen_b.elements:
                adj[g, grp.multiply(g, b)] += 1
        return adj

    def lrcc_adjacency(self) -> np.ndarray:
        combined = self.left_cayley_adjacency() + self.right_cayley_adjacency()
        n = self.group.order
        adj = np.zeros((2 * n, 2 * n), dtype=np.int64)
        adj[:n, n:] = combined
        adj[n:, :n] = combined.T
        return adj

    def spectral_report(self) -> SpectralReport:
        """Eigenvalue diagnostics for the two Cayley graphs and the complex.

        Checks that the complex spectrum is the symmetrized spectrum of the
        combined one-sided graph and that the interlacing bound
        lambda2 <= Delta + min(lambda2_left, lambda2_right) holds.
        """
        adj_a = self.left_cayley_adjacency()
        adj_b = self.right_cayley_adjacency()
        if np.any(adj_a + adj_b > 1):
            raise ComplexError("left and right adjacency supports overlap")
        da, db = self.gen_a.delta, self.gen_b.delta
        left = _graph_spectrum(adj_a, da)
        right = _graph_spectrum(adj_b, db)
        lrcc_adj = self.lrcc_adjacency()
        lrcc = _graph_spectrum(lrcc_adj, da + db)

        eigs_c = np.sort(np.linalg.eigvalsh((adj_a + adj_b).astype(np.float64)))
        eigs_g = np.sort(np.linalg.eigvalsh(lrcc_adj.astype(np.float64)))
        mirrored = np.sort(np.concatenate([eigs_c, -eigs_c]))
        symmetric = bool(np.max(np.abs(eigs_g - mirrored)) < _EIG_TOL) and bool(
            np.max(np.abs(eigs_g + eigs_g[::-1])) < _EIG_TOL
        )

        # Weyl interlacing on C = A_left + A_right: lambda2(C) is at most
        # min(lambda1_left + lambda2_right, lambda2_left + lambda1_right);
        # with equal degrees this is Delta + min(lambda2_left, lambda2_right).
        bound = min(da + right.lambda2, left.lambda2 + db)
        satisfied = lrcc.lambda2 <= bound + _EIG_TOL
        return SpectralReport(left, right, lrcc, float(bound), symmetric, satisfied)

    # ── serialization ─────────────────────────────────────────────────

    def summary_json(self) -> str:
        report = self.spectral_report()
        return json.dumps(
            {
                "group": f"D{self.group.n}",
                "group_order": self.group.order,
                "generators_a": self.gen_a.names(),
                "generators_b": self.gen_b.names(),
                "n_faces": self.n_faces,
                "spectral": json.loads(report.to_json()),
            },
            indent=2,
        )

    def __repr__(self) -> str:
        return (
            f"LeftRightCayleyComplex(D{self.group.n}, "
            f"delta=({self.gen_a.delta},{self.gen_b.delta}), faces={self.n_faces})"
        )


def build_complex(
    group: DihedralGroup, gen_a: GeneratorSet, gen_b: GeneratorSet
) -> LeftRightCayleyComplex:
    """Construct and validate the complex on (G, A, B)."""
    return LeftRightCayleyComplex(group, gen_a, gen_b)
