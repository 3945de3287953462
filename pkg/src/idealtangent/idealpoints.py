"""Points of the scheme of graded ideals and their classical tangent spaces.

A point is a graded subspace of a finite graded algebra passing the exact
ideal test.  The classical tangent space is the space of degree-0 module
homomorphisms I/I^2 -> A/I, computed as the kernel of an exact linear
constraint system.
"""
from __future__ import annotations

from .errors import InternalCheckError, NotASubschemeError, ValidationError
from .fields import QQ
from .graded import (AlgebraModule, FiniteGradedAlgebra, HomIdealPresentation,
                     TruncatedCoordinateRing, ideal_degree_piece)
from .linalg import Echelon, Matrix


class GradedSubspace:
    """Per-degree subspaces of a FiniteGradedAlgebra, canonically row-reduced."""

    def __init__(self, algebra: FiniteGradedAlgebra, vectors_by_degree: dict):
        self.algebra = algebra
        self.pieces: dict[int, Echelon] = {}
        for d in sorted(vectors_by_degree):
            if d not in algebra.dims:
                raise ValidationError(f"degree {d} outside the algebra window")
            ech = Echelon(algebra.field)
            for v in vectors_by_degree[d]:
                ech.insert(v)
            ech.full_reduce()
            self.pieces[d] = ech

    def dim(self, d: int) -> int:
        ech = self.pieces.get(d)
        return ech.rank if ech else 0

    @property
    def k(self) -> dict:
        return {d: self.pieces[d].rank for d in sorted(self.pieces) if self.pieces[d].rank}

    def basis_vectors(self, d: int) -> list[dict]:
        ech = self.pieces.get(d)
        if ech is None:
            return []
        return [ech.pivot_rows[c] for c in ech.pivots]

    def contains(self, d: int, vec: dict) -> bool:
        if not vec:
            return True
        ech = self.pieces.get(d)
        return ech is not None and ech.contains(vec)


def is_graded_ideal(algebra: FiniteGradedAlgebra, subspace: GradedSubspace,
                    witness=False):
    """Exact test that mu(A_i (x) V_j) lies in V_{i+j} for all window pairs."""
    for i in algebra.degrees:
        for j in algebra.degrees:
            if i + j not in algebra.dims:
                continue
            for a in range(algebra.dims[i]):
                for v in subspace.basis_vectors(j):
                    prod = algebra.multiply(i, {a: algebra.field.one}, j, v)
                    if not subspace.contains(i + j, prod):
                        if witness:
                            return False, (i, a, j, v)
                        return False
    if witness:
        return True, None
    return True


class IdealPoint:
    """A graded subspace passing the ideal test, with its ambient algebra."""

    def __init__(self, algebra: FiniteGradedAlgebra, subspace: GradedSubspace):
        ok, wit = is_graded_ideal(algebra, subspace, witness=True)
        if not ok:
            raise ValidationError(
                f"subspace is not a graded ideal (witness: degree pair "
                f"{wit[0]},{wit[2]} basis element {wit[1]})")
        self.algebra = algebra
        self.subspace = subspace

    @property
    def k(self) -> dict:
        return self.subspace.k

    def dim(self, d: int) -> int:
        return self.subspace.dim(d)


def subscheme_to_point(ring: TruncatedCoordinateRing,
                       z_pres: HomIdealPresentation) -> IdealPoint:
    """The point of the graded ideal scheme defined by a subscheme Z of X.

    Per window degree, the piece is the image of Z's ideal piece in the
    quotient A_d = S_d / I_{X,d}.  Containment of X's ideal in Z's is
    checked degreewise first.
    """
    if z_pres.nvars != ring.presentation.nvars:
        raise ValidationError("Z lives in a different ambient space than X")
    vectors = {}
    for d in range(ring.p, ring.q + 1):
        z_piece = ideal_degree_piece(z_pres, d, ring.field)
        for row in ring.ideal_pieces[d].basis_rows():
            if not z_piece.echelon.contains(row):
                raise NotASubschemeError(
                    f"not a subscheme of X: containment fails in degree {d}")
        vecs = []
        remap = ring._col_to_idx[d]
        for row in z_piece.basis_rows():
            residue, _ = ring.ideal_pieces[d].echelon.reduce(row)
            vec = {remap[c]: v for c, v in residue.items()}
            if vec:
                vecs.append(vec)
        vectors[d] = vecs
    subspace = GradedSubspace(ring.algebra, vectors)
    return IdealPoint(ring.algebra, subspace)


class QuotientData:
    """The quotient algebra A/I with projection and lift matrices.

    The quotient basis in each degree is the set of non-pivot coordinates
    of the row-reduced ideal piece, so bases are deterministic and lifts
    are coordinate inclusions.
    """

    def __init__(self, algebra: FiniteGradedAlgebra, ideal: IdealPoint):
        if ideal.algebra is not algebra:
            raise ValidationError("ideal belongs to a different algebra")
        self.algebra = algebra
        self.ideal = ideal
        F = algebra.field
        dims, labels = {}, {}
        self.proj, self.lift = {}, {}
        self._complement = {}
        for d in algebra.degrees:
            n = algebra.dims[d]
            ech = ideal.subspace.pieces.get(d) or Echelon(F)
            pivots = set(ech.pivots)
            comp = [c for c in range(n) if c not in pivots]
            self._complement[d] = comp
            dims[d] = len(comp)
            labels[d] = [algebra.labels[d][c] for c in comp]
            remap = {c: k for k, c in enumerate(comp)}
            proj_entries = {}
            for c in range(n):
                residue, _ = ech.reduce({c: F.one})
                for cc, v in residue.items():
                    proj_entries[(remap[cc], c)] = v
            self.proj[d] = Matrix(len(comp), n, proj_entries, F)
            self.lift[d] = Matrix(n, len(comp),
                                  {(c, k): F.one for k, c in enumerate(comp)}, F)
        mult = {}
        for (i, j), _ in algebra.mult.items():
            ni, nj = dims.get(i, 0), dims.get(j, 0)
            if not ni or not nj or (i + j) not in dims:
                continue
            entries = {}
            for a in range(ni):
                va = self.lift[i].col(a)
                for b in range(nj):
                    vb = self.lift[j].col(b)
                    prod = algebra.multiply(i, va, j, vb)
                    red = self.proj[i + j].times_vec(prod)
                    for r, v in red.items():
                        entries[(r, a * nj + b)] = v
            mult[(i, j)] = Matrix(dims[i + j], ni * nj, entries, F)
        self.quotient = FiniteGradedAlgebra(F, dims, mult, labels)

    def project_vec(self, d: int, vec: dict) -> dict:
        return self.proj[d].times_vec(vec)

    def lift_vec(self, d: int, vec: dict) -> dict:
        return self.lift[d].times_vec(vec)

    def module_over_ambient(self) -> AlgebraModule:
        """A/I as a module over A (action through the projection)."""
        A, B = self.algebra, self.quotient
        action = {}
        for (i, e), _ in A.mult.items():
            if e not in B.dims or (i + e) not in B.dims or i not in A.dims:
                continue
            ne = B.dims[e]
            entries = {}
            for a in range(A.dims[i]):
                for m in range(ne):
                    vm = self.lift[e].col(m)
                    prod = A.multiply(i, {a: A.field.one}, e, vm)
                    red = self.proj[i + e].times_vec(prod)
                    for r, v in red.items():
                        entries[(r, a * ne + m)] = v
            action[(i, e)] = Matrix(B.dims[i + e], A.dims[i] * ne, entries, A.field)
        return AlgebraModule(self.algebra, dict(B.dims), action,
                             labels=dict(B.labels), check=False)


def quotient_algebra(algebra: FiniteGradedAlgebra, ideal: IdealPoint) -> QuotientData:
    return QuotientData(algebra, ideal)


def _multiplier_degrees(algebra: FiniteGradedAlgebra) -> list[int]:
    """Degrees whose basis elements must be imposed as module multipliers.

    A degree is dropped when its piece is spanned by in-window products;
    linearity over those multipliers follows from the lower ones by
    associativity, so the constraint rows would be redundant.
    """
    out = []
    for i in algebra.degrees:
        span = Echelon(algebra.field)
        full = algebra.dims[i]
        for j in algebra.degrees:
            k = i - j
            if k not in algebra.dims or (j, k) not in algebra.mult:
                continue
            m = algebra.mult[(j, k)]
            for col in range(m.ncols):
                if span.rank == full:
                    break
                span.insert(m.col(col))
        if span.rank < full:
            out.append(i)
    return out


class _IdealSquareData:
    """I^2 pieces inside I-coordinates, with I/I^2 complements."""

    def __init__(self, algebra: FiniteGradedAlgebra, ideal: IdealPoint):
        F = algebra.field
        self.algebra = algebra
        self.ideal = ideal
        self.in_i_coords: dict[int, Echelon] = {}
        self.complement: dict[int, list[int]] = {}
        sub = ideal.subspace
        for e in algebra.degrees:
            ne = sub.dim(e)
            if ne == 0:
                continue
            isq = Echelon(F)
            for i in algebra.degrees:
                j = e - i
                if j not in algebra.dims or j < i:
                    continue
                for x in sub.basis_vectors(i):
                    for y in sub.basis_vectors(j):
                        prod = algebra.multiply(i, x, j, y)
                        if prod:
                            isq.insert(self._i_coords(e, prod))
            isq.full_reduce()
            self.in_i_coords[e] = isq
            pivots = set(isq.pivots)
            self.complement[e] = [c for c in range(ne) if c not in pivots]

    def _i_coords(self, e: int, vec: dict) -> dict:
        ech = self.ideal.subspace.pieces[e]
        residue, coords = ech.reduce(vec)
        if residue:
            raise InternalCheckError("product left the ideal; tables inconsistent")
        order = {c: k for k, c in enumerate(ech.pivots)}
        F = self.algebra.field
        return {order[c]: v for c, v in coords.items() if not F.is_zero(v)}

    def modulo_square(self, e: int, vec: dict) -> dict:
        """A_e vector in I_e -> coordinates in the chosen I/I^2 basis."""
        icoords = self._i_coords(e, vec)
        isq = self.in_i_coords[e]
        residue, _ = isq.reduce(icoords)
        remap = {c: k for k, c in enumerate(self.complement[e])}
        return {remap[c]: v for c, v in residue.items()}

    def basis_lift(self, e: int, r: int) -> dict:
        """A_e vector lifting the r-th I/I^2 basis element."""
        ech = self.ideal.subspace.pieces[e]
        c = self.complement[e][r]
        return ech.pivot_rows[ech.pivots[c]]

    def dim(self, e: int) -> int:
        return len(self.complement.get(e, ()))


def classical_tangent_dim(algebra: FiniteGradedAlgebra, ideal: IdealPoint,
                          quotient: QuotientData | None = None,
                          all_multipliers: bool = False) -> int:
    """dim of degree-0 (A/I)-module homomorphisms I/I^2 -> A/I.

    Unknowns are the matrix entries of the degreewise maps; linearity over
    the quotient is imposed as exact linear constraints and the answer is
    the nullity of the system.
    """
    if quotient is None:
        quotient = QuotientData(algebra, ideal)
    B = quotient.quotient
    isq = _IdealSquareData(algebra, ideal)
    F = algebra.field

    var_index = {}
    for e in algebra.degrees:
        for r in range(isq.dim(e)):
            for s in range(B.dim(e)):
                var_index[(e, r, s)] = len(var_index)
    if not var_index:
        return 0

    multipliers = algebra.degrees if all_multipliers else _multiplier_degrees(algebra)
    ech = Echelon(F)
    for i in multipliers:
        for sa in range(B.dim(i)):
            va = quotient.lift[i].col(sa)
            for d in algebra.degrees:
                e = i + d
                if e not in algebra.dims or isq.dim(d) == 0:
                    continue
                for r in range(isq.dim(d)):
                    w = algebra.multiply(i, va, d, isq.basis_lift(d, r))
                    xi = isq.modulo_square(e, w) if isq.dim(e) else {}
                    if isq.dim(e) == 0 and w:
                        # target I/I^2 piece is zero; phi(w mod I^2) = 0
                        xi = {}
                    act_cols = {s: B.mult_column(i, sa, d, s) for s in range(B.dim(d))}
                    for sp in range(B.dim(e)):
                        row = {}
                        for rr, v in xi.items():
                            row[var_index[(e, rr, sp)]] = v
                        for s, col in act_cols.items():
                            cv = col.get(sp)
                            if cv is not None:
                                key = var_index[(d, r, s)]
                                nv = F.sub(row.get(key, F.zero), cv)
                                if F.is_zero(nv):
                                    row.pop(key, None)
                                else:
                                    row[key] = nv
                        if row:
                            ech.insert(row)
    return len(var_index) - ech.rank
