"""Harrison cochain complexes of finite graded commutative algebras.

Cochains of weight n valued in a module M are the multilinear maps
A^(x)n -> M vanishing on all signed shuffle sums (the characteristic-0
realization of maps out of the cofree Lie coalgebra on the shifted space).
Since A sits in cohomological degree 0, every shifted argument is odd and
the shuffle sign is the plain permutation sign; the internal grading
contributes no signs.

Everything is stored in compressed coordinates: a weight-n cochain is
determined by its values on the "standard tuples" (non-pivot columns of
the row-reduced shuffle span, computed per orbit of degree compositions
and per target degree), and values at arbitrary argument tuples are
recovered by reducing the tuple modulo the shuffle span.  This keeps the
windowed internal-degree-0 slices small enough for exact arithmetic.

The coboundary is the negative of the Hochschild one, so that on weight 1
it is exactly (delta f)(a, b) = f(ab) - a f(b) - b f(a); d∘d = 0 is
asserted wherever complexes are assembled.
"""
from __future__ import annotations

from itertools import combinations, product

from .errors import BudgetError, InternalCheckError, NotAHomomorphismError
from .graded import AlgebraModule, FiniteGradedAlgebra
from .linalg import Echelon, Matrix


from functools import lru_cache


@lru_cache(maxsize=None)
def _shuffles(p: int, n: int) -> tuple:
    """(p, n-p)-shuffle relations as (slot -> input position, sign) pairs.

    Terms of the shuffle product of the first p against the last n-p
    inputs: the output slots S receive inputs 0..p-1 in order, the rest
    receive p..n-1 in order; all inputs are odd, so the sign is the plain
    permutation sign.
    """
    out = []
    for slots in combinations(range(n), p):
        perm = [None] * n
        for k, s in enumerate(slots):
            perm[s] = k
        nxt = p
        for s in range(n):
            if perm[s] is None:
                perm[s] = nxt
                nxt += 1
        sign = 1
        seen = []
        for v in perm:
            sign *= (-1) ** sum(1 for s in seen if s > v)
            seen.append(v)
        out.append((tuple(perm), sign))
    return tuple(out)


def _orderings(multiset: tuple) -> list:
    if len(multiset) <= 1:
        return [tuple(multiset)]
    out = set()
    for i, v in enumerate(multiset):
        rest = multiset[:i] + multiset[i + 1:]
        for tail in _orderings(rest):
            out.add((v,) + tail)
    return sorted(out)


class ShuffleBlock:
    """Shuffle quotient of one orbit of degree compositions, one target degree."""

    def __init__(self, algebra: FiniteGradedAlgebra, comps: tuple, e: int):
        self.algebra = algebra
        self.comps = tuple(sorted(comps))
        self.e = e
        self.n = len(self.comps[0])
        self.col_of = {}
        self.cols = []
        for ci, comp in enumerate(self.comps):
            ranges = [range(algebra.dims[d]) for d in comp]
            for tup in product(*ranges):
                self.col_of[(ci, tup)] = len(self.cols)
                self.cols.append((ci, tup))
        self._comp_index = {c: i for i, c in enumerate(self.comps)}
        ech = Echelon(algebra.field)
        n = self.n
        if n > 1:
            for ci, comp in enumerate(self.comps):
                ranges = [range(algebra.dims[d]) for d in comp]
                for tup in product(*ranges):
                    for p in range(1, n):
                        row = {}
                        for perm, sign in _shuffles(p, n):
                            ncomp = tuple(comp[k2] for k2 in perm)
                            ntup = tuple(tup[k2] for k2 in perm)
                            col = self.col_of[(self._comp_index[ncomp], ntup)]
                            row[col] = row.get(col, 0) + sign
                        row = {k: v for k, v in row.items() if v}
                        if row:
                            ech.insert(row)
        # plain echelon form suffices: reductions modulo the row space give
        # the same residues, and skipping back-substitution is much faster
        self.ech = ech
        pivots = set(ech.pivots)
        self.std = [c for c in range(len(self.cols)) if c not in pivots]
        self.std_pos = {c: k for k, c in enumerate(self.std)}
        self._reduce_cache: dict[int, dict] = {}

    @property
    def dim(self) -> int:
        return len(self.std)

    def comp_of(self, comp: tuple) -> int:
        return self._comp_index[comp]

    def reduce_col(self, ci: int, tup: tuple) -> dict:
        """Standard-tuple expansion of the elementary tuple (ci, tup)."""
        col = self.col_of[(ci, tup)]
        cached = self._reduce_cache.get(col)
        if cached is not None:
            return cached
        if col in self.std_pos:
            out = {self.std_pos[col]: self.algebra.field.one}
        else:
            residue, _ = self.ech.reduce({col: self.algebra.field.one})
            out = {self.std_pos[c]: v for c, v in residue.items()}
        self._reduce_cache[col] = out
        return out

    def reduce_vector(self, vec: dict) -> dict:
        """Reduce a sparse vector over full tuple columns to std coordinates."""
        F = self.algebra.field
        out: dict[int, object] = {}
        for col, c in vec.items():
            base = self.reduce_col(*self.cols[col])
            for t, v in base.items():
                nv = F.add(out.get(t, F.zero), F.mul(F.coerce(c), v))
                out[t] = nv
        return {t: v for t, v in out.items() if not F.is_zero(v)}


class HarrisonWeightSpace:
    """The weight-n Harrison cochain space in compressed coordinates.

    Coordinates run over (block, standard tuple, module basis index); the
    dimension is the sum over blocks of dim(shuffle quotient) * dim(M_e).
    With internal_degree set, only components with e = sum(degrees) +
    internal_degree are kept (degree-0 slice: e = sum of argument degrees).
    """

    def __init__(self, algebra: FiniteGradedAlgebra, module: AlgebraModule,
                 n: int, internal_degree=None):
        if n < 1:
            raise BudgetError("Harrison weight must be >= 1")
        self.algebra = algebra
        self.module = module
        self.n = n
        self.internal_degree = internal_degree
        keys = sorted({tuple(sorted(c)) for c in product(algebra.degrees, repeat=n)})
        self.blocks = []
        self._block_of_comp = {}
        for key in keys:
            total = sum(key)
            for e in module.degrees:
                if internal_degree is not None and e - total != internal_degree:
                    continue
                if module.dim(e) == 0:
                    continue
                blk = ShuffleBlock(algebra, tuple(_orderings(key)), e)
                if blk.dim == 0:
                    continue
                idx = len(self.blocks)
                self.blocks.append(blk)
                for ci, comp in enumerate(blk.comps):
                    self._block_of_comp[(comp, e)] = (idx, ci)
        self.offsets = []
        off = 0
        for blk in self.blocks:
            self.offsets.append(off)
            off += blk.dim * module.dim(blk.e)
        self.dim = off

    def locate(self, comp: tuple, e: int):
        """(block index, composition index), or None when that slot is zero."""
        return self._block_of_comp.get((tuple(comp), e))

    def coord(self, block_idx: int, std_pos: int, m_idx: int) -> int:
        blk = self.blocks[block_idx]
        return self.offsets[block_idx] + std_pos * self.module.dim(blk.e) + m_idx


class HarrisonComplex:
    """Weights 1..n_max of Harr(A, M), with compressed differentials."""

    def __init__(self, algebra: FiniteGradedAlgebra, module: AlgebraModule,
                 n_max: int, internal_degree=None):
        self.algebra = algebra
        self.module = module
        self.n_max = n_max
        self.internal_degree = internal_degree
        self._spaces: dict[int, HarrisonWeightSpace] = {}
        self._diffs: dict[int, Matrix] = {}

    def space(self, n: int) -> HarrisonWeightSpace:
        if n > self.n_max + 1:
            raise BudgetError(
                f"weight budget exceeded: weight {n} > {self.n_max + 1}")
        if n not in self._spaces:
            self._spaces[n] = HarrisonWeightSpace(
                self.algebra, self.module, n, self.internal_degree)
        return self._spaces[n]

    def diff(self, n: int) -> Matrix:
        """delta: weight n -> weight n+1, in compressed coordinates."""
        if n not in self._diffs:
            self._diffs[n] = self._build_diff(n)
        return self._diffs[n]

    def _build_diff(self, n: int) -> Matrix:
        A, M = self.algebra, self.module
        F = A.field
        src = self.space(n)
        dst = self.space(n + 1)
        entries = {}

        def add_entry(r, c, v):
            nv = F.add(entries.get((r, c), F.zero), v)
            if F.is_zero(nv):
                entries.pop((r, c), None)
            else:
                entries[(r, c)] = nv

        for b_idx, blk in enumerate(dst.blocks):
            e_out = blk.e
            dim_m_out = M.dim(e_out)
            for std_pos, col in enumerate(blk.std):
                ci, tup = blk.cols[col]
                comp = blk.comps[ci]
                row_base = dst.offsets[b_idx] + std_pos * dim_m_out
                # -u_1 . f(u_2 .. u_{n+1})
                self._action_term(src, comp[1:], tup[1:], comp[0], tup[0],
                                  e_out, row_base, F.neg(F.one), add_entry)
                # sum_i (-1)^{i+1} f(..., u_i u_{i+1}, ...)
                for i in range(n):
                    prod = A.mult_column(comp[i], tup[i], comp[i + 1], tup[i + 1])
                    if not prod:
                        continue
                    sign = F.one if i % 2 == 0 else F.neg(F.one)
                    ncomp = comp[:i] + (comp[i] + comp[i + 1],) + comp[i + 2:]
                    loc = src.locate(ncomp, e_out)
                    if loc is None:
                        continue
                    sb_idx, sci = loc
                    sblk = src.blocks[sb_idx]
                    for bidx, bv in prod.items():
                        ntup = tup[:i] + (bidx,) + tup[i + 2:]
                        red = sblk.reduce_col(sci, ntup)
                        coeff = F.mul(sign, bv)
                        for t, rv in red.items():
                            cval = F.mul(coeff, rv)
                            base = src.offsets[sb_idx] + t * dim_m_out
                            for m in range(dim_m_out):
                                add_entry(row_base + m, base + m, cval)
                # (-1)^n u_{n+1} . f(u_1 .. u_n)
                sign_last = F.one if n % 2 == 0 else F.neg(F.one)
                self._action_term(src, comp[:-1], tup[:-1], comp[-1], tup[-1],
                                  e_out, row_base, sign_last, add_entry)
        return Matrix(dst.dim, src.dim, entries, F)

    def _action_term(self, src, comp_rest, tup_rest, d_act, u_act,
                     e_out, row_base, sign, add_entry):
        """Contribution sign * (u_act . f(rest)) to one output row block."""
        M = self.module
        F = self.algebra.field
        e_in = e_out - d_act
        loc = src.locate(tuple(comp_rest), e_in)
        if loc is None:
            return
        sb_idx, sci = loc
        sblk = src.blocks[sb_idx]
        dim_m_in = M.dim(e_in)
        red = sblk.reduce_col(sci, tuple(tup_rest))
        if not red:
            return
        for m_in in range(dim_m_in):
            act = M.act_column(d_act, u_act, e_in, m_in)
            if not act:
                continue
            for t, rv in red.items():
                colix = src.offsets[sb_idx] + t * dim_m_in + m_in
                sv = F.mul(sign, rv)
                for m_out, av in act.items():
                    add_entry(row_base + m_out, colix, F.mul(sv, av))

    def delta_full_values(self, n: int, coords: dict) -> dict:
        """The coboundary of a weight-n cochain, evaluated at every full
        weight-(n+1) tuple (no shuffle reduction on the output side).

        Returns {(comp, tuple, m): value}.  Used by the stability check.
        """
        A, M = self.algebra, self.module
        F = A.field
        src = self.space(n)

        def f_value(comp, tup, e):
            loc = src.locate(comp, e)
            if loc is None:
                return {}
            sb_idx, sci = loc
            sblk = src.blocks[sb_idx]
            red = sblk.reduce_col(sci, tup)
            dim_m = M.dim(e)
            out = {}
            for t, rv in red.items():
                for m in range(dim_m):
                    v = coords.get(src.offsets[sb_idx] + t * dim_m + m)
                    if v is None:
                        continue
                    out[m] = F.add(out.get(m, F.zero), F.mul(rv, v))
            return {m: v for m, v in out.items() if not F.is_zero(v)}

        values = {}
        for comp in product(A.degrees, repeat=n + 1):
            total = sum(comp)
            for e_out in M.degrees:
                if (self.internal_degree is not None
                        and e_out - total != self.internal_degree):
                    continue
                ranges = [range(A.dims[d]) for d in comp]
                for tup in product(*ranges):
                    acc: dict[int, object] = {}

                    def add(m, v):
                        acc[m] = F.add(acc.get(m, F.zero), v)

                    fv = f_value(comp[1:], tup[1:], e_out - comp[0])
                    for m_in, v in fv.items():
                        for m_out, av in M.act_column(
                                comp[0], tup[0], e_out - comp[0], m_in).items():
                            add(m_out, F.neg(F.mul(v, av)))
                    for i in range(n):
                        prod = A.mult_column(comp[i], tup[i],
                                             comp[i + 1], tup[i + 1])
                        sign = F.one if i % 2 == 0 else F.neg(F.one)
                        ncomp = comp[:i] + (comp[i] + comp[i + 1],) + comp[i + 2:]
                        for bidx, bv in prod.items():
                            ntup = tup[:i] + (bidx,) + tup[i + 2:]
                            for m, v in f_value(ncomp, ntup, e_out).items():
                                add(m, F.mul(F.mul(sign, bv), v))
                    sign_last = F.one if n % 2 == 0 else F.neg(F.one)
                    fv = f_value(comp[:-1], tup[:-1], e_out - comp[-1])
                    for m_in, v in fv.items():
                        for m_out, av in M.act_column(
                                comp[-1], tup[-1], e_out - comp[-1], m_in).items():
                            add(m_out, F.mul(sign_last, F.mul(v, av)))
                    for m, v in acc.items():
                        if not F.is_zero(v):
                            values[(comp, tup, e_out, m)] = v
        return values

    def check_shuffle_stability(self, n: int):
        """Exact check that coboundaries of all weight-n Harrison basis
        cochains vanish on every weight-(n+1) signed shuffle sum.

        Quadratic in the full tuple spaces; meant for the small algebras of
        the test battery, where it runs for every weight.
        """
        A, M = self.algebra, self.module
        F = A.field
        src = self.space(n)
        for j in range(src.dim):
            g = self.delta_full_values(n, {j: F.one})
            for comp in product(A.degrees, repeat=n + 1):
                total = sum(comp)
                for e_out in M.degrees:
                    if (self.internal_degree is not None
                            and e_out - total != self.internal_degree):
                        continue
                    ranges = [range(A.dims[d]) for d in comp]
                    for tup in product(*ranges):
                        for p in range(1, n + 1):
                            acc: dict[int, object] = {}
                            for perm, sign in _shuffles(p, n + 1):
                                ncomp = tuple(comp[k] for k in perm)
                                ntup = tuple(tup[k] for k in perm)
                                for m in range(M.dim(e_out)):
                                    v = g.get((ncomp, ntup, e_out, m))
                                    if v is None:
                                        continue
                                    acc[m] = F.add(acc.get(m, F.zero),
                                                   F.mul(F.coerce(sign), v))
                            for v in acc.values():
                                if not F.is_zero(v):
                                    raise InternalCheckError(
                                        "Hochschild coboundary left the "
                                        "shuffle-vanishing subspace")
        return True


def harrison_space(algebra, module, n, internal_degree=None) -> HarrisonWeightSpace:
    return HarrisonWeightSpace(algebra, module, n, internal_degree)


def harrison_differential(algebra, module, n, internal_degree=None) -> Matrix:
    return HarrisonComplex(algebra, module, n + 1, internal_degree).diff(n)


def harrison_cohomology(algebra, module, n, internal_degree=None,
                        representatives=False):
    """Exact dim of H^n Harr(A, M) (weight-n cochains sit in degree n)."""
    hc = HarrisonComplex(algebra, module, n + 1, internal_degree)
    d_n = hc.diff(n)
    rank_prev = hc.diff(n - 1).rank() if n >= 2 else 0
    dim_ker = hc.space(n).dim - d_n.rank()
    if not representatives:
        return dim_ker - rank_prev
    ker = d_n.kernel_basis()
    ech = Echelon(algebra.field)
    if n >= 2:
        prev = hc.diff(n - 1)
        for j in range(prev.ncols):
            ech.insert(prev.col(j))
    reps = []
    for j in range(ker.ncols):
        col = ker.col(j)
        if ech.insert(col) is not None:
            reps.append(col)
    return dim_ker - rank_prev, reps


def module_via_homomorphism(algebra_a, algebra_b, components: dict,
                            check=True) -> AlgebraModule:
    """B as an A-module through f: A -> B; f given by per-degree matrices.

    Raises NotAHomomorphismError with the first failing basis pair when f
    is not multiplicative.
    """
    F = algebra_a.field
    if check:
        for i in algebra_a.degrees:
            for j in algebra_a.degrees:
                if i + j not in algebra_a.dims:
                    continue
                fi, fj = components.get(i), components.get(j)
                fij = components.get(i + j)
                for a in range(algebra_a.dims[i]):
                    fa = fi.col(a) if fi is not None else {}
                    for b in range(algebra_a.dims[j]):
                        fb = fj.col(b) if fj is not None else {}
                        lhs = algebra_b.multiply(i, fa, j, fb)
                        prod = algebra_a.mult_column(i, a, j, b)
                        rhs = fij.times_vec(prod) if fij is not None else {}
                        if lhs != rhs:
                            raise NotAHomomorphismError(
                                f"not a homomorphism at degrees {(i, j)}, "
                                f"basis pair ({a}, {b})", witness=(i, a, j, b))
    action = {}
    for i in algebra_a.degrees:
        fi = components.get(i)
        for e in algebra_b.degrees:
            if i + e not in algebra_b.dims:
                continue
            ne = algebra_b.dims[e]
            entries = {}
            for a in range(algebra_a.dims[i]):
                fa = fi.col(a) if fi is not None else {}
                if not fa:
                    continue
                for m in range(ne):
                    prod = algebra_b.multiply(i, fa, e, {m: F.one})
                    for r, v in prod.items():
                        entries[(r, a * ne + m)] = v
            action[(i, e)] = Matrix(algebra_b.dims[i + e],
                                    algebra_a.dims[i] * ne, entries, F)
    return AlgebraModule(algebra_a, dict(algebra_b.dims), action,
                         labels=dict(algebra_b.labels), check=False)
