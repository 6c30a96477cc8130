"""
Exact linear algebra over Scalar domains.

Dense Gauss-Jordan for small coefficient matrices and an incremental sparse
echelon basis for spans of polynomials. Pivoting is deterministic: dense
elimination takes the first nonzero row in column order, the sparse basis
pivots on the largest coordinate under the caller's key. Every pivot row is
normalized with a single inversion.
"""
import logging
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from scalars import Domain, Scalar

logger = logging.getLogger(__name__)

Vector = Dict[Hashable, Scalar]
Matrix = List[List[Scalar]]


def rref(matrix: Sequence[Sequence[Scalar]], domain: Domain) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(row) for row in matrix]
    if not m:
        return m, []
    n_rows, n_cols = len(m), len(m[0])
    pivots = []
    piv_r = 0
    for piv_c in range(n_cols):
        if piv_r == n_rows:
            break
        for i_row in range(piv_r, n_rows):
            if m[i_row][piv_c]:
                break
        else:
            continue
        if i_row != piv_r:
            m[piv_r], m[i_row] = m[i_row], m[piv_r]
        inv = m[piv_r][piv_c].inverse()
        m[piv_r] = [v * inv for v in m[piv_r]]
        for r in range(n_rows):
            fr = m[r][piv_c]
            if r == piv_r or not fr:
                continue
            m[r] = [a - b * fr for a, b in zip(m[r], m[piv_r])]
        pivots.append(piv_c)
        piv_r += 1
    return m, pivots


def rank(matrix: Sequence[Sequence[Scalar]], domain: Domain) -> int:
    return len(rref(matrix, domain)[1])


def nullspace(matrix: Sequence[Sequence[Scalar]], n_cols: int, domain: Domain) -> List[List[Scalar]]:
    """
    Basis of the right kernel, one vector per free column in increasing order.

    Each basis vector has a 1 in its free column and zeros in the other free columns.
    """
    if not matrix:
        return [[domain.one() if i == j else domain.zero() for i in range(n_cols)] for j in range(n_cols)]
    reduced, pivots = rref(matrix, domain)
    pivot_set = set(pivots)
    basis = []
    for free in range(n_cols):
        if free in pivot_set:
            continue
        vec = [domain.zero()] * n_cols
        vec[free] = domain.one()
        for row, piv_c in enumerate(pivots):
            vec[piv_c] = -reduced[row][free]
        basis.append(vec)
    return basis


def determinant(matrix: Sequence[Sequence[Scalar]], domain: Domain) -> Scalar:
    m = [list(row) for row in matrix]
    n = len(m)
    det = domain.one()
    for c in range(n):
        pivot_row = next((r for r in range(c, n) if m[r][c]), None)
        if pivot_row is None:
            return domain.zero()
        if pivot_row != c:
            m[c], m[pivot_row] = m[pivot_row], m[c]
            det = -det
        det = det * m[c][c]
        inv = m[c][c].inverse()
        for r in range(c + 1, n):
            fr = m[r][c] * inv
            if fr:
                m[r] = [a - b * fr for a, b in zip(m[r], m[c])]
    return det


class EchelonBasis:
    """
    Incrementally built semi-echelon basis of sparse vectors.

    Each stored row is normalized on its pivot, the largest coordinate under
    ``key``. When ``track`` is set, every row remembers the combination of
    inserted vectors (by label) that produced it.
    """

    def __init__(self, domain: Domain, key: Optional[Callable[[Hashable], object]] = None, track: bool = True):
        self.domain = domain
        self.key = key or (lambda c: c)
        self.track = track
        self.rows: Dict[Hashable, Tuple[Vector, Dict[Hashable, Scalar]]] = {}

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _lead(self, vec: Vector) -> Hashable:
        return max(vec, key=self.key)

    def reduce(self, vec: Vector, combo: Optional[Dict[Hashable, Scalar]] = None
               ) -> Tuple[Vector, Dict[Hashable, Scalar]]:
        """Subtract basis rows until the leading coordinate is not a pivot."""
        vec = {c: v for c, v in vec.items() if v}
        combo = dict(combo or {})
        while vec:
            lead = self._lead(vec)
            row = self.rows.get(lead)
            if row is None:
                break
            factor = vec[lead]
            row_vec, row_combo = row
            for c, v in row_vec.items():
                s = vec.get(c, self.domain.zero()) - factor * v
                if s:
                    vec[c] = s
                else:
                    vec.pop(c, None)
            if self.track:
                for label, v in row_combo.items():
                    s = combo.get(label, self.domain.zero()) - factor * v
                    if s:
                        combo[label] = s
                    else:
                        combo.pop(label, None)
        return vec, combo

    def add(self, vec: Vector, label: Hashable = None) -> bool:
        """Insert a vector; returns True when it enlarged the span."""
        combo = {label: self.domain.one()} if self.track else {}
        residual, combo = self.reduce(vec, combo)
        if not residual:
            return False
        lead = self._lead(residual)
        inv = residual[lead].inverse()
        self.rows[lead] = ({c: v * inv for c, v in residual.items()},
                           {k: v * inv for k, v in combo.items()})
        return True

    def contains(self, vec: Vector) -> bool:
        return not self.reduce(vec)[0]

    def express(self, vec: Vector) -> Optional[Dict[Hashable, Scalar]]:
        """Coefficients over inserted labels reproducing ``vec``, or None outside the span."""
        residual, combo = self.reduce(vec)
        if residual:
            return None
        return {label: -v for label, v in combo.items() if v}
