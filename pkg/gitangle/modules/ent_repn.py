"""
ent.repn - Dynamical systems for gitangle.

Hermitian operator bases for spin-s irreps, local product algebras on
multipartite spaces, induced actions on symmetric and antisymmetric
powers, and the Casimir operator.

Normalization: generators are orthonormal under the invariant form
B(X, Y) = 2 Tr_defining(XY) of their simple factor. In the representation
actually carried by a basis this reads B(X, Y) = Tr(XY) / kappa, where
kappa is the trace norm of the factor; generators of different factors
are B-orthogonal.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from gitangle.config import CLOSURE_TOL, DIMENSION_CAP, HERMITIAN_TOL, ORTHONORMAL_TOL
from gitangle.exceptions import DimensionCapError, SystemSpecError, ValidationError


@dataclass(frozen=True)
class SpinLabel:
    """Twice the spin, so that dim = two_s + 1."""
    two_s: int

    def __post_init__(self):
        if int(self.two_s) != self.two_s or self.two_s < 0:
            raise ValidationError(f"two_s must be a nonnegative integer, got {self.two_s}.")

    @property
    def spin(self) -> float:
        return self.two_s / 2.0

    @property
    def dim(self) -> int:
        return int(self.two_s) + 1


@dataclass(frozen=True, eq=False)
class OperatorBasis:
    """
    Orthonormal Hermitian basis of a Lie algebra of observables.

    ``factors[i]`` names the simple factor of generator i and
    ``trace_norms[f]`` is the kappa of factor f.
    """
    dim: int
    generators: Tuple[np.ndarray, ...]
    label: str
    factors: Tuple[int, ...]
    trace_norms: Tuple[float, ...]

    def __post_init__(self):
        if len(self.factors) != len(self.generators):
            raise ValidationError("OperatorBasis: one factor id per generator is required.")
        for g in self.generators:
            if g.shape != (self.dim, self.dim):
                raise ValidationError(
                    f"OperatorBasis: generator of shape {g.shape} does not act on dimension {self.dim}."
                )
            g.setflags(write=False)

    def __len__(self) -> int:
        return len(self.generators)

    @property
    def n_factors(self) -> int:
        return len(self.trace_norms)

    def inner_product(self, i: int, j: int) -> float:
        """B(X_i, X_j)."""
        if self.factors[i] != self.factors[j]:
            return 0.0
        kappa = self.trace_norms[self.factors[i]]
        if kappa == 0.0:
            return 0.0
        return float(np.real(np.trace(self.generators[i] @ self.generators[j]))) / kappa

    def gram_matrix(self) -> np.ndarray:
        n = len(self)
        gram = np.zeros((n, n))
        for i in range(n):
            for j in range(n):
                gram[i, j] = self.inner_product(i, j)
        return gram

    def stack(self) -> np.ndarray:
        """Generators as an (n, dim, dim) array."""
        if not self.generators:
            return np.zeros((0, self.dim, self.dim), dtype=complex)
        return np.stack(self.generators)

    def combine(self, coeffs: Sequence[float]) -> np.ndarray:
        """Sum_i c_i X_i for real coefficients."""
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (len(self),):
            raise ValidationError(f"Expected {len(self)} coefficients, got {coeffs.shape[0]}.")
        if not self.generators:
            return np.zeros((self.dim, self.dim), dtype=complex)
        return np.tensordot(coeffs, self.stack(), axes=1)

    def to_dict(self) -> dict:
        return {
            'type': 'OPERATOR_BASIS',
            'label': self.label,
            'dim': self.dim,
            'factors': list(self.factors),
            'trace_norms': list(self.trace_norms),
            'generators': [
                [[[float(z.real), float(z.imag)] for z in row] for row in g]
                for g in self.generators
            ],
        }


def _as_two_s(two_s: Union[int, SpinLabel]) -> int:
    if isinstance(two_s, SpinLabel):
        return int(two_s.two_s)
    return int(SpinLabel(two_s).two_s)


def _embed(op: np.ndarray, dims: Sequence[int], k: int) -> np.ndarray:
    left = int(np.prod(dims[:k])) if k > 0 else 1
    right = int(np.prod(dims[k + 1:])) if k + 1 < len(dims) else 1
    return np.kron(np.kron(np.eye(left), op), np.eye(right))


def _hermitize(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2.0


class RepresentationEngine:
    """Builds operator bases of the supported system families."""

    # ── Spin ───────────────────────────────────────────────

    @staticmethod
    def ladder_operators(two_s: Union[int, SpinLabel]) -> Tuple[np.ndarray, np.ndarray]:
        """J+ and J- in the basis |s>, |s-1>, ..., |-s>."""
        n = _as_two_s(two_s)
        s = n / 2.0
        j_plus = np.zeros((n + 1, n + 1), dtype=complex)
        for i in range(n):
            k = s - i
            j_plus[i, i + 1] = math.sqrt(s * (s + 1) - k * (k - 1))
        return j_plus, j_plus.conj().T.copy()

    @staticmethod
    def spin_generators(two_s: Union[int, SpinLabel]) -> OperatorBasis:
        """J_x, J_y, J_z of the (two_s + 1)-dimensional irrep."""
        n = _as_two_s(two_s)
        s = n / 2.0
        j_plus, j_minus = RepresentationEngine.ladder_operators(n)
        jx = (j_plus + j_minus) / 2.0
        jy = (j_plus - j_minus) / 2.0j
        jz = np.diag(np.arange(s, -s - 0.5, -1.0)).astype(complex)
        kappa = s * (s + 1) * (2 * s + 1) / 3.0
        return OperatorBasis(
            dim=n + 1,
            generators=(jx, jy, jz),
            label=f"spin:{n}",
            factors=(0, 0, 0),
            trace_norms=(kappa,),
        )

    # ── su(d) and local algebras ───────────────────────────

    @staticmethod
    def su_generators(d: int) -> List[np.ndarray]:
        """Generalized Gell-Mann matrices / 2: symmetric, antisymmetric, diagonal."""
        if d < 2:
            raise ValidationError(f"su(d) needs d >= 2, got {d}.")
        sym, anti, diag = [], [], []
        for j in range(d):
            for k in range(j + 1, d):
                e = np.zeros((d, d), dtype=complex)
                e[j, k] = e[k, j] = 1.0
                sym.append(e / 2.0)
                a = np.zeros((d, d), dtype=complex)
                a[j, k] = -1.0j
                a[k, j] = 1.0j
                anti.append(a / 2.0)
        for l in range(1, d):
            entries = np.zeros(d)
            entries[:l] = 1.0
            entries[l] = -float(l)
            diag.append(np.diag(entries * math.sqrt(2.0 / (l * (l + 1)))).astype(complex) / 2.0)
        return sym + anti + diag

    @staticmethod
    def local_algebra(dims: Sequence[int], cap: int = DIMENSION_CAP) -> OperatorBasis:
        """Union of traceless Hermitian bases of each factor, embedded in the tensor product."""
        dims = [int(d) for d in dims]
        if not dims:
            raise ValidationError("local_algebra needs at least one factor.")
        for d in dims:
            if d < 2:
                raise ValidationError(f"Every local factor needs dimension >= 2, got {dims}.")
        total = int(np.prod(dims))
        if total > cap:
            raise DimensionCapError(dims, total, cap)

        generators, factors, norms = [], [], []
        for k, d in enumerate(dims):
            for x in RepresentationEngine.su_generators(d):
                generators.append(_embed(x, dims, k))
                factors.append(k)
            norms.append(total / (2.0 * d))
        return OperatorBasis(
            dim=total,
            generators=tuple(generators),
            label="local:" + "x".join(str(d) for d in dims),
            factors=tuple(factors),
            trace_norms=tuple(norms),
        )

    # ── Symmetric / antisymmetric powers ───────────────────

    @staticmethod
    def power_isometry(d: int, n: int, kind: str) -> np.ndarray:
        """
        Columns: orthonormal basis of S^n or wedge^n inside (C^d)^{otimes n}.

        Columns follow lexicographic sorted multi-indices; symmetric vectors
        carry 1/sqrt(#distinct permutations), antisymmetric ones
        sign/sqrt(n!) with the sorted index having sign +1.
        """
        shape = (d,) * n
        if kind == 'symmetric':
            labels = list(itertools.combinations_with_replacement(range(d), n))
        elif kind == 'antisymmetric':
            labels = list(itertools.combinations(range(d), n))
        else:
            raise ValidationError(f"kind must be 'symmetric' or 'antisymmetric', got '{kind}'.")

        iso = np.zeros((d ** n, len(labels)), dtype=complex)
        for col, idx in enumerate(labels):
            if kind == 'symmetric':
                perms = set(itertools.permutations(idx))
                amp = 1.0 / math.sqrt(len(perms))
                for p in perms:
                    iso[np.ravel_multi_index(p, shape), col] = amp
            else:
                amp = 1.0 / math.sqrt(math.factorial(n))
                for order in itertools.permutations(range(n)):
                    p = tuple(idx[o] for o in order)
                    iso[np.ravel_multi_index(p, shape), col] = _permutation_sign(order) * amp
        return iso

    @staticmethod
    def derivation(op: np.ndarray, n: int) -> np.ndarray:
        """Sum_k 1 x ... x op x ... x 1 on the n-fold tensor power."""
        d = op.shape[0]
        return sum(_embed(op, [d] * n, k) for k in range(n))

    @staticmethod
    def power_algebra(base: OperatorBasis, n: int, kind: str,
                      cap: int = DIMENSION_CAP) -> OperatorBasis:
        """Induced action of ``base`` on S^n H (bosons) or wedge^n H (fermions)."""
        if n < 1:
            raise ValidationError(f"Power n must be positive, got {n}.")
        if kind not in ('symmetric', 'antisymmetric'):
            raise ValidationError(f"kind must be 'symmetric' or 'antisymmetric', got '{kind}'.")
        d = base.dim
        if kind == 'antisymmetric' and n > d:
            raise ValidationError(
                f"wedge^{n} of a {d}-dimensional space is zero; use n <= {d}."
            )
        if n == 1:
            return base
        if d ** n > cap:
            raise DimensionCapError([d] * n, d ** n, cap)

        iso = RepresentationEngine.power_isometry(d, n, kind)
        generators = tuple(
            _hermitize(iso.conj().T @ RepresentationEngine.derivation(x, n) @ iso)
            for x in base.generators
        )
        norms = []
        for f in range(base.n_factors):
            members = [i for i, fi in enumerate(base.factors) if fi == f]
            kappa = 0.0
            for i in members:
                b = base.inner_product(i, i)
                if b > 0.0:
                    kappa = float(np.real(np.trace(generators[i] @ generators[i]))) / b
                    break
            norms.append(kappa)
        tag = "sym" if kind == 'symmetric' else "wedge"
        return OperatorBasis(
            dim=iso.shape[1],
            generators=generators,
            label=f"{tag}({base.label})^{n}",
            factors=base.factors,
            trace_norms=tuple(norms),
        )

    # ── Casimir and structure ──────────────────────────────

    @staticmethod
    def casimir(basis: OperatorBasis) -> np.ndarray:
        """C = Sum_i X_i^2."""
        c = np.zeros((basis.dim, basis.dim), dtype=complex)
        for x in basis.generators:
            c = c + x @ x
        return _hermitize(c)

    @staticmethod
    def casimir_scalar(basis: OperatorBasis) -> Dict[str, float]:
        """Tr C / dim and the distance of C from that multiple of the identity."""
        c = RepresentationEngine.casimir(basis)
        scalar = float(np.real(np.trace(c))) / basis.dim
        deviation = float(np.max(np.abs(c - scalar * np.eye(basis.dim))))
        return {'scalar': scalar, 'deviation': deviation}

    @staticmethod
    def bracket(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """[X, Y] = i(XY - YX); Hermitian for Hermitian X, Y."""
        return 1.0j * (x @ y - y @ x)

    @staticmethod
    def closure_residual(basis: OperatorBasis) -> float:
        """Largest distance of a bracket of generators from their real span."""
        if len(basis) == 0:
            return 0.0
        flat = basis.stack().reshape(len(basis), -1).T
        real_span = np.vstack([flat.real, flat.imag])
        pinv = np.linalg.pinv(real_span)
        worst = 0.0
        for a in range(len(basis)):
            for b in range(a + 1, len(basis)):
                br = RepresentationEngine.bracket(basis.generators[a], basis.generators[b]).ravel()
                target = np.concatenate([br.real, br.imag])
                fit = real_span @ (pinv @ target)
                worst = max(worst, float(np.linalg.norm(fit - target)))
        return worst

    @staticmethod
    def validate(basis: OperatorBasis) -> dict:
        """Check hermiticity, B-orthonormality and closure."""
        herm = max((float(np.max(np.abs(x - x.conj().T))) for x in basis.generators), default=0.0)
        if all(k > 0.0 for k in basis.trace_norms):
            ortho = float(np.max(np.abs(basis.gram_matrix() - np.eye(len(basis))))) if len(basis) else 0.0
        else:
            ortho = 0.0     # trivial representation: B vanishes identically
        closure = RepresentationEngine.closure_residual(basis)
        return {
            'type': 'REPN_CHECK',
            'label': basis.label,
            'hermitian_deviation': herm,
            'orthonormal_deviation': ortho,
            'closure_residual': closure,
            'valid': herm <= HERMITIAN_TOL and ortho <= ORTHONORMAL_TOL and closure <= CLOSURE_TOL,
        }

    # ── System descriptors ─────────────────────────────────

    @staticmethod
    def system(spec: str, cap: int = DIMENSION_CAP) -> OperatorBasis:
        """Parse ``spin:<two_s>``, ``local:<d1>x<d2>``, ``sym:<d>^<n>``, ``wedge:<d>^<n>``."""
        kind, sep, body = spec.partition(':')
        if not sep or not body:
            raise SystemSpecError(spec)
        try:
            if kind == 'spin':
                return RepresentationEngine.spin_generators(int(body))
            if kind == 'local':
                return RepresentationEngine.local_algebra([int(t) for t in body.split('x')], cap=cap)
            if kind in ('sym', 'wedge'):
                d_str, caret, n_str = body.partition('^')
                if not caret:
                    raise SystemSpecError(spec, "expected <d>^<n>")
                base = RepresentationEngine.local_algebra([int(d_str)], cap=cap)
                power = 'symmetric' if kind == 'sym' else 'antisymmetric'
                return RepresentationEngine.power_algebra(base, int(n_str), power, cap=cap)
        except ValueError:
            raise SystemSpecError(spec, "dimensions must be integers")
        raise SystemSpecError(spec, f"unknown family '{kind}'")

    @staticmethod
    def spin_of(basis: OperatorBasis) -> Optional[int]:
        """two_s if the basis is a spin irrep, else None."""
        if basis.label.startswith("spin:"):
            return int(basis.label.split(':', 1)[1])
        return None


def _permutation_sign(order: Sequence[int]) -> int:
    sign = 1
    seen = list(order)
    for i in range(len(seen)):
        for j in range(i + 1, len(seen)):
            if seen[i] > seen[j]:
                sign = -sign
    return sign
