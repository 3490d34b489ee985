"""Linear and conjugate-linear isometries of C^n."""

import enum
from dataclasses import dataclass

import numpy as np

from .hilbert import Ray, as_vector, basis_vector, orthonormalize
from .sampling import random_unitary


class OperatorClass(enum.Enum):
    LINEAR = "linear"
    CONJUGATE_LINEAR = "conjugate-linear"

    def __str__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class Isometry:
    """``v -> matrix @ v`` or ``v -> matrix @ conj(v)``."""

    matrix: np.ndarray
    op_class: OperatorClass = OperatorClass.LINEAR

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] < m.shape[1]:
            raise ValueError(f"isometry matrix must be n x m with n >= m, got {m.shape}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "op_class", OperatorClass(self.op_class))

    @classmethod
    def random(cls, n, rng, op_class=OperatorClass.LINEAR):
        return cls(random_unitary(n, rng), op_class)

    @property
    def n(self):
        return self.matrix.shape[0]

    @property
    def is_conjugate_linear(self):
        return self.op_class is OperatorClass.CONJUGATE_LINEAR

    def defect(self):
        """Frobenius norm of ``M* M - I``."""
        m = self.matrix
        return float(np.linalg.norm(m.conj().T @ m - np.eye(m.shape[1])))

    def apply(self, v):
        v = np.asarray(v, dtype=complex)
        if self.is_conjugate_linear:
            v = v.conj()
        return self.matrix @ v

    def apply_ray(self, ray):
        return Ray(self.apply(ray.vector if isinstance(ray, Ray) else as_vector(ray)))

    def apply_subspace(self, s):
        return orthonormalize(self.apply(s.basis))

    __call__ = apply


def required_rays(n):
    """Anchor rays needed to pin down an isometry from its ray map.

    The basis rays [e_j], the sums [e_1 + e_j] for j >= 2, and the twist
    [e_1 + i e_2] that separates linear from conjugate-linear maps.
    """
    e = [basis_vector(n, j) for j in range(n)]
    rays = [Ray(v) for v in e]
    rays += [Ray(e[0] + e[j]) for j in range(1, n)]
    rays.append(Ray(e[0] + 1j * e[1]))
    return rays
