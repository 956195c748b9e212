"""Gate constructors and targeted unitary application on density matrices.

Qubit ordering is little-endian throughout the package: qubit 0 is the least
significant bit of a basis index. Multi-qubit gate matrices index their
targets with targets[0] as the most significant bit.
"""

from __future__ import annotations

import string

import numpy as np

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)


def _check_angle(theta: float) -> float:
    theta = float(theta)
    if not np.isfinite(theta):
        raise ValueError(f"rotation angle must be finite, got {theta}")
    return theta


def rx(theta: float) -> np.ndarray:
    """Rotation exp(-i theta X / 2)."""
    theta = _check_angle(theta)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def ry(theta: float) -> np.ndarray:
    """Rotation exp(-i theta Y / 2)."""
    theta = _check_angle(theta)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def crz(theta: float) -> np.ndarray:
    """Controlled-Rz: diag(1, 1, e^{-i theta/2}, e^{+i theta/2}), control on the high bit."""
    theta = _check_angle(theta)
    return np.diag([1.0, 1.0, np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not np.isfinite(gamma) or not 0.0 < gamma <= 1.0:
        raise ValueError(f"gamma must lie in (0, 1], got {gamma}")
    return gamma


def swap_coefficients(gamma: float) -> tuple[complex, complex]:
    """Closed-form pair A = (1 + e^{i pi g})/2, B = (1 - e^{i pi g})/2.

    These are the matrix elements of SWAP^gamma on the one-excitation block;
    equivalently A = e^{i pi g/2} cos(pi g/2) and B = -i e^{i pi g/2} sin(pi g/2).
    """
    gamma = check_gamma(gamma)
    phase = np.exp(1j * np.pi * gamma)
    return 0.5 * (1.0 + phase), 0.5 * (1.0 - phase)


def damping_probability(gamma: float) -> float:
    """p = sin^2(pi gamma / 2), computed as 1 - |A|^2.

    This keeps the population scale 1-p exactly equal to |A|^2, the squared
    magnitude of the coherence factor, so gamma=0.5 gives p=0.5 and gamma=1
    gives p=1 without rounding residue.
    """
    a, _ = swap_coefficients(gamma)
    return 1.0 - (a.real * a.real + a.imag * a.imag)


def partial_swap_unitary(gamma: float) -> np.ndarray:
    """Two-qubit partial SWAP; gamma=1 is the canonical SWAP."""
    a, b = swap_coefficients(gamma)
    return np.array(
        [[1, 0, 0, 0],
         [0, a, b, 0],
         [0, b, a, 0],
         [0, 0, 0, 1]], dtype=complex)


def is_unitary(u: np.ndarray, atol: float = 1e-12) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))) <= atol)


def n_qubits_of(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim != 1 << n:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def apply_unitary(rho: np.ndarray, u: np.ndarray, targets: list[int]) -> np.ndarray:
    """Conjugate rho by a k-qubit gate acting on the given target qubits.

    targets[0] corresponds to the most significant bit of u's basis index.
    """
    rho = np.asarray(rho, dtype=complex)
    u = np.asarray(u, dtype=complex)
    n = n_qubits_of(rho.shape[0])
    k = len(targets)
    if len(set(targets)) != k:
        raise ValueError(f"duplicate targets: {targets}")
    if any(not 0 <= q < n for q in targets):
        raise ValueError(f"targets {targets} out of range for {n} qubits")
    if u.shape != (1 << k, 1 << k):
        raise ValueError(f"gate shape {u.shape} does not match {k} targets")

    letters = string.ascii_letters
    ut = u.reshape((2,) * (2 * k))
    t = rho.reshape((2,) * (2 * n))

    # row side: qubit q lives on axis n-1-q; col side on axis 2n-1-q
    for side_offset, gate in ((0, ut), (n, ut.conj())):
        idx = list(letters[:2 * n])
        out_idx = idx.copy()
        g_out, g_in = [], []
        for m, q in enumerate(targets):
            ax = side_offset + (n - 1 - q)
            fresh = letters[2 * n + m]
            g_out.append(fresh)
            g_in.append(idx[ax])
            out_idx[ax] = fresh
        sub = "".join(g_out + g_in) + "," + "".join(idx) + "->" + "".join(out_idx)
        t = np.einsum(sub, gate, t)
    return t.reshape(rho.shape)
