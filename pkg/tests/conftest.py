"""Shared problem generators and check helpers for the test suite."""

import numpy as np
import scipy.sparse as sp

import ricadi as rc

INVARIANT_TOL = 1e-10

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def stable_sparse(n, seed, density=0.1):
    """Random sparse matrix made stable by a diagonally dominant shift."""
    rs = np.random.RandomState(seed)
    M = sp.random(n, n, density=density, random_state=rs, format="csr")
    shift = float(abs(M).sum(axis=1).max()) + 1.0
    return (M - shift * sp.identity(n, format="csr")).tocsr()


def spd_sparse(n, seed, density=0.1):
    """Random sparse symmetric positive definite matrix (diagonally dominant)."""
    rs = np.random.RandomState(seed)
    M = sp.random(n, n, density=density, random_state=rs, format="csr")
    S = 0.5 * (M + M.T)
    shift = float(abs(S).sum(axis=1).max()) + 1.0
    return (S + shift * sp.identity(n, format="csr")).tocsr()


def random_problem(seed, n=30, m=1, p=1, generalized=False, complex_data=False):
    """Random stable test problem; E is SPD when generalized is set.

    Complex problems add an imaginary Hermitian part to A, which leaves the
    field of values' real part (hence stability) untouched.
    """
    rng = np.random.default_rng(seed)
    A = stable_sparse(n, seed)
    if complex_data:
        S = spd_sparse(n, seed + 7)
        A = (A + 0.3j * S).tocsr()
    B = rng.standard_normal((n, m)) if m else None
    C = rng.standard_normal((p, n))
    if complex_data:
        if m:
            B = B + 1j * rng.standard_normal((n, m))
        C = C + 1j * rng.standard_normal((p, n))
    E = spd_sparse(n, seed + 1) if generalized else None
    return rc.ProblemSpec(A=A, B=B, C=C, E=E)


def dense_x(result_or_state):
    Z = getattr(result_or_state, "Z")
    return Z @ Z.conj().T


def rel2(X, Y):
    """Relative spectral-norm distance of two dense matrices."""
    denom = max(np.linalg.norm(Y, 2), 1e-300)
    return float(np.linalg.norm(np.asarray(X) - np.asarray(Y), 2) / denom)


def assert_invariants(state, problem, tol=INVARIANT_TOL):
    checks = rc.brad_residual_check(state, problem)
    bad = {k: v for k, v in checks.items() if not v <= tol}
    assert not bad, f"state invariants violated: {bad}"


class RecordingShifts:
    """Wraps a shift source and records every emitted batch in order."""

    def __init__(self, inner):
        self.inner = inner
        self.emitted = []
        self.batches = []

    def next_shifts(self, state, problem, batch=1, pair_complex=False):
        out = self.inner.next_shifts(state, problem, batch=batch,
                                     pair_complex=pair_complex)
        self.emitted.extend(out)
        self.batches.append(list(out))
        return out


def scalar_problem():
    """The 1-by-1 problem A=-1, B=1, C=1 with closed-form solution sqrt(2)-1."""
    A = sp.csr_matrix(np.array([[-1.0]]))
    return rc.ProblemSpec(A=A, B=np.array([[1.0]]), C=np.array([[1.0]]))
