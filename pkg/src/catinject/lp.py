"""Dense two-phase revised simplex for equality-constrained L1 minimization:

    minimize sum_j |x_j|   subject to   A x = b,

solved over the split x = x⁺ - x⁻ with x± >= 0.

The Pauli-expectation LPs this serves are massively primal-degenerate, so
the solver works on a deterministically perturbed right-hand side (which
makes ratio-test minima unique and pivots productive) and then re-fixes the
final basis on the exact b: dual feasibility does not involve b, so the
polished vertex is optimal for the original problem. Wide instances run
through exact column generation with warm-started restricted masters; the
final duals certify optimality over the full column set.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_REFACTOR_EVERY = 64
_PIVOT_TOL = 1e-9
_FEAS_TOL = 1e-9
_GAP_TOL = 1e-6
_PERTURB_SCALE = 1e-7
_COLGEN_THRESHOLD = 4096
_COLGEN_INITIAL = 2048
_COLGEN_BATCH = 2048


class LpInfeasibleError(RuntimeError):
    """Phase-1 optimum is nonzero: the constraints A x = b are inconsistent."""


class _SingularBasisError(RuntimeError):
    pass


@dataclass
class LpSolution:
    objective: float
    x: np.ndarray
    iterations: int
    residual: float
    duals: np.ndarray


def _perturbation(m: int) -> np.ndarray:
    rng = np.random.default_rng(987654321)
    return _PERTURB_SCALE * (1.0 + rng.random(m))


class _L1Simplex:
    """Columns 0..N-1 are +A, N..2N-1 are -A, then m phase-1 artificials.

    `warm_basis` holds (column, sign) pairs with sign=0 for artificials; it
    lets a caller restart after appending columns to A (a feasible basis
    stays feasible when the column set only grows) or swap in a different
    right-hand side under a known-good basis.
    """

    def __init__(self, A: np.ndarray, b: np.ndarray, tol: float, max_iter: int,
                 pivot_tol: float = _PIVOT_TOL,
                 warm_basis: list[tuple[int, int]] | None = None):
        self.A = np.ascontiguousarray(A, dtype=np.float64)
        self.m, self.N = self.A.shape
        self.nv = 2 * self.N
        self.tol = tol
        self.pivot_tol = pivot_tol
        self.max_iter = max_iter
        self.art_sign = np.where(b >= 0, 1.0, -1.0)
        self.b = np.asarray(b, dtype=np.float64)
        self.iterations = 0
        self.warm = False
        if warm_basis is not None:
            self.basis = np.array(
                [
                    self.nv + col if sign == 0
                    else (col if sign > 0 else self.N + col)
                    for col, sign in warm_basis
                ]
            )
            self._refactor()
            if self.xB_raw.min() < -1e-7:
                raise _SingularBasisError("warm basis not primal feasible")
            self.warm = True
        else:
            self.basis = np.arange(self.nv, self.nv + self.m)
            self.xB = np.abs(b).astype(np.float64)
            self.xB_raw = self.xB.copy()
            self.Binv = np.diag(self.art_sign).astype(np.float64)
        self.weights = np.ones(self.nv)  # Devex reference weights

    def basis_signature(self) -> list[tuple[int, int]]:
        out = []
        for j in self.basis:
            if j >= self.nv:
                out.append((int(j - self.nv), 0))
            elif j >= self.N:
                out.append((int(j - self.N), -1))
            else:
                out.append((int(j), 1))
        return out

    def column(self, j: int) -> np.ndarray:
        if j < self.N:
            return self.A[:, j]
        if j < self.nv:
            return -self.A[:, j - self.N]
        e = np.zeros(self.m)
        e[j - self.nv] = self.art_sign[j - self.nv]
        return e

    def _refactor(self) -> None:
        B = np.empty((self.m, self.m))
        for i, j in enumerate(self.basis):
            B[:, i] = self.column(j)
        try:
            self.Binv = np.linalg.inv(B)
        except np.linalg.LinAlgError:
            raise _SingularBasisError("basis became singular")
        self.xB_raw = self.Binv @ self.b
        self.xB = np.maximum(self.xB_raw, 0.0)

    def _duals(self, costs: np.ndarray) -> np.ndarray:
        return costs[self.basis] @ self.Binv

    def _entering(self, costs: np.ndarray, barred: np.ndarray, bland: bool) -> int:
        y = self._duals(costs)
        s = y @ self.A
        reduced = np.concatenate([costs[: self.N] - s, costs[self.N: self.nv] + s])
        reduced[barred[: self.nv]] = np.inf
        in_basis = np.zeros(self.nv, dtype=bool)
        real = self.basis[self.basis < self.nv]
        in_basis[real] = True
        reduced[in_basis] = np.inf
        if bland:
            cand = np.flatnonzero(reduced < -self.tol)
            return int(cand[0]) if cand.size else -1
        # Devex pricing: largest reduced-cost to reference-weight ratio
        cand = reduced < -self.tol
        if not cand.any():
            return -1
        score = np.where(cand, reduced * reduced / self.weights, -np.inf)
        return int(np.argmax(score))

    def _leaving(self, d: np.ndarray, bland: bool) -> int:
        pos = np.flatnonzero(d > self.pivot_tol)
        if pos.size == 0:
            raise RuntimeError("unbounded LP (impossible for the L1 form)")
        xb = np.maximum(self.xB[pos], 0.0)
        ratios = xb / d[pos]
        if bland:
            # exact ratio test with lowest-index tie break (anti-cycling)
            theta = ratios.min()
            ties = pos[ratios <= theta * (1 + 1e-12) + 1e-15]
            return int(ties[np.argmin(self.basis[ties])])
        # Harris two-pass: relax by a feasibility tolerance, take the
        # largest pivot among the near-ties for numerical stability
        cutoff = ((xb + _FEAS_TOL) / d[pos]).min()
        near = pos[ratios <= cutoff]
        return int(near[np.argmax(d[near])])

    def _update_devex(self, e: int, r: int, d: np.ndarray) -> None:
        alpha_e = d[r]
        if abs(alpha_e) < 1e-12:
            return
        w_e = self.weights[e]
        gamma = max(w_e / (alpha_e * alpha_e), 1.0)
        rho = self.Binv[r] @ self.A  # pivot row over the + columns
        grow = rho * rho * gamma
        np.maximum(self.weights[: self.N], grow, out=self.weights[: self.N])
        np.maximum(self.weights[self.N:], grow, out=self.weights[self.N:])
        leaving = self.basis[r]
        if leaving < self.nv:
            self.weights[leaving] = max(gamma, 1.0)
        if self.weights.max() > 1e8:
            self.weights[:] = 1.0

    def _pivot(self, e: int, r: int, d: np.ndarray) -> None:
        self._update_devex(e, r, d)
        theta = max(self.xB[r], 0.0) / d[r]
        self.xB -= theta * d
        self.xB[r] = theta
        np.maximum(self.xB, 0.0, out=self.xB)
        row = self.Binv[r] / d[r]
        self.Binv -= np.outer(d, row)
        self.Binv[r] = row
        self.basis[r] = e

    def _duality_gap(self, costs: np.ndarray) -> float:
        # Rigorous L1 lower bound from any y: scale into the dual-feasible
        # region |A^T y| <= 1, then gap = obj - b.y/(1+delta).
        y = self._duals(costs)
        delta = max(0.0, float(np.abs(y @ self.A).max()) - 1.0)
        lower = float(self.b @ y) / (1.0 + delta)
        obj = float(costs[self.basis] @ self.xB)
        return obj - lower

    def _run_phase(self, costs: np.ndarray, barred: np.ndarray,
                   gap_exit: bool = False) -> None:
        stall = 0
        bland = False
        prev_obj = np.inf
        since_refactor = 0
        barred = barred.copy()  # may gain temporary numerical bans
        banned_any = False
        while True:
            if self.iterations >= self.max_iter:
                raise RuntimeError(f"simplex exceeded {self.max_iter} iterations")
            e = self._entering(costs, barred, bland)
            if e < 0:
                if not banned_any:
                    return
                # retry the numerically-banned columns against a fresh basis
                barred[: self.nv] = False
                banned_any = False
                self._refactor()
                since_refactor = 0
                continue
            d = self.Binv @ self.column(e)
            r = self._leaving(d, bland)
            if d[r] < 1e-6 * max(1.0, float(np.abs(d).max())):
                # suspicious pivot: refresh the factorization and retry once,
                # then ban the column for now (re-checked before optimality)
                self._refactor()
                since_refactor = 0
                d = self.Binv @ self.column(e)
                pos = d > self.pivot_tol
                r = self._leaving(d, bland) if pos.any() else -1
                if r < 0 or d[r] < 1e-6 * max(1.0, float(np.abs(d).max())):
                    barred[e] = True
                    banned_any = True
                    continue
            self._pivot(e, r, d)
            self.iterations += 1
            since_refactor += 1
            if since_refactor >= _REFACTOR_EVERY:
                self._refactor()
                since_refactor = 0
            obj = float(costs[self.basis] @ self.xB)
            # progress threshold is scale-aware: refactor noise near the
            # optimum must count as stalling, not as improvement
            if obj < prev_obj - 1e-9 * max(1.0, abs(prev_obj)):
                prev_obj = obj
                stall = 0
            else:
                prev_obj = min(prev_obj, obj)
                stall += 1
                if stall > 400:
                    bland = True
            if gap_exit and (
                (stall > 0 and stall % 500 == 0) or self.iterations % 4096 == 0
            ):
                self._refactor()
                since_refactor = 0
                if self._duality_gap(costs) <= _GAP_TOL * max(1.0, abs(obj)):
                    return

    def solve(self) -> LpSolution:
        if not self.warm:
            costs1 = np.zeros(self.nv + self.m)
            costs1[self.nv:] = 1.0
            barred = np.zeros(self.nv + self.m, dtype=bool)
            self._run_phase(costs1, barred)
            self._refactor()
            phase1 = float(costs1[self.basis] @ self.xB)
            if phase1 > 1e-7:
                raise LpInfeasibleError(f"phase-1 optimum {phase1:.3e} > 0")
            self._drive_out_artificials()
        costs2 = np.zeros(self.nv + self.m)
        costs2[: self.nv] = 1.0
        barred = np.zeros(self.nv + self.m, dtype=bool)
        barred[self.nv:] = True
        self._run_phase(costs2, barred, gap_exit=True)
        self._refactor()
        x = np.zeros(self.N)
        for val, j in zip(self.xB, self.basis):
            if j < self.N:
                x[j] += val
            elif j < self.nv:
                x[j - self.N] -= val
        residual = float(np.abs(self.A @ x - self.b).max())
        return LpSolution(
            objective=float(np.abs(x).sum()),
            x=x,
            iterations=self.iterations,
            residual=residual,
            duals=self._duals(costs2),
        )

    def _drive_out_artificials(self) -> None:
        # Degenerate zero-level artificials are swapped for any real column
        # with a usable pivot element; rows with none are redundant and the
        # artificial stays pinned at zero (it is barred in phase 2).
        for r in np.flatnonzero(self.basis >= self.nv):
            row = self.Binv[r] @ self.A
            cand = np.flatnonzero(np.abs(row) > 1e-7)
            if cand.size == 0:
                continue
            e = int(cand[np.argmax(np.abs(row[cand]))])
            d = self.Binv @ self.column(e)
            if abs(d[r]) <= self.pivot_tol:
                continue
            self._pivot(e, r, d)
        self._refactor()


def _attempt_solve(A, b, tol, max_iter, warm_basis):
    """Retry ladder over pivot tolerances; returns (solution, signature)."""
    last_exc = None
    for attempt, pivot_tol in enumerate((_PIVOT_TOL, 1e-7, 1e-6)):
        try:
            solver = _L1Simplex(
                A, b, tol=tol, max_iter=max_iter, pivot_tol=pivot_tol,
                warm_basis=warm_basis if attempt == 0 else None,
            )
            return solver.solve(), solver.basis_signature()
        except _SingularBasisError as exc:
            last_exc = exc
            continue
    raise RuntimeError(f"simplex basis repeatedly singular: {last_exc}")


def _solve_dense(A: np.ndarray, b: np.ndarray, tol: float, max_iter: int,
                 warm_basis=None) -> tuple[LpSolution, list[tuple[int, int]]]:
    """Solve on a perturbed RHS, then polish the basis on the exact RHS."""
    b_pert = b + _perturbation(b.shape[0])
    _, signature = _attempt_solve(A, b_pert, tol, max_iter, warm_basis)
    try:
        polish = _L1Simplex(A, b, tol=tol, max_iter=max_iter, warm_basis=signature)
        solution = polish.solve()
        signature = polish.basis_signature()
    except _SingularBasisError:
        # perturbed optimal basis infeasible for the exact RHS: re-solve
        solution, signature = _attempt_solve(A, b, tol, max_iter, None)
    if solution.residual > 1e-7:
        raise RuntimeError(f"simplex residual {solution.residual:.3e} too large")
    return solution, signature


def _solve_column_generation(A: np.ndarray, b: np.ndarray, tol: float,
                             max_iter: int) -> LpSolution:
    """Restricted master + full pricing; exact once no reduced cost violates.

    Rounds run on the perturbed RHS and warm-start from the previous basis;
    the final basis is polished on the exact RHS. The returned duals certify
    optimality over the full column set.
    """
    m, N = A.shape
    b_pert = b + _perturbation(m)
    order = np.argsort(-np.abs(b @ A))
    work = order[:_COLGEN_INITIAL].copy()
    total_iterations = 0
    warm = None
    for _ in range(400):
        try:
            sol, signature = _attempt_solve(A[:, work], b_pert, tol, max_iter, warm)
        except LpInfeasibleError:
            missing = np.setdiff1d(order, work, assume_unique=False)
            if missing.size == 0:
                raise
            work = np.concatenate([work, missing[:2 * _COLGEN_BATCH]])
            warm = None
            continue
        total_iterations += sol.iterations
        y = sol.duals
        violation = np.abs(y @ A) - 1.0
        violation[work] = -np.inf
        worst = np.flatnonzero(violation > tol)
        if worst.size == 0:
            final, _ = _solve_dense(A[:, work], b, tol, max_iter, warm_basis=signature)
            total_iterations += final.iterations
            x = np.zeros(N)
            x[work] = final.x
            return LpSolution(
                objective=final.objective,
                x=x,
                iterations=total_iterations,
                residual=final.residual,
                duals=final.duals,
            )
        add = worst[np.argsort(-violation[worst])][:_COLGEN_BATCH]
        work = np.concatenate([work, add])
        warm = signature
    raise RuntimeError("column generation did not converge")


def minimize_l1(A: np.ndarray, b: np.ndarray, tol: float = 1e-8,
                max_iter: int = 500_000) -> LpSolution:
    """Solve min Σ|x| s.t. A x = b to optimality; raises LpInfeasibleError."""
    A = np.asarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if A.ndim != 2 or b.shape != (A.shape[0],):
        raise ValueError("A must be m x N with b of length m")
    if A.shape[1] > _COLGEN_THRESHOLD:
        return _solve_column_generation(A, b, tol, max_iter)
    solution, _ = _solve_dense(A, b, tol, max_iter)
    return solution
