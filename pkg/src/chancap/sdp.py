"""Dense primal-dual interior-point solver for small block-structured SDPs
over real symmetric cones, plus a complex-Hermitian embedding layer and a
dual (LMI) form modeling helper.

Standard form:

    min/max  <C, X>   s.t.  <A_i, X> = b_i,  X >= 0 block-diagonal,

with the dual  max b.y  s.t.  C - sum_i y_i A_i = S >= 0  (min sense).

The solver follows the usual path: an HKM scaling direction with a Mehrotra
predictor-corrector step, dense Cholesky on the Schur complement, and a
big-M artificial variable that makes the homogenized primal strictly
feasible from the identity starting point.  Infeasibility is flagged when
the M-weighted artificial variable stays large at convergence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla


class SdpNumericalError(RuntimeError):
    """Unrecoverable failure inside the Newton system."""


@dataclass
class SdpSettings:
    max_iters: int = 200
    tol_gap: float = 1e-8
    tol_feas: float = 1e-8
    big_m: float = 1e6
    infeas_threshold: float = 1e-4
    step_frac: float = 0.98
    # quality (max of relative gap and residuals) still acceptable to the
    # modeling layer when the path stalls short of tol_gap on a degenerate face
    accept_loose: float = 3e-5
    verbose: bool = False


@dataclass
class SdpProblem:
    """Block-diagonal SDP data.  Constraints map block index -> coefficient
    matrix; every matrix must be symmetric (real) or Hermitian (complex)."""

    blocks: list[int]
    C: list[np.ndarray]
    constraints: list[tuple[dict[int, np.ndarray], float]]
    sense: str = "min"

    def __post_init__(self):
        if self.sense not in ("min", "max"):
            raise ValueError("sense must be 'min' or 'max'")
        if len(self.C) != len(self.blocks):
            raise ValueError("objective block count mismatch")
        total = sum(n * n for n in self.blocks)
        if len(self.constraints) > total:
            raise ValueError("more constraints than total dimension squared")
        for j, (n, c) in enumerate(zip(self.blocks, self.C)):
            if c.shape != (n, n):
                raise ValueError(f"objective block {j} has wrong shape")
        for k, (amap, bk) in enumerate(self.constraints):
            if not np.isfinite(bk):
                raise ValueError(f"constraint {k} has non-finite value")
            if not amap:
                raise ValueError(f"constraint {k} touches no block")
            for j, a in amap.items():
                if a.shape != (self.blocks[j], self.blocks[j]):
                    raise ValueError(f"constraint {k} block {j} has wrong shape")

    @property
    def is_complex(self) -> bool:
        mats = list(self.C) + [a for amap, _ in self.constraints for a in amap.values()]
        return any(np.iscomplexobj(m) and np.abs(m.imag).max() > 0 for m in mats)


@dataclass
class SdpSolution:
    X: list[np.ndarray]
    y: np.ndarray
    S: list[np.ndarray]
    primal_obj: float
    dual_obj: float
    gap: float
    status: str
    iterations: int = 0
    artificial: float = 0.0
    quality: float = np.inf  # max of relative gap and residuals at the best iterate


# ---------------------------------------------------------------------------
# Complex-Hermitian embedding


def _embed_herm(h: np.ndarray) -> np.ndarray:
    """Real embedding [[Re, -Im], [Im, Re]] of a Hermitian matrix."""
    re, im = np.real(h), np.imag(h)
    top = np.hstack([re, -im])
    bot = np.hstack([im, re])
    return np.vstack([top, bot])


def extract_complex_block(xr: np.ndarray) -> np.ndarray:
    """Invert the real embedding by averaging over its symmetry."""
    n = xr.shape[0] // 2
    a, b = xr[:n, :n], xr[:n, n:]
    c, d = xr[n:, :n], xr[n:, n:]
    return (a + d) / 2 + 1j * (c - b) / 2


def embed_complex(problem: SdpProblem) -> SdpProblem:
    """Lower a problem with complex Hermitian blocks to the real cone.

    Every block doubles in size; the objective and constraint matrices carry
    a factor 1/2 so that inner products, and hence the optimal value and the
    right-hand sides b, match the complex program exactly.
    """
    for c in problem.C:
        if np.linalg.norm(c - c.conj().T) > 1e-10 * max(1.0, np.linalg.norm(c)):
            raise ValueError("objective block is not Hermitian")
    for amap, _ in problem.constraints:
        for a in amap.values():
            if np.linalg.norm(a - a.conj().T) > 1e-10 * max(1.0, np.linalg.norm(a)):
                raise ValueError("constraint block is not Hermitian")
    blocks = [2 * n for n in problem.blocks]
    c_new = [_embed_herm(c) / 2.0 for c in problem.C]
    cons = [({j: _embed_herm(a) / 2.0 for j, a in amap.items()}, bk)
            for amap, bk in problem.constraints]
    return SdpProblem(blocks=blocks, C=c_new, constraints=cons, sense=problem.sense)


# ---------------------------------------------------------------------------
# Solver core


def _sym(a: np.ndarray) -> np.ndarray:
    return (a + a.T) / 2


def _safe_sqrt_factors(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return (R, Rinv) with R Rᵀ = x, clipping rounding-level negative
    eigenvalues of a nominally positive definite matrix."""
    vals, vecs = np.linalg.eigh(_sym(x))
    floor = max(vals.max(), 1.0) * 1e-15
    vals = np.clip(vals, floor, None)
    sq = np.sqrt(vals)
    return vecs * sq, (vecs / sq).T


def _max_step(x: np.ndarray, dx: np.ndarray) -> float:
    """Largest alpha with x + alpha dx >= 0 (x symmetric positive definite)."""
    try:
        l = np.linalg.cholesky(x)
        w = sla.solve_triangular(l, dx, lower=True)
        w = sla.solve_triangular(l, w.T, lower=True).T
    except np.linalg.LinAlgError:
        _, rinv = _safe_sqrt_factors(x)
        w = rinv @ dx @ rinv.T
    lam = np.linalg.eigvalsh(_sym(w)).min()
    if lam >= -1e-14:
        return np.inf
    return 1.0 / (-lam)


def _pd_inverse(s: np.ndarray) -> np.ndarray:
    try:
        c, low = sla.cho_factor(s, lower=True)
        inv = sla.cho_solve((c, low), np.eye(s.shape[0]))
    except np.linalg.LinAlgError:
        _, rinv = _safe_sqrt_factors(s)
        inv = rinv.T @ rinv
    return _sym(inv)


class _Work:
    """Preassembled constraint data for one solve call (min sense, with the
    artificial big-M block appended).  Constraint rows are equilibrated to
    unit scale; the dual unscales with the same factors."""

    def __init__(self, problem: SdpProblem, settings: SdpSettings):
        sign = 1.0 if problem.sense == "min" else -1.0
        self.sign = sign
        self.nb = len(problem.blocks) + 1
        self.sizes = list(problem.blocks) + [1]
        self.C = [_sym(np.real(c)) * sign for c in problem.C]
        self.C.append(np.array([[settings.big_m]]))
        m = len(problem.constraints)
        self.m = m
        self.row_scale = np.ones(m)
        for k, (amap, _) in enumerate(problem.constraints):
            nrm = np.sqrt(sum(np.linalg.norm(a) ** 2 for a in amap.values()))
            if nrm > 1e-12:
                self.row_scale[k] = 1.0 / nrm
        self.b = np.array([bk for _, bk in problem.constraints], dtype=float) * self.row_scale
        # artificial column keeps X = I exactly feasible at the start
        art = np.zeros(m)
        for k, (amap, bk) in enumerate(problem.constraints):
            art[k] = self.row_scale[k] * (bk - sum(np.trace(np.real(a)).real
                                                   for a in amap.values()))
        # stack per-block constraint data
        self.idx: list[np.ndarray] = []
        self.T: list[np.ndarray] = []
        for j, n in enumerate(problem.blocks):
            rows = [k for k, (amap, _) in enumerate(problem.constraints) if j in amap]
            self.idx.append(np.array(rows, dtype=int))
            if rows:
                self.T.append(np.stack([self.row_scale[k]
                                        * _sym(np.real(problem.constraints[k][0][j]))
                                        for k in rows]))
            else:
                self.T.append(np.zeros((0, n, n)))
        live = np.abs(art) > 1e-14
        self.idx.append(np.nonzero(live)[0])
        self.T.append(art[live].reshape(-1, 1, 1))

    def apply_a(self, mats: list[np.ndarray]) -> np.ndarray:
        out = np.zeros(self.m)
        for j in range(self.nb):
            if len(self.idx[j]):
                out[self.idx[j]] += np.einsum("kab,ba->k", self.T[j], mats[j])
        return out

    def apply_at(self, y: np.ndarray) -> list[np.ndarray]:
        out = []
        for j in range(self.nb):
            if len(self.idx[j]):
                out.append(np.einsum("k,kab->ab", y[self.idx[j]], self.T[j]))
            else:
                out.append(np.zeros((self.sizes[j], self.sizes[j])))
        return out

    def schur(self, x: list[np.ndarray], sinv: list[np.ndarray]) -> np.ndarray:
        mmat = np.zeros((self.m, self.m))
        for j in range(self.nb):
            if not len(self.idx[j]):
                continue
            w = np.matmul(np.matmul(x[j][None, :, :], self.T[j]), sinv[j][None, :, :])
            mj = np.einsum("lab,kba->kl", self.T[j], w)
            mmat[np.ix_(self.idx[j], self.idx[j])] += mj
        return _sym(mmat)


def solve(problem: SdpProblem, settings: SdpSettings | None = None) -> SdpSolution:
    """Run the interior-point method.  Raises SdpNumericalError on an
    unrecoverable Newton-system failure; non-convergence is reported through
    the status field, never silently."""
    if problem.is_complex:
        raise ValueError("complex problem: lower it with embed_complex first")
    settings = settings or SdpSettings()
    w = _Work(problem, settings)
    nt = sum(w.sizes)

    x = [np.eye(n) for n in w.sizes]
    s = []
    for j, n in enumerate(w.sizes):
        eta = max(10.0, np.sqrt(n), np.linalg.norm(w.C[j]))
        if len(w.idx[j]):
            eta = max(eta, max(np.linalg.norm(t) for t in w.T[j]))
        s.append(eta * np.eye(n))
    y = np.zeros(w.m)

    bnorm = 1.0 + np.linalg.norm(w.b)
    cnorm = 1.0 + np.sqrt(sum(np.linalg.norm(c) ** 2 for c in w.C))

    status = "max_iters"
    it = 0
    stalls = 0
    best = None  # (quality, X, y, S)
    best_quality = np.inf
    for it in range(1, settings.max_iters + 1):
        sinv = [_pd_inverse(sj) for sj in s]
        rp = w.b - w.apply_a(x)
        aty = w.apply_at(y)
        rd = [w.C[j] - aty[j] - s[j] for j in range(w.nb)]
        gap = sum(np.sum(x[j] * s[j]) for j in range(w.nb))
        mu = gap / nt
        pobj = sum(np.sum(w.C[j] * x[j]) for j in range(w.nb))
        dobj = float(w.b @ y)
        rel_gap = gap / (1.0 + abs(pobj) + abs(dobj))
        prim_res = np.linalg.norm(rp) / bnorm
        dual_res = np.sqrt(sum(np.linalg.norm(r) ** 2 for r in rd)) / cnorm
        quality = max(rel_gap, prim_res, dual_res)
        if settings.verbose:
            print(f"iter {it:3d}  pobj {pobj:+.9e}  dobj {dobj:+.9e} "
                  f"gap {rel_gap:.2e}  pres {prim_res:.2e}  dres {dual_res:.2e}")
        if quality < best_quality:
            if quality < 0.9 * best_quality:
                stalls = 0
            best_quality = quality
            best = ([xj.copy() for xj in x], y.copy(), [sj.copy() for sj in s])
        else:
            stalls += 1
        if rel_gap <= settings.tol_gap and prim_res <= settings.tol_feas \
                and dual_res <= settings.tol_feas:
            status = "optimal"
            break
        if stalls >= 8 and best_quality < 1e-3:
            break  # end-game stall on a degenerate face

        mmat = w.schur(x, sinv)
        jitter = 0.0
        base = np.mean(np.diag(mmat)) + 1e-300
        fact = None
        while True:
            try:
                fact = sla.cho_factor(mmat + jitter * base * np.eye(w.m), lower=True)
                break
            except np.linalg.LinAlgError:
                jitter = 1e-13 if jitter == 0.0 else jitter * 100.0
                if jitter > 1e-6:
                    raise SdpNumericalError(
                        "Schur complement not positive definite "
                        f"(iteration {it}, jitter {jitter:.1e})")

        def solve_schur(rhs: np.ndarray) -> np.ndarray:
            dy = sla.cho_solve(fact, rhs)
            resid = rhs - mmat @ dy
            if np.linalg.norm(resid) > 1e-12 * (1.0 + np.linalg.norm(rhs)):
                dy = dy + sla.cho_solve(fact, resid)
            return dy

        def direction(sigma_mu: float, corr: list[np.ndarray] | None):
            rhs = w.b - sigma_mu * w.apply_a(sinv)
            v = []
            for j in range(w.nb):
                vj = x[j] @ rd[j] @ sinv[j]
                if corr is not None:
                    vj = vj + corr[j] @ sinv[j]
                v.append(vj)
            rhs = rhs + w.apply_a(v)
            dy = solve_schur(rhs)
            atdy = w.apply_at(dy)
            ds = [rd[j] - atdy[j] for j in range(w.nb)]
            dx = []
            for j in range(w.nb):
                dxj = sigma_mu * sinv[j] - x[j] - x[j] @ ds[j] @ sinv[j]
                if corr is not None:
                    dxj = dxj - corr[j] @ sinv[j]
                dx.append(_sym(dxj))
            return dx, dy, ds

        # predictor
        dxa, dya, dsa = direction(0.0, None)
        ap = min(1.0, settings.step_frac * min(_max_step(x[j], dxa[j]) for j in range(w.nb)))
        ad = min(1.0, settings.step_frac * min(_max_step(s[j], dsa[j]) for j in range(w.nb)))
        mu_aff = sum(np.sum((x[j] + ap * dxa[j]) * (s[j] + ad * dsa[j]))
                     for j in range(w.nb)) / nt
        sigma = float(np.clip((mu_aff / mu) ** 3, 1e-10, 0.9999))

        # corrector
        corr = [dxa[j] @ dsa[j] for j in range(w.nb)]
        dx, dy, ds = direction(sigma * mu, corr)
        ap = min(1.0, settings.step_frac * min(_max_step(x[j], dx[j]) for j in range(w.nb)))
        ad = min(1.0, settings.step_frac * min(_max_step(s[j], ds[j]) for j in range(w.nb)))
        if ap < 1e-6 and ad < 1e-6:
            break  # directions no longer move the iterate
        for j in range(w.nb):
            x[j] = _sym(x[j] + ap * dx[j])
            s[j] = _sym(s[j] + ad * ds[j])
        y = y + ad * dy

    if best is not None:
        x, y, s = best
    artificial = float(x[-1][0, 0])
    pobj = sum(np.sum(w.C[j] * x[j]) for j in range(w.nb - 1))
    dobj = float(w.b @ y)
    gap = sum(np.sum(x[j] * s[j]) for j in range(w.nb))
    if status == "optimal" and artificial * settings.big_m > settings.infeas_threshold:
        status = "infeasible"
    sign = w.sign
    return SdpSolution(
        X=[xj.copy() for xj in x[:-1]],
        y=sign * (y * w.row_scale),
        S=[sj.copy() for sj in s[:-1]],
        primal_obj=sign * pobj,
        dual_obj=sign * dobj,
        gap=max(gap, abs(pobj - dobj)),
        status=status,
        iterations=it,
        artificial=artificial,
        quality=best_quality,
    )


def verify_solution(problem: SdpProblem, solution: SdpSolution) -> dict:
    """Report primal/dual feasibility residuals, complementarity, and cone
    violations of a candidate solution."""
    sign = 1.0 if problem.sense == "min" else -1.0
    prim = []
    for amap, bk in problem.constraints:
        val = sum(np.real(np.sum(a.conj() * solution.X[j])) for j, a in amap.items())
        prim.append(val - bk)
    prim = np.asarray(prim)
    dual = []
    for j, n in enumerate(problem.blocks):
        aty = np.zeros((n, n), dtype=complex)
        for k, (amap, _) in enumerate(problem.constraints):
            if j in amap:
                aty += sign * solution.y[k] * amap[j]
        dual.append(np.linalg.norm(sign * problem.C[j] - aty - solution.S[j]))
    comp = sum(np.real(np.sum(solution.X[j].conj() * solution.S[j]))
               for j in range(len(problem.blocks)))
    min_eig_x = min(np.linalg.eigvalsh((xj + xj.conj().T) / 2).min() for xj in solution.X)
    min_eig_s = min(np.linalg.eigvalsh((sj + sj.conj().T) / 2).min() for sj in solution.S)
    return {
        "primal_residual": float(np.linalg.norm(prim)),
        "primal_residual_rel": float(np.linalg.norm(prim)
                                     / (1.0 + np.linalg.norm([b for _, b in problem.constraints]))),
        "dual_residual": float(np.sqrt(sum(d**2 for d in dual))),
        "complementarity": float(comp),
        "min_eig_X": float(min_eig_x),
        "min_eig_S": float(min_eig_s),
        "objective_gap": float(abs(solution.primal_obj - solution.dual_obj)),
    }


# ---------------------------------------------------------------------------
# Hermitian/symmetric bases


def hermitian_basis(d: int, real: bool = False) -> list[np.ndarray]:
    """Orthonormal basis (trace inner product) of Hermitian (or real
    symmetric) d x d matrices."""
    out = []
    for i in range(d):
        e = np.zeros((d, d), dtype=complex)
        e[i, i] = 1.0
        out.append(e)
    for i in range(d):
        for j in range(i + 1, d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = e[j, i] = 1.0 / np.sqrt(2.0)
            out.append(e)
            if not real:
                e = np.zeros((d, d), dtype=complex)
                e[i, j] = -1j / np.sqrt(2.0)
                e[j, i] = 1j / np.sqrt(2.0)
                out.append(e)
    return out


def traceless_hermitian_basis(d: int, real: bool = False) -> list[np.ndarray]:
    """Orthonormal basis of the traceless Hermitian (or symmetric) subspace."""
    out = []
    for k in range(1, d):
        e = np.zeros((d, d), dtype=complex)
        e[np.diag_indices(k)] = 1.0
        e[k, k] = -k
        out.append(e / np.sqrt(k * (k + 1)))
    for b in hermitian_basis(d, real):
        if abs(np.trace(b)) < 1e-14:
            out.append(b)
    return out


# ---------------------------------------------------------------------------
# Dual (LMI) form modeling layer


@dataclass(eq=False)
class _Var:
    name: str
    start: int
    basis: list
    constant: object
    reconstruct: str  # 'matrix' | 'scalar'


class LmiProgram:
    """Model  max/min  c.y  s.t.  const_j + sum_k y_k F_{kj} >= 0  per block j,
    lowered to the standard-form primal whose dual it is.

    Variables are real coordinate vectors over explicit matrix bases, so a
    Hermitian variable in an otherwise real block keeps the block real only
    when declared with real=True.  Blocks whose data end up complex are
    lowered through the Hermitian embedding automatically.
    """

    def __init__(self):
        self._vars: list[_Var] = []
        self._blocks: list[tuple[np.ndarray, list]] = []  # (const, [(var, linmap)])
        self._obj: list[tuple[_Var, np.ndarray | float]] = []
        self._sense = "max"
        self._m = 0

    # -- variables

    def _add(self, name, basis, constant, reconstruct) -> _Var:
        var = _Var(name=name, start=self._m, basis=basis, constant=constant,
                   reconstruct=reconstruct)
        self._m += len(basis)
        self._vars.append(var)
        return var

    def add_hermitian(self, name: str, d: int, real: bool = False,
                      trace: float | None = None) -> _Var:
        if trace is None:
            basis = hermitian_basis(d, real)
            const = np.zeros((d, d), dtype=complex)
        else:
            basis = traceless_hermitian_basis(d, real)
            const = trace / d * np.eye(d, dtype=complex)
        return self._add(name, basis, const, "matrix")

    def add_hermitian_ptrace(self, name: str, d_keep: int, d_traced: int,
                             ptrace_value: np.ndarray, real: bool = False) -> _Var:
        """Hermitian variable on keep (x) traced with a fixed partial trace
        over the second factor."""
        basis = [np.kron(h, g) for h in hermitian_basis(d_keep, real)
                 for g in traceless_hermitian_basis(d_traced, real)]
        if real:
            # the symmetric sector also contains products of two imaginary
            # (antisymmetric) Hermitian elements, which are traceless anyway
            imag_keep = [h for h in hermitian_basis(d_keep, False)
                         if np.abs(h.imag).max() > 0]
            imag_traced = [g for g in hermitian_basis(d_traced, False)
                           if np.abs(g.imag).max() > 0]
            basis += [np.kron(h, g) for h in imag_keep for g in imag_traced]
        const = np.kron(np.asarray(ptrace_value, dtype=complex),
                        np.eye(d_traced) / d_traced)
        return self._add(name, basis, const, "matrix")

    def add_matrix(self, name: str, rows: int, cols: int, real: bool = False) -> _Var:
        basis = []
        for i in range(rows):
            for j in range(cols):
                e = np.zeros((rows, cols), dtype=complex)
                e[i, j] = 1.0
                basis.append(e)
                if not real:
                    e = np.zeros((rows, cols), dtype=complex)
                    e[i, j] = 1j
                    basis.append(e)
        return self._add(name, basis, np.zeros((rows, cols), dtype=complex), "matrix")

    def add_scalar(self, name: str) -> _Var:
        return self._add(name, [1.0], 0.0, "scalar")

    # -- constraints and objective

    def add_block(self, const: np.ndarray, terms: list):
        """PSD block const + sum over (var, linmap) terms; linmap=None means
        the variable's value enters the block unchanged."""
        self._blocks.append((np.asarray(const, dtype=complex), list(terms)))

    def set_objective(self, sense: str, coeffs: dict):
        """coeffs maps a variable to a matrix (contribution Re tr(coef† value))
        or a float for scalar variables."""
        if sense not in ("min", "max"):
            raise ValueError("sense must be 'min' or 'max'")
        self._sense = sense
        self._obj = [(var, coef) for var, coef in coeffs.items()]

    # -- lowering

    def _materialize(self):
        blocks = []
        for const, terms in self._blocks:
            n = const.shape[0]
            coefs = {}  # coordinate -> matrix
            shift = np.array(const, dtype=complex)
            for var, linmap in terms:
                lm = (lambda mat: mat) if linmap is None else linmap
                cvar = var.constant
                if var.reconstruct == "matrix" and np.linalg.norm(cvar) > 0:
                    shift = shift + lm(cvar)
                elif var.reconstruct == "scalar" and cvar:
                    shift = shift + lm(cvar)
                for k, be in enumerate(var.basis):
                    contrib = np.asarray(lm(be), dtype=complex)
                    if contrib.shape != (n, n):
                        raise ValueError(f"variable {var.name} maps to wrong block shape")
                    key = var.start + k
                    coefs[key] = coefs.get(key, 0) + contrib
            blocks.append((shift, coefs))
        return blocks

    def lower(self) -> SdpProblem:
        blocks = self._materialize()
        b = np.zeros(self._m)
        for var, coef in self._obj:
            for k, be in enumerate(var.basis):
                if var.reconstruct == "scalar":
                    b[var.start + k] += float(coef) * be
                else:
                    b[var.start + k] += float(np.real(np.sum(np.conj(coef) * be)))
        if self._sense == "min":
            b = -b
        sizes = []
        c_list = []
        cons: list[dict[int, np.ndarray]] = [dict() for _ in range(self._m)]
        for j, (shift, coefs) in enumerate(blocks):
            data = [shift] + list(coefs.values())
            cplx = any(np.abs(np.imag(m)).max() > 1e-14 for m in data)
            if cplx:
                sizes.append(2 * shift.shape[0])
                c_list.append(_embed_herm(shift) / 2.0)
                for k, mat in coefs.items():
                    cons[k][j] = -_embed_herm(mat) / 2.0
            else:
                sizes.append(shift.shape[0])
                c_list.append(np.real(shift))
                for k, mat in coefs.items():
                    cons[k][j] = -np.real(mat)
        constraints = []
        for k in range(self._m):
            if not cons[k]:
                raise ValueError(f"coordinate {k} appears in no block")
            constraints.append((cons[k], float(b[k])))
        return SdpProblem(blocks=sizes, C=c_list, constraints=constraints, sense="min")

    def _objective_offset(self) -> float:
        off = 0.0
        for var, coef in self._obj:
            if var.reconstruct == "scalar":
                off += float(coef) * float(var.constant)
            else:
                off += float(np.real(np.sum(np.conj(coef) * var.constant)))
        return off

    def solve(self, settings: SdpSettings | None = None):
        settings = settings or SdpSettings()
        prob = self.lower()
        sol = solve(prob, settings)
        if sol.status == "infeasible":
            raise SdpNumericalError("problem flagged infeasible by the big-M variable")
        if sol.status != "optimal" and sol.quality > settings.accept_loose:
            raise SdpNumericalError(f"interior-point solve ended with status {sol.status!r} "
                                    f"(best quality {sol.quality:.2e})")
        y = sol.y  # dual of the lowered min problem = our LMI variables
        values = {}
        for var in self._vars:
            coords = y[var.start:var.start + len(var.basis)]
            if var.reconstruct == "scalar":
                values[var.name] = float(coords[0]) + float(var.constant)
            else:
                val = np.array(var.constant, dtype=complex)
                for ck, be in zip(coords, var.basis):
                    val = val + ck * be
                values[var.name] = val
        value = float(sol.dual_obj)
        other = float(sol.primal_obj)
        if self._sense == "min":
            value, other = -value, -other
        off = self._objective_offset()
        return LmiResult(value=value + off, value_other=other + off,
                         vars=values, solution=sol)


@dataclass
class LmiResult:
    value: float        # objective at the recovered LMI variables
    value_other: float  # other side of the residual duality gap
    vars: dict
    solution: SdpSolution

    @property
    def value_safe_upper(self) -> float:
        """Conservative side when the program value feeds an upper bound."""
        return max(self.value, self.value_other)
