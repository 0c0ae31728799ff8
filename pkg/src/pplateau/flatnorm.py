"""Flat norms and flat distances on a cell complex.

The real flat norm of an m-chain T minimizes mass(T - boundary(S)) + mass(S)
over real-coefficient fillings S supported on the (m+1)-cells. That is a
linear program, solved exactly over the rationals; the returned certificate
carries the optimal filling, the remainder R = T - boundary(S), and the dual
cochain proving optimality by weak duality.

The integral variant restricts S to integer coefficients within a cap and is
solved by branch-and-bound with LP relaxation lower bounds. The weighted
variant replaces mass by the concave-cost mass on both terms; its bounds come
from interval reasoning on the achievable remainders (if a cell's remainder
can reach 0 it contributes nothing, otherwise the endpoint nearest zero wins
because the cost increases in |multiplicity|).

Integer searches visit filling vectors in ascending lexicographic order over
the complex's cell order, so the first optimum found is the lexicographically
least one and results are deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .complexes import CellComplex, Chain, Cochain, boundary, pair, unit_chain
from .errors import DomainError, SearchSpaceError
from .functionals import Integrand, h_mass, mass
from .lp import OPTIMAL, UNBOUNDED, LPResult, solve_lp
from .numeric import Number, is_exact, strictly_less, values_equal

ENUMERATION_LIMIT = 100_000_000


@dataclass(frozen=True)
class FlatCertificate:
    value: Number
    filling: Chain    # S, one dimension above T
    remainder: Chain  # R = T - boundary(S)
    cap: Optional[int] = None
    cap_active: bool = False
    dual: Optional[Cochain] = None  # optimality witness for the real variant


class _FlatLP:
    """Shared LP builder: rows per m-cell, split variables for R and S."""

    def __init__(self, cx: CellComplex, dim: int):
        self.cx = cx
        self.dim = dim
        self.sigmas = cx.cell_names(dim)
        self.taus = cx.cell_names(dim + 1)
        self.sigma_pos = {name: i for i, name in enumerate(self.sigmas)}
        # Boundary columns of each (dim+1)-cell restricted to the row order.
        self.tau_cols = {
            tau: {self.sigma_pos[f]: s for f, s in cx.boundary_row(dim + 1, tau).items()}
            for tau in self.taus
        }
        self.ncols = 2 * len(self.sigmas) + 2 * len(self.taus)

    def cost(self) -> list[Fraction]:
        mu_s = [self.cx.measure(self.dim, n) for n in self.sigmas]
        mu_t = [self.cx.measure(self.dim + 1, n) for n in self.taus]
        out: list[Fraction] = []
        for mu in mu_s:
            out += [mu, mu]
        for mu in mu_t:
            out += [mu, mu]
        return out

    def rows(self, t: Chain) -> tuple[list[list[Fraction]], list[Fraction]]:
        n_s = len(self.sigmas)
        rows = []
        rhs = []
        for i, name in enumerate(self.sigmas):
            row = [Fraction(0)] * self.ncols
            row[2 * i] = Fraction(1)
            row[2 * i + 1] = Fraction(-1)
            for j, tau in enumerate(self.taus):
                d = self.tau_cols[tau].get(i, 0)
                if d:
                    row[2 * n_s + 2 * j] = Fraction(d)
                    row[2 * n_s + 2 * j + 1] = Fraction(-d)
            rows.append(row)
            rhs.append(Fraction(t.get(name)))
        return rows, rhs

    def filling_from(self, x) -> Chain:
        n_s = len(self.sigmas)
        vals = {}
        for j, tau in enumerate(self.taus):
            v = x[2 * n_s + 2 * j] - x[2 * n_s + 2 * j + 1]
            if v != 0:
                vals[tau] = v
        return Chain(self.dim + 1, vals)

    def pin_row(self, tau: str) -> list[Fraction]:
        n_s = len(self.sigmas)
        j = self.taus.index(tau)
        row = [Fraction(0)] * self.ncols
        row[2 * n_s + 2 * j] = Fraction(1)
        row[2 * n_s + 2 * j + 1] = Fraction(-1)
        return row


def flat_norm_real(cx: CellComplex, t: Chain) -> FlatCertificate:
    """Exact real flat norm with a dual optimality certificate.

    The optimal filling is made canonical by re-minimizing each coefficient in
    cell order subject to optimality, so ties resolve to the lexicographically
    least optimal filling.
    """
    cx.check_chain(t)
    dim = t.dim
    lp = _FlatLP(cx, dim)
    cost = lp.cost()
    rows, rhs = lp.rows(t)
    res = solve_lp(cost, rows, rhs)
    if res.status != OPTIMAL:
        raise DomainError(f"flat norm LP unexpectedly {res.status}")
    value = res.value
    dual = Cochain(dim, {name: res.y[i] for i, name in enumerate(lp.sigmas) if res.y[i] != 0})

    # Lexicographic tightening over the optimal face.
    pin_rows: list[list[Fraction]] = []
    pin_rhs: list[Fraction] = []
    filling = lp.filling_from(res.x)
    for tau in lp.taus:
        obj = lp.pin_row(tau)
        sub = solve_lp(obj, rows + [cost] + pin_rows, rhs + [value] + pin_rhs)
        if sub.status == OPTIMAL:
            w = sub.value
        else:
            # Optimal face unbounded in this coordinate (zero-measure cell);
            # keep the base solution's value for it.
            w = Fraction(filling.get(tau))
        pin_rows.append(obj)
        pin_rhs.append(w)
    if lp.taus:
        final = solve_lp(cost, rows + [cost] + pin_rows, rhs + [value] + pin_rhs)
        if final.status == OPTIMAL:
            filling = lp.filling_from(final.x)
    remainder = t - boundary(cx, filling)
    return FlatCertificate(value, filling, remainder, dual=dual)


def verify_real_certificate(cx: CellComplex, t: Chain, cert: FlatCertificate) -> bool:
    """Exact re-check of a real flat-norm certificate, independent of the solver.

    Confirms the remainder identity, the claimed value, and weak duality: the
    dual cochain is bounded by cell measures, its coboundary by (m+1)-cell
    measures, and it pairs with T to the claimed value.
    """
    if cert.dual is None:
        return False
    if cert.remainder != t - boundary(cx, cert.filling):
        return False
    if mass(cx, cert.remainder) + mass(cx, cert.filling) != cert.value:
        return False
    y = cert.dual
    for cell in cx.cells(t.dim):
        if abs(y.get(cell.name)) > cell.measure:
            return False
    for tau in cx.cells(t.dim + 1):
        cob = pair(y, boundary(cx, unit_chain(t.dim + 1, tau.name)))
        if abs(cob) > tau.measure:
            return False
    return pair(y, t) == cert.value


def _integer_search(cx: CellComplex, t: Chain, cap: int,
                    leaf_cost: Callable[[Chain, Chain], Number],
                    node_bound: Callable[[dict[str, int], list[str]], Number]) -> FlatCertificate:
    """Shared DFS over integer fillings in lex order with lower-bound pruning."""
    if cap < 0:
        raise DomainError(f"cap must be >= 0, got {cap}")
    dim = t.dim
    taus = cx.cell_names(dim + 1)
    best_value: Optional[Number] = None
    best_s: Optional[Chain] = None

    def descend(assigned: dict[str, int], rest: list[str]) -> None:
        nonlocal best_value, best_s
        if best_value is not None:
            lb = node_bound(assigned, rest)
            if not strictly_less(lb, best_value):
                return
        if not rest:
            s = Chain(dim + 1, dict(assigned))
            r = t - boundary(cx, s)
            v = leaf_cost(s, r)
            if best_value is None or strictly_less(v, best_value):
                best_value = v
                best_s = s
            return
        name, tail = rest[0], rest[1:]
        for v in range(-cap, cap + 1):
            assigned[name] = v
            descend(assigned, tail)
        del assigned[name]

    descend({}, taus)
    assert best_value is not None and best_s is not None
    remainder = t - boundary(cx, best_s)
    active = any(abs(v) == cap for v in best_s.coeffs.values()) and cap > 0
    return FlatCertificate(best_value, best_s, remainder, cap=cap, cap_active=active)


def flat_distance_integral(cx: CellComplex, t1: Chain, t2: Chain, cap: int) -> FlatCertificate:
    """Integral flat distance between two integer chains.

    Branch-and-bound over integer fillings with |coefficient| <= cap; lower
    bounds come from the LP relaxation of the subproblem with the assigned
    coefficients folded into the right-hand side. When the optimal filling
    touches the cap the result is only an upper bound for the uncapped
    distance, and the certificate says so.
    """
    t = t1 - t2
    if not t.is_integer:
        raise DomainError("integral flat distance needs integer chains")
    cx.check_chain(t)
    dim = t.dim
    lp = _FlatLP(cx, dim)
    cost = lp.cost()

    def node_bound(assigned: dict[str, int], rest: list[str]) -> Number:
        fixed_cost = Fraction(0)
        shifted = t
        for name, v in assigned.items():
            if v:
                fixed_cost += abs(v) * cx.measure(dim + 1, name)
                shifted = shifted - boundary(cx, unit_chain(dim + 1, name)).scale(v)
        sub = _FlatLP(cx, dim)
        sub.taus = list(rest)
        sub.tau_cols = {tau: lp.tau_cols[tau] for tau in rest}
        sub.ncols = 2 * len(sub.sigmas) + 2 * len(rest)
        rows, rhs = sub.rows(shifted)
        res = solve_lp(sub.cost(), rows, rhs)
        if res.status != OPTIMAL:
            return fixed_cost  # relaxation failed to bound; stay conservative
        return fixed_cost + res.value

    def leaf_cost(s: Chain, r: Chain) -> Number:
        return mass(cx, r) + mass(cx, s)

    return _integer_search(cx, t, cap, leaf_cost, node_bound)


def h_flat_distance(cx: CellComplex, t1: Chain, t2: Chain, h: Integrand, cap: int) -> FlatCertificate:
    """Flat distance with both terms weighted by a concave multiplicity cost.

    The objective is concave in each coefficient, so instead of an LP the
    bound tracks, per m-cell, the interval of remainders reachable from the
    still-free filling coefficients: a cell whose interval straddles zero can
    cost nothing, otherwise its cheapest value sits at the endpoint nearest
    zero. Fixed cells contribute exactly.
    """
    t = t1 - t2
    if not t.is_integer:
        raise DomainError("weighted flat distance needs integer chains")
    cx.check_chain(t)
    dim = t.dim
    sigmas = cx.cell_names(dim)
    touching: dict[str, dict[str, int]] = {name: {} for name in sigmas}
    for tau in cx.cell_names(dim + 1):
        for face, sign in cx.boundary_row(dim + 1, tau).items():
            touching[face][tau] = sign

    def node_bound(assigned: dict[str, int], rest: list[str]) -> Number:
        rest_set = set(rest)
        lb: Number = Fraction(0)
        for name, v in assigned.items():
            if v:
                lb = lb + h(abs(v)) * cx.measure(dim + 1, name)
        for name in sigmas:
            base = t.get(name)
            spread = 0
            for tau, sign in touching[name].items():
                if tau in rest_set:
                    spread += abs(sign) * cap
                else:
                    base -= sign * assigned.get(tau, 0)
            lo, hi = base - spread, base + spread
            if lo <= 0 <= hi:
                continue
            nearest = min(abs(lo), abs(hi))
            lb = lb + h(nearest) * cx.measure(dim, name)
        return lb

    def leaf_cost(s: Chain, r: Chain) -> Number:
        return h_mass(cx, r, h) + h_mass(cx, s, h)

    return _integer_search(cx, t, cap, leaf_cost, node_bound)


def enumerate_flat_integral(cx: CellComplex, t1: Chain, t2: Chain, cap: int,
                            h: Optional[Integrand] = None) -> FlatCertificate:
    """Exhaustive oracle over the full filling box; small instances only."""
    t = t1 - t2
    if not t.is_integer:
        raise DomainError("integral flat distance needs integer chains")
    cx.check_chain(t)
    dim = t.dim
    taus = cx.cell_names(dim + 1)
    width = 2 * cap + 1
    if width ** max(len(taus), 1) > ENUMERATION_LIMIT:
        raise SearchSpaceError("enumeration box exceeds the safety limit")
    best_value: Optional[Number] = None
    best_s: Optional[Chain] = None
    for combo in itertools.product(range(-cap, cap + 1), repeat=len(taus)):
        s = Chain(dim + 1, dict(zip(taus, combo)))
        r = t - boundary(cx, s)
        if h is None:
            v: Number = mass(cx, r) + mass(cx, s)
        else:
            v = h_mass(cx, r, h) + h_mass(cx, s, h)
        if best_value is None or strictly_less(v, best_value):
            best_value = v
            best_s = s
    assert best_value is not None and best_s is not None
    remainder = t - boundary(cx, best_s)
    active = any(abs(v) == cap for v in best_s.coeffs.values()) and cap > 0
    return FlatCertificate(best_value, best_s, remainder, cap=cap, cap_active=active)


def certificates_agree(a: FlatCertificate, b: FlatCertificate) -> bool:
    return values_equal(a.value, b.value) and a.filling == b.filling
