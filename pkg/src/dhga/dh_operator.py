"""The three Dirac-Hestenes operators and their Lorentz-transformed forms.

Everything is an operator-level identity on polynomial data, so no
equation is ever solved: the left-hand side ``F`` is computed for an
arbitrary ``Psi`` and the invariance statements become exact equalities
such as ``F_hat t = S F t``.

Transformed quantities live in their own coordinates ``y = P x``.  They are
built there honestly (derivatives taken with respect to ``y``) and then
pulled back to ``x`` by substituting ``y = P x`` before comparison.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .lorentz import LorentzMatrix, NotInPin, NotSpecial, SpinElement, adjoint_matrix, classify_spin
from .multivector import Kind, Multivector, format_mv, in_qprime_even
from .polyfield import FieldMV, IndexOutOfRange, LengthMismatch, Potential, linear_substitute
from .scalars import I as IMAG
from .scalars import to_scalar
from .spinor_ideal import (
    Idempotent,
    IdempotentSpec,
    NotInQPrimeEven,
    build_idempotent,
    idempotent_from_generators,
    imaginary_unit,
    time_unit,
    transform_wavefunction,
)


class OddSpinElementInEvenDimension(ValueError):
    pass


class NotCertified(ValueError):
    pass


class IdentityFailed(AssertionError):
    def __init__(self, name: str, witness):
        self.witness = witness
        super().__init__(f"{name} fails; residual {witness}")


@dataclass(frozen=True)
class DHProblem:
    """Data of one Dirac-Hestenes equation: spec, mass, potential, wave function."""

    spec: IdempotentSpec
    m: object
    a: Potential
    Psi: FieldMV
    t: Idempotent = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        n = self.spec.n
        object.__setattr__(self, "m", to_scalar(self.m))
        if len(self.a) != n + 1:
            raise LengthMismatch(f"potential has {len(self.a)} components, need {n + 1}")
        if self.Psi.n != n:
            raise LengthMismatch(f"wave function lives in Cl(1,{self.Psi.n}), not Cl(1,{n})")
        if not in_qprime_even(self.Psi, self.spec.qprime):
            raise NotInQPrimeEven("wave function is not in the even part of Q'")
        if self.t is None:
            object.__setattr__(self, "t", build_idempotent(self.spec))

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def I(self) -> Multivector:  # noqa: E743
        return imaginary_unit(self.n)

    @property
    def E(self) -> Multivector:
        return time_unit(self.n)

    def replace(self, **changes) -> "DHProblem":
        data = {"spec": self.spec, "m": self.m, "a": self.a, "Psi": self.Psi, "t": self.t}
        data.update(changes)
        return DHProblem(**data)


@dataclass(frozen=True)
class IndexSets:
    first: tuple[int, ...]
    second: tuple[int, ...]


def index_sets(spec: IdempotentSpec) -> IndexSets:
    d = spec.d
    odd = list(range(3, 2 * d - 2, 2))  # 3, 5, ..., 2d-3
    first = [0, 1, 2] + list(range(3, 2 * d, 2))
    second = list(odd)
    if spec.kind is Kind.SEMISPINOR:
        second.append(2 * d - 1)
    elif spec.kind is Kind.DOUBLESPINOR:
        first.append(2 * d)
    return IndexSets(tuple(first), tuple(second))


def A_term(problem: DHProblem, mu: int) -> FieldMV:
    """``d_mu Psi + Psi a_mu I``."""
    if not 0 <= mu <= problem.n:
        raise IndexOutOfRange(f"no coordinate x{mu} in Cl(1,{problem.n})")
    Psi = problem.Psi
    return Psi.pderiv(mu) + (Psi * problem.I).poly_mul(problem.a[mu])


def _two_sum(problem: DHProblem, A, gens, transformed: bool) -> FieldMV:
    sets = index_sets(problem.spec)
    I, E = problem.I, problem.E
    out = (problem.Psi * I) * problem.m
    for mu in sets.first:
        out = out + gens[mu] * A(mu) * E
    for mu in sets.second:
        if transformed:
            out = out + A(mu + 1) * (I * gens[mu] * E)
        else:
            out = out + A(mu + 1) * (gens[mu] * E * I)
    return out


def _generators(n: int):
    return [Multivector.gen(n, mu) for mu in range(n + 1)]


def dh_lhs(problem: DHProblem) -> FieldMV:
    """Left-hand side with the kind-specific first and second sums."""
    return _two_sum(problem, lambda mu: A_term(problem, mu), _generators(problem.n), False)


def dh_lhs_single_sum(problem: DHProblem) -> FieldMV:
    """``sum_{mu=0..n} e^mu A_mu E + m Psi I``."""
    I, E = problem.I, problem.E
    out = (problem.Psi * I) * problem.m
    for mu in range(problem.n + 1):
        out = out + Multivector.gen(problem.n, mu) * A_term(problem, mu) * E
    return out


@dataclass(frozen=True)
class IdentityReport:
    name: str
    status: str  # "pass" | "fail" | "not_applicable"
    residual: object = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def witness_json(self):
        if self.residual is None or not self.residual:
            return None
        return self.residual.to_json()

    def to_json(self) -> dict:
        out = {"check": self.name, "status": self.status, "witness": self.witness_json()}
        if self.detail:
            out["detail"] = self.detail
        return out


def _compare(name: str, lhs, rhs) -> IdentityReport:
    res = lhs - rhs
    return IdentityReport(name, "fail" if res else "pass", res if res else None)


def check_sum2(problem: DHProblem) -> IdentityReport:
    """The two-sum and single-sum operators agree after right-multiplying by ``t``."""
    t = problem.t.value
    return _compare("sum2", dh_lhs(problem) * t, dh_lhs_single_sum(problem) * t)


# coordinate changes


def pull_potential(a: Potential, q: LorentzMatrix) -> Potential:
    """``a_hat_mu(y) = sum_nu q[nu][mu] a_nu(Q y)``."""
    n = len(a) - 1
    moved = [linear_substitute(a[nu], q) for nu in range(n + 1)]
    comps = []
    for mu in range(n + 1):
        acc = moved[0] * q[0, mu]
        for nu in range(1, n + 1):
            if q[nu, mu]:
                acc = acc + moved[nu] * q[nu, mu]
        comps.append(acc)
    return Potential(tuple(comps))


def _require_lorentz(p) -> LorentzMatrix:
    return p if isinstance(p, LorentzMatrix) else LorentzMatrix(tuple(map(tuple, p)))


# spinor approach


@dataclass(frozen=True)
class SpinorTransformed:
    """Problem in the coordinates ``y = P x`` together with ``S``, ``P``, ``Q``."""

    original: DHProblem
    problem: DHProblem
    S: SpinElement
    P: LorentzMatrix
    Q: LorentzMatrix


def spinor_transform(problem: DHProblem, S) -> SpinorTransformed:
    """Generators fixed; ``Psi`` transformed through ``S``; ``a`` and ``d`` covariantly."""
    if not isinstance(S, SpinElement):
        try:
            S = classify_spin(S, allow_scale=True)
        except NotInPin as exc:
            raise NotCertified(str(exc)) from None
    if S.n != problem.n:
        raise LengthMismatch(f"spin element in Cl(1,{S.n}), problem in Cl(1,{problem.n})")
    if problem.n % 2 == 0 and not S.is_even:
        raise OddSpinElementInEvenDimension("only Spin(1,2d) acts in even dimension")
    P = adjoint_matrix(S)
    Q = P.inverse()
    Psi_hat = transform_wavefunction(S, problem.Psi, problem.t)
    new = problem.replace(Psi=linear_substitute(Psi_hat, Q), a=pull_potential(problem.a, Q))
    return SpinorTransformed(problem, new, S, P, Q)


def dh_lhs_spinor_transformed(tr: SpinorTransformed) -> FieldMV:
    """Transformed left-hand side, pulled back to the original coordinates."""
    pb = tr.problem
    F_hat = _two_sum(pb, lambda mu: A_term(pb, mu), _generators(pb.n), True)
    return linear_substitute(F_hat, tr.P)


def verify_spinor_invariance(problem: DHProblem, S) -> IdentityReport:
    """``F_hat t == S F t`` exactly, for arbitrary (non-solution) data."""
    tr = spinor_transform(problem, S)
    t = problem.t.value
    lhs = dh_lhs_spinor_transformed(tr) * t
    rhs = tr.S.value * (dh_lhs(problem) * t)
    return _compare("spinor-invariance", lhs, rhs)


# tensor approach


@dataclass(frozen=True)
class TensorContext:
    """Hatted generators and idempotent; ``I`` and ``E`` keep their original values."""

    problem: DHProblem
    P: LorentzMatrix
    Q: LorentzMatrix
    gens: tuple
    t_hat: Multivector
    hatted: DHProblem  # Psi(Q y) and the covariant potential, in y coordinates


def hatted_generators(P: LorentzMatrix) -> tuple:
    """``e_hat^mu = sum_nu P[mu][nu] e^nu``."""
    n = P.n
    return tuple(
        Multivector(n, {1 << nu: P[mu, nu] for nu in range(n + 1)}) for mu in range(n + 1)
    )


def tensor_transform(problem: DHProblem, P) -> TensorContext:
    P = _require_lorentz(P)
    if P.n != problem.n:
        raise LengthMismatch(f"matrix for n={P.n}, problem has n={problem.n}")
    if problem.n % 2 == 0 and not P.is_special():
        raise NotSpecial("tensor transformation in even dimension needs det P = 1")
    Q = P.inverse()
    gens = hatted_generators(P)
    t_hat = idempotent_from_generators(gens, problem.spec.dprime)
    hatted = problem.replace(Psi=linear_substitute(problem.Psi, Q), a=pull_potential(problem.a, Q))
    return TensorContext(problem, P, Q, gens, t_hat, hatted)


def check_tensor_condition(ctx: TensorContext) -> bool:
    """``-e^{2mu-1} e^{2mu} t_hat == i t_hat`` with unhatted bivectors."""
    n = ctx.problem.n
    for mu in range(1, ctx.problem.spec.dprime + 1):
        biv = Multivector.blade(n, (2 * mu - 1, 2 * mu))
        if -(biv * ctx.t_hat) != ctx.t_hat * IMAG:
            return False
    return True


def hatted_A(ctx: TensorContext, mu: int) -> FieldMV:
    """``A_hat_mu`` computed in ``y`` and pulled back to ``x``."""
    return linear_substitute(A_term(ctx.hatted, mu), ctx.P)


def dh_lhs_tensor_transformed(ctx: TensorContext) -> FieldMV:
    """``F_hat`` over the original coordinates, in the original basis."""
    hp = ctx.hatted
    F_hat = _two_sum(hp, lambda mu: A_term(hp, mu), ctx.gens, True)
    return linear_substitute(F_hat, ctx.P)


def check_A_covariance(ctx: TensorContext) -> IdentityReport:
    """``A_hat_mu(P x) == sum_alpha q[alpha][mu] A_alpha(x)`` for every ``mu``."""
    n = ctx.problem.n
    A = [A_term(ctx.problem, a) for a in range(n + 1)]
    for mu in range(n + 1):
        rhs = FieldMV.zero(n)
        for alpha in range(n + 1):
            c = ctx.Q[alpha, mu]
            if c:
                rhs = rhs + A[alpha] * c
        rep = _compare(f"A_hat_{mu} covariance", hatted_A(ctx, mu), rhs)
        if not rep.passed:
            return rep
    return IdentityReport("A_hat covariance", "pass")


def verify_tensor_invariance(problem: DHProblem, P) -> IdentityReport:
    """``F_hat t_hat == (single sum) t_hat`` when the invariance condition holds."""
    ctx = tensor_transform(problem, P)
    if not check_tensor_condition(ctx):
        return IdentityReport("tensor-invariance", "not_applicable", None,
                              "condition not satisfied; theorem not applicable")
    lhs = dh_lhs_tensor_transformed(ctx) * ctx.t_hat
    rhs = dh_lhs_single_sum(problem) * ctx.t_hat
    return _compare("tensor-invariance", lhs, rhs)
