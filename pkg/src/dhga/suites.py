"""Named verification suites with deterministic per-trial seeding.

Each suite runs ``trials`` independent trials; trial ``k`` draws its data
from ``random.Random(f"{seed}:{k}:{suite}")`` so any witness can be
regenerated in isolation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from gmpy2 import mpq

from . import sampling as smp
from .blades import Signature
from .dh_operator import (
    DHProblem,
    IdentityReport,
    check_sum2,
    dh_lhs,
    dh_lhs_spinor_transformed,
    dh_lhs_tensor_transformed,
    spinor_transform,
    tensor_transform,
    verify_spinor_invariance,
    verify_tensor_invariance,
)
from .lorentz import (
    LorentzMatrix,
    adjoint_matrix,
    boost,
    classify_spin,
    determinant,
    is_orthogonal,
    kernel_check,
    lift,
    quarter_turn,
    reflection,
    rotation,
)
from .multivector import Kind, Multivector, SpecError, in_qprime, in_qprime_even
from .polyfield import FieldMV, Potential
from .spinor_ideal import (
    IdempotentSpec,
    Psi_from_psi,
    build_idempotent,
    check_idempotent_props,
    decompose_S,
    psi_from_Psi,
    transform_wavefunction,
    verify_injectivity,
)
from .scalars import GaussQ

SUITES = (
    "sum2",
    "spinor-invariance",
    "tensor-invariance",
    "idempotent-props",
    "injectivity",
    "double-cover",
    "lift-roundtrip",
    "decS-roundtrip",
    "spsi-soundness",
    "degenerate",
)
KIND_FREE = {"double-cover", "lift-roundtrip"}
MAX_WITNESSES = 5


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SuiteConfig:
    suite: str
    n: int
    kind: Kind | None = None
    trials: int = 25
    seed: int = 0
    backend: str = "exact"
    parity: str = "even"  # spin elements: "even" | "odd" | "both"
    matrix: LorentzMatrix | None = None

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES)}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.backend not in ("exact", "float"):
            raise ConfigError(f"unknown backend {self.backend!r}")
        if self.parity not in ("even", "odd", "both"):
            raise ConfigError(f"unknown parity {self.parity!r}")
        try:
            Signature(self.n)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.n < 3:
            raise ConfigError("suites need n >= 3")
        kind = self.kind
        if kind is None and self.suite not in KIND_FREE:
            kind = Kind.SPINOR if self.n % 2 else Kind.SEMISPINOR
        if kind is not None:
            try:
                kind = Kind.parse(kind)
                IdempotentSpec(self.n, kind)
            except (SpecError, ValueError) as exc:
                raise ConfigError(str(exc)) from None
        object.__setattr__(self, "kind", kind)
        if self.matrix is not None and self.matrix.n != self.n:
            raise ConfigError(f"matrix is for n={self.matrix.n}, suite has n={self.n}")
        if self.parity != "even" and self.n % 2 == 0 and self.suite == "spinor-invariance":
            raise ConfigError("odd spin elements act only in odd dimension")

    @property
    def spec(self) -> IdempotentSpec:
        return IdempotentSpec(self.n, self.kind)


@dataclass
class SuiteReport:
    suite: str
    n: int
    kind: str | None
    trials: int
    seed: int
    counts: dict = field(default_factory=lambda: {"pass": 0, "fail": 0, "not_applicable": 0})
    witnesses: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "fail" if self.counts["fail"] else "pass"

    def record(self, trial: int, rep: IdentityReport):
        self.counts[rep.status] += 1
        if rep.status == "fail" and len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append({"trial": trial, **rep.to_json()})

    def to_json(self) -> dict:
        out = {
            "suite": self.suite,
            "n": self.n,
            "kind": self.kind,
            "trials": self.trials,
            "seed": self.seed,
            "status": self.status,
            "counts": dict(self.counts),
            "witnesses": self.witnesses,
        }
        out.update(self.extra)
        return out


def _ok(name: str, cond: bool, residual=None, detail: str = "") -> IdentityReport:
    if cond:
        return IdentityReport(name, "pass")
    return IdentityReport(name, "fail", residual, detail)


def _all(name: str, reports) -> IdentityReport:
    for rep in reports:
        if rep.status == "fail":
            return rep
    return IdentityReport(name, "pass")


def random_problem(rng, spec: IdempotentSpec, t=None) -> DHProblem:
    act = smp.active_vars(rng, spec.n)
    return DHProblem(
        spec,
        smp.mass(rng),
        smp.potential(rng, spec.n, active=act),
        smp.wave_function(rng, spec.qprime, active=act),
        t,
    )


def random_spin(rng, n: int, parity: int):
    """Lift of a random matrix: even parity from SO(1,n), odd from det -1."""
    p = smp.lorentz(rng, n, special=True)
    if parity:
        p = p @ reflection(n, rng.randint(1, n))
    return lift(p)


def _parity_for(cfg: SuiteConfig, trial: int) -> int:
    if cfg.parity == "both":
        return trial % 2
    return int(cfg.parity == "odd")


def tensor_family(n: int, dprime: int) -> list[tuple[str, LorentzMatrix]]:
    """Fixed matrices that the tensor-approach check runs over."""
    q = mpq
    paired = {i for mu in range(1, dprime + 1) for i in (2 * mu - 1, 2 * mu)}
    free = [k for k in range(1, n + 1) if k not in paired]
    fam = [("identity", LorentzMatrix.identity(n)), ("quarter-turn", quarter_turn(n))]
    for mu in range(1, dprime + 1):
        fam.append((f"rotation({2 * mu - 1},{2 * mu})", rotation(n, 2 * mu - 1, 2 * mu, q(3, 5), q(4, 5))))
    for k in free:
        fam.append((f"boost(0,{k})", boost(n, k, q(5, 3), q(4, 3))))
    if free:
        comp = rotation(n, 1, 2, q(5, 13), q(-12, 13)) @ boost(n, free[-1], q(5, 4), q(3, 4))
        fam.append((f"rotation(1,2)*boost(0,{free[-1]})", comp))
    return fam


def violating_matrix(n: int) -> LorentzMatrix:
    """Boost mixing e0 with e1; breaks the invariance condition."""
    return boost(n, 1, mpq(5, 3), mpq(4, 3))


# individual suites


def _sum2(cfg, rng, trial, ctx):
    return check_sum2(random_problem(rng, cfg.spec, ctx["t"]))


def _spinor(cfg, rng, trial, ctx):
    S = random_spin(rng, cfg.n, _parity_for(cfg, trial))
    return verify_spinor_invariance(random_problem(rng, cfg.spec, ctx["t"]), S)


def _tensor(cfg, rng, trial, ctx):
    if cfg.matrix is not None:
        name, P = "given", cfg.matrix
    else:
        fam = ctx["family"]
        name, P = fam[trial % len(fam)]
    rep = verify_tensor_invariance(random_problem(rng, cfg.spec, ctx["t"]), P)
    by = ctx["report"].extra.setdefault("by_matrix", {})
    slot = by.setdefault(name, {"pass": 0, "fail": 0, "not_applicable": 0})
    slot[rep.status] += 1
    return rep


def _idempotent(cfg, rng, trial, ctx):
    t = ctx["t"]
    if trial == 0:
        try:
            check_idempotent_props(t)
        except AssertionError as exc:
            return IdentityReport("idempotent-props", "fail", None, str(exc))
    u = Multivector(cfg.n, {m: GaussQ(smp.rational(rng), smp.rational(rng))
                            for m in rng.sample(range(1 << (cfg.n + 1)), 6)})
    ut = u * t.value
    return _ok("ideal absorption", ut * t.value == ut, ut * t.value - ut)


def _injectivity(cfg, rng, trial, ctx):
    t = ctx["t"]
    if trial == 0:
        rep = verify_injectivity(t, strict=False)
        ctx["report"].extra["rank"] = rep.rank
        ctx["report"].extra["columns"] = rep.columns
        if not rep.full:
            return IdentityReport("injectivity", "fail", None, f"rank {rep.rank} < {rep.columns}")
    Psi = smp.constant_even(rng, cfg.spec.qprime, blades=4)
    back = Psi_from_psi(psi_from_Psi(Psi, t), t)
    return _ok("correspondence round trip", back == Psi, back - Psi)


def _random_certified(cfg, rng, trial):
    n = cfg.n
    parity = 0 if n % 2 == 0 else rng.randint(0, 1)
    return classify_spin(smp.versor(rng, n, parity=parity), allow_scale=True)


def _double_cover(cfg, rng, trial, ctx):
    n = cfg.n
    s1 = _random_certified(cfg, rng, trial)
    s2 = _random_certified(cfg, rng, trial)
    if cfg.backend == "float":
        parity = 0 if n % 2 == 0 else rng.randint(0, 1)
        s = classify_spin(smp.float_versor(rng, n, parity), allow_scale=True)
        p = adjoint_matrix(s)
        return _all("double-cover", [_ok("float adjoint in O(1,n)", is_orthogonal(p.rows)),
                                     _ok("+-S collapse", adjoint_matrix(-s).allclose(p, 1e-10))])
    p1, p2 = adjoint_matrix(s1), adjoint_matrix(s2)
    checks = [
        _ok("adjoint in O(1,n)", is_orthogonal(p1.rows)),
        _ok("homomorphism", adjoint_matrix(s1 * s2) == p1 @ p2),
        _ok("+-S collapse", adjoint_matrix(-s1) == p1),
        _ok("kernel", kernel_check(s1)),
    ]
    if n == 3 and s1.is_even:
        checks.append(_ok("even S has det 1", determinant(p1.rows) == 1))
    return _all("double-cover", checks)


def _lift_roundtrip(cfg, rng, trial, ctx):
    p = smp.lorentz(rng, cfg.n, special=cfg.n % 2 == 0)
    s = lift(p, backend=cfg.backend)
    back = adjoint_matrix(s)
    ok = back.allclose(p, 1e-9) if cfg.backend == "float" else back == p
    return _ok("lift round trip", ok, detail="adjoint(lift(P)) != P")


def _decs(cfg, rng, trial, ctx):
    q = cfg.spec.qprime
    S = smp.versor(rng, cfg.n, parity=rng.randint(0, 1))
    dec = decompose_S(S, q)
    checks = [_ok("reassembly", dec.reassemble() == S, dec.reassemble() - S),
              _ok("S0 in Q'", in_qprime(dec.S0, q))]
    par = S.parity()
    for idx, coeff in dec.terms:
        want = (par + len(idx)) % 2
        checks.append(_ok(f"parity of S_{idx}", in_qprime(coeff, q) and coeff.parity() == want))
    return _all("decS-roundtrip", checks)


def _spsi(cfg, rng, trial, ctx):
    t = ctx["t"]
    S = classify_spin(smp.versor(rng, cfg.n, parity=trial % 2), allow_scale=True)
    Psi = smp.wave_function(rng, cfg.spec.qprime)
    out = transform_wavefunction(S, Psi, t)
    lhs, rhs = out * t.value, S.value * Psi * t.value
    return _all("spsi-soundness", [_ok("S Psi t", lhs == rhs, lhs - rhs),
                                   _ok("output in even Q'", in_qprime_even(out, cfg.spec.qprime))])


def _degenerate(cfg, rng, trial, ctx):
    spec, n = cfg.spec, cfg.n
    zero_a = Potential.zero(n)
    if trial % 2 == 0:
        prob = DHProblem(spec, smp.mass(rng), smp.potential(rng, n), FieldMV.zero(n), ctx["t"])
    else:
        prob = DHProblem(spec, 0, zero_a, FieldMV.const(smp.constant_even(rng, spec.qprime)), ctx["t"])
    F = dh_lhs(prob)
    S = random_spin(rng, n, 0)
    F_spin = dh_lhs_spinor_transformed(spinor_transform(prob, S))
    fam = ctx["family"]
    P = fam[rng.randrange(len(fam))][1]
    F_tensor = dh_lhs_tensor_transformed(tensor_transform(prob, P))
    return _all("degenerate", [_ok("F = 0", not F, F), _ok("spinor F_hat = 0", not F_spin, F_spin),
                               _ok("tensor F_hat = 0", not F_tensor, F_tensor)])


RUNNERS: dict[str, Callable] = {
    "sum2": _sum2,
    "spinor-invariance": _spinor,
    "tensor-invariance": _tensor,
    "idempotent-props": _idempotent,
    "injectivity": _injectivity,
    "double-cover": _double_cover,
    "lift-roundtrip": _lift_roundtrip,
    "decS-roundtrip": _decs,
    "spsi-soundness": _spsi,
    "degenerate": _degenerate,
}


def run_suite(cfg: SuiteConfig, on_trial: Callable | None = None) -> SuiteReport:
    report = SuiteReport(cfg.suite, cfg.n, cfg.kind.value if cfg.kind else None, cfg.trials, cfg.seed)
    ctx = {"report": report}
    if cfg.kind is not None:
        ctx["t"] = build_idempotent(cfg.spec)
        ctx["family"] = tensor_family(cfg.n, cfg.spec.dprime)
    runner = RUNNERS[cfg.suite]
    for trial in range(cfg.trials):
        rng = smp.trial_rng(cfg.seed, trial, cfg.suite)
        try:
            rep = runner(cfg, rng, trial, ctx)
        except ArithmeticError as exc:
            rep = IdentityReport(cfg.suite, "fail", None, f"{type(exc).__name__}: {exc}")
        report.record(trial, rep)
        if on_trial is not None:
            on_trial(trial, rep)
    return report

