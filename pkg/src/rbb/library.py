"""Bundled machine-checked derivations.

Every theorem here is a concrete :class:`~rbb.proof.Proof` at fixed small
formulas, built step by step from axiom instances and the primitive rules.
There is no deduction theorem in the object logic, so multi-premise
arguments are glued together the long way: derive the premises, add one
classical tautology chaining them to the goal, and discharge with repeated
modus ponens.  The `_Builder.chain` helper packages that pattern.

Schema-shaped results (closure under consequence, the quantifier rule
lemmas) are shipped at representative instantiations; `closure_rule_instance`
re-instantiates the closure template at caller-supplied formulas.
"""

from __future__ import annotations

from .proof import (
    Axiom,
    FixtureCorrupt,
    Gen,
    MP,
    Proof,
    ProofStep,
    RN,
    Theorem,
    check_proof,
)
from .syntax import (
    Adequate,
    Believes,
    Formula,
    ForAll,
    Letter,
    Not,
    Or,
    Reason,
    SIGMA,
    Supports,
    as_implies,
    atom_term,
    conj,
    exists,
    iff,
    impl,
)
from .theory import SchemeId, TheoryConfig


class _Builder:
    """Accumulates numbered steps; computes rule conclusions mechanically."""

    def __init__(self, cfg: TheoryConfig) -> None:
        self.cfg = cfg
        self._steps: list[ProofStep] = []

    def formula(self, index: int) -> Formula:
        return self._steps[index - 1].formula

    def _push(self, formula: Formula, just) -> int:
        self._steps.append(ProofStep(len(self._steps) + 1, formula, just))
        return len(self._steps)

    def axiom(self, scheme: SchemeId, formula: Formula) -> int:
        return self._push(formula, Axiom(scheme))

    def mp(self, antecedent: int, implication: int) -> int:
        pair = as_implies(self.formula(implication))
        assert pair is not None and pair[0] == self.formula(antecedent)
        return self._push(pair[1], MP(antecedent, implication))

    def rn(self, source: int, reason: Reason) -> int:
        return self._push(Supports(reason, self.formula(source)), RN(source, reason))

    def gen(self, source: int, var: str) -> int:
        return self._push(ForAll(var, self.formula(source)), Gen(source, var))

    def chain(self, goal: Formula, *premises: int) -> int:
        """Tautology step (prem1 -> (... -> goal)) plus the MP cascade."""
        taut = goal
        for index in reversed(premises):
            taut = impl(self.formula(index), taut)
        at = self.axiom(SchemeId.CL, taut)
        for index in premises:
            at = self.mp(index, at)
        return at

    def build(self, name: str) -> Proof:
        return Proof(self.cfg, name, self._steps[-1].formula, tuple(self._steps))


_BASE = TheoryConfig.from_name("RBB", ("r", "s"), ("p", "q"))
_SIGMA = TheoryConfig.from_name("RBBs", ("r", "s"), ("p", "q"))
_SIGMA_PLUS = TheoryConfig.from_name("RBBs+", ("r", "s"), ("p", "q"))
_QUANT = TheoryConfig.from_name("QRBB", ("r", "s"), ("p", "q"))

_R = atom_term("r")
_S = atom_term("s")
_P = Letter("p")
_Q = Letter("q")

_BR = Believes(Adequate(_R))
_BS = Believes(Adequate(_S))
_BSIG = Believes(Adequate(SIGMA))


def _rc() -> Proof:
    rp = Supports(_R, _P)
    snp = Supports(_S, Not(_P))
    b = _Builder(_BASE)
    a1 = b.axiom(SchemeId.RB, impl(rp, impl(_BR, Believes(_P))))
    a2 = b.axiom(SchemeId.RB, impl(snp, impl(_BS, Believes(Not(_P)))))
    a3 = b.axiom(SchemeId.D, impl(Believes(_P), Not(Believes(Not(_P)))))
    b.chain(impl(conj(_BR, _BS), impl(rp, Not(snp))), a1, a2, a3)
    return b.build("RC")


def _ic() -> Proof:
    rp = Supports(_R, _P)
    rnp = Supports(_R, Not(_P))
    b = _Builder(_BASE)
    a1 = b.axiom(SchemeId.RB, impl(rp, impl(_BR, Believes(_P))))
    a2 = b.axiom(SchemeId.RB, impl(rnp, impl(_BR, Believes(Not(_P)))))
    a3 = b.axiom(SchemeId.D, impl(Believes(_P), Not(Believes(Not(_P)))))
    b.chain(impl(_BR, impl(rp, Not(rnp))), a1, a2, a3)
    return b.build("IC")


def _aic() -> Proof:
    rp = Supports(_R, _P)
    rnp = Supports(_R, Not(_P))
    b = _Builder(_BASE)
    a1 = b.axiom(SchemeId.A, impl(rnp, impl(Adequate(_R), Not(_P))))
    a2 = b.axiom(SchemeId.A, impl(rp, impl(Adequate(_R), _P)))
    b.chain(impl(rp, impl(Adequate(_R), Not(rnp))), a1, a2)
    return b.build("AIC")


def closure_rule_instance(
    cfg: TheoryConfig, reason: Reason, phi: Formula, psi: Formula, name: str = "RCLC"
) -> Proof:
    """The closure-under-consequence template at a concrete premise.

    Checkable only when ``phi -> psi`` is itself a classical tautology
    instance; `check_proof` is the arbiter.
    """
    b = _Builder(cfg)
    premise = b.axiom(SchemeId.CL, impl(phi, psi))
    cited = b.rn(premise, reason)
    dist = b.axiom(
        SchemeId.RK,
        impl(
            Supports(reason, impl(phi, psi)),
            impl(Supports(reason, phi), Supports(reason, psi)),
        ),
    )
    b.mp(cited, dist)
    return b.build(name)


def _rcl2() -> Proof:
    sp_impl = Supports(_S, impl(_P, _Q))
    rp = Supports(_R, _P)
    b = _Builder(_SIGMA)
    m1 = b.axiom(SchemeId.MR, impl(sp_impl, impl(_BS, Supports(SIGMA, impl(_P, _Q)))))
    m2 = b.axiom(SchemeId.MR, impl(rp, impl(_BR, Supports(SIGMA, _P))))
    rk = b.axiom(
        SchemeId.RK,
        impl(
            Supports(SIGMA, impl(_P, _Q)),
            impl(Supports(SIGMA, _P), Supports(SIGMA, _Q)),
        ),
    )
    mb = b.axiom(SchemeId.MB, _BSIG)
    rb = b.axiom(SchemeId.RB, impl(Supports(SIGMA, _Q), impl(_BSIG, Believes(_Q))))
    b.chain(impl(conj(_BS, _BR, sp_impl, rp), Believes(_Q)), m1, m2, rk, mb, rb)
    return b.build("RCL2")


def _bsigma() -> Proof:
    sp = Supports(SIGMA, _P)
    b = _Builder(_SIGMA_PLUS)
    mt = b.axiom(SchemeId.MT, impl(Believes(_P), sp))
    rb = b.axiom(SchemeId.RB, impl(sp, impl(_BSIG, Believes(_P))))
    mb = b.axiom(SchemeId.MB, _BSIG)
    back = b.chain(impl(sp, Believes(_P)), rb, mb)
    b.chain(iff(Believes(_P), sp), mt, back)
    return b.build("BSigma")


# -- quantifier lemmas, all under QRBB ---------------------------------------
#
# (UI) with the bound symbol itself as substituent yields the bare
# "instantiate to the body" step; (Gen) then (UD) then (MP) is the standard
# ladder for moving a quantifier to the consequent.


def _distributivity() -> Proof:
    phi = Supports(_R, _P)
    psi = _BR
    all_impl = ForAll("r", impl(phi, psi))
    all_phi = ForAll("r", phi)
    both = conj(all_impl, all_phi)
    b = _Builder(_QUANT)
    u1 = b.axiom(SchemeId.UI, impl(all_impl, impl(phi, psi)))
    u2 = b.axiom(SchemeId.UI, impl(all_phi, phi))
    glued = b.chain(impl(both, psi), u1, u2)
    closed = b.gen(glued, "r")
    ud = b.axiom(SchemeId.UD, impl(ForAll("r", impl(both, psi)), impl(both, ForAll("r", psi))))
    out = b.mp(closed, ud)
    b.chain(impl(all_impl, impl(all_phi, ForAll("r", psi))), out)
    return b.build("Distributivity")


def _distribution_rule() -> Proof:
    phi = conj(Supports(_R, _P), _BR)
    psi = Supports(_R, _P)
    all_phi = ForAll("r", phi)
    b = _Builder(_QUANT)
    prem = b.axiom(SchemeId.CL, impl(phi, psi))
    inst = b.axiom(SchemeId.UI, impl(all_phi, phi))
    lifted = b.chain(impl(all_phi, psi), prem, inst)
    closed = b.gen(lifted, "r")
    ud = b.axiom(
        SchemeId.UD,
        impl(ForAll("r", impl(all_phi, psi)), impl(all_phi, ForAll("r", psi))),
    )
    b.mp(closed, ud)
    return b.build("DistributionRule")


def _renaming_rule() -> Proof:
    all_r = ForAll("r", Supports(_R, _P))
    all_s = ForAll("s", Supports(_S, _P))
    b = _Builder(_QUANT)

    def direction(source: Formula, var: str, instance: Formula, target: Formula) -> int:
        inst = b.axiom(SchemeId.UI, impl(source, instance))
        closed = b.gen(inst, var)
        ud = b.axiom(
            SchemeId.UD,
            impl(ForAll(var, impl(source, instance)), impl(source, target)),
        )
        return b.mp(closed, ud)

    fwd = direction(all_r, "s", Supports(_S, _P), all_s)
    bwd = direction(all_s, "r", Supports(_R, _P), all_r)
    b.chain(iff(all_r, all_s), fwd, bwd)
    return b.build("RenamingRule")


def _equivalence_rule() -> Proof:
    phi = Supports(_R, _P)
    phi2 = Not(Not(phi))
    all_phi = ForAll("r", phi)
    all_phi2 = ForAll("r", phi2)
    b = _Builder(_QUANT)

    def direction(lo: Formula, hi: Formula, all_lo: Formula, all_hi: Formula) -> int:
        taut = b.axiom(SchemeId.CL, impl(lo, hi))
        inst = b.axiom(SchemeId.UI, impl(all_lo, lo))
        body = b.chain(impl(all_lo, hi), taut, inst)
        closed = b.gen(body, "r")
        ud = b.axiom(
            SchemeId.UD,
            impl(ForAll("r", impl(all_lo, hi)), impl(all_lo, ForAll("r", hi))),
        )
        return b.mp(closed, ud)

    fwd = direction(phi, phi2, all_phi, all_phi2)
    bwd = direction(phi2, phi, all_phi2, all_phi)
    b.chain(iff(all_phi, all_phi2), fwd, bwd)
    return b.build("EquivalenceRule")


def _exists_elim() -> Proof:
    """(A r)(phi -> psi) -> ((E r)phi -> psi) with r not free in psi."""
    phi = Supports(_R, _P)
    psi = _Q
    all_impl = ForAll("r", impl(phi, psi))
    contra = impl(Not(psi), Not(phi))
    b = _Builder(_QUANT)
    flip = b.axiom(SchemeId.CL, impl(impl(phi, psi), contra))
    inst = b.axiom(SchemeId.UI, impl(all_impl, impl(phi, psi)))
    body = b.chain(impl(all_impl, contra), flip, inst)
    closed = b.gen(body, "r")
    ud1 = b.axiom(
        SchemeId.UD,
        impl(ForAll("r", impl(all_impl, contra)), impl(all_impl, ForAll("r", contra))),
    )
    lifted = b.mp(closed, ud1)
    ud2 = b.axiom(
        SchemeId.UD,
        impl(ForAll("r", contra), impl(Not(psi), ForAll("r", Not(phi)))),
    )
    b.chain(impl(all_impl, impl(exists("r", phi), psi)), lifted, ud2)
    return b.build("ExistsElim")


def _exists_intro() -> Proof:
    """(E r)(psi -> phi) -> (psi -> (E r)phi) with r not free in psi."""
    phi = Supports(_R, _P)
    psi = _Q
    gap = conj(psi, Not(phi))
    all_psi = ForAll("r", psi)
    all_nphi = ForAll("r", Not(phi))
    all_gap = ForAll("r", gap)
    step = impl(Not(phi), gap)
    b = _Builder(_QUANT)

    intro = b.axiom(SchemeId.CL, impl(psi, step))
    inst = b.axiom(SchemeId.UI, impl(all_psi, psi))
    body = b.chain(impl(all_psi, step), intro, inst)
    closed = b.gen(body, "r")
    ud = b.axiom(
        SchemeId.UD,
        impl(ForAll("r", impl(all_psi, step)), impl(all_psi, ForAll("r", step))),
    )
    shifted = b.mp(closed, ud)

    u1 = b.axiom(SchemeId.UI, impl(ForAll("r", step), step))
    u2 = b.axiom(SchemeId.UI, impl(all_nphi, Not(phi)))
    paired = conj(ForAll("r", step), all_nphi)
    glued = b.chain(impl(paired, gap), u1, u2)
    closed2 = b.gen(glued, "r")
    ud2 = b.axiom(
        SchemeId.UD,
        impl(ForAll("r", impl(paired, gap)), impl(paired, all_gap)),
    )
    dist_body = b.mp(closed2, ud2)
    distributed = b.chain(impl(ForAll("r", step), impl(all_nphi, all_gap)), dist_body)
    merged = b.chain(impl(all_psi, impl(all_nphi, all_gap)), shifted, distributed)
    squashed = b.chain(impl(conj(all_psi, all_nphi), all_gap), merged)

    refl = b.axiom(SchemeId.CL, impl(psi, psi))
    closed3 = b.gen(refl, "r")
    ud3 = b.axiom(
        SchemeId.UD,
        impl(ForAll("r", impl(psi, psi)), impl(psi, all_psi)),
    )
    raise_psi = b.mp(closed3, ud3)

    halfway = b.chain(impl(conj(psi, all_nphi), all_gap), squashed, raise_psi)
    flipped = b.chain(impl(Not(all_gap), impl(psi, Not(all_nphi))), halfway)

    unpack = b.axiom(SchemeId.CL, impl(gap, Not(impl(psi, phi))))
    u3 = b.axiom(SchemeId.UI, impl(all_gap, gap))
    lowered = b.chain(impl(all_gap, Not(impl(psi, phi))), unpack, u3)
    closed4 = b.gen(lowered, "r")
    ud4 = b.axiom(
        SchemeId.UD,
        impl(
            ForAll("r", impl(all_gap, Not(impl(psi, phi)))),
            impl(all_gap, ForAll("r", Not(impl(psi, phi)))),
        ),
    )
    pushed = b.mp(closed4, ud4)

    goal = impl(exists("r", impl(psi, phi)), impl(psi, exists("r", phi)))
    b.chain(goal, pushed, flipped)
    return b.build("ExistsIntro")


def _fixtures() -> tuple[Proof, ...]:
    return (
        _rc(),
        _ic(),
        _aic(),
        closure_rule_instance(_BASE, _R, _P, Or(_P, _Q), name="RCLC-disj"),
        closure_rule_instance(_BASE, _R, conj(_P, _Q), _P, name="RCLC-proj"),
        closure_rule_instance(_BASE, _S, _P, impl(_Q, _P), name="RCLC-weaken"),
        _rcl2(),
        _bsigma(),
        _distributivity(),
        _distribution_rule(),
        _renaming_rule(),
        _equivalence_rule(),
        _exists_elim(),
        _exists_intro(),
    )


_CACHE: dict[str, Theorem] | None = None


def derived_library() -> dict[str, Theorem]:
    """All bundled theorems, each checked at first load.

    Returns a fresh dict per call; the cached entries themselves are frozen.
    Raises :class:`FixtureCorrupt` if any bundled derivation fails its own
    check, which would mean the package is miswired, not the caller.
    """
    global _CACHE
    if _CACHE is None:
        table: dict[str, Theorem] = {}
        for proof in _fixtures():
            verdict = check_proof(proof, table)
            if not verdict.accepted:
                raise FixtureCorrupt(
                    f"{proof.name}: step {verdict.step}: {verdict.diagnostic}"
                )
            table[proof.name] = Theorem(proof, verdict)
        _CACHE = table
    return dict(_CACHE)
