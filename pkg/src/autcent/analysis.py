"""Central automorphism order formulas, the minimality condition and its audits.

The condition checked for a non-abelian p-group ``G`` is

    Z(Inn(G)) = Autcent_Z(G) < Autcent(G)

where ``|Autcent_Z(G)| = |Hom(G/G'Z(G), Z(G))|`` always, and
``|Autcent(G)| = |Hom(G/G', Z(G))|`` when ``G`` has no abelian direct factor.
``|Z(Inn(G))|`` is computed as ``|Z_2(G) / Z(G)|``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Union

from .groups import (
    AbelianType,
    FiniteGroup,
    GroupError,
    Subgroup,
    abelian_invariants,
    center,
    derived_subgroup,
    frattini_and_rank,
    logp,
    lower_central_series,
    quotient,
    reduced_generators,
    subgroup_intersection,
    subgroup_product,
    upper_central_series,
)
from .homs import BudgetExceeded, hom_order
from .oracle import (
    DEFAULT_HOM_BUDGET,
    DEFAULT_SUBGROUP_BUDGET,
    CentralAutomorphisms,
    DirectFactorResult,
    InnerCenterCheck,
    Purity,
    central_automorphisms,
    direct_factor_search,
    inner_automorphism_keys,
    inner_center_check,
)


class Verdict(str, Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"
    NA = "n/a"

    @classmethod
    def of(cls, value: bool) -> Verdict:
        return cls.TRUE if value else cls.FALSE

    def negate(self) -> Verdict:
        return {Verdict.TRUE: Verdict.FALSE, Verdict.FALSE: Verdict.TRUE}.get(self, self)


def all_of(*vs: Verdict) -> Verdict:
    if Verdict.FALSE in vs:
        return Verdict.FALSE
    if all(v is Verdict.TRUE for v in vs):
        return Verdict.TRUE
    return Verdict.UNKNOWN


class GroupFacts:
    """Lazily computed invariants of one group, shared by every check below."""

    def __init__(
        self,
        G: FiniteGroup,
        *,
        oracle: bool = True,
        budget_homs: int = DEFAULT_HOM_BUDGET,
        budget_subgroups: int = DEFAULT_SUBGROUP_BUDGET,
    ):
        self.G = G
        self.use_oracle = oracle
        self.budget_homs = budget_homs
        self.budget_subgroups = budget_subgroups
        self.notes: list[str] = []

    @property
    def p(self) -> int:
        return self.G.prime

    @cached_property
    def n(self) -> int:
        return logp(self.G.order, self.p)

    @property
    def abelian(self) -> bool:
        return self.G.is_abelian

    @cached_property
    def center(self) -> Subgroup:
        return center(self.G)

    @cached_property
    def derived(self) -> Subgroup:
        return derived_subgroup(self.G)

    @cached_property
    def lower(self) -> list[Subgroup]:
        return lower_central_series(self.G)

    @cached_property
    def upper(self) -> list[Subgroup]:
        return upper_central_series(self.G)

    @property
    def nilpotency_class(self) -> int:
        return len(self.lower)

    @property
    def coclass(self) -> int:
        return self.n - self.nilpotency_class

    @cached_property
    def frattini_rank(self) -> tuple[Subgroup, int]:
        return frattini_and_rank(self.G)

    @cached_property
    def center_meet_derived(self) -> Subgroup:
        return subgroup_intersection(self.center, self.derived)

    @cached_property
    def derived_times_center(self) -> Subgroup:
        return subgroup_product(self.derived, self.center)

    @cached_property
    def type_center(self) -> AbelianType:
        return abelian_invariants(self.center)

    @cached_property
    def mod_derived(self) -> FiniteGroup:
        return quotient(self.G, self.derived, name=f"{self.G.name}/G'")

    @cached_property
    def mod_derived_center(self) -> FiniteGroup:
        return quotient(self.G, self.derived_times_center, name=f"{self.G.name}/G'Z")

    @cached_property
    def type_mod_derived(self) -> AbelianType:
        return abelian_invariants(self.mod_derived)

    @cached_property
    def type_mod_derived_center(self) -> AbelianType:
        return abelian_invariants(self.mod_derived_center)

    @cached_property
    def z_inn_order(self) -> int:
        if len(self.upper) < 2:
            return 1
        return self.upper[1].order // self.upper[0].order

    @cached_property
    def purity(self) -> DirectFactorResult:
        return direct_factor_search(self.G, self.budget_subgroups)

    @cached_property
    def oracle(self) -> CentralAutomorphisms | None:
        if not self.use_oracle or self.abelian:
            return None
        try:
            return central_automorphisms(self.G, self.budget_homs)
        except BudgetExceeded as exc:
            self.notes.append(f"oracle skipped: {exc}")
            return None

    @cached_property
    def inner_center(self) -> InnerCenterCheck | None:
        if self.oracle is None:
            return None
        return inner_center_check(self.G, self.oracle)

    @cached_property
    def centz_equals_inner(self) -> Verdict:
        """``Autcent_Z(G) = Inn(G)`` as sets of maps (needs the oracle)."""
        if self.oracle is None:
            return Verdict.UNKNOWN
        centz = self.oracle.autcentz
        if len(centz) != self.G.order // self.center.order:
            return Verdict.FALSE
        return Verdict.of({m.key for m in centz} == inner_automorphism_keys(self.G))


GroupOrFacts = Union[FiniteGroup, GroupFacts]


def facts_for(G: GroupOrFacts, **kwargs) -> GroupFacts:
    return G if isinstance(G, GroupFacts) else GroupFacts(G, **kwargs)


def _require_nonabelian(f: GroupFacts) -> None:
    if f.abelian:
        raise GroupError(f"{f.G.name} is abelian")


# formulas -------------------------------------------------------------------


def centz_order_formula(G: GroupOrFacts) -> int:
    """``|Hom(G/G'Z(G), Z(G))|``."""
    f = facts_for(G)
    _require_nonabelian(f)
    return hom_order(f.type_mod_derived_center, f.type_center)


def cent_order_formula(G: GroupOrFacts) -> tuple[int, Verdict]:
    """``|Hom(G/G', Z(G))|`` with a flag saying whether G is known to be purely non-abelian."""
    f = facts_for(G)
    _require_nonabelian(f)
    value = hom_order(f.type_mod_derived, f.type_center)
    valid = {
        Purity.PURELY_NONABELIAN: Verdict.TRUE,
        Purity.FACTOR_FOUND: Verdict.FALSE,
    }.get(f.purity.verdict, Verdict.UNKNOWN)
    return value, valid


def z_inn_order(G: GroupOrFacts) -> int:
    return facts_for(G).z_inn_order


# the condition ---------------------------------------------------------------


@dataclass
class ConditionVerdict:
    z_inn: int | None
    centz: int | None
    cent: int | None
    cent_source: str | None
    equality: Verdict
    strictness: Verdict
    holds: Verdict


def condition_check(G: GroupOrFacts, oracle: bool = True) -> ConditionVerdict:
    """Decide ``Z(Inn(G)) = Autcent_Z(G) < Autcent(G)``.

    Equality is an order comparison, valid because ``Z(Inn(G))`` embeds in
    ``Autcent_Z(G)``.  Strictness uses oracle counts when available, else the
    formulas, but only once ``G`` is known to be purely non-abelian; otherwise
    it stays unknown.
    """
    f = facts_for(G, oracle=oracle)
    if f.abelian:
        # outside the condition's scope: Autcent(G) is all of Aut(G) here
        na = Verdict.NA
        return ConditionVerdict(None, None, None, None, na, na, na)
    z_inn = f.z_inn_order
    centz = centz_order_formula(f)
    equality = Verdict.of(z_inn == centz)
    cent, source = None, None
    if f.oracle is not None:
        centz_seen = len(f.oracle.autcentz)
        cent, source = len(f.oracle.autcent), "oracle"
        strictness = Verdict.of(cent > centz_seen)
    else:
        value, valid = cent_order_formula(f)
        if valid is Verdict.TRUE:
            cent, source = value, "formula"
            strictness = Verdict.of(cent > centz)
        else:
            strictness = Verdict.UNKNOWN
    return ConditionVerdict(z_inn, centz, cent, source, equality, strictness, all_of(equality, strictness))


@dataclass
class TheoremRecord:
    rule: str
    expected: Verdict
    computed: Verdict
    status: str

    @property
    def violation(self) -> bool:
        return self.status == "VIOLATION"


def classify_theorems(G: GroupOrFacts, oracle: bool = True) -> TheoremRecord:
    """Compare the computed condition with what the order classification predicts.

    Order up to ``p^6``: never.  Order ``p^7``: exactly when ``Z(G) = C_{p^2}``,
    ``|G'| = p^4`` and the class is 4.  Larger orders carry no prediction.
    """
    f = facts_for(G, oracle=oracle)
    if f.abelian:
        return TheoremRecord("n/a", Verdict.NA, Verdict.NA, "n/a")
    computed = condition_check(f).holds
    if f.n <= 6:
        rule, expected = "order<=p^6", Verdict.FALSE
    elif f.n == 7:
        rule = "order=p^7"
        expected = Verdict.of(
            f.type_center.exponents == (2,)
            and f.derived.order == f.p**4
            and f.nilpotency_class == 4
        )
    else:
        return TheoremRecord("order>p^7", Verdict.NA, computed, "n/a")
    if computed is Verdict.UNKNOWN:
        status = "unchecked"
    else:
        status = "consistent" if computed is expected else "VIOLATION"
    return TheoremRecord(rule, expected, computed, status)


@dataclass
class LemmaRecord:
    name: str
    statement: str
    hypothesis: Verdict
    conclusion: Verdict
    biconditional: bool = False

    @property
    def status(self) -> str:
        h, c = self.hypothesis, self.conclusion
        if Verdict.NA in (h, c):
            return "n/a"
        if self.biconditional:
            if Verdict.UNKNOWN in (h, c):
                return "unknown"
            return "pass" if h is c else "FAIL"
        if h is Verdict.FALSE:
            return "vacuous"
        if h is Verdict.UNKNOWN or c is Verdict.UNKNOWN:
            return "unknown"
        return "pass" if c is Verdict.TRUE else "FAIL"

    @property
    def failed(self) -> bool:
        return self.status == "FAIL"


LEMMA_NAMES = ("quotient_noncyclic", "coclass_two", "centz_is_inner", "running_assumptions")


def structural_lemma_checks(G: GroupOrFacts, oracle: bool = True) -> list[LemmaRecord]:
    f = facts_for(G, oracle=oracle)
    if f.abelian:
        return [LemmaRecord(name, "", Verdict.NA, Verdict.NA) for name in LEMMA_NAMES]
    p = f.p
    Z, D = f.center, f.derived
    cond = condition_check(f).holds
    records = [
        LemmaRecord(
            "quotient_noncyclic",
            "G' abelian => G/G'Z(G) not cyclic",
            Verdict.of(D.is_abelian),
            Verdict.of(not f.type_mod_derived_center.is_cyclic),
        ),
        LemmaRecord(
            "coclass_two",
            "coclass 2 => condition fails",
            Verdict.of(f.coclass == 2),
            cond.negate(),
        ),
        LemmaRecord(
            "centz_is_inner",
            "Autcent_Z(G) = Inn(G) <=> G' = Z(G) cyclic",
            f.centz_equals_inner,
            Verdict.of(D == Z and f.type_center.is_cyclic),
            biconditional=True,
        ),
        LemmaRecord(
            "running_assumptions",
            "Z(G) not in G', class >= 3 => not maximal class, |Z| >= p^2, |G| >= p^5",
            Verdict.of(not (Z <= D) and f.nilpotency_class >= 3),
            Verdict.of(f.coclass != 1 and Z.order >= p**2 and f.n >= 5),
        ),
    ]
    return records


# reports ----------------------------------------------------------------------


REPORT_KEYS = (
    "name",
    "prime",
    "order",
    "log_order",
    "abelian",
    "class",
    "coclass",
    "rank",
    "center_type",
    "center_generators",
    "derived_order",
    "derived_generators",
    "center_meet_derived_order",
    "derived_center_order",
    "type_mod_derived_center",
    "type_mod_derived",
    "z_inn_order",
    "centz_formula",
    "cent_formula",
    "cent_formula_valid",
    "purity",
    "oracle_endomorphisms",
    "oracle_centz",
    "oracle_cent",
    "inner_center_check",
    "condition_equality",
    "condition_strictness",
    "condition",
    "theorem_rule",
    "theorem_expected",
    "theorem_status",
) + tuple(f"lemma_{name}" for name in LEMMA_NAMES) + ("notes",)


@dataclass
class AnalysisReport:
    name: str
    prime: int
    order: int
    log_order: int
    abelian: bool
    nilpotency_class: int
    coclass: int
    rank: int
    center_type: AbelianType
    center_generators: list[str]
    derived_order: int
    derived_generators: list[str]
    center_meet_derived_order: int | None = None
    derived_center_order: int | None = None
    type_mod_derived_center: AbelianType | None = None
    type_mod_derived: AbelianType | None = None
    z_inn_order: int | None = None
    centz_formula: int | None = None
    cent_formula: int | None = None
    cent_formula_valid: Verdict = Verdict.NA
    purity: str | None = None
    oracle_endomorphisms: int | None = None
    oracle_centz: int | None = None
    oracle_cent: int | None = None
    inner_center_check: Verdict = Verdict.NA
    condition: ConditionVerdict | None = None
    theorem: TheoremRecord | None = None
    lemmas: list[LemmaRecord] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def condition_holds(self) -> Verdict:
        return self.condition.holds if self.condition else Verdict.NA

    def fields(self) -> dict[str, object]:
        """Report values keyed by ``REPORT_KEYS``, in that order."""
        c = self.condition
        t = self.theorem
        values = {
            "name": self.name,
            "prime": self.prime,
            "order": self.order,
            "log_order": self.log_order,
            "abelian": self.abelian,
            "class": self.nilpotency_class,
            "coclass": self.coclass,
            "rank": self.rank,
            "center_type": self.center_type,
            "center_generators": self.center_generators,
            "derived_order": self.derived_order,
            "derived_generators": self.derived_generators,
            "center_meet_derived_order": self.center_meet_derived_order,
            "derived_center_order": self.derived_center_order,
            "type_mod_derived_center": self.type_mod_derived_center,
            "type_mod_derived": self.type_mod_derived,
            "z_inn_order": self.z_inn_order,
            "centz_formula": self.centz_formula,
            "cent_formula": self.cent_formula,
            "cent_formula_valid": self.cent_formula_valid,
            "purity": self.purity,
            "oracle_endomorphisms": self.oracle_endomorphisms,
            "oracle_centz": self.oracle_centz,
            "oracle_cent": self.oracle_cent,
            "inner_center_check": self.inner_center_check,
            "condition_equality": c.equality if c else Verdict.NA,
            "condition_strictness": c.strictness if c else Verdict.NA,
            "condition": self.condition_holds,
            "theorem_rule": t.rule if t else "n/a",
            "theorem_expected": t.expected if t else Verdict.NA,
            "theorem_status": t.status if t else "n/a",
            "notes": self.notes,
        }
        statuses = {r.name: r.status for r in self.lemmas}
        for name in LEMMA_NAMES:
            values[f"lemma_{name}"] = statuses.get(name, "n/a")
        return {k: values[k] for k in REPORT_KEYS}

    def to_json_dict(self) -> dict[str, object]:
        return {k: _json_value(v) for k, v in self.fields().items()}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), ensure_ascii=False)

    def render_table(self) -> str:
        rows = [(k, _text_value(v)) for k, v in self.fields().items()]
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def _json_value(v):
    if v is None:
        return None
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Enum):
        return v.value
    if isinstance(v, int):
        return str(v)
    if isinstance(v, AbelianType):
        return [str(e) for e in v.exponents]
    if isinstance(v, list):
        return [_json_value(x) for x in v]
    return str(v)


def _text_value(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Enum):
        return v.value
    if isinstance(v, AbelianType):
        return f"[{', '.join(map(str, v.exponents))}] ({v})"
    if isinstance(v, list):
        return ", ".join(map(str, v)) if v else "-"
    return str(v)


def analyze(
    G: FiniteGroup,
    *,
    oracle: bool = False,
    budget_homs: int = DEFAULT_HOM_BUDGET,
    budget_subgroups: int = DEFAULT_SUBGROUP_BUDGET,
) -> AnalysisReport:
    f = GroupFacts(G, oracle=oracle, budget_homs=budget_homs, budget_subgroups=budget_subgroups)
    labels = lambda H: [G.label(x) for x in reduced_generators(H)]  # noqa: E731
    _, rank = f.frattini_rank
    report = AnalysisReport(
        name=G.name,
        prime=f.p,
        order=G.order,
        log_order=f.n,
        abelian=f.abelian,
        nilpotency_class=f.nilpotency_class,
        coclass=f.coclass,
        rank=rank,
        center_type=f.type_center,
        center_generators=labels(f.center),
        derived_order=f.derived.order,
        derived_generators=labels(f.derived),
    )
    if f.abelian:
        report.condition = condition_check(f)
        return report
    report.center_meet_derived_order = f.center_meet_derived.order
    report.derived_center_order = f.derived_times_center.order
    report.type_mod_derived_center = f.type_mod_derived_center
    report.type_mod_derived = f.type_mod_derived
    report.z_inn_order = f.z_inn_order
    report.centz_formula = centz_order_formula(f)
    report.cent_formula, report.cent_formula_valid = cent_order_formula(f)
    report.purity = f.purity.verdict.value
    if f.oracle is not None:
        report.oracle_endomorphisms = len(f.oracle.endomorphisms)
        report.oracle_centz = len(f.oracle.autcentz)
        report.oracle_cent = len(f.oracle.autcent)
        report.inner_center_check = Verdict.of(f.inner_center.holds)
    report.condition = condition_check(f)
    report.theorem = classify_theorems(f)
    report.lemmas = structural_lemma_checks(f)
    report.notes = list(f.notes) + list(f.purity.notes)
    return report
