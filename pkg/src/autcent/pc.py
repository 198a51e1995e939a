"""Power-commutator presentations of finite p-groups.

A presentation on generators ``g1 .. gn`` with prime ``p`` gives, for every
generator, the normal form of ``gi^p`` and, for every pair ``j > i``, the
normal form of the commutator ``[gj, gi] = gj^-1 gi^-1 gj gi``.  Elements are
exponent vectors ``(e1, .., en)`` with ``0 <= ei < p`` standing for the word
``g1^e1 .. gn^en``.

Indices are 0-based in code and 1-based in files and reports.

File format (``#`` starts a comment)::

    group <name>
    prime <p>
    ngens <n>
    pow <i>: <e1> .. <en>
    comm <j> <i>: <e1> .. <en>
    end
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

Element = tuple[int, ...]

# Deterministic index stream for the sampled associativity check:
# x_{k+1} = (LCG_A * x_k + LCG_C) mod 2^31, starting from LCG_SEED.
LCG_A = 1103515245
LCG_C = 12345
LCG_MOD = 2**31
LCG_SEED = 20240229
DEFAULT_SAMPLE_TRIPLES = 10_000


class PresentationError(ValueError):
    """Malformed or invalid presentation text."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class WeightingError(PresentationError):
    """A relation's right-hand side uses a generator it must not."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


@dataclass(eq=False)
class PcPresentation:
    name: str
    prime: int
    ngens: int
    power_relations: dict[int, Element] = field(default_factory=dict)
    commutator_relations: dict[tuple[int, int], Element] = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        p, n = self.prime, self.ngens
        if not is_prime(p):
            raise PresentationError(f"prime {p} is not prime")
        if n < 1:
            raise PresentationError("ngens must be at least 1")
        self.power_relations = {i: tuple(v) for i, v in self.power_relations.items() if any(v)}
        self.commutator_relations = {
            k: tuple(v) for k, v in self.commutator_relations.items() if any(v)
        }
        for i, vec in self.power_relations.items():
            _check_vector(vec, p, n, f"pow {i + 1}")
            if not 0 <= i < n:
                raise PresentationError(f"pow {i + 1}: generator index out of range")
            if any(vec[: i + 1]):
                raise WeightingError(f"pow {i + 1}: value must only involve g{i + 2}..g{n}")
        for (j, i), vec in self.commutator_relations.items():
            _check_vector(vec, p, n, f"comm {j + 1} {i + 1}")
            if not 0 <= i < j < n:
                raise PresentationError(f"comm {j + 1} {i + 1}: need n >= j > i >= 1")
            if any(vec[: j + 1]):
                raise WeightingError(
                    f"comm {j + 1} {i + 1}: value must only involve g{j + 2}..g{n}"
                )
        self._pow_words = [_letters(self.power_relations.get(i, ())) for i in range(n)]
        self._comm_words = {
            (j, i): _letters(self.commutator_relations.get((j, i), ()))
            for j in range(n)
            for i in range(j)
        }

    @property
    def order(self) -> int:
        return self.prime**self.ngens

    @property
    def identity(self) -> Element:
        return (0,) * self.ngens

    def generator(self, i: int) -> Element:
        """Normal form of the generator with 0-based index ``i``."""
        v = [0] * self.ngens
        v[i] = 1
        return tuple(v)

    def element_id(self, a: Sequence[int]) -> int:
        """Lexicographic rank of an exponent vector."""
        k = 0
        for e in a:
            k = k * self.prime + e
        return k

    def element_from_id(self, k: int) -> Element:
        elems = self._cache.get("elements")
        if elems is None:
            elems = self._cache["elements"] = enumerate_elements(self)
        return elems[k]

    # collection -----------------------------------------------------------

    def _mul_gen(self, a: Element, i: int) -> Element:
        """Normal form of ``a * gi``.

        ``g1^e1 .. gi^ei T`` times ``gi`` is ``g1^e1 .. gi^(ei+1) T^gi`` where
        every letter ``gk`` of the tail ``T`` is rewritten as ``gk [gk, gi]``;
        an exponent reaching ``p`` is replaced by the power word.  Weighting
        makes every rewritten letter strictly later than ``gi``, so the
        recursion terminates.
        """
        key = (a, i)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        r = list(a)
        tail = []
        for k in range(i + 1, self.ngens):
            if r[k]:
                tail.extend([k] * r[k])
                r[k] = 0
        pending: list[int] = []
        r[i] += 1
        if r[i] == self.prime:
            r[i] = 0
            pending.extend(self._pow_words[i])
        for k in tail:
            pending.append(k)
            pending.extend(self._comm_words[(k, i)])
        out = tuple(r)
        for k in pending:
            out = self._mul_gen(out, k)
        self._cache[key] = out
        return out

    def collect_word(self, letters: Iterable[int], start: Element | None = None) -> Element:
        out = self.identity if start is None else tuple(start)
        for k in letters:
            out = self._mul_gen(out, k)
        return out


def _letters(vec: Sequence[int]) -> list[int]:
    return [k for k, e in enumerate(vec) for _ in range(e)]


def _check_vector(vec: Sequence[int], p: int, n: int, what: str) -> None:
    if len(vec) != n:
        raise PresentationError(f"{what}: expected {n} exponents, got {len(vec)}")
    for e in vec:
        if not 0 <= e < p:
            raise PresentationError(f"{what}: exponent {e} outside [0, {p})")


# parsing ------------------------------------------------------------------


def _tokens(line: str) -> list[tuple[str, int]]:
    """Split a line into (token, 1-based column) pairs; ':' is its own token."""
    out = []
    col = 0
    while col < len(line):
        ch = line[col]
        if ch.isspace():
            col += 1
        elif ch == ":":
            out.append((":", col + 1))
            col += 1
        else:
            start = col
            while col < len(line) and not line[col].isspace() and line[col] != ":":
                col += 1
            out.append((line[start:col], start + 1))
    return out


def _int(tok: tuple[str, int], lineno: int, what: str) -> int:
    try:
        return int(tok[0])
    except ValueError:
        raise PresentationError(f"expected integer {what}, got {tok[0]!r}", lineno, tok[1]) from None


class _Block:
    def __init__(self, name: str, lineno: int):
        self.name = name
        self.lineno = lineno
        self.prime: int | None = None
        self.ngens: int | None = None
        self.pows: dict[int, Element] = {}
        self.comms: dict[tuple[int, int], Element] = {}

    def vector(self, toks, lineno, what) -> Element:
        p, n = self.prime, self.ngens
        if len(toks) != n:
            col = toks[0][1] if toks else None
            raise PresentationError(f"{what}: expected {n} exponents, got {len(toks)}", lineno, col)
        vec = []
        for tok in toks:
            e = _int(tok, lineno, "exponent")
            if not -p < e < p:
                raise PresentationError(f"{what}: exponent {e} out of range (-{p}, {p})", lineno, tok[1])
            vec.append(e % p)
        return tuple(vec)


def parse_presentations(text: str) -> list[PcPresentation]:
    """Parse every ``group .. end`` block in ``text``."""
    groups: list[PcPresentation] = []
    names: set[str] = set()
    block: _Block | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw.split("#", 1)[0])
        if not toks:
            continue
        key, col = toks[0]
        if block is None:
            if key != "group":
                raise PresentationError(f"expected 'group', got {key!r}", lineno, col)
            if len(toks) != 2:
                raise PresentationError("usage: group <name>", lineno, col)
            name = toks[1][0]
            if name in names:
                raise PresentationError(f"duplicate group name {name!r}", lineno, toks[1][1])
            block = _Block(name, lineno)
            continue
        if key == "end":
            if len(toks) != 1:
                raise PresentationError("unexpected text after 'end'", lineno, toks[1][1])
            groups.append(_finish(block, lineno))
            names.add(block.name)
            block = None
        elif key in ("prime", "ngens"):
            if len(toks) != 2:
                raise PresentationError(f"usage: {key} <integer>", lineno, col)
            if getattr(block, key) is not None:
                raise PresentationError(f"{key} given twice", lineno, col)
            value = _int(toks[1], lineno, key)
            if key == "prime" and not is_prime(value):
                raise PresentationError(f"prime {value} is not prime", lineno, toks[1][1])
            if key == "ngens" and value < 1:
                raise PresentationError("ngens must be at least 1", lineno, toks[1][1])
            setattr(block, key, value)
        elif key in ("pow", "comm"):
            if block.prime is None or block.ngens is None:
                raise PresentationError(f"'{key}' before prime and ngens", lineno, col)
            nidx = 1 if key == "pow" else 2
            if len(toks) < nidx + 2 or toks[nidx + 1][0] != ":":
                usage = "pow <i>: <exponents>" if key == "pow" else "comm <j> <i>: <exponents>"
                raise PresentationError(f"usage: {usage}", lineno, col)
            idx = [_int(t, lineno, "generator index") for t in toks[1 : nidx + 1]]
            for t, k in zip(toks[1 : nidx + 1], idx):
                if not 1 <= k <= block.ngens:
                    raise PresentationError(f"generator index {k} out of range", lineno, t[1])
            label = f"{key} {' '.join(map(str, idx))}"
            vec = block.vector(toks[nidx + 2 :], lineno, label)
            if key == "pow":
                i = idx[0] - 1
                if i in block.pows:
                    raise PresentationError(f"{label} given twice", lineno, col)
                if any(vec[: i + 1]):
                    raise WeightingError(
                        f"{label}: value must only involve g{i + 2}..g{block.ngens}", lineno, col
                    )
                block.pows[i] = vec
            else:
                j, i = idx[0] - 1, idx[1] - 1
                if j <= i:
                    raise PresentationError(f"{label}: need j > i", lineno, toks[1][1])
                if (j, i) in block.comms:
                    raise PresentationError(f"{label} given twice", lineno, col)
                if any(vec[: j + 1]):
                    raise WeightingError(
                        f"{label}: value must only involve g{j + 2}..g{block.ngens}", lineno, col
                    )
                block.comms[(j, i)] = vec
        elif key == "group":
            raise PresentationError("missing 'end' before next 'group'", lineno, col)
        else:
            raise PresentationError(f"unknown keyword {key!r}", lineno, col)
    if block is not None:
        raise PresentationError(f"group {block.name!r} has no 'end'", block.lineno, 1)
    return groups


def _finish(block: _Block, lineno: int) -> PcPresentation:
    if block.prime is None or block.ngens is None:
        raise PresentationError(f"group {block.name!r} lacks prime or ngens", lineno, 1)
    return PcPresentation(block.name, block.prime, block.ngens, block.pows, block.comms)


def parse_presentation(text: str) -> PcPresentation:
    """Parse text holding exactly one group block."""
    groups = parse_presentations(text)
    if len(groups) != 1:
        raise PresentationError(f"expected exactly one group block, found {len(groups)}")
    return groups[0]


def format_presentation(G: PcPresentation) -> str:
    lines = [f"group {G.name}", f"prime {G.prime}", f"ngens {G.ngens}"]
    for i in sorted(G.power_relations):
        lines.append(f"pow {i + 1}: " + " ".join(map(str, G.power_relations[i])))
    for j, i in sorted(G.commutator_relations):
        lines.append(f"comm {j + 1} {i + 1}: " + " ".join(map(str, G.commutator_relations[(j, i)])))
    lines.append("end")
    return "\n".join(lines) + "\n"


def direct_product(A: PcPresentation, B: PcPresentation, name: str | None = None) -> PcPresentation:
    """``A x B`` on generators ``A.g1..A.gm, B.g1..B.gn``; the two blocks commute."""
    if A.prime != B.prime:
        raise PresentationError(f"prime mismatch: {A.prime} vs {B.prime}")
    m, n = A.ngens, B.ngens
    left = lambda v: tuple(v) + (0,) * n  # noqa: E731
    right = lambda v: (0,) * m + tuple(v)  # noqa: E731
    pows = {i: left(v) for i, v in A.power_relations.items()}
    pows |= {m + i: right(v) for i, v in B.power_relations.items()}
    comms = {k: left(v) for k, v in A.commutator_relations.items()}
    comms |= {(m + j, m + i): right(v) for (j, i), v in B.commutator_relations.items()}
    return PcPresentation(name or f"{A.name}x{B.name}", A.prime, m + n, pows, comms)


# element arithmetic ---------------------------------------------------------


def collect_product(G: PcPresentation, a: Element, b: Element) -> Element:
    """Normal form of ``a * b``."""
    return G.collect_word(_letters(b), start=a)


def inverse(G: PcPresentation, a: Element) -> Element:
    # Peel a off one generator at a time: multiplying by gi only touches
    # coordinates >= i, and the multipliers themselves form a normal form.
    c = tuple(a)
    x = []
    for i in range(G.ngens):
        t = (G.prime - c[i]) % G.prime
        for _ in range(t):
            c = G._mul_gen(c, i)
        x.append(t)
    return tuple(x)


def power(G: PcPresentation, a: Element, k: int) -> Element:
    if k < 0:
        a, k = inverse(G, a), -k
    out = G.identity
    sq = tuple(a)
    while k:
        if k & 1:
            out = collect_product(G, out, sq)
        k >>= 1
        if k:
            sq = collect_product(G, sq, sq)
    return out


def commutator(G: PcPresentation, a: Element, b: Element) -> Element:
    """``[a, b] = a^-1 b^-1 a b``."""
    left = collect_product(G, inverse(G, a), inverse(G, b))
    return collect_product(G, collect_product(G, left, a), b)


def element_order(G: PcPresentation, a: Element) -> int:
    k, x = 1, tuple(a)
    while any(x):
        x = power(G, x, G.prime)
        k *= G.prime
    return k


def enumerate_elements(G: PcPresentation) -> list[Element]:
    """All normal forms in lexicographic order; list index is the element id."""
    return list(itertools.product(range(G.prime), repeat=G.ngens))


# consistency ----------------------------------------------------------------


@dataclass
class ConsistencyReport:
    name: str
    order: int
    expected_order: int
    checks: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and self.order == self.expected_order

    def summary(self) -> str:
        status = "pass" if self.ok else "FAIL"
        line = f"{self.name}: {status}, order {self.order}, {self.checks} checks"
        if self.failures:
            shown = "; ".join(self.failures[:5])
            more = f" (+{len(self.failures) - 5} more)" if len(self.failures) > 5 else ""
            line += f", {len(self.failures)} failures: {shown}{more}"
        return line


def lcg_indices(count: int, modulus: int, seed: int = LCG_SEED) -> Iterator[int]:
    x = seed
    for _ in range(count):
        x = (LCG_A * x + LCG_C) % LCG_MOD
        yield x % modulus


def _fmt(a: Element) -> str:
    word = [f"g{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(a) if e]
    return "*".join(word) or "1"


def check_consistency(G: PcPresentation, sample: int = DEFAULT_SAMPLE_TRIPLES) -> ConsistencyReport:
    """Closure, associativity and relation checks; failures are collected, not raised.

    Associativity is tested on every generator triple, on the standard
    overlap words (``gk(gj gi)``, ``gj^p gi``, ``gj gi^p``, ``gi^p gi``),
    and on ``sample`` element triples drawn from :func:`lcg_indices`.
    """
    n, p = G.ngens, G.prime
    gens = [G.generator(i) for i in range(n)]
    mul = lambda a, b: collect_product(G, a, b)  # noqa: E731

    # (a) closure of the identity under right multiplication by generators
    seen = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for i in range(n):
                b = G._mul_gen(a, i)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    report = ConsistencyReport(G.name, len(seen), G.order)
    if len(seen) != G.order:
        report.failures.append(f"closure has {len(seen)} elements, expected {G.order}")

    def assoc(a, b, c, label):
        report.checks += 1
        left, right = mul(mul(a, b), c), mul(a, mul(b, c))
        if left != right:
            report.failures.append(f"{label}: ({_fmt(left)}) != ({_fmt(right)})")

    # (b) associativity
    for i, j, k in itertools.product(range(n), repeat=3):
        assoc(gens[i], gens[j], gens[k], f"(g{i + 1} g{j + 1}) g{k + 1}")
    for i in range(n):
        gp = power(G, gens[i], p - 1)
        assoc(gp, gens[i], gens[i], f"g{i + 1}^p g{i + 1}")
        for j in range(i + 1, n):
            gjp = power(G, gens[j], p - 1)
            gip = power(G, gens[i], p - 1)
            assoc(gjp, gens[j], gens[i], f"g{j + 1}^p g{i + 1}")
            assoc(gens[j], gens[i], gip, f"g{j + 1} g{i + 1}^p")
    idx = list(lcg_indices(3 * sample, G.order))
    for t in range(sample):
        a, b, c = (G.element_from_id(k) for k in idx[3 * t : 3 * t + 3])
        assoc(a, b, c, f"sample {t}")

    # (c) defining relations
    for i in range(n):
        report.checks += 1
        got = G.collect_word([i] * p)
        want = G.power_relations.get(i, G.identity)
        if got != want:
            report.failures.append(f"g{i + 1}^{p} = {_fmt(got)}, relation says {_fmt(want)}")
        for j in range(i + 1, n):
            report.checks += 1
            got = commutator(G, gens[j], gens[i])
            want = G.commutator_relations.get((j, i), G.identity)
            if got != want:
                report.failures.append(
                    f"[g{j + 1},g{i + 1}] = {_fmt(got)}, relation says {_fmt(want)}"
                )
    return report
