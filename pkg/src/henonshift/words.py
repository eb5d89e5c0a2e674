"""Alphabet and word combinatorics for the truncated symbol model.

Symbols carry an order; words are finite symbol strings whose order is the
sum.  The full model saturates the two-symbols-per-order bound, which turns
every counting lemma into an exact recursion.  On top of that sit
Xi-regularity, the aleph cutoff, common-sequence validation, right
divisibility, the word-counting DPs, synthetic loop censuses, and the
covering-sum dimension bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .markov import LoopCensus
from .params import Params

__all__ = [
    "Symbol",
    "Word",
    "UNIT_WORD",
    "symbol_to_dict",
    "symbol_from_dict",
    "word_to_dicts",
    "word_from_dicts",
    "SuitabilityModel",
    "full_model",
    "simple_only_model",
    "model_from_dict",
    "model_to_dict",
    "s_plus",
    "s_minus",
    "is_xi_regular",
    "aleph",
    "CommonSequenceReport",
    "validate_common_sequence",
    "divides",
    "canonical_spellings",
    "count_sharp",
    "count_prime_words",
    "zstar_from_model",
    "synthetic_census",
    "enumerate_words",
    "CoveringSum",
    "covering_sum",
    "block_sum",
    "DimensionBound",
    "dimension_upper_bound",
]

_KINDS = ("simple", "square", "parabolic", "square_c")
_SIGNS = ("+", "-", "b")


@dataclass(frozen=True)
class Symbol:
    """One alphabet symbol.

    kind : simple | square | parabolic | square_c
    order : positive integer; square_c carries +inf (its stable leaf never
        closes a finite-order word and it is excluded from all counts)
    sign : "+" or "-" distinguishes the two copies per order; "b" is the
        bottom variant that some geometric constructions use
    depth : for parabolic symbols, the order of the underlying common
        piece (order - M - 1 in the full model); informational
    """

    kind: str
    order: float
    sign: str = "+"
    depth: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown symbol kind {self.kind!r}")
        if self.sign not in _SIGNS:
            raise ValueError(f"unknown sign {self.sign!r}")
        if self.kind == "square_c":
            if not math.isinf(self.order):
                raise ValueError("square_c must have infinite order")
        else:
            if not (isinstance(self.order, int) and self.order >= 2):
                raise ValueError(f"finite symbol order must be an integer >= 2, got {self.order}")

    @property
    def id(self) -> str:
        d = "" if self.depth is None else f".{self.depth}"
        return f"{self.kind[0]}{self.order}{self.sign}{d}"

    def __repr__(self) -> str:  # compact in word dumps
        return self.id


@dataclass(frozen=True)
class Word:
    """Finite symbol string; the empty tuple is the unit word e (order 0)."""

    symbols: tuple[Symbol, ...] = ()

    @property
    def order(self) -> float:
        return sum(s.order for s in self.symbols) if self.symbols else 0

    def __len__(self) -> int:
        return len(self.symbols)

    def __bool__(self) -> bool:
        return bool(self.symbols)

    def concat(self, other: "Word") -> "Word":
        return Word(self.symbols + other.symbols)

    def suffix(self, k: int) -> "Word":
        return Word(self.symbols[len(self.symbols) - k:]) if k else UNIT_WORD

    def __repr__(self) -> str:
        return "e" if not self.symbols else "·".join(s.id for s in self.symbols)


UNIT_WORD = Word(())


def symbol_to_dict(s: Symbol) -> dict:
    return {
        "kind": s.kind,
        "order": "inf" if math.isinf(s.order) else int(s.order),
        "sign": s.sign,
        "depth": s.depth,
    }


def symbol_from_dict(d: dict) -> Symbol:
    order = d["order"]
    return Symbol(
        kind=d["kind"],
        order=math.inf if order == "inf" else int(order),
        sign=d.get("sign", "+"),
        depth=d.get("depth"),
    )


def word_to_dicts(w: Word) -> list[dict]:
    """Word as a JSON-ready array of {kind, order, sign, depth} entries."""
    return [symbol_to_dict(s) for s in w.symbols]


def word_from_dicts(entries: Sequence[dict]) -> Word:
    return Word(tuple(symbol_from_dict(d) for d in entries))


def s_plus() -> Symbol:
    """The order-2 simple symbol whose box avoids the fixed point."""
    return Symbol("simple", 2, "+")


def s_minus() -> Symbol:
    """The order-2 simple symbol whose box contains the fixed point."""
    return Symbol("simple", 2, "-")


@dataclass(frozen=True)
class SuitabilityModel:
    """Which symbols may extend a word, and with what multiplicity.

    The full model is prefix-independent and saturates the bound of two
    symbols per order: simple orders 2..M, the square at order M+1,
    parabolic orders >= M+2.  The counting lemmas then hold as exact
    recursions instead of inequalities.  simple_orders restricts the
    simple part to an explicit table when not None.
    """

    M: int
    include_square: bool = True
    include_parabolic: bool = True
    multiplicity: int = 2
    simple_orders: tuple[int, ...] | None = None
    name: str = "full"

    def __post_init__(self) -> None:
        if self.M < 4:
            raise ValueError("M must be >= 4")
        if not (1 <= self.multiplicity <= 2):
            raise ValueError("per-order multiplicity is at most 2")
        if self.simple_orders is not None:
            bad = [k for k in self.simple_orders if not 2 <= k <= self.M]
            if bad:
                raise ValueError(f"simple orders outside [2, M]: {bad}")

    @property
    def square_order(self) -> int:
        return self.M + 1

    def multiplicity_of_order(self, k: int) -> int:
        """Number of symbols of order k (0 when inadmissible)."""
        if k < 2:
            return 0
        if k <= self.M:
            if self.simple_orders is not None and k not in self.simple_orders:
                return 0
            return self.multiplicity
        if k == self.M + 1:
            return self.multiplicity if self.include_square else 0
        return self.multiplicity if self.include_parabolic else 0

    def symbols_of_order(self, k: int) -> tuple[Symbol, ...]:
        mult = self.multiplicity_of_order(k)
        if mult == 0:
            return ()
        signs = ("+", "-")[:mult]
        if k <= self.M:
            return tuple(Symbol("simple", k, s) for s in signs)
        if k == self.M + 1:
            return tuple(Symbol("square", k, s) for s in signs)
        return tuple(Symbol("parabolic", k, s, depth=k - self.M - 1) for s in signs)

    def admissible_next(self, prefix: Word, max_order: int) -> list[Symbol]:
        """Symbols that may extend prefix, up to max_order.

        The full model ignores the prefix; the argument is part of the
        interface so restricted models can depend on it.
        """
        out: list[Symbol] = []
        for k in range(2, max_order + 1):
            out.extend(self.symbols_of_order(k))
        return out


def full_model(M: int, multiplicity: int = 2) -> SuitabilityModel:
    return SuitabilityModel(M=M, multiplicity=multiplicity, name="full")


def simple_only_model(M: int) -> SuitabilityModel:
    """No square and no parabolic symbols; covering families are empty."""
    return SuitabilityModel(
        M=M, include_square=False, include_parabolic=False, name="simple_only"
    )


def model_from_dict(data: dict) -> tuple[SuitabilityModel, Params]:
    """Build (model, params) from {"M":..., "b":..., "model": "full"}.

    Optional keys: "multiplicity", "simple_orders", "include_square",
    "include_parabolic" for explicit symbol tables.
    """
    try:
        M = int(data["M"])
        b = float(data.get("b", 0.0))
        name = str(data.get("model", "full"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed model document: {exc}") from exc
    params = Params(M=M, b=b)
    if name == "full":
        model = SuitabilityModel(
            M=M,
            multiplicity=int(data.get("multiplicity", 2)),
            include_square=bool(data.get("include_square", True)),
            include_parabolic=bool(data.get("include_parabolic", True)),
            simple_orders=(
                tuple(int(k) for k in data["simple_orders"])
                if "simple_orders" in data
                else None
            ),
            name="full",
        )
    elif name == "simple_only":
        model = simple_only_model(M)
    else:
        raise ValueError(f"unknown model name {name!r}")
    return model, params


def model_to_dict(model: SuitabilityModel, params: Params) -> dict:
    out = {"M": model.M, "b": params.b, "model": model.name}
    if model.multiplicity != 2:
        out["multiplicity"] = model.multiplicity
    if model.simple_orders is not None:
        out["simple_orders"] = list(model.simple_orders)
    if not model.include_square:
        out["include_square"] = False
    if not model.include_parabolic:
        out["include_parabolic"] = False
    return out


# ---------------------------------------------------------------------------
# regularity, aleph, common sequences


def is_xi_regular(w: Word, xi: float, params: Params) -> bool:
    """Every symbol obeys n_i <= M + xi * (order of the strict prefix).

    Evaluated in log form when the symbol order exceeds M, so xi as large
    as e^{sqrt M} never overflows.  Forces the first symbol to be simple
    (prefix order 0 leaves only n_1 <= M).
    """
    if not w.symbols:
        raise ValueError("regularity is defined for nonempty words")
    M = params.M
    prefix = 0.0
    for sym in w.symbols:
        n = sym.order
        if n > M:
            # need n - M <= xi * prefix, compared via logs
            if xi <= 0.0 or prefix <= 0.0:
                return False
            if math.isinf(n):
                return False
            if math.log(n - M) > math.log(xi) + math.log(prefix):
                return False
        prefix += n
    return True


def aleph(i: int, params: Params) -> int:
    """Run-length cutoff: [log M / 6c+] at i = 0, [c (i + M) / 6c+] after."""
    if i < 0:
        raise ValueError("aleph is defined for i >= 0")
    if i == 0:
        return math.floor(math.log(params.M) / (6.0 * params.c_plus))
    return math.floor(params.c * (i + params.M) / (6.0 * params.c_plus))


def _piece_tag(w: Word) -> str:
    """simple: a single simple symbol; square: contains a square segment."""
    if len(w) == 1 and w.symbols[0].kind == "simple":
        return "simple"
    if any(s.kind in ("square", "square_c") for s in w.symbols):
        return "square"
    return "invalid"


@dataclass(frozen=True)
class CommonSequenceReport:
    """Per-condition outcome for a candidate common sequence.

    condition1 (geometric attachment of each piece to the running curve)
    is not representable in the symbol model and is reported unchecked.
    passed covers conditions 2-4 only.  depth_order_ok records the
    order <= M * depth consequence for the sequence as given.
    """

    depth: int
    total_order: float
    condition1: str
    condition2_ok: bool
    condition2_failures: tuple[int, ...]
    condition3_ok: bool
    condition3_failures: tuple[int, ...]
    condition4_ok: bool
    condition4_failures: tuple[int, ...]
    depth_order_ok: bool
    passed: bool

    def to_dict(self) -> dict:
        return {
            "depth": self.depth,
            "total_order": self.total_order,
            "condition1": self.condition1,
            "condition2_ok": self.condition2_ok,
            "condition2_failures": list(self.condition2_failures),
            "condition3_ok": self.condition3_ok,
            "condition3_failures": list(self.condition3_failures),
            "condition4_ok": self.condition4_ok,
            "condition4_failures": list(self.condition4_failures),
            "depth_order_ok": self.depth_order_ok,
            "passed": self.passed,
        }


def validate_common_sequence(seq: Sequence[Word], params: Params) -> CommonSequenceReport:
    """Check conditions 2-4 of the common-sequence definition.

    2: each piece is a single simple symbol or has a square segment.
    3: for every prefix, the total order of pieces of order >= M+1 is at
       most e^{-sqrt M} times the order of the strictly earlier pieces.
    4: a run of k consecutive s_- pieces starting after position n needs
       k < aleph(n); the same bound applies when the run is preceded by
       one s_+ at position n+1.
    """
    M = params.M
    orders = [w.order for w in seq]
    j_count = len(seq)

    fail2 = tuple(
        j for j, w in enumerate(seq, start=1) if _piece_tag(w) == "invalid"
    )

    fail3: list[int] = []
    damp = math.exp(-math.sqrt(M))
    heavy = 0.0
    earlier = 0.0
    for j in range(1, j_count + 1):
        n_j = orders[j - 1]
        if n_j >= M + 1:
            heavy += n_j
        if heavy > damp * earlier:
            fail3.append(j)
        earlier += n_j

    sm = Word((s_minus(),))
    sp = Word((s_plus(),))
    fail4: list[int] = []
    j = 0
    while j < j_count:
        if seq[j] == sm:
            start = j
            while j < j_count and seq[j] == sm:
                j += 1
            run = j - start
            # suffix of the run starting at alpha_{n+1} has length run - off
            for off in range(run):
                if run - off >= aleph(start + off, params):
                    fail4.append(start + off + 1)
            if start >= 1 and seq[start - 1] == sp:
                if run >= aleph(start - 1, params):
                    fail4.append(start)  # position of the s_+ prefix
        else:
            j += 1

    total = sum(orders)
    return CommonSequenceReport(
        depth=j_count,
        total_order=total,
        condition1="unchecked",
        condition2_ok=not fail2,
        condition2_failures=fail2,
        condition3_ok=not fail3,
        condition3_failures=tuple(fail3),
        condition4_ok=not fail4,
        condition4_failures=tuple(sorted(set(fail4))),
        depth_order_ok=bool(total <= M * j_count),
        passed=not (fail2 or fail3 or fail4),
    )


# ---------------------------------------------------------------------------
# right divisibility


def divides(
    a: Word,
    b: Word,
    spelling: Mapping[Symbol, Word],
    memo: dict | None = None,
) -> bool:
    """Right divisibility a / b.

    D1: a equals b, or b is the unit word.
    D2: a is a single parabolic symbol standing for a box difference; a / b
        follows from spelling-of-its-piece / b.
    D3: splittings a = a3.a2.a1 and b = b2.a1 with a2 / b2 and a3, a1 not
        both trivial.  The recursion strictly decreases the order of the
        left word, so it terminates.

    spelling must map every parabolic symbol reached by D2 to a word of
    strictly smaller order (the spelled-out common piece).
    """
    if memo is None:
        memo = {}
    return _divides(a, b, spelling, memo)


def _divides(a: Word, b: Word, spelling: Mapping[Symbol, Word], memo: dict) -> bool:
    if a == b or not b:
        return True
    key = (a, b)
    cached = memo.get(key)
    if cached is not None:
        return cached
    memo[key] = False  # cycles cannot certify divisibility
    result = False

    if len(a) == 1 and a.symbols[0].kind == "parabolic":
        sym = a.symbols[0]
        try:
            spelled = spelling[sym]
        except KeyError:
            raise ValueError(f"no spelling provided for parabolic symbol {sym.id}")
        if spelled.order >= a.order:
            raise ValueError(
                f"spelling of {sym.id} must have order < {a.order}, got {spelled.order}"
            )
        result = _divides(spelled, b, spelling, memo)

    if not result:
        la, lb = len(a), len(b)
        for k in range(0, min(la, lb) + 1):
            if k and a.symbols[la - k] != b.symbols[lb - k]:
                break
            b2 = Word(b.symbols[: lb - k])
            for m in range(0, la - k + 1):
                if m == 0 and k == 0:
                    continue  # a3 and a1 both empty would not decrease the order
                a2 = Word(a.symbols[m : la - k])
                if _divides(a2, b2, spelling, memo):
                    result = True
                    break
            if result:
                break

    memo[key] = result
    return result


def canonical_spellings(
    model: SuitabilityModel, max_order: int
) -> dict[Symbol, Word]:
    """Spelling map for every parabolic symbol of order <= max_order.

    A parabolic symbol of order M+1+d spells the order-d common piece as
    simple symbols: one symbol when 2 <= d <= M, else a greedy chain of
    order-M symbols (avoiding a length-1 remainder).  d = 1 has no exact
    simple word; the order-2 symbol stands in, which keeps the recursion
    decreasing.
    """
    out: dict[Symbol, Word] = {}
    for k in range(model.M + 2, max_order + 1):
        for sym in model.symbols_of_order(k):
            if sym.kind == "parabolic":
                out[sym] = _canonical_word(model.M, k - model.M - 1)
    return out


def _canonical_word(M: int, d: int) -> Word:
    if d <= 2:
        return Word((Symbol("simple", 2, "+"),))
    parts: list[int] = []
    while d > M:
        if d - M == 1:
            parts.append(M - 1)
            d -= M - 1
        else:
            parts.append(M)
            d -= M
    parts.append(d)
    return Word(tuple(Symbol("simple", p, "+") for p in parts))


# ---------------------------------------------------------------------------
# counting DPs


@lru_cache(maxsize=None)
def _sharp_table(model: SuitabilityModel, N: int) -> tuple[int, ...]:
    w = [0] * (N + 1)
    w[0] = 1
    for n in range(2, N + 1):
        acc = 0
        for k in range(2, n + 1):
            mult = model.multiplicity_of_order(k)
            if mult:
                acc += mult * w[n - k]
        w[n] = acc
    return tuple(w)


def count_sharp(N: int, model: SuitabilityModel) -> int:
    """Number of model words of total order exactly N (the unit word for
    N = 0).  Dynamic programming over the last symbol's order."""
    if N < 0:
        raise ValueError("order must be >= 0")
    return _sharp_table(model, N)[N]


@lru_cache(maxsize=None)
def _prime_table(model: SuitabilityModel, N: int) -> tuple[int, ...]:
    M = model.M
    P = [0] * (N + 1)
    for m in range(2, N + 1):
        acc = model.multiplicity_of_order(m) if m <= M else 0
        for k in range(M + 1, m - 1):  # last non-simple symbol; remainder >= 2
            mult = model.multiplicity_of_order(k) if k > M else 0
            if mult:
                acc += mult * P[m - k]
        P[m] = acc
    return tuple(P)


def count_prime_words(m: int, model: SuitabilityModel) -> int:
    """P_m: words made of one leading simple symbol followed by non-simple
    symbols only, of total order m.  P_m = 2 for 2 <= m <= M in the full
    model; 0 below order 2."""
    if m < 0:
        raise ValueError("order must be >= 0")
    return _prime_table(model, m)[m]


@lru_cache(maxsize=None)
def _zstar_table(model: SuitabilityModel, N: int) -> tuple[int, ...]:
    M = model.M
    P = _prime_table(model, N)
    Z = [0] * (N + 1)
    for n in range(2, N + 1):
        acc = P[n]
        # earlier first-return block, then a prime block of order > M
        for k in range(2, n - M):
            acc += Z[k] * P[n - k]
        Z[n] = acc
    return tuple(Z)


def zstar_from_model(n: int, model: SuitabilityModel) -> int:
    """First-return count Z*_n of the word model.

    Decomposition over the last simple-symbol position: either the word is
    a single prime block, or it splits as (shorter first-return word) times
    (prime block of order >= M+1).  Equals 2 for n <= M in the full model.
    """
    if n < 2:
        raise ValueError("first-return orders start at 2")
    return _zstar_table(model, n)[n]


def synthetic_census(model: SuitabilityModel, N: int, base: str = "e") -> LoopCensus:
    """Loop census of the word model: Z* from the model and Z closed up by
    the renewal identity Z_n = sum_k Z*_k Z_{n-k}."""
    if N < 2:
        raise ValueError("horizon must be >= 2")
    Zstar = [0] * (N + 1)
    table = _zstar_table(model, N)
    for n in range(2, N + 1):
        Zstar[n] = table[n]
    Z = [0] * (N + 1)
    Z[0] = 1
    for n in range(1, N + 1):
        Z[n] = sum(Zstar[k] * Z[n - k] for k in range(1, n + 1))
    return LoopCensus(
        base=base, horizon=N, Z=tuple(Z[1:]), Zstar=tuple(Zstar[1:])
    )


def enumerate_words(
    model: SuitabilityModel, order: int, prime: bool = False
) -> Iterator[Word]:
    """Materialize every model word of the exact order (cross-check oracle;
    exponential in the order, keep it small).  prime=True restricts to one
    leading simple symbol followed by non-simple symbols."""
    if order < 0:
        raise ValueError("order must be >= 0")

    def rec(remaining: int, acc: tuple[Symbol, ...]) -> Iterator[Word]:
        if remaining == 0:
            if acc:
                yield Word(acc)
            return
        for k in range(2, remaining + 1):
            for sym in model.symbols_of_order(k):
                if prime:
                    if not acc and sym.kind != "simple":
                        continue
                    if acc and sym.kind == "simple":
                        continue
                yield from rec(remaining - k, acc + (sym,))

    if order == 0:
        yield UNIT_WORD
        return
    yield from rec(order, ())


# ---------------------------------------------------------------------------
# covering sums and the dimension bound


def _weight_rate(s: float, weight: str, params: Params) -> float:
    """Per-order exponential rate of the covering weight."""
    if weight == "hausdorff":
        return s * params.c / 3.0
    if weight == "cardinality":
        return s
    raise ValueError(f"unknown weight {weight!r}")


def block_sum(
    model: SuitabilityModel, params: Params, s: float, weight: str = "hausdorff"
) -> tuple[float, bool]:
    """Sum of the covering weight over all tail blocks, and a divergence flag.

    A block is either a single symbol of order > M (two per order), or a
    word prefix of order n followed by a symbol of order > M + Xi * n.
    Geometric tails are closed forms; the prefix series is summed until
    its terms vanish and flagged divergent when its ratio reaches 1.
    """
    if s <= 0:
        raise ValueError("covering exponent must be > 0")
    rate = _weight_rate(s, weight, params)
    x = math.exp(-rate)
    M = model.M
    geo = x / (1.0 - x)

    total = 0.0
    # single-symbol blocks: square at M+1 and parabolic orders >= M+2
    if model.include_square:
        total += model.multiplicity * math.exp(-rate * (M + 1))
    if model.include_parabolic:
        total += model.multiplicity * math.exp(-rate * (M + 1)) * geo

    diverged = False
    if model.include_parabolic:
        # prefix of order n, then a symbol of order at least floor(M + Xi n) + 1
        log_growth = math.log(2.0) - rate * (1.0 + params.Xi)
        if log_growth >= 0.0:
            diverged = True
        n = 2
        while True:
            sharp = count_sharp(n, model)
            if sharp:
                m0 = M + params.Xi * n
                if not math.isfinite(m0) or m0 > 1e306:
                    break  # weights underflow to zero beyond here
                exponent = -rate * (math.floor(m0) + 1)
                term = model.multiplicity * sharp * math.exp(exponent) * (1.0 + geo)
                # term covers orders m0+1, m0+2, ... via the geometric factor
                if term == 0.0 or (total > 0 and term < total * 1e-18):
                    if not diverged:
                        break
                total += term
            n += 1
            if n > 4000 or (diverged and n > 64):
                break
    return total, diverged


@dataclass(frozen=True)
class CoveringSum:
    N: int
    s: float
    weight: str
    value: float
    lam_bound: float
    passes_bound: bool
    diverged: bool

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "s": self.s,
            "weight": self.weight,
            "value": self.value,
            "lam_bound": self.lam_bound,
            "passes_bound": self.passes_bound,
            "diverged": self.diverged,
        }


def covering_sum(
    N: int,
    s: float,
    model: SuitabilityModel,
    params: Params,
    weight: str = "hausdorff",
) -> CoveringSum:
    """Psi_N(s): weight summed over words (prefix of order <= N) . (N blocks).

    The weight is exponential in the total order, so the sum factors into
    a prefix part and the N-th power of the block sum; both are evaluated
    by the counting DP plus geometric closed forms.  weight="hausdorff"
    uses e^{-s n c / 3} (covering diameters); weight="cardinality" uses
    e^{-s n}.  The comparison value lambda^N is reported alongside.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    rate = _weight_rate(s, weight, params)
    prefix = sum(
        count_sharp(n, model) * math.exp(-rate * n) for n in range(0, N + 1)
    )
    blocks, diverged = block_sum(model, params, s, weight)
    value = prefix * blocks**N if N else prefix
    lam_bound = params.lam**N
    return CoveringSum(
        N=N,
        s=s,
        weight=weight,
        value=value,
        lam_bound=lam_bound,
        passes_bound=bool(not diverged and value < lam_bound),
        diverged=diverged,
    )


@dataclass(frozen=True)
class DimensionBound:
    bound: float
    s_star: float | None
    certified: bool
    factor: float
    weight: str
    N_max: int
    warning: str | None = None

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "s_star": self.s_star,
            "certified": self.certified,
            "factor": self.factor,
            "weight": self.weight,
            "N_max": self.N_max,
            "warning": self.warning,
        }


def dimension_upper_bound(
    model: SuitabilityModel,
    params: Params,
    s_grid: Sequence[float],
    N_max: int = 12,
    factor: float = 3.0,
    weight: str = "cardinality",
) -> DimensionBound:
    """Smallest grid exponent whose covering sums decay geometrically.

    Certifies s when Psi_0 >= Psi_1 >= ... strictly decay up to N_max with
    no divergence flag; returns factor * s (capped at 1), mirroring the
    diameter-exponent tripling of the covering argument.  An empty block
    family certifies bound 0; no certifying grid point returns 1 with a
    warning.
    """
    if not s_grid or any(
        s2 <= s1 for s1, s2 in zip(s_grid, list(s_grid)[1:])
    ):
        raise ValueError("s_grid must be nonempty and strictly increasing")
    if any(not 0.0 < s <= 1.0 for s in s_grid):
        raise ValueError("grid exponents must lie in (0, 1]")

    blocks0, _ = block_sum(model, params, s_grid[-1], weight)
    if blocks0 == 0.0:
        return DimensionBound(
            bound=0.0,
            s_star=None,
            certified=True,
            factor=factor,
            weight=weight,
            N_max=N_max,
            warning="covering family is empty (no tail blocks)",
        )

    for s in s_grid:
        values = []
        ok = True
        for N in range(0, N_max + 1):
            cs = covering_sum(N, s, model, params, weight=weight)
            if cs.diverged:
                ok = False
                break
            values.append(cs.value)
        if not ok:
            continue
        if all(b < a for a, b in zip(values, values[1:])):
            return DimensionBound(
                bound=min(1.0, factor * s),
                s_star=s,
                certified=True,
                factor=factor,
                weight=weight,
                N_max=N_max,
            )
    return DimensionBound(
        bound=1.0,
        s_star=None,
        certified=False,
        factor=factor,
        weight=weight,
        N_max=N_max,
        warning="no grid exponent produced geometric decay",
    )
