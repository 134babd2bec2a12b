"""Exhaustive search for Narayana numbers that are products of four repdigits."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from .narayana import narayana_list
from .repdigit import Repdigit, RepdigitError, as_repdigit, enumerate_repdigits, parse, repunit

# t bounds after the fourth reduction step (engine defaults: best policy, window 8,
# exponent caps 257/265/271).  Regenerate with `narep reduce --all`.
REDUCED_T_BOUNDS = {2: 274, 3: 171, 4: 136, 5: 118, 6: 105, 7: 97, 8: 91, 9: 86, 10: 82, 11: 79, 12: 77}
# The published final t bounds, for comparison.
PUBLISHED_T_BOUNDS = {2: 269, 3: 170, 4: 135, 5: 115, 6: 103, 7: 94, 8: 88, 9: 85, 10: 80, 11: 77, 12: 76}
DEFAULT_K_MAX = 8051
SOLUTION_VALUES = (1, 2, 3, 4, 6, 9, 13, 28, 60, 88, 129, 189)


@dataclass(frozen=True, order=True)
class SolutionRecord:
    g: int
    k: int
    N: int
    factors: tuple[Repdigit, Repdigit, Repdigit, Repdigit]

    def __post_init__(self) -> None:
        p = 1
        for r in self.factors:
            p *= r.value
        if p != self.N:
            raise ValueError(f"factor product {p} != N = {self.N}")

    @property
    def key(self) -> tuple[tuple[int, int], ...]:
        """The factorization as a sorted multiset of (digit, length)."""
        return tuple(sorted((r.d, r.length) for r in self.factors))

    @property
    def rendered(self) -> str:
        return "[" + ",".join(r.render() for r in self.factors) + f"]_{self.g}"

    def to_json(self) -> str:
        return json.dumps(
            {
                "g": self.g,
                "k": self.k,
                "N": str(self.N),
                "factors": [{"d": r.d, "len": r.length} for r in self.factors],
                "rendered": self.rendered,
            },
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, line: str) -> "SolutionRecord":
        obj = json.loads(line)
        g = obj["g"]
        factors = tuple(Repdigit.make(f["d"], f["len"], g) for f in obj["factors"])
        return cls(g, obj["k"], int(obj["N"]), factors)


@dataclass
class SearchConfig:
    g_min: int = 2
    g_max: int = 12
    k_max: int = DEFAULT_K_MAX
    t_max_per_g: dict[int, int] = field(default_factory=lambda: dict(REDUCED_T_BOUNDS))
    parallelism: int = 1

    def __post_init__(self) -> None:
        if not 2 <= self.g_min <= self.g_max <= 12:
            raise ValueError("need 2 <= g_min <= g_max <= 12")
        if self.k_max < 1:
            raise ValueError("k_max must be >= 1")
        missing = [g for g in self.bases if g not in self.t_max_per_g]
        if missing:
            raise ValueError(f"no t bound for bases {missing}")
        if any(self.t_max_per_g[g] < 1 for g in self.bases):
            raise ValueError("t bounds must be >= 1")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")

    @property
    def bases(self) -> range:
        return range(self.g_min, self.g_max + 1)

    @classmethod
    def uniform(cls, g_min: int, g_max: int, k_max: int, t_max: int, parallelism: int = 1) -> "SearchConfig":
        return cls(g_min, g_max, k_max, {g: t_max for g in range(g_min, g_max + 1)}, parallelism)


def factor_as_four_repdigits(N: int, g: int, t_max: int) -> list[tuple[Repdigit, ...]]:
    """Every multiset r1 <= r2 <= r3 <= r4 of base-g repdigits (length <= t_max) with product N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    lengths = range(1, t_max + 1)
    out: list[tuple[Repdigit, ...]] = []

    def descend(rem: int, prev: Repdigit | None, acc: list[Repdigit]) -> None:
        depth = len(acc)
        if depth == 3:
            last = as_repdigit(rem, g, t_max)
            if last is not None and (prev is None or last >= prev):
                out.append((*acc, last))
            return
        for L in lengths:
            R = repunit(L, g)
            if R ** (4 - depth) > rem:
                break
            if rem % R:
                continue
            q = rem // R
            for d in range(1, g):
                v = d * R
                if v ** (4 - depth) > rem:
                    break
                if q % d:
                    continue
                r = Repdigit(v, d, L, g)
                if prev is not None and r < prev:
                    continue
                descend(rem // v, r, acc + [r])

    descend(N, None, [])
    out.sort()
    return out


def _search_base(args: tuple[int, int, int]) -> list[SolutionRecord]:
    g, k_max, t_max = args
    cap = (g**t_max - 1) ** 4
    out = []
    for k, N in enumerate(narayana_list(k_max)):
        if k == 0:
            continue
        if N > cap:
            break  # N_k is increasing from k = 3 on
        for quad in factor_as_four_repdigits(N, g, t_max):
            out.append(SolutionRecord(g, k, N, quad))
    return out


def search_all(cfg: SearchConfig) -> list[SolutionRecord]:
    """All solutions in the configured ranges, ordered by (g, k, factors)."""
    work = [(g, cfg.k_max, cfg.t_max_per_g[g]) for g in cfg.bases]
    if cfg.parallelism > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=cfg.parallelism) as ex:
            parts = list(ex.map(_search_base, work))
    else:
        parts = [_search_base(w) for w in work]
    return sorted(r for part in parts for r in part)


def brute_force_oracle(g: int, k_max: int, t_max: int) -> list[SolutionRecord]:
    """Multiply every quadruple of repdigits and keep the Narayana numbers."""
    by_value: dict[int, list[int]] = {}
    for k, N in enumerate(narayana_list(k_max)):
        if k:
            by_value.setdefault(N, []).append(k)
    reps = enumerate_repdigits(g, t_max)
    out = []
    for quad in combinations_with_replacement(reps, 4):
        p = quad[0].value * quad[1].value * quad[2].value * quad[3].value
        for k in by_value.get(p, ()):
            out.append(SolutionRecord(g, k, p, quad))
    return sorted(out)


# ---------------------------------------------------------------- golden Table 1


def _load(name: str) -> dict:
    return json.loads(resources.files("narep").joinpath("data", name).read_text())


def load_table1() -> dict:
    return _load("table1.json")


def load_errata() -> dict:
    return _load("table1_errata.json")


Key = tuple[int, int, tuple[tuple[int, int], ...]]  # (g, N, multiset)


def _read_factors(strings: Sequence[str], g: int, N: int) -> tuple[tuple[tuple[int, int], ...] | None, str]:
    """Read printed factors in base g; fall back to reading them as decimal values.

    Returns (multiset, how) where how is 'base' or 'decimal', or (None, why).
    """
    try:
        reps = [parse(s, g) for s in strings]
        if _prod(r.value for r in reps) == N:
            return tuple(sorted((r.d, r.length) for r in reps)), "base"
    except RepdigitError:
        pass
    if all(s.isdigit() for s in strings):
        vals = [int(s) for s in strings]
        reps2 = [as_repdigit(v, g) for v in vals]
        if all(reps2) and _prod(vals) == N:
            return tuple(sorted((r.d, r.length) for r in reps2)), "decimal"
    return None, "product of the printed factors is not N in this base"


def _prod(xs: Iterable[int]) -> int:
    p = 1
    for x in xs:
        p *= x
    return p


@dataclass
class Table1Report:
    found: set[Key]
    literal: set[Key]
    corrected: set[Key]
    unreadable: list[str] = field(default_factory=list)  # printed entries that cannot be read as solutions
    decimal_renderings: list[str] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)
    errata_applied: list[str] = field(default_factory=list)

    @property
    def missing(self) -> set[Key]:
        """In the corrected table but not found by the search."""
        return self.corrected - self.found

    @property
    def extra(self) -> set[Key]:
        """Found by the search but absent from the corrected table."""
        return self.found - self.corrected

    @property
    def literal_missing(self) -> set[Key]:
        return self.literal - self.found

    @property
    def literal_extra(self) -> set[Key]:
        return self.found - self.literal

    @property
    def clean(self) -> bool:
        return self.found == self.corrected

    @property
    def values(self) -> set[int]:
        return {N for _, N, _ in self.found}

    def summary(self) -> str:
        lines = []
        if self.clean:
            lines.append(f"{len(self.values)} Narayana values, all factorizations matched")
        else:
            lines.append(f"{len(self.missing)} missing and {len(self.extra)} extra factorizations")
            lines += [f"  missing {_fmt(k)}" for k in sorted(self.missing)]
            lines += [f"  extra   {_fmt(k)}" for k in sorted(self.extra)]
        lines.append(f"{len(self.found)} factorizations found; printed table lists {len(self.literal)}")
        for title, items in (
            ("printed entries read as decimal values", self.decimal_renderings),
            ("printed entries that are not solutions", self.unreadable),
            ("corrections applied", self.errata_applied),
            ("flags", self.flags),
        ):
            if items:
                lines.append(f"{title}:")
                lines += [f"  {s}" for s in items]
        return "\n".join(lines)


def _fmt(key: Key) -> str:
    g, N, ms = key
    reps = sorted(Repdigit.make(d, L, g) for d, L in ms)
    return f"N={N} g={g} [" + ",".join(r.render() for r in reps) + "]"


def verify_table1(records: Sequence[SolutionRecord] | None = None) -> Table1Report:
    """Compare search output with the transcribed table and its machine-checked errata."""
    if records is None:
        records = search_all(SearchConfig(k_max=2000))
    found = {(r.g, r.N, r.key) for r in records}
    table = load_table1()
    report = Table1Report(found=found, literal=set(), corrected=set())
    for row in table["rows"]:
        N = row["N"]
        for entry in row["entries"]:
            label = "[" + ",".join(entry["factors"]) + "]"
            if "flag" in entry:
                report.flags.append(f"N={N} {label}: {entry['flag']}")
            for g in entry["bases"]:
                ms, how = _read_factors(entry["factors"], g, N)
                if ms is None:
                    report.unreadable.append(f"N={N} {label}_{g}: {how}")
                    continue
                if how == "decimal":
                    report.decimal_renderings.append(f"N={N} {label}_{g} -> {_fmt((g, N, ms))}")
                report.literal.add((g, N, ms))
    corrected = set(report.literal)
    for fix in load_errata()["errata"]:
        N = fix["N"]
        for g in fix["bases"]:
            reps = [parse(s, g) for s in fix["factors"]]
            if _prod(r.value for r in reps) != N:
                raise ValueError(f"erratum {fix} does not multiply to N in base {g}")
            corrected.add((g, N, tuple(sorted((r.d, r.length) for r in reps))))
        report.errata_applied.append(f"N={N} add [{','.join(fix['factors'])}] for g in {fix['bases']}: {fix['reason']}")
    report.corrected = corrected
    return report


def records_markdown(records: Sequence[SolutionRecord]) -> str:
    """Table laid out like the printed one: one row per N, factorizations grouped by base."""
    rows: dict[int, dict] = {}
    for r in records:
        row = rows.setdefault(r.N, {"k": set(), "items": {}})
        row["k"].add(r.k)
        row["items"].setdefault(r.g, [])
        s = "[" + ",".join(f.render() for f in r.factors) + "]"
        if s not in row["items"][r.g]:
            row["items"][r.g].append(s)
    out = ["| k | N_k | [a,b,c,d]_g |", "|---|---|---|"]
    for N in sorted(rows):
        row = rows[N]
        ks = ",".join(map(str, sorted(row["k"])))
        cells = "; ".join(f"{', '.join(v)}_{g}" for g, v in sorted(row["items"].items()))
        out.append(f"| {ks} | {N} | {cells} |")
    return "\n".join(out)


def records_csv(records: Sequence[SolutionRecord]) -> str:
    lines = ["g,k,N,factors,rendered"]
    for r in records:
        lines.append(f"{r.g},{r.k},{r.N},{' '.join(f'{f.d}x{f.length}' for f in r.factors)},{r.rendered}")
    return "\n".join(lines)
