"""Involution data (iota, delta) assembled from generating-involution blocks.

A block of length l+1 is a table of relative partners and signs.  Blocks are
laid out on Z by the nested gluing rule: block 0 starts at -1, block 1 at
l_0, and block i+1 at k_i + l_i + 2.  Every block i >= 1 is glued to the
existing range by a new pair (-i-1, k_i + l_i + 1) carrying sign +1 at both
ends.  In cyclic mode the block list repeats forever and iota is total on Z.

Spec files hold one directive per line::

    # comment
    block B2 | B3 | BINF
    block CUSTOM iota=3,2,1,0 delta=+,-,-,+
    mode cyclic | finite
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence


class SpecError(ValueError):
    """Base class for malformed or invalid involution data."""


class MalformedBlock(SpecError):
    pass


class InvalidBlock(SpecError):
    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class EmptySpec(SpecError):
    pass


class OutOfRange(LookupError):
    def __init__(self, n: int):
        super().__init__(f"index {n} is not covered by the spec")
        self.n = n


@dataclass(frozen=True)
class GeneratingBlock:
    pairing: tuple[int, ...]
    signs: tuple[int, ...]
    name: str = "CUSTOM"

    @property
    def length(self) -> int:
        return len(self.pairing)

    @property
    def last(self) -> int:
        """The relative index l, so the block occupies {0, ..., l}."""
        return len(self.pairing) - 1

    def check(self) -> None:
        """Raise InvalidBlock naming the first relative index that breaks an invariant."""
        iota, sg = self.pairing, self.signs
        size = len(iota)
        if size == 0:
            raise InvalidBlock("block must be nonempty")
        if len(sg) != size:
            raise InvalidBlock(f"{size} partners but {len(sg)} signs")
        for j, s in enumerate(sg):
            if s not in (1, -1):
                raise InvalidBlock(f"sign at {j} must be +1 or -1", j)
        for j, p in enumerate(iota):
            if not 0 <= p < size:
                raise InvalidBlock(f"partner {p} of {j} lies outside the block", j)
            if iota[p] != j:
                raise InvalidBlock(f"pairing is not an involution at {j}", j)
        if iota[0] != size - 1:
            raise InvalidBlock("first index must be paired with the last one", 0)
        for j, p in enumerate(iota):
            if sg[p] != sg[j]:
                raise InvalidBlock(f"sign at {j} differs from sign at its partner {p}", j)
        # iota(iota(n) + d_n) = iota(n-1) - d_{n-1} for the internal steps n = 1..l
        for n in range(1, size):
            m = iota[n] + sg[n]
            if not 0 <= m < size:
                raise InvalidBlock(f"chain relation at {n} leaves the block", n)
            if iota[m] != iota[n - 1] - sg[n - 1]:
                raise InvalidBlock(f"chain relation fails at {n}", n)

    def describe(self) -> str:
        if self.name != "CUSTOM":
            return self.name
        signs = ",".join("+" if s > 0 else "-" for s in self.signs)
        return f"CUSTOM iota={','.join(map(str, self.pairing))} delta={signs}"


B2 = GeneratingBlock((0,), (1,), "B2")
B3 = GeneratingBlock((1, 0), (1, 1), "B3")
BINF = GeneratingBlock((3, 2, 1, 0), (1, -1, -1, 1), "BINF")
BUILTIN_BLOCKS = {"B2": B2, "B3": B3, "BINF": BINF}


def _parse_signs(text: str) -> tuple[int, ...]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok in ("+", "+1", "1"):
            out.append(1)
        elif tok in ("-", "-1"):
            out.append(-1)
        else:
            raise MalformedBlock(f"bad sign {tok!r}")
    return tuple(out)


def parse_block(text: str) -> GeneratingBlock:
    """Parse ``B2``, ``B3``, ``BINF`` or ``CUSTOM iota=... delta=...`` into a validated block."""
    tokens = text.split()
    if not tokens:
        raise MalformedBlock("empty block description")
    head = tokens[0].upper()
    if head in BUILTIN_BLOCKS:
        if len(tokens) != 1:
            raise MalformedBlock(f"builtin block {head} takes no arguments")
        return BUILTIN_BLOCKS[head]
    if head != "CUSTOM":
        raise MalformedBlock(f"unknown block type {tokens[0]!r}")
    fields = {}
    for tok in tokens[1:]:
        key, eq, value = tok.partition("=")
        if not eq or key not in ("iota", "delta") or key in fields:
            raise MalformedBlock(f"bad CUSTOM field {tok!r}")
        fields[key] = value
    if set(fields) != {"iota", "delta"}:
        raise MalformedBlock("CUSTOM needs both iota= and delta=")
    try:
        pairing = tuple(int(x) for x in fields["iota"].split(","))
    except ValueError as exc:
        raise MalformedBlock(f"bad iota list {fields['iota']!r}") from exc
    block = GeneratingBlock(pairing, _parse_signs(fields["delta"]))
    block.check()
    return block


@dataclass(frozen=True)
class InvolutionSpec:
    """Glued involution iota with signs delta, finite or cyclically repeated.

    Construct with :func:`assemble`.
    """

    blocks: tuple[GeneratingBlock, ...]
    cyclic: bool = True
    _starts: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _period: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.blocks:
            raise EmptySpec("at least one block is required")
        # offsets of blocks 1..p relative to k_1; one full period spans sum(l_i + 2)
        starts, pos = [], 0
        for i in range(1, len(self.blocks) + 1):
            starts.append(pos)
            pos += self.block_type(i).last + 2
        object.__setattr__(self, "_starts", tuple(starts))
        object.__setattr__(self, "_period", pos)

    @property
    def period(self) -> int:
        return len(self.blocks)

    @property
    def mode(self) -> str:
        return "cyclic" if self.cyclic else "finite"

    def block_type(self, i: int) -> GeneratingBlock:
        return self.blocks[i % len(self.blocks)]

    def block_start(self, i: int) -> int:
        """k_i, the first index of block i."""
        if i == 0:
            return -1
        q, r = divmod(i - 1, len(self.blocks))
        return self.blocks[0].last + q * self._period + self._starts[r]

    def block_range(self, i: int) -> range:
        k = self.block_start(i)
        return range(k, k + self.block_type(i).length)

    def glue_pair(self, i: int) -> tuple[int, int]:
        """The pair (-i-1, k_i + l_i + 1) added when block i >= 1 is glued on."""
        if i < 1:
            raise ValueError("block 0 has no gluing pair")
        return (-i - 1, self.block_start(i) + self.block_type(i).last + 1)

    def domain(self, m: int) -> range:
        """Indices covered by blocks 0..m-1 and their gluing pairs; iota maps it onto itself."""
        if m < 1:
            raise ValueError("need at least one block")
        if m == 1:
            return self.block_range(0)
        return range(-m, self.glue_pair(m - 1)[1] + 1)

    @property
    def covered(self) -> range | None:
        """Covered index range in finite mode; None means all of Z."""
        return None if self.cyclic else self.domain(len(self.blocks))

    def locate(self, n: int) -> tuple[str, int, int]:
        """Return ("block", i, j) for relative position j of block i, or ("glue", i, side)."""
        if not self.cyclic and n not in self.covered:
            raise OutOfRange(n)
        l0 = self.blocks[0].last
        if -1 <= n < l0:
            return ("block", 0, n + 1)
        if n <= -2:
            return ("glue", -n - 1, 0)
        q, off = divmod(n - l0, self._period)
        r = bisect.bisect_right(self._starts, off) - 1
        i = 1 + q * len(self.blocks) + r
        j = off - self._starts[r]
        if j <= self.block_type(i).last:
            return ("block", i, j)
        return ("glue", i, 1)

    def iota(self, n: int) -> int:
        kind, i, j = self.locate(n)
        if kind == "block":
            return self.block_start(i) + self.block_type(i).pairing[j]
        left, right = self.glue_pair(i)
        return right if j == 0 else left

    def delta(self, n: int) -> int:
        kind, i, j = self.locate(n)
        if kind == "block":
            return self.block_type(i).signs[j]
        return 1

    def covers(self, n: int) -> bool:
        return self.cyclic or n in self.covered

    def describe(self) -> str:
        lines = [f"block {b.describe()}" for b in self.blocks]
        lines.append(f"mode {self.mode}")
        return "\n".join(lines)


def assemble(blocks: Iterable[GeneratingBlock], mode: str = "cyclic") -> InvolutionSpec:
    if mode not in ("cyclic", "finite"):
        raise SpecError(f"unknown mode {mode!r}")
    return InvolutionSpec(tuple(blocks), cyclic=(mode == "cyclic"))


def parse_spec(text: str) -> InvolutionSpec:
    blocks, mode = [], None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, _, rest = line.partition(" ")
        if word == "block":
            try:
                blocks.append(parse_block(rest))
            except SpecError as exc:
                raise type(exc)(f"line {lineno}: {exc}") from exc
        elif word == "mode":
            if mode is not None:
                raise SpecError(f"line {lineno}: mode given twice")
            mode = rest.strip()
        else:
            raise MalformedBlock(f"line {lineno}: unknown directive {word!r}")
    if not blocks:
        raise EmptySpec("spec file has no blocks")
    return assemble(blocks, mode or "cyclic")


def load_spec(path: str | Path) -> InvolutionSpec:
    return parse_spec(Path(path).read_text())


@dataclass(frozen=True)
class Violation:
    index: int
    kind: str
    detail: str

    def __str__(self) -> str:
        return f"[{self.kind}] at {self.index}: {self.detail}"


def validate(spec, window: Sequence[int] | range) -> list[Violation]:
    """Check involution, sign symmetry and the chain identity at every index of ``window``.

    ``spec`` only needs ``iota``, ``delta`` and ``covers``; hand-built
    tables with the same interface are accepted.
    """
    out = []
    for n in window:
        if not spec.covers(n):
            raise OutOfRange(n)
        m = spec.iota(n)
        dn = spec.delta(n)
        if not spec.covers(m):
            out.append(Violation(n, "involution", f"iota({n}) = {m} is not covered"))
            continue
        if spec.iota(m) != n:
            out.append(Violation(n, "involution", f"iota(iota({n})) = {spec.iota(m)}"))
        if spec.delta(m) != dn:
            out.append(Violation(n, "sign", f"delta({n}) = {dn} but delta({m}) = {spec.delta(m)}"))
        lhs_arg = m + dn
        if spec.covers(n - 1) and spec.covers(lhs_arg):
            lhs = spec.iota(lhs_arg)
            rhs = spec.iota(n - 1) - spec.delta(n - 1)
            if lhs != rhs:
                out.append(Violation(n, "chain", f"iota(iota(n)+delta_n) = {lhs} != {rhs}"))
    return out


@dataclass(frozen=True)
class TableSpec:
    """Explicit finite tables of iota and delta; used for fault injection and hand-built cases."""

    iota_table: dict
    delta_table: dict

    def covers(self, n: int) -> bool:
        return n in self.iota_table

    def iota(self, n: int) -> int:
        try:
            return self.iota_table[n]
        except KeyError:
            raise OutOfRange(n) from None

    def delta(self, n: int) -> int:
        try:
            return self.delta_table[n]
        except KeyError:
            raise OutOfRange(n) from None

    @classmethod
    def from_spec(cls, spec: InvolutionSpec, indices: Iterable[int]) -> TableSpec:
        idx = list(indices)
        return cls({n: spec.iota(n) for n in idx}, {n: spec.delta(n) for n in idx})

    def with_delta(self, n: int, value: int) -> TableSpec:
        d = dict(self.delta_table)
        d[n] = value
        return TableSpec(dict(self.iota_table), d)

    def __hash__(self):
        return hash((tuple(sorted(self.iota_table.items())), tuple(sorted(self.delta_table.items()))))
