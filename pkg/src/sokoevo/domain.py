"""Sokoban level representation: tiles, genomes, objectives, and variation.

Levels are rectangular tile grids with an implicit all-Wall border. The
evolvable chromosome is the row-major sequence of interior tiles plus the
design spec it was generated under. Standard text symbols are used for
interchange: '#' wall, ' ' floor, '$' box, '.' target, '@' player,
'*' box-on-target, '+' player-on-target.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class Tile(enum.Enum):
    WALL = "#"
    FLOOR = " "
    BOX = "$"
    TARGET = "."
    PLAYER = "@"
    BOX_ON_TARGET = "*"
    PLAYER_ON_TARGET = "+"


_CHAR_TO_TILE = {t.value: t for t in Tile}

# Resampling alphabet for mutation and random initialization.
GENE_ALPHABET = (Tile.WALL, Tile.FLOOR, Tile.BOX, Tile.TARGET)

_PLAYER_TILES = (Tile.PLAYER, Tile.PLAYER_ON_TARGET)
_BOX_TILES = (Tile.BOX, Tile.BOX_ON_TARGET)
_TARGET_TILES = (Tile.TARGET, Tile.BOX_ON_TARGET, Tile.PLAYER_ON_TARGET)


class ParseError(ValueError):
    def __init__(self, message: str, row: int, col: int):
        super().__init__(f"{message} at row {row}, col {col}")
        self.row = row
        self.col = col


class InvalidGenome(ValueError):
    pass


class Unrepairable(ValueError):
    pass


class SpecMismatch(ValueError):
    pass


@dataclass(frozen=True)
class DesignSpec:
    """User-facing level parameters. The border is implicitly Wall."""

    width: int = 8
    height: int = 8
    max_boxes: int = 3

    def __post_init__(self):
        if self.width < 3 or self.height < 3:
            raise ValueError(f"width and height must be >= 3, got {self.width}x{self.height}")
        if self.max_boxes < 1:
            raise ValueError(f"max_boxes must be >= 1, got {self.max_boxes}")
        # Interiors under 3 cells are constructible but unrepairable; the
        # cap below is meaningless there.
        if self.interior_cells >= 3 and self.max_boxes > self.interior_cells // 3:
            raise ValueError(
                f"max_boxes {self.max_boxes} exceeds interior cell count / 3 "
                f"({self.interior_cells // 3})"
            )

    @property
    def interior_width(self) -> int:
        return self.width - 2

    @property
    def interior_height(self) -> int:
        return self.height - 2

    @property
    def interior_cells(self) -> int:
        return self.interior_width * self.interior_height


@dataclass(frozen=True)
class Genome:
    """Row-major interior tile sequence under a design spec."""

    spec: DesignSpec
    genes: tuple[Tile, ...]

    def __post_init__(self):
        if len(self.genes) != self.spec.interior_cells:
            raise InvalidGenome(
                f"gene count {len(self.genes)} does not match interior "
                f"{self.spec.interior_width}x{self.spec.interior_height}"
            )


@dataclass(frozen=True)
class Level:
    """Full tile grid including the Wall border."""

    grid: tuple[tuple[Tile, ...], ...]

    @property
    def height(self) -> int:
        return len(self.grid)

    @property
    def width(self) -> int:
        return len(self.grid[0])

    def count(self, *tiles: Tile) -> int:
        return sum(row.count(t) for row in self.grid for t in tiles)

    @property
    def floor_count(self) -> int:
        return self.count(Tile.FLOOR)

    @property
    def box_count(self) -> int:
        return self.count(*_BOX_TILES)

    @property
    def target_count(self) -> int:
        return self.count(*_TARGET_TILES)


def _player_count(genes) -> int:
    return sum(1 for g in genes if g in _PLAYER_TILES)


def _box_count(genes) -> int:
    return sum(1 for g in genes if g in _BOX_TILES)


def _target_count(genes) -> int:
    return sum(1 for g in genes if g in _TARGET_TILES)


def is_repaired(genome: Genome) -> bool:
    """Check the repaired-genome invariants without mutating anything."""
    genes = genome.genes
    boxes = _box_count(genes)
    return (
        _player_count(genes) == 1
        and boxes == _target_count(genes)
        and 1 <= boxes <= genome.spec.max_boxes
    )


def decode(genome: Genome) -> Level:
    """Wrap a Wall border around the interior genes."""
    if not is_repaired(genome):
        raise InvalidGenome("genome violates repaired invariants (player/box/target counts)")
    spec = genome.spec
    rows = [tuple([Tile.WALL] * spec.width)]
    for r in range(spec.interior_height):
        row = genome.genes[r * spec.interior_width : (r + 1) * spec.interior_width]
        rows.append((Tile.WALL,) + row + (Tile.WALL,))
    rows.append(tuple([Tile.WALL] * spec.width))
    return Level(tuple(rows))


def encode(level: Level, max_boxes: int | None = None) -> Genome:
    """Inverse of decode: strip the border and rebuild the genome."""
    spec = DesignSpec(
        width=level.width,
        height=level.height,
        max_boxes=max_boxes if max_boxes is not None else max(1, level.box_count),
    )
    genes = tuple(
        level.grid[r][c] for r in range(1, level.height - 1) for c in range(1, level.width - 1)
    )
    return Genome(spec, genes)


def _uniform_pick(indices: list[int], rng: np.random.Generator) -> int:
    return indices[int(rng.integers(len(indices)))]


def repair(genome: Genome, rng: np.random.Generator) -> Genome:
    """Coerce an arbitrary gene sequence into a valid chromosome.

    Exactly one player is kept (first in row-major order wins; extras are
    demoted to Floor). Box and target counts are equalized by demoting
    uniformly chosen surplus symbols, forced to at least one of each, and
    clamped to max_boxes. Already-valid genomes are returned unchanged and
    consume no randomness.
    """
    if genome.spec.interior_cells < 3:
        raise Unrepairable(
            f"interior {genome.spec.interior_width}x{genome.spec.interior_height} "
            "cannot hold a player, a box, and a target"
        )
    if is_repaired(genome):
        return genome

    genes = list(genome.genes)
    max_boxes = genome.spec.max_boxes

    # One player, first in row-major order.
    player_idx = [i for i, g in enumerate(genes) if g in _PLAYER_TILES]
    for i in player_idx[1:]:
        genes[i] = Tile.FLOOR
    if not player_idx:
        floors = [i for i, g in enumerate(genes) if g is Tile.FLOOR]
        if floors:
            genes[_uniform_pick(floors, rng)] = Tile.PLAYER
        else:
            non_wall = [i for i, g in enumerate(genes) if g is not Tile.WALL]
            pool = non_wall if non_wall else list(range(len(genes)))
            i = _uniform_pick(pool, rng)
            genes[i] = Tile.PLAYER_ON_TARGET if genes[i] in _TARGET_TILES else Tile.PLAYER

    def boxes() -> int:
        return _box_count(genes)

    def targets() -> int:
        return _target_count(genes)

    # Equalize counts by demoting uniformly chosen surplus symbols.
    while boxes() > targets():
        plain = [i for i, g in enumerate(genes) if g is Tile.BOX]
        genes[_uniform_pick(plain, rng)] = Tile.FLOOR
    while targets() > boxes():
        plain = [i for i, g in enumerate(genes) if g in (Tile.TARGET, Tile.PLAYER_ON_TARGET)]
        i = _uniform_pick(plain, rng)
        genes[i] = Tile.PLAYER if genes[i] is Tile.PLAYER_ON_TARGET else Tile.FLOOR

    if boxes() == 0:
        for symbol in (Tile.BOX, Tile.TARGET):
            floors = [i for i, g in enumerate(genes) if g is Tile.FLOOR]
            pool = floors if floors else [i for i, g in enumerate(genes) if g is Tile.WALL]
            genes[_uniform_pick(pool, rng)] = symbol

    # Clamp to max_boxes; demoting a box-on-target removes one of each.
    while boxes() > max_boxes:
        box_idx = [i for i, g in enumerate(genes) if g in _BOX_TILES]
        i = _uniform_pick(box_idx, rng)
        if genes[i] is Tile.BOX_ON_TARGET:
            genes[i] = Tile.FLOOR
        else:
            genes[i] = Tile.FLOOR
            plain = [j for j, g in enumerate(genes) if g in (Tile.TARGET, Tile.PLAYER_ON_TARGET)]
            j = _uniform_pick(plain, rng)
            genes[j] = Tile.PLAYER if genes[j] is Tile.PLAYER_ON_TARGET else Tile.FLOOR

    return Genome(genome.spec, tuple(genes))


def f_emp(level: Level) -> float:
    """Emptiness: fraction of Floor tiles over the full grid."""
    return level.floor_count / (level.width * level.height)


def f_div(level: Level) -> float:
    """Spatial diversity: normalized entropy of per-row Floor distribution.

    Each interior row is a segment; p_i is its Floor fraction and the
    entropy of q_i = p_i / sum_j p_j is normalized by log(n). Degenerate
    cases (no Floor anywhere, or fewer than two interior rows) score 0.
    """
    n = level.height - 2
    if n < 2:
        return 0.0
    interior_width = level.width - 2
    p = [
        sum(1 for c in range(1, level.width - 1) if level.grid[r][c] is Tile.FLOOR)
        / interior_width
        for r in range(1, level.height - 1)
    ]
    total = sum(p)
    if total == 0.0:
        return 0.0
    entropy = 0.0
    for pi in p:
        q = pi / total
        if q > 0.0:
            entropy -= q * np.log(q)
    return float(entropy / np.log(n))


def crossover(a: Genome, b: Genome, rng: np.random.Generator) -> tuple[Genome, Genome]:
    """Single-point crossover on the flattened interior, then repair."""
    if a.spec != b.spec:
        raise SpecMismatch(f"parent specs differ: {a.spec} vs {b.spec}")
    length = len(a.genes)
    cut = int(rng.integers(1, length))
    child1 = Genome(a.spec, a.genes[:cut] + b.genes[cut:])
    child2 = Genome(a.spec, b.genes[:cut] + a.genes[cut:])
    return repair(child1, rng), repair(child2, rng)


def mutate(g: Genome, rng: np.random.Generator, rate: float | None = None) -> Genome:
    """Resample each gene with probability rate over the 4-symbol alphabet.

    Defaults to 1/L. The result is repaired.
    """
    length = len(g.genes)
    if rate is None:
        rate = 1.0 / length
    if rate == 0.0:
        return repair(g, rng)
    mask = rng.random(length) < rate
    genes = list(g.genes)
    for i in np.flatnonzero(mask):
        genes[i] = GENE_ALPHABET[int(rng.integers(len(GENE_ALPHABET)))]
    return repair(Genome(g.spec, tuple(genes)), rng)


# Initialization weights over (Wall, Floor, Box, Target).
RANDOM_GENE_WEIGHTS = (0.35, 0.55, 0.05, 0.05)


def random_genome(spec: DesignSpec, rng: np.random.Generator) -> Genome:
    """Sample interior genes with floor-heavy weights, then repair."""
    draws = rng.choice(len(GENE_ALPHABET), size=spec.interior_cells, p=RANDOM_GENE_WEIGHTS)
    genes = tuple(GENE_ALPHABET[int(d)] for d in draws)
    return repair(Genome(spec, genes), rng)


def parse_level(text: str) -> Level:
    """Parse the standard Sokoban text format into a Level."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines = lines[:-1]
    if not lines:
        raise ParseError("empty level text", 0, 0)
    width = len(lines[0])
    rows = []
    for r, line in enumerate(lines):
        if len(line) != width:
            raise ParseError(f"ragged row (length {len(line)}, expected {width})", r, len(line))
        row = []
        for c, ch in enumerate(line):
            tile = _CHAR_TO_TILE.get(ch)
            if tile is None:
                raise ParseError(f"unknown symbol {ch!r}", r, c)
            row.append(tile)
        rows.append(tuple(row))
    return Level(tuple(rows))


def serialize_level(level: Level) -> str:
    """Inverse of parse_level."""
    return "\n".join("".join(t.value for t in row) for row in level.grid)
