"""Sokoban playability: move semantics, win check, and a push-state solver.

The solver runs breadth-first search over push states keyed by the box set
plus the canonical (minimal) player-reachable cell, with corner-deadlock
pruning. It proves a win reachable with a shortest-in-pushes solution;
moves between pushes are reconstructed by player pathfinding. All
expansion and tie-breaking orders are fixed, so identical inputs always
yield identical solutions.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field

from .domain import Level, Tile

Pos = tuple[int, int]

# Fixed move order: U, D, L, R.
DIRECTIONS: dict[str, Pos] = {"U": (-1, 0), "D": (1, 0), "L": (0, -1), "R": (0, 1)}
MOVE_ALPHABET = "UDLR"


class MoveRejected(Exception):
    """The attempted move is illegal; the state is unchanged."""


class Verdict(enum.Enum):
    SOLVABLE = "Solvable"
    UNSOLVABLE = "Unsolvable"
    LIMIT_EXCEEDED = "LimitExceeded"


@dataclass(frozen=True)
class SolveLimits:
    max_states: int = 200_000
    max_solution_pushes: int = 1_000

    def __post_init__(self):
        if self.max_states <= 0 or self.max_solution_pushes <= 0:
            raise ValueError("solve limits must be positive")


@dataclass(frozen=True)
class SolveOutcome:
    verdict: Verdict
    solution: str | None = None
    states_expanded: int = 0
    pushes: int = 0


@dataclass(frozen=True)
class GameState:
    """Immutable geometry (walls, targets) plus the mutable piece positions."""

    width: int
    height: int
    walls: frozenset[Pos]
    targets: frozenset[Pos]
    player: Pos
    boxes: frozenset[Pos]


@dataclass(frozen=True)
class PlayResult:
    final: GameState
    rejected_moves: tuple[int, ...]
    won: bool


def state_from_level(level: Level) -> GameState:
    walls, targets, boxes = set(), set(), set()
    player = None
    for r, row in enumerate(level.grid):
        for c, tile in enumerate(row):
            pos = (r, c)
            if tile is Tile.WALL:
                walls.add(pos)
            if tile in (Tile.TARGET, Tile.BOX_ON_TARGET, Tile.PLAYER_ON_TARGET):
                targets.add(pos)
            if tile in (Tile.BOX, Tile.BOX_ON_TARGET):
                boxes.add(pos)
            if tile in (Tile.PLAYER, Tile.PLAYER_ON_TARGET):
                player = pos
    if player is None:
        raise ValueError("level has no player")
    return GameState(
        width=level.width,
        height=level.height,
        walls=frozenset(walls),
        targets=frozenset(targets),
        player=player,
        boxes=frozenset(boxes),
    )


def apply_move(state: GameState, direction: str) -> GameState:
    """Move the player one cell, pushing a single box if one is in the way.

    Raises MoveRejected when blocked by a wall, a box against a wall, or a
    box against another box.
    """
    if direction not in DIRECTIONS:
        raise MoveRejected(f"unknown direction {direction!r}")
    dr, dc = DIRECTIONS[direction]
    dest = (state.player[0] + dr, state.player[1] + dc)
    if dest in state.walls:
        raise MoveRejected("wall ahead")
    if dest in state.boxes:
        beyond = (dest[0] + dr, dest[1] + dc)
        if beyond in state.walls or beyond in state.boxes:
            raise MoveRejected("box cannot be pushed")
        boxes = (state.boxes - {dest}) | {beyond}
        return GameState(state.width, state.height, state.walls, state.targets, dest, frozenset(boxes))
    return GameState(state.width, state.height, state.walls, state.targets, dest, state.boxes)


def check_win(state: GameState) -> bool:
    return state.boxes <= state.targets


def is_corner_deadlocked(state: GameState) -> bool:
    """A box off-target with walls on two orthogonally adjacent sides."""
    for box in state.boxes:
        if box in state.targets:
            continue
        r, c = box
        vertical = (r - 1, c) in state.walls or (r + 1, c) in state.walls
        horizontal = (r, c - 1) in state.walls or (r, c + 1) in state.walls
        if vertical and horizontal:
            return True
    return False


def _reachable(walls: frozenset[Pos], boxes: frozenset[Pos], start: Pos) -> set[Pos]:
    seen = {start}
    queue = deque([start])
    while queue:
        r, c = queue.popleft()
        for dr, dc in DIRECTIONS.values():
            nxt = (r + dr, c + dc)
            if nxt not in seen and nxt not in walls and nxt not in boxes:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def _walk_path(walls: frozenset[Pos], boxes: frozenset[Pos], start: Pos, goal: Pos) -> str:
    """Shortest player walk, ties broken by the fixed U/D/L/R order."""
    if start == goal:
        return ""
    prev: dict[Pos, tuple[Pos, str]] = {start: (start, "")}
    queue = deque([start])
    while queue:
        pos = queue.popleft()
        for move in MOVE_ALPHABET:
            dr, dc = DIRECTIONS[move]
            nxt = (pos[0] + dr, pos[1] + dc)
            if nxt in prev or nxt in walls or nxt in boxes:
                continue
            prev[nxt] = (pos, move)
            if nxt == goal:
                path = []
                cur = nxt
                while cur != start:
                    cur, move = prev[cur]
                    path.append(move)
                return "".join(reversed(path))
            queue.append(nxt)
    raise ValueError("goal not reachable")  # callers only ask for reachable cells


@dataclass
class _Node:
    boxes: frozenset[Pos]
    player: Pos  # actual player cell after the push (or the start cell)
    pushes: int
    parent: "_Node | None" = field(default=None, repr=False)
    push_from: Pos | None = None  # player cell before the push
    push_move: str | None = None


def solve(level: Level, limits: SolveLimits = SolveLimits()) -> SolveOutcome:
    """Decide playability via BFS over push states.

    Returns Solvable with a replayable move string (shortest in pushes),
    Unsolvable when the push-state space is exhausted, or LimitExceeded
    when max_states expansions are hit or only depth-pruned states remain.
    """
    state = state_from_level(level)
    walls, targets = state.walls, state.targets

    if check_win(state):
        return SolveOutcome(Verdict.SOLVABLE, solution="", states_expanded=0, pushes=0)
    if is_corner_deadlocked(state):
        return SolveOutcome(Verdict.UNSOLVABLE, states_expanded=0)

    def canon(boxes: frozenset[Pos], player: Pos) -> tuple[frozenset[Pos], Pos]:
        return boxes, min(_reachable(walls, boxes, player))

    root = _Node(state.boxes, state.player, pushes=0)
    visited = {canon(state.boxes, state.player)}
    queue = deque([root])
    expanded = 0
    depth_pruned = False

    while queue:
        node = queue.popleft()
        if expanded >= limits.max_states:
            return SolveOutcome(Verdict.LIMIT_EXCEEDED, states_expanded=expanded)
        expanded += 1
        reach = _reachable(walls, node.boxes, node.player)
        for box in sorted(node.boxes):
            for move in MOVE_ALPHABET:
                dr, dc = DIRECTIONS[move]
                push_from = (box[0] - dr, box[1] - dc)
                dest = (box[0] + dr, box[1] + dc)
                if push_from not in reach:
                    continue
                if dest in walls or dest in node.boxes:
                    continue
                new_boxes = (node.boxes - {box}) | {dest}
                child = _Node(
                    frozenset(new_boxes), box, node.pushes + 1, node, push_from, move
                )
                if child.boxes <= targets:
                    return SolveOutcome(
                        Verdict.SOLVABLE,
                        solution=_reconstruct(walls, child),
                        states_expanded=expanded,
                        pushes=child.pushes,
                    )
                if child.pushes >= limits.max_solution_pushes:
                    depth_pruned = True
                    continue
                child_state = GameState(
                    state.width, state.height, walls, targets, box, child.boxes
                )
                if is_corner_deadlocked(child_state):
                    continue
                key = canon(child.boxes, box)
                if key in visited:
                    continue
                visited.add(key)
                queue.append(child)

    verdict = Verdict.LIMIT_EXCEEDED if depth_pruned else Verdict.UNSOLVABLE
    return SolveOutcome(verdict, states_expanded=expanded)


def _reconstruct(walls: frozenset[Pos], node: _Node) -> str:
    chain: list[_Node] = []
    cur: _Node | None = node
    while cur is not None and cur.push_move is not None:
        chain.append(cur)
        cur = cur.parent
    chain.reverse()
    assert cur is not None
    moves: list[str] = []
    player = cur.player
    boxes = cur.boxes
    for step in chain:
        assert step.push_from is not None and step.push_move is not None
        moves.append(_walk_path(walls, boxes, player, step.push_from))
        moves.append(step.push_move)
        player = (
            step.push_from[0] + DIRECTIONS[step.push_move][0],
            step.push_from[1] + DIRECTIONS[step.push_move][1],
        )
        boxes = step.boxes
    return "".join(moves)


def validate_playthrough(level: Level, moves: str) -> PlayResult:
    """Apply moves in order; rejected moves are skipped, not fatal."""
    state = state_from_level(level)
    rejected = []
    for i, move in enumerate(moves):
        try:
            state = apply_move(state, move)
        except MoveRejected:
            rejected.append(i)
    return PlayResult(final=state, rejected_moves=tuple(rejected), won=check_win(state))
