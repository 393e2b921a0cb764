"""Command-line front end.

Commands: ``analyze`` (finite horizon), ``verify`` (strategy family on a
deviation suite), ``hasse`` (DOT output), ``catalog`` (list or run golden
expectations) and ``export`` (game description text).

Game description format, one statement per line (``#`` starts a comment)::

    players 1 2
    outside LS
    move . 1 R D            # history, mover, actions
    move R 2 r d
    simul . 1:S,C 2:S,C     # simultaneous node: mover:actions ...
    connected R,r
    payoff D 1=0 2=0
    payoff R,d 1=-1 2=3
    prefer 1 R,r > D        # optional ordinal pairs; '~' for indifference

Histories are comma-separated action labels; ``.`` is the root.
"""

from __future__ import annotations

import argparse
import itertools
import re
import sys
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import catalog
from .criteria import Criterion, LimitOfMeans, PayoffModel, parse_criterion
from .equilibria import (
    DEFAULT_DEPTH,
    FamilyPreconditionError,
    StrategyFamily,
    exhaustive_check,
    family_by_position,
    family_discount,
    family_mixed,
    family_realize_terminal,
    family_repeat_nash,
    family_simple_sum,
    family_spe,
    family_unbroken,
    verify_symbolic_spe,
)
from .game import (
    EMPTY,
    SEMANTICS,
    STRICT,
    WEAK,
    GameForm,
    History,
    Node,
    Profile,
    RelationPreference,
    format_profile,
    joint_label,
    spe_profiles,
)
from .nonstd import NonStdNum, TAU, ZERO, parse_nonstd, parse_rational
from .repeated import (
    RepeatedGameSpec,
    build_finite_repeated,
    check_dynamic_consistency,
    criterion_preferences,
    hasse,
    lift_preferences,
)
from .views import (
    Cycle,
    FiniteHorizon,
    Horizon,
    HugeHorizon,
    Payload,
    Segment,
    SegmentedWholeHistory,
    ViewKind,
    canonicalize,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(ValueError):
    pass


class GameDescriptionError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


# ---------------------------------------------------------------- game descriptions


@dataclass
class GameDescription:
    spec: RepeatedGameSpec
    model: Optional[PayoffModel]


def _parse_history_token(token: str) -> History:
    token = token.strip()
    if token in (".", "()", ""):
        return EMPTY
    if token.startswith("(") and token.endswith(")"):
        token = token[1:-1]
    return tuple(part.strip() for part in token.split(","))


def parse_game_description(text: str) -> GameDescription:
    players: list[str] = []
    outside: list[str] = []
    nodes: dict[History, tuple[tuple[str, ...], tuple[str, ...], dict[str, tuple[str, ...]]]] = {}
    order: list[tuple[History, int, int]] = []
    connected: list[tuple[History, int, int]] = []
    payoffs: dict[History, dict[str, Fraction]] = {}
    prefer: dict[str, list[tuple[History, History]]] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        words = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]
        keyword, col = words[0]

        def fail(message: str, column: int = col) -> GameDescriptionError:
            return GameDescriptionError(lineno, column, message)

        args = words[1:]
        if keyword == "players":
            players.extend(w for w, _ in args)
        elif keyword == "outside":
            outside.extend(w for w, _ in args)
        elif keyword in ("move", "simul"):
            if len(args) < 2:
                raise fail(f"{keyword} needs a history and at least one mover")
            h = _parse_history_token(args[0][0])
            if h in nodes:
                raise fail(f"node {args[0][0]} declared twice", args[0][1])
            if keyword == "move":
                if len(args) < 3:
                    raise fail("move needs a history, a player and actions")
                mover, mcol = args[1]
                acts = tuple(w for w, _ in args[2:])
                if len(set(acts)) != len(acts):
                    raise fail(f"duplicate actions at {args[0][0]}", args[2][1])
                if mover not in players:
                    raise fail(f"player function: unknown player {mover}", mcol)
                nodes[h] = ((mover,), acts, {})
            else:
                movers, sets = [], []
                for word, wcol in args[1:]:
                    if ":" not in word:
                        raise fail("simultaneous movers are written player:a,b", wcol)
                    p, acts_text = word.split(":", 1)
                    if p not in players:
                        raise fail(f"player function: unknown player {p}", wcol)
                    acts = tuple(a for a in acts_text.split(",") if a)
                    if not acts or len(set(acts)) != len(acts):
                        raise fail(f"duplicate or missing actions for {p}", wcol)
                    movers.append(p)
                    sets.append(acts)
                combos = list(itertools.product(*sets))
                labels = tuple(joint_label(c) for c in combos)
                nodes[h] = (tuple(movers), labels, dict(zip(labels, combos)))
            order.append((h, lineno, args[0][1]))
        elif keyword == "connected":
            for word, wcol in args:
                connected.append((_parse_history_token(word), lineno, wcol))
        elif keyword == "payoff":
            if not args:
                raise fail("payoff needs a history")
            h = _parse_history_token(args[0][0])
            row = payoffs.setdefault(h, {})
            for word, wcol in args[1:]:
                if "=" not in word:
                    raise fail("payoffs are written player=p/q", wcol)
                p, value = word.split("=", 1)
                if p not in players:
                    raise fail(f"unknown player {p}", wcol)
                try:
                    row[p] = parse_rational(value)
                except ValueError as err:
                    raise fail(str(err), wcol + len(p) + 1) from None
        elif keyword == "prefer":
            if len(args) != 4 or args[2][0] not in (">", "~", ">="):
                raise fail("prefer is written: prefer player h1 > h2 (or ~)")
            p = args[0][0]
            if p not in players:
                raise fail(f"unknown player {p}", args[0][1])
            a, b = _parse_history_token(args[1][0]), _parse_history_token(args[3][0])
            pairs = prefer.setdefault(p, [])
            pairs.append((a, b))
            if args[2][0] == "~":
                pairs.append((b, a))
        else:
            raise fail(f"unknown statement {keyword!r}")

    if not players:
        raise GameDescriptionError(1, 1, "no players declared")
    if EMPTY not in nodes:
        raise GameDescriptionError(1, 1, "the root node '.' is not declared")
    for h, lineno, col in order:
        if h and (h[:-1] not in nodes or h[-1] not in nodes[h[:-1]][1]):
            raise GameDescriptionError(lineno, col, f"prefix-closure: {','.join(h)} does not extend a declared node by a legal action")

    def node(h: History) -> Node:
        movers, acts, comps = nodes[h]
        kids = tuple((a, node(h + (a,)) if h + (a,) in nodes else None) for a in acts)
        return Node(movers, kids, tuple(comps.items()))

    prefs = {p: RelationPreference(pairs) for p, pairs in prefer.items()}
    table = payoffs or None
    try:
        g = GameForm.build(players, node(EMPTY), prefs, outside, table)
    except ValueError as err:
        raise GameDescriptionError(1, 1, f"validation: {err}") from None
    terminals = set(g.terminals)
    conn = []
    for h, lineno, col in connected:
        if h not in terminals:
            raise GameDescriptionError(lineno, col, f"connected history {','.join(h) or '.'} is not terminal (C must be a subset of Z)")
        conn.append(h)
    spec = RepeatedGameSpec(g, frozenset(conn))
    model = PayoffModel(payoffs, players=tuple(players)) if payoffs else None
    return GameDescription(spec, model)


def _hist_text(h: History) -> str:
    return ",".join(h) if h else "."


def export_game(spec: RepeatedGameSpec, model: Optional[PayoffModel] = None) -> str:
    """Normalised description text; parsing it back gives an equal game."""
    g = spec.constituent
    lines = ["players " + " ".join(g.players)]
    if g.outside:
        lines.append("outside " + " ".join(p for p in g.players if p in g.outside))
    for h in g.actions:
        movers = g.movers[h]
        if h in g.components:
            parts = []
            for i, p in enumerate(movers):
                acts = []
                for label in g.actions[h]:
                    a = g.components[h][label][i]
                    if a not in acts:
                        acts.append(a)
                parts.append(f"{p}:{','.join(acts)}")
            lines.append(f"simul {_hist_text(h)} " + " ".join(parts))
        else:
            lines.append(f"move {_hist_text(h)} {movers[0]} " + " ".join(g.actions[h]))
    conn = [z for z in g.terminals if z in spec.connected]
    if conn:
        lines.append("connected " + " ".join(_hist_text(z) for z in conn))
    table = model.table if model is not None else g.payoffs
    if table:
        for z in g.terminals:
            if z in table:
                row = table[z]
                lines.append(f"payoff {_hist_text(z)} " + " ".join(f"{p}={row[p]}" for p in g.players if p in row))
    return "\n".join(lines) + "\n"


def normalize_description(text: str) -> str:
    d = parse_game_description(text)
    return export_game(d.spec, d.model)


# ---------------------------------------------------------------- histories and segments


def parse_history(g: GameForm, text: str) -> History:
    """Accept ``R,r``, ``(in,C)``, ``.``, or concatenated labels such as ``Rr`` or ``SS``."""
    t = text.strip()
    if t in (".", "()", ""):
        return EMPTY
    if "," in t or (t.startswith("(") and t.endswith(")")):
        return _parse_history_token(t)
    h: History = EMPTY
    rest = t
    while rest:
        if g.is_terminal(h):
            raise UsageError(f"history {text!r} runs past a terminal")
        match = sorted((a for a in g.actions[h] if rest.startswith(a)), key=len, reverse=True)
        if not match:
            raise UsageError(f"cannot read {rest!r} at {_hist_text(h)} in {text!r}")
        h = h + (match[0],)
        rest = rest[len(match[0]):]
    return h


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def _parse_payload(g: GameForm, text: str) -> Payload:
    t = text.strip()
    if t.startswith("[") and t.endswith("]"):
        return Cycle(tuple(parse_history(g, x) for x in t[1:-1].split()))
    return parse_history(g, t)


_SCALED_TAU = re.compile(r"^(.*?)\*([+-]?\d+(?:/\d+)?\*tau.*)$")


def parse_segments(g: GameForm, text: str, horizon: Horizon) -> SegmentedWholeHistory:
    """Segment notation: ``payload*length, ...``.

    A bare integer is a period count (a bare rational is a fraction of tau in
    the bird's eye view), ``#n`` is n periods in either view, ``rest`` fills
    the remainder, and tau expressions such as ``tau-1`` are exact lengths.
    """
    total = horizon.length
    birdseye = isinstance(horizon, HugeHorizon) and horizon.view is ViewKind.BIRDSEYE
    items: list[tuple[Payload, Optional[NonStdNum]]] = []
    for part in _split_top(text, ","):
        if "*" not in part:
            raise UsageError(f"segment {part!r} needs payload*length")
        scaled = _SCALED_TAU.match(part)
        if scaled:
            payload_text, length_text = scaled.groups()
        else:
            payload_text, length_text = part.rsplit("*", 1)
        payload = _parse_payload(g, payload_text)
        lt = length_text.strip()
        if lt == "rest":
            items.append((payload, None))
        elif lt.startswith("#"):
            items.append((payload, NonStdNum.of(parse_rational(lt[1:]))))
        elif "tau" in lt or "eps" in lt:
            items.append((payload, parse_nonstd(lt)))
        elif birdseye:
            items.append((payload, TAU.scale(parse_rational(lt))))
        else:
            items.append((payload, NonStdNum.of(parse_rational(lt))))
    rests = [k for k, (_, length) in enumerate(items) if length is None]
    if len(rests) > 1:
        raise UsageError("only one segment may use 'rest'")
    known = sum((length for _, length in items if length is not None), ZERO)
    segs = []
    for payload, length in items:
        segs.append(Segment(total - known if length is None else length, payload))
    view = horizon.view if isinstance(horizon, HugeHorizon) else ViewKind.PERSPECTIVE
    return canonicalize(SegmentedWholeHistory(tuple(segs), view, total))


def parse_horizon(text: str) -> Horizon:
    t = text.strip()
    if t.startswith("n="):
        return FiniteHorizon(int(t[2:]))
    if t.isdigit():
        return FiniteHorizon(int(t))
    if t in ("huge", "huge:perspective"):
        return HugeHorizon(ViewKind.PERSPECTIVE)
    if t == "huge:birdseye":
        return HugeHorizon(ViewKind.BIRDSEYE)
    raise UsageError(f"unknown horizon {text!r}; use n=<k>, huge:perspective or huge:birdseye")


def parse_profile(g: GameForm, text: str) -> Profile:
    """``.:out;in:A`` lists the label chosen at each nonterminal."""
    choices = {}
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        node_text, label = item.rsplit(":", 1)
        choices[_parse_history_token(node_text)] = label.strip()
    prof: Profile = {p: {} for p in g.players}
    for h in g.nonterminals():
        if h not in choices:
            raise UsageError(f"profile has no choice at {_hist_text(h)}")
        label = choices[h]
        if label not in g.actions[h]:
            raise UsageError(f"{label} is not legal at {_hist_text(h)}")
        for m in g.movers[h]:
            prof[m][h] = g.component(h, label, m)
    return prof


_FAMILY_RE = re.compile(r"^\s*([a-z][a-z-]*)\s*(?:\((.*)\))?\s*$", re.S)


def _params(text: Optional[str]) -> dict[str, str]:
    out: dict[str, str] = {}
    if not text:
        return out
    # parameters are separated by '|' or by ',' before a key=...
    for piece in re.split(r"\|", text) if "|" in text else re.split(r",\s*(?=[\w-]+=)", text):
        if "=" not in piece:
            raise UsageError(f"family parameter {piece!r} must be key=value")
        k, v = piece.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def parse_family(text: str, spec: RepeatedGameSpec, model: PayoffModel, entry: Optional[catalog.CatalogEntry] = None) -> StrategyFamily:
    m = _FAMILY_RE.match(text)
    if not m:
        raise UsageError(f"cannot read family {text!r}")
    name, params = m.group(1), _params(m.group(2))
    g = spec.constituent
    if entry is not None and name in entry.families and not params:
        return entry.family(name, spec)
    if name == "spe":
        return family_spe(spec)
    if name == "discount":
        return family_discount(spec, parse_rational(params.get("delta", "1/2")), int(params.get("fill", "0")))
    if name == "simple-sum":
        force = params.get("force", "false").lower() in ("1", "true", "yes")
        return family_simple_sum(spec, parse_history(g, params["target"]), model, force)
    if name == "unbroken":
        return family_unbroken(spec, parse_history(g, params["target"]))
    if name == "repeat-nash":
        return family_repeat_nash(spec, parse_profile(g, params["profile"]))
    if name == "by-position":
        return family_by_position(spec, *(parse_profile(g, params[k]) for k in ("near", "distant", "end")))
    if name == "mixed":
        sigma = []
        for p in g.movers[EMPTY]:
            row = params.get(p)
            if row is None:
                raise UsageError(f"mixed family needs a distribution for player {p}")
            sigma.append([parse_rational(x) for x in row.split(":")])
        return family_mixed(spec, sigma, model)
    if name == "realize":
        target = parse_segments(g, params["target"], spec.horizon)
        return family_realize_terminal(spec, target, model, int(params.get("fill", "0")))
    raise UsageError(f"unknown family {name!r}")


# ---------------------------------------------------------------- config and commands


@dataclass
class RunConfig:
    game: str
    horizon: Horizon
    criterion: Optional[Criterion]
    family: Optional[str]
    semantics: str
    suite_depth: int = DEFAULT_DEPTH
    out: Optional[str] = None
    dot: Optional[str] = None
    player: Optional[str] = None


def load_game(source: str) -> tuple[RepeatedGameSpec, Optional[PayoffModel], Optional[catalog.CatalogEntry]]:
    if source in catalog.IDS:
        entry = catalog.get(source)
        return entry.spec(FiniteHorizon(2)), entry.model(), entry
    try:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise UsageError(f"cannot read game {source!r}: {err.strerror}") from None
    d = parse_game_description(text)
    return d.spec, d.model, None


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _section(lines: list[str], title: str) -> None:
    lines.append(f"[{title}]")


def _config(args: argparse.Namespace) -> RunConfig:
    criterion = parse_criterion(args.criterion) if getattr(args, "criterion", None) else None
    horizon = parse_horizon(args.horizon)
    if criterion is not None and isinstance(horizon, HugeHorizon) and criterion.view is not horizon.view:
        raise UsageError(f"criterion {criterion} needs the {criterion.view.value} view, not {horizon}")
    semantics = STRICT if getattr(args, "semantics", "strict") == "strict" else WEAK
    return RunConfig(
        args.game,
        horizon,
        criterion,
        getattr(args, "family", None),
        semantics,
        getattr(args, "suite_depth", DEFAULT_DEPTH),
        getattr(args, "out", None),
        getattr(args, "dot", None),
        getattr(args, "player", None),
    )


def _require_model(model: Optional[PayoffModel]) -> PayoffModel:
    if model is None:
        raise UsageError("this command needs payoffs in the game description")
    return model


def cmd_analyze(args: argparse.Namespace) -> int:
    cfg = _config(args)
    if not isinstance(cfg.horizon, FiniteHorizon):
        raise UsageError("analyze works at a finite horizon; use verify for huge horizons")
    spec, model, entry = load_game(cfg.game)
    spec = spec.with_horizon(cfg.horizon)
    lines: list[str] = []
    _section(lines, "run")
    lines += [f"game: {cfg.game}", f"horizon: {cfg.horizon}", f"criterion: {cfg.criterion or 'lifted order'}", f"semantics: {cfg.semantics}"]
    prefs = criterion_preferences(spec, cfg.criterion, _require_model(model)) if cfg.criterion else None
    expanded = build_finite_repeated(spec, prefs)
    found = spe_profiles(expanded.game, cfg.semantics)
    _section(lines, "spe")
    lines.append(f"count: {len(found)}")
    for prof in found:
        lines.append(f"profile: {format_profile(expanded.game, prof)}")
    if model is not None:
        _section(lines, "terminals")
        core = spec.constituent.core_players
        from .criteria import SimpleSum, evaluate

        crit = cfg.criterion or SimpleSum()
        for z in sorted(expanded.game.terminals, key=lambda z: (len(expanded.whole(z)), z)):
            whole = SegmentedWholeHistory.explicit(expanded.whole(z), spec.n)
            values = " ".join(f"{p}={evaluate(crit, whole, model, p)}" for p in core)
            lines.append(f"{expanded.label(z)}: {values}")
        if cfg.criterion is not None:
            _section(lines, "dynamic-consistency")
            for p, v in sorted(check_dynamic_consistency(spec, cfg.criterion, model).items()):
                lines.append(f"{p}: {v}")
    status = EXIT_OK
    if cfg.family:
        if cfg.criterion is None:
            raise UsageError("verifying a family needs --criterion")
        fam = parse_family(cfg.family, spec, model, entry)
        report = verify_symbolic_spe(spec, fam, cfg.criterion, model, depth=cfg.suite_depth)
        exact = exhaustive_check(spec, fam, cfg.criterion, model, cfg.semantics)
        _section(lines, "family")
        lines += [f"family: {fam.describe()}", f"suite: {report.verdict}", f"exhaustive: {'spe' if exact.ok else 'not-spe'}"]
        if exact.witness:
            lines.append(f"exhaustive-witness: {exact.witness.describe()}")
        status = EXIT_OK if report.verified and exact.ok else EXIT_FAIL
    _emit("\n".join(lines) + "\n", cfg.out)
    return status


def verification_report(cfg: RunConfig, spec: RepeatedGameSpec, fam: StrategyFamily, report) -> str:
    lines: list[str] = []
    _section(lines, "run")
    lines += [f"game: {cfg.game}", f"horizon: {cfg.horizon}", f"criterion: {cfg.criterion}", f"family: {fam.describe()}", f"suite-depth: {cfg.suite_depth}"]
    _section(lines, "result")
    lines.append(f"verdict: {report.verdict}")
    lines.append(f"path: {report.path.render()}")
    for p, v in sorted(report.path_values.items()):
        lines.append(f"payoff {p}: {v}")
    if report.witness:
        lines.append(f"witness: {report.witness.line(spec.constituent)}")
    for alt in report.alternatives:
        lines.append(f"alternative-fill {alt.family}: {alt.verdict}")
    _section(lines, "deviations")
    for r in report.results:
        lines.append(r.line(spec.constituent))
    return "\n".join(lines) + "\n"


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = _config(args)
    if cfg.criterion is None or not cfg.family:
        raise UsageError("verify needs --criterion and --family")
    spec, model, entry = load_game(cfg.game)
    spec = spec.with_horizon(cfg.horizon)
    model = _require_model(model)
    try:
        fam = parse_family(cfg.family, spec, model, entry)
    except FamilyPreconditionError as err:
        _emit(f"[result]\nverdict: precondition-failed\nreason: {err}\n", cfg.out)
        return EXIT_FAIL
    report = verify_symbolic_spe(spec, fam, cfg.criterion, model, depth=cfg.suite_depth)
    _emit(verification_report(cfg, spec, fam, report), cfg.out)
    return EXIT_OK if report.verified else EXIT_FAIL


def cmd_hasse(args: argparse.Namespace) -> int:
    cfg = _config(args)
    if not isinstance(cfg.horizon, FiniteHorizon):
        raise UsageError("hasse needs a finite horizon")
    spec, model, entry = load_game(cfg.game)
    spec = spec.with_horizon(cfg.horizon)
    g = spec.constituent
    player = cfg.player or g.core_players[0]
    if player not in g.players:
        raise UsageError(f"unknown player {player}")
    rel = lift_preferences(
        spec,
        use_dynamic_consistency=args.dynamic_consistency,
        commutativity=args.commutativity,
        sooner_better=args.sooner_better,
        players=[player],
    )[player]
    diagram = hasse(rel)
    dot = diagram.to_dot(f"{cfg.game}-{player}")
    if cfg.dot:
        with open(cfg.dot, "w", encoding="utf-8") as fh:
            fh.write(dot)
        _emit(f"nodes: {len(diagram.classes)}\nedges: {len(diagram.edges)}\n", cfg.out)
    else:
        _emit(dot, cfg.out)
    return EXIT_OK


def cmd_catalog(args: argparse.Namespace) -> int:
    if args.action == "list":
        lines = [f"{i}: {catalog.get(i).title}" for i in catalog.IDS]
        _emit("\n".join(lines) + "\n", args.out)
        return EXIT_OK
    ids = args.ids or None
    for i in ids or []:
        if i not in catalog.IDS:
            raise UsageError(f"unknown catalog entry {i!r}")
    report = catalog.run_all(ids)
    _emit(report.text() + "\n", args.out)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_export(args: argparse.Namespace) -> int:
    spec, model, _ = load_game(args.game)
    _emit(export_game(spec, model), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hugegames", description="Repeated games over huge horizons, exactly.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, criterion: bool = True) -> None:
        p.add_argument("--game", required=True, help="catalog id or description file")
        p.add_argument("--horizon", default="n=2", help="n=<k>, huge:perspective or huge:birdseye")
        if criterion:
            p.add_argument("--criterion", help="discounted:<delta>, simple, overtaking or limit-of-means")
        p.add_argument("--semantics", choices=("weak", "strict"), default="strict")
        p.add_argument("--out", help="write the report here instead of stdout")

    p = sub.add_parser("analyze", help="expand, solve and report at a finite horizon")
    common(p)
    p.add_argument("--family")
    p.add_argument("--suite-depth", type=int, default=DEFAULT_DEPTH)
    p.set_defaults(run=cmd_analyze)

    p = sub.add_parser("verify", help="check a strategy family on the deviation suite")
    common(p)
    p.add_argument("--family", required=True)
    p.add_argument("--suite-depth", type=int, default=DEFAULT_DEPTH)
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("hasse", help="emit the Hasse diagram of a lifted order as DOT")
    common(p, criterion=False)
    p.add_argument("--player")
    p.add_argument("--dot", help="write DOT here; the report then lists counts")
    p.add_argument("--dynamic-consistency", action="store_true")
    p.add_argument("--commutativity", action="store_true")
    p.add_argument("--sooner-better", action="store_true")
    p.set_defaults(run=cmd_hasse)

    p = sub.add_parser("catalog", help="list entries or run their golden expectations")
    p.add_argument("action", choices=("list", "run"))
    p.add_argument("ids", nargs="*")
    p.add_argument("--out")
    p.set_defaults(run=cmd_catalog)

    p = sub.add_parser("export", help="print a game in the description format")
    p.add_argument("--game", required=True)
    p.add_argument("--out")
    p.set_defaults(run=cmd_export)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except (UsageError, GameDescriptionError, KeyError) as err:
        msg = err.args[0] if isinstance(err, KeyError) and err.args else err
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
