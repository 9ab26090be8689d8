"""Event log construction, the canonical transition-label codec and I/O.

A transition label packs one decision as
``((last_id,last_move),(piece_id,move),reward)`` with direction words bare
and no whitespace, e.g. ``((-1,()),(2,(left,down)),0)``.  Episode tables use
the six Table-style columns with Python-literal cells; event logs ship as a
two-column CSV (task_id, transition) or as XES.
"""

from __future__ import annotations

import ast
import csv
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .episodes import Movement, StepRecord

EPISODE_COLUMNS = ("last_turn_id", "last_turn_movement", "piece_id",
                   "move", "captured", "reward")

XES_NS = "http://www.xes-standard.org/"


@dataclass(frozen=True)
class TransitionEvent:
    case_id: int
    label: str


@dataclass
class EventLog:
    cases: dict = field(default_factory=dict)

    @property
    def alphabet(self) -> set:
        return {ev.label for events in self.cases.values() for ev in events}

    def traces(self) -> list[tuple[int, tuple[str, ...]]]:
        return [(cid, tuple(ev.label for ev in self.cases[cid]))
                for cid in sorted(self.cases)]

    def __len__(self):
        return len(self.cases)


def format_movement(move: Movement) -> str:
    if isinstance(move, tuple):
        return "(" + ",".join(move) + ")"
    if move == math.inf:
        return "inf"
    if move == -math.inf:
        return "-inf"
    return str(int(move))


def parse_movement(token: str) -> Movement:
    token = token.strip()
    if token.startswith("("):
        inner = token[1:-1].strip()
        return tuple(part.strip() for part in inner.split(",")) if inner else ()
    if token in ("inf", "-inf"):
        return math.inf if token == "inf" else -math.inf
    return int(token)


def format_label(last_id: int, last_move: Movement, piece_id: int,
                 move: Movement, reward: int) -> str:
    return (f"(({last_id},{format_movement(last_move)}),"
            f"({piece_id},{format_movement(move)}),{reward})")


def label_for(record: StepRecord) -> str:
    return format_label(record.last_turn_enemy_piece_id,
                        record.last_turn_enemy_movement,
                        record.piece_id, record.move, record.reward)


def _split_top_level(text: str) -> list[str]:
    parts = []
    depth = 0
    cur = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_label(label: str) -> tuple[tuple[int, Movement], tuple[int, Movement], int]:
    """Inverse of format_label."""
    body = label.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise ValueError(f"malformed label: {label!r}")
    ctx_part, act_part, reward_part = _split_top_level(body[1:-1])
    ctx_id, ctx_move = _split_top_level(ctx_part.strip()[1:-1])
    act_id, act_move = _split_top_level(act_part.strip()[1:-1])
    return ((int(ctx_id), parse_movement(ctx_move)),
            (int(act_id), parse_movement(act_move)),
            int(reward_part))


def build_event_log(traces: Iterable[tuple[int, Sequence[StepRecord]]]) -> EventLog:
    """One case per episode id, one event per step, in turn order."""
    log = EventLog()
    for case_id, steps in traces:
        if case_id in log.cases:
            raise ValueError(f"duplicate case id {case_id}")
        log.cases[case_id] = [TransitionEvent(case_id, label_for(s)) for s in steps]
    return log


def _movement_cell(move: Movement) -> str:
    if isinstance(move, tuple):
        return repr(move)
    if move in (math.inf, -math.inf):
        return "inf" if move == math.inf else "-inf"
    return str(int(move))


def _parse_movement_cell(cell: str) -> Movement:
    cell = cell.strip()
    if cell in ("inf", "-inf"):
        return math.inf if cell == "inf" else -math.inf
    value = ast.literal_eval(cell)
    return value if isinstance(value, tuple) else int(value)


def export_episode_table(trace: Sequence[StepRecord], path) -> None:
    """Six-column CSV, one row per agent decision.

    Column names are the short table forms; ``last_turn_id`` and
    ``last_turn_movement`` alias the record fields
    ``last_turn_enemy_piece_id`` / ``last_turn_enemy_movement``.
    """
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(EPISODE_COLUMNS)
            for rec in trace:
                writer.writerow([
                    rec.last_turn_enemy_piece_id,
                    _movement_cell(rec.last_turn_enemy_movement),
                    rec.piece_id,
                    _movement_cell(rec.move),
                    repr(list(rec.captured)),
                    rec.reward,
                ])
    except OSError as exc:
        raise OSError(f"cannot write episode table {path}: {exc}") from exc


def import_episode_table(path) -> list[StepRecord]:
    path = Path(path)
    records = []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != EPISODE_COLUMNS:
            raise ValueError(f"unexpected episode table header in {path}: {header}")
        for row in reader:
            records.append(StepRecord(
                last_turn_enemy_piece_id=int(row[0]),
                last_turn_enemy_movement=_parse_movement_cell(row[1]),
                piece_id=int(row[2]),
                move=_parse_movement_cell(row[3]),
                captured=tuple(ast.literal_eval(row[4])),
                reward=int(row[5]),
            ))
    return records


def _export_log_csv(log: EventLog, path: Path) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["task_id", "transition"])
        for cid in sorted(log.cases):
            for ev in log.cases[cid]:
                writer.writerow([cid, ev.label])


def _import_log_csv(path: Path) -> EventLog:
    log = EventLog()
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip() for h in header] != ["task_id", "transition"]:
            raise ValueError(f"unexpected event log header in {path}: {header}")
        for row in reader:
            cid = int(row[0])
            log.cases.setdefault(cid, []).append(TransitionEvent(cid, row[1]))
    return log


def _export_log_xes(log: EventLog, path: Path) -> None:
    root = ET.Element("log", {"xes.version": "1.0", "xmlns": XES_NS})
    for cid in sorted(log.cases):
        trace_el = ET.SubElement(root, "trace")
        ET.SubElement(trace_el, "string",
                      {"key": "concept:name", "value": str(cid)})
        for ev in log.cases[cid]:
            ev_el = ET.SubElement(trace_el, "event")
            ET.SubElement(ev_el, "string",
                          {"key": "concept:name", "value": ev.label})
    tree = ET.ElementTree(root)
    ET.indent(tree)
    tree.write(path, encoding="utf-8", xml_declaration=True)


def _import_log_xes(path: Path) -> EventLog:
    log = EventLog()
    root = ET.parse(path).getroot()
    for trace_el in root:
        if not trace_el.tag.endswith("trace"):
            continue
        cid = None
        events = []
        for child in trace_el:
            if child.tag.endswith("string") and child.get("key") == "concept:name":
                cid = int(child.get("value"))
            elif child.tag.endswith("event"):
                for attr in child:
                    if attr.get("key") == "concept:name":
                        events.append(attr.get("value"))
        if cid is None:
            raise ValueError(f"trace without concept:name in {path}")
        log.cases[cid] = [TransitionEvent(cid, label) for label in events]
    return log


def export_log(log: EventLog, path, format: str = "csv") -> None:
    """Writes the log as csv (task_id/transition) or xes."""
    path = Path(path)
    try:
        if format == "csv":
            _export_log_csv(log, path)
        elif format == "xes":
            _export_log_xes(log, path)
        else:
            raise ValueError(f"unknown log format: {format}")
    except OSError as exc:
        raise OSError(f"cannot write event log {path}: {exc}") from exc


def import_log(path, format: str | None = None) -> EventLog:
    path = Path(path)
    if format is None:
        format = "xes" if path.suffix.lower() == ".xes" else "csv"
    if format == "csv":
        return _import_log_csv(path)
    if format == "xes":
        return _import_log_xes(path)
    raise ValueError(f"unknown log format: {format}")
