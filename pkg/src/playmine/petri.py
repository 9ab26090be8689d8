"""Place/transition nets with markings, firing and small analysis helpers."""

from __future__ import annotations

import json
import random
from collections import Counter, deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional


@dataclass(frozen=True)
class Transition:
    name: str
    label: Optional[str] = None  # None marks a silent transition

    @property
    def silent(self) -> bool:
        return self.label is None


class PetriNet:
    """Immutable net; markings are Counters over place names."""

    def __init__(self, places: Iterable[str], transitions: Iterable[Transition],
                 arcs: Iterable[tuple[str, str]], initial_marking: Counter,
                 final_marking: Counter):
        self.places = tuple(sorted(set(places)))
        self.transitions = tuple(sorted(set(transitions), key=lambda t: t.name))
        self.arcs = tuple(sorted(set(arcs)))
        self.initial_marking = Counter({p: n for p, n in initial_marking.items() if n > 0})
        self.final_marking = Counter({p: n for p, n in final_marking.items() if n > 0})
        if not self.initial_marking or not self.final_marking:
            raise ValueError("initial and final markings must be non-empty")

        place_set = set(self.places)
        trans_names = {t.name for t in self.transitions}
        if place_set & trans_names:
            raise ValueError("place and transition names must be disjoint")
        self._by_name = {t.name: t for t in self.transitions}
        self.preset: dict[str, tuple[str, ...]] = {t.name: () for t in self.transitions}
        self.postset: dict[str, tuple[str, ...]] = {t.name: () for t in self.transitions}
        place_in: dict[str, int] = {p: 0 for p in self.places}
        place_out: dict[str, int] = {p: 0 for p in self.places}
        for src, dst in self.arcs:
            if src in place_set and dst in trans_names:
                self.preset[dst] = self.preset[dst] + (src,)
                place_out[src] += 1
            elif src in trans_names and dst in place_set:
                self.postset[src] = self.postset[src] + (dst,)
                place_in[dst] += 1
            else:
                raise ValueError(f"arc {src}->{dst} is not place/transition bipartite")
        self._place_in = place_in
        self._place_out = place_out
        for marking in (self.initial_marking, self.final_marking):
            for p in marking:
                if p not in place_set:
                    raise ValueError(f"marking references unknown place {p}")

    def transition(self, name: str) -> Transition:
        return self._by_name[name]

    def is_enabled(self, marking: Counter, name: str) -> bool:
        need = Counter(self.preset[name])
        return all(marking[p] >= n for p, n in need.items())

    def fire(self, marking: Counter, name: str) -> Counter:
        if not self.is_enabled(marking, name):
            raise ValueError(f"transition {name} is not enabled")
        out = Counter(marking)
        out.subtract(Counter(self.preset[name]))
        out.update(Counter(self.postset[name]))
        return Counter({p: n for p, n in out.items() if n > 0})

    def enabled_transitions(self, marking: Counter) -> list[str]:
        return [t.name for t in self.transitions if self.is_enabled(marking, t.name)]

    def source_places(self) -> tuple[str, ...]:
        return tuple(p for p in self.places if self._place_in[p] == 0)

    def sink_places(self) -> tuple[str, ...]:
        return tuple(p for p in self.places if self._place_out[p] == 0)

    def has_unique_source_and_sink(self) -> bool:
        return len(self.source_places()) == 1 and len(self.sink_places()) == 1

    def __eq__(self, other):
        if not isinstance(other, PetriNet):
            return NotImplemented
        return (self.places == other.places and self.transitions == other.transitions
                and self.arcs == other.arcs
                and self.initial_marking == other.initial_marking
                and self.final_marking == other.final_marking)

    def __repr__(self):
        return (f"PetriNet({len(self.places)} places, {len(self.transitions)} "
                f"transitions, {len(self.arcs)} arcs)")


def marking_key(marking: Counter) -> tuple:
    return tuple(sorted((p, n) for p, n in marking.items() if n > 0))


def random_firing_trace(net: PetriNet, rng: random.Random,
                        max_steps: int = 200) -> tuple[list[str], bool]:
    """Random walk from the initial marking; visible labels plus completion."""
    marking = Counter(net.initial_marking)
    labels: list[str] = []
    for _ in range(max_steps):
        if marking == net.final_marking:
            return labels, True
        enabled = net.enabled_transitions(marking)
        if not enabled:
            return labels, False
        name = enabled[rng.randrange(len(enabled))]
        t = net.transition(name)
        if not t.silent:
            labels.append(t.label)
        marking = net.fire(marking, name)
    return labels, marking == net.final_marking


def sample_complete_trace(net: PetriNet, rng: random.Random,
                          max_steps: int = 200, attempts: int = 200) -> list[str]:
    """Retries random walks until one reaches the final marking."""
    for _ in range(attempts):
        labels, done = random_firing_trace(net, rng, max_steps)
        if done:
            return labels
    raise RuntimeError("could not sample a complete firing sequence")


def visible_language(net: PetriNet, max_len: int,
                     max_states: int = 200_000) -> set[tuple[str, ...]]:
    """All visible label sequences (length <= max_len) reaching the final
    marking.  Exploration is breadth-first with state deduplication."""
    start = (marking_key(net.initial_marking), ())
    final_key = marking_key(net.final_marking)
    seen = {start}
    queue = deque([(Counter(net.initial_marking), ())])
    out: set[tuple[str, ...]] = set()
    while queue:
        if len(seen) > max_states:
            raise RuntimeError("state budget exceeded while enumerating language")
        marking, seq = queue.popleft()
        if marking_key(marking) == final_key:
            out.add(seq)
        for name in net.enabled_transitions(marking):
            t = net.transition(name)
            nseq = seq if t.silent else seq + (t.label,)
            if len(nseq) > max_len:
                continue
            nm = net.fire(marking, name)
            key = (marking_key(nm), nseq)
            if key not in seen:
                seen.add(key)
                queue.append((nm, nseq))
    return out


def to_dot(net: PetriNet) -> str:
    """Graph description: places as circles, transitions as boxes, silent
    transitions filled.  Node order is stable across runs."""

    def esc(s: str) -> str:
        return s.replace("\\", "\\\\").replace('"', '\\"')

    lines = ["digraph net {", "  rankdir=LR;"]
    for p in net.places:
        mark = ""
        if net.initial_marking.get(p):
            mark = " [source]"
        elif net.final_marking.get(p):
            mark = " [sink]"
        lines.append(f'  "{esc(p)}" [shape=circle label="{esc(p + mark)}"];')
    for t in net.transitions:
        if t.silent:
            lines.append(f'  "{esc(t.name)}" [shape=box style=filled '
                         f'fillcolor=black label=""];')
        else:
            lines.append(f'  "{esc(t.name)}" [shape=box label="{esc(t.label)}"];')
    for src, dst in net.arcs:
        lines.append(f'  "{esc(src)}" -> "{esc(dst)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def net_to_json(net: PetriNet) -> str:
    payload = {
        "places": list(net.places),
        "transitions": [[t.name, t.label] for t in net.transitions],
        "arcs": [list(a) for a in net.arcs],
        "initial_marking": dict(net.initial_marking),
        "final_marking": dict(net.final_marking),
    }
    return json.dumps(payload, indent=2, sort_keys=True)


def net_from_json(text: str) -> PetriNet:
    payload = json.loads(text)
    return PetriNet(
        places=payload["places"],
        transitions=[Transition(name, label) for name, label in payload["transitions"]],
        arcs=[tuple(a) for a in payload["arcs"]],
        initial_marking=Counter(payload["initial_marking"]),
        final_marking=Counter(payload["final_marking"]),
    )


def save_net(net: PetriNet, path) -> None:
    Path(path).write_text(net_to_json(net))


def load_net(path) -> PetriNet:
    return net_from_json(Path(path).read_text())
