"""Leveled variable and procedure stores.

Both stores are non-empty stacks of frames; the first frame is the global
scope and the last is the deepest, most recently opened level. Every
operation returns fresh values, inputs are never mutated.

Lookup and update bind to the deepest frame containing the name; a
declaration targets the deepest frame only and refuses a name already bound
there, so shadowing across levels is allowed while redeclaration within a
level is not.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from .syntax import FalseV, NatV, TrueV, Value, VoidV, pretty, value_text


class EnvError(Exception):
    pass


class RedeclError(EnvError):
    """Name already bound in the deepest frame."""


class UnboundError(EnvError):
    """No frame binds the name."""


class ScopeError(EnvError):
    """Attempt to pop the global scope; indicates a bug in the semantics."""


@dataclass(frozen=True)
class Frame:
    entries: tuple[tuple[str, object], ...] = ()

    def get(self, name: str):
        for key, value in self.entries:
            if key == name:
                return value
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(key == name for key, _ in self.entries)

    def bind(self, name: str, value) -> "Frame":
        return Frame(self.entries + ((name, value),))

    def rebind(self, name: str, value) -> "Frame":
        return Frame(tuple((k, value if k == name else v)
                           for k, v in self.entries))


@dataclass(frozen=True)
class Env:
    frames: tuple[Frame, ...] = (Frame(),)

    def __iter__(self) -> Iterator[Frame]:
        return iter(self.frames)

    def depth(self) -> int:
        return len(self.frames)


Store = Env
ProcEnv = Env


def push_scope(store: Env, procs: Env) -> tuple[Env, Env]:
    """Open a new empty level on both stores."""
    return (Env(store.frames + (Frame(),)), Env(procs.frames + (Frame(),)))


def pop_scope(store: Env, procs: Env) -> tuple[Env, Env]:
    """Discard the deepest level of both stores; the global scope stays."""
    if store.depth() == 1 or procs.depth() == 1:
        raise ScopeError("cannot pop the global scope")
    return (Env(store.frames[:-1]), Env(procs.frames[:-1]))


def _declare(env: Env, name: str, value) -> Env:
    deepest = env.frames[-1]
    if name in deepest:
        raise RedeclError(name)
    return Env(env.frames[:-1] + (deepest.bind(name, value),))


def _lookup(env: Env, name: str):
    for frame in reversed(env.frames):
        if name in frame:
            return frame.get(name)
    raise UnboundError(name)


def declare_var(store: Env, name: str, value: Value) -> Env:
    return _declare(store, name, value)


def update_var(store: Env, name: str, value: Value) -> Env:
    """Rebind the deepest occurrence of `name`; never creates a binding."""
    for i in range(store.depth() - 1, -1, -1):
        if name in store.frames[i]:
            frames = (store.frames[:i]
                      + (store.frames[i].rebind(name, value),)
                      + store.frames[i + 1:])
            return Env(frames)
    raise UnboundError(name)


def lookup_var(store: Env, name: str) -> Value:
    return _lookup(store, name)


def declare_proc(procs: Env, name: str, body) -> Env:
    return _declare(procs, name, body)


def lookup_proc(procs: Env, name: str):
    return _lookup(procs, name)


# ---------------------------------------------------------------------------
# Canonical textual rendering, used by traces, graph labels, and store files:
# frames oldest to newest inside parentheses, entries in insertion order,
# e.g. "({a=3, b=5}, {a=4})".

def _render_frame(frame: Frame, show: Callable[[object], str]) -> str:
    return "{" + ", ".join(f"{k}={show(v)}" for k, v in frame.entries) + "}"


def render_store(store: Env) -> str:
    return "(" + ", ".join(_render_frame(f, value_text) for f in store) + ")"


def render_procs(procs: Env) -> str:
    return "(" + ", ".join(_render_frame(f, pretty) for f in procs) + ")"


def parse_store(text: str) -> Env:
    """Read a variable store back from its canonical rendering."""
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise ValueError(f"store must be wrapped in parentheses: {text!r}")
    frames: list[Frame] = []
    rest = body[1:-1].strip()
    while rest:
        if not rest.startswith("{"):
            raise ValueError(f"expected a frame at {rest!r}")
        close = rest.index("}")
        frames.append(_parse_frame(rest[1:close]))
        rest = rest[close + 1:].lstrip()
        if rest.startswith(","):
            rest = rest[1:].lstrip()
        elif rest:
            raise ValueError(f"expected ',' between frames at {rest!r}")
    if not frames:
        raise ValueError("a store has at least one frame")
    return Env(tuple(frames))


def _parse_frame(body: str) -> Frame:
    entries: list[tuple[str, Value]] = []
    body = body.strip()
    if body:
        for part in body.split(","):
            name, _, raw = part.partition("=")
            name, raw = name.strip(), raw.strip()
            if not name or not raw:
                raise ValueError(f"malformed binding {part!r}")
            entries.append((name, _parse_value(raw)))
    return Frame(tuple(entries))


def _parse_value(raw: str) -> Value:
    if raw == "true":
        return TrueV()
    if raw == "false":
        return FalseV()
    if raw == "void":
        return VoidV()
    if raw.isdigit():
        return NatV(int(raw))
    raise ValueError(f"not a value: {raw!r}")
