"""Shells, dynamic extensions and the allowed-set manifest."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import nodes as N

_LINE = re.compile(r"^\s*allow\s+(shell|extension)\s+(\w+)\s+on\s+(\w+(?:\s*,\s*\w+)*)\s*$")


@dataclass
class Manifest:
    """Which classes each shell or extension may be attached to."""

    shells: dict[str, set[str]] = field(default_factory=dict)
    extensions: dict[str, set[str]] = field(default_factory=dict)


def parse_manifest(text: str, file: str = "<manifest>") -> Manifest:
    """Parse lines of the form ``allow shell S on C1, C2`` or ``allow extension E on C``.

    Blank lines and ``#`` comments are ignored.
    """
    man = Manifest()
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0]
        if not line.strip():
            continue
        m = _LINE.match(line)
        if m is None:
            raise ValueError(f"{file}:{n}: malformed manifest line: {line.strip()}")
        kind, name, classes = m.groups()
        table = man.shells if kind == "shell" else man.extensions
        table.setdefault(name, set()).update(c.strip() for c in classes.split(","))
    return man


def load_manifest(path: str) -> Manifest:
    with open(path, encoding="utf-8") as f:
        return parse_manifest(f.read(), path)


def _allowed(rt, kind: str, shell, cls_name: str) -> bool:
    table = getattr(rt.manifest, kind, None) if rt.manifest is not None else None
    if table is not None and shell.name in table:
        return cls_name in table[shell.name]
    base = shell.shell_base
    return base is None or rt.types.subtype(cls_name, base)


def eval_meta(rt, e: N.Send, fr):
    op = e.target.name
    if op == "attachShell":
        target = rt.eval(e.args[0], fr)
        if target is None:
            rt.raise_exc("MessageSendToNilException")
        s = e.args[1]
        shell = rt.classes[e.target.value]
        args = rt.eval_args(s.args, s.target.pack, fr) if s.target.kind == "static" else []
        init = s.target.method if s.target.kind == "static" else None
        if not _allowed(rt, "shells", shell, target.cls.name):
            rt.raise_exc("ClassNotInAllowedSetException", target)
        inst = rt.new_shell_inst(shell, target, args, init)
        target.shells.append(inst)
        return None
    if op == "removeShell":
        target = rt.eval(e.args[0], fr)
        if target is None:
            rt.raise_exc("MessageSendToNilException")
        if not target.shells:
            rt.raise_exc("NoShellException", target)
        target.shells.pop()
        return None
    cname = e.target.owner
    if op == "attachExtension":
        ext = rt.classes[e.target.value]
        if not _allowed(rt, "extensions", ext, cname):
            rt.raise_exc("ClassNotInAllowedSetException", rt.classobj(f"type({cname})"))
        init = next((m for m in ext.methods if m.section == "init" and not m.params), None)
        rt.extensions.setdefault(cname, []).append((ext, init, []))
        return None
    stack = rt.extensions.get(cname)
    if not stack:
        rt.raise_exc("NoExtensionException", rt.classobj(f"type({cname})"))
    ext = stack.pop()
    for obj in ext[2]:
        rt.ext_insts.pop((id(obj), id(ext)), None)
    if not stack:
        del rt.extensions[cname]
    return None
