"""Minimal TOML-subset reader for pipeline configuration files.

Python 3.10 has no tomllib and this environment carries no TOML package,
so we parse the subset the config format actually uses:

  * ``key = value`` pairs with bare keys (``[A-Za-z0-9_-]+``)
  * basic strings with ``\\" \\\\ \\n \\t`` escapes
  * integers, floats, booleans
  * single-line arrays of strings/numbers
  * ``[table]`` and ``[[array-of-tables]]`` headers (single-level names)
  * ``#`` comments and blank lines

Anything outside the subset raises ConfigError with the line number, which
is strictly better here than silently accepting half of TOML.
"""

from __future__ import annotations

import re
from typing import Any

from .errors import ConfigError

_KEY_RE = re.compile(r"^[A-Za-z0-9_-]+$")


def loads(text: str) -> dict[str, Any]:
    root: dict[str, Any] = {}
    current: dict[str, Any] = root
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw, lineno).strip()
        if not line:
            continue
        if line.startswith("[["):
            name = _header(line, lineno, double=True)
            entry: dict[str, Any] = {}
            root.setdefault(name, [])
            if not isinstance(root[name], list):
                raise ConfigError(f"line {lineno}: '{name}' is already a non-array value")
            root[name].append(entry)
            current = entry
        elif line.startswith("["):
            name = _header(line, lineno, double=False)
            if name in root:
                raise ConfigError(f"line {lineno}: duplicate table '{name}'")
            table: dict[str, Any] = {}
            root[name] = table
            current = table
        else:
            key, value = _keyvalue(line, lineno)
            if key in current:
                raise ConfigError(f"line {lineno}: duplicate key '{key}'")
            current[key] = value
    return root


def load(path: str) -> dict[str, Any]:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def _strip_comment(line: str, lineno: int) -> str:
    out = []
    in_string = False
    i = 0
    while i < len(line):
        ch = line[i]
        if in_string:
            if ch == "\\":
                out.append(line[i : i + 2])
                i += 2
                continue
            if ch == '"':
                in_string = False
        elif ch == '"':
            in_string = True
        elif ch == "#":
            break
        out.append(ch)
        i += 1
    if in_string:
        raise ConfigError(f"line {lineno}: unterminated string")
    return "".join(out)


def _header(line: str, lineno: int, double: bool) -> str:
    open_b, close_b = ("[[", "]]") if double else ("[", "]")
    if not line.endswith(close_b):
        raise ConfigError(f"line {lineno}: malformed table header {line!r}")
    name = line[len(open_b) : -len(close_b)].strip()
    if not _KEY_RE.match(name):
        raise ConfigError(f"line {lineno}: invalid table name {name!r}")
    return name


def _keyvalue(line: str, lineno: int) -> tuple[str, Any]:
    if "=" not in line:
        raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
    key, _, rest = line.partition("=")
    key = key.strip()
    if not _KEY_RE.match(key):
        raise ConfigError(f"line {lineno}: invalid key {key!r}")
    return key, _value(rest.strip(), lineno)


def _value(token: str, lineno: int) -> Any:
    if not token:
        raise ConfigError(f"line {lineno}: missing value")
    if token.startswith('"'):
        return _string(token, lineno)
    if token.startswith("["):
        return _array(token, lineno)
    if token in ("true", "false"):
        return token == "true"
    cleaned = token.replace("_", "")
    try:
        return int(cleaned)
    except ValueError:
        pass
    try:
        return float(cleaned)
    except ValueError:
        raise ConfigError(f"line {lineno}: unsupported value {token!r}") from None


_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t", "r": "\r"}


def _string(token: str, lineno: int) -> str:
    if len(token) < 2 or not token.endswith('"'):
        raise ConfigError(f"line {lineno}: malformed string {token!r}")
    body = token[1:-1]
    out = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\":
            if i + 1 >= len(body) or body[i + 1] not in _ESCAPES:
                raise ConfigError(f"line {lineno}: bad escape in {token!r}")
            out.append(_ESCAPES[body[i + 1]])
            i += 2
            continue
        if ch == '"':
            raise ConfigError(f"line {lineno}: text after string close in {token!r}")
        out.append(ch)
        i += 1
    return "".join(out)


def _array(token: str, lineno: int) -> list[Any]:
    if not token.endswith("]"):
        raise ConfigError(f"line {lineno}: arrays must open and close on one line")
    body = token[1:-1].strip()
    if not body:
        return []
    items = []
    for piece in _split_items(body, lineno):
        items.append(_value(piece.strip(), lineno))
    return items


def _split_items(body: str, lineno: int) -> list[str]:
    pieces = []
    depth = 0
    in_string = False
    start = 0
    i = 0
    while i < len(body):
        ch = body[i]
        if in_string:
            if ch == "\\":
                i += 2
                continue
            if ch == '"':
                in_string = False
        elif ch == '"':
            in_string = True
        elif ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == "," and depth == 0:
            pieces.append(body[start:i])
            start = i + 1
        i += 1
    tail = body[start:].strip()
    if tail:
        pieces.append(tail)
    return pieces
