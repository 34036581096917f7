"""Indentation-based parser for the YAML subset CITATION.cff files use.

Covers block mappings and sequences, plain/quoted scalars, comments, flow
sequences on one line, and literal/folded block scalars. Deliberately not
full YAML: no anchors, tags, flow mappings, or multi-document streams.
Every failure raises MalformedCff with the offending line number.
"""

from __future__ import annotations

import re
from typing import Any

from .errors import MalformedCff

_INT = re.compile(r"^[-+]?[0-9]+$")
_BLOCK_INDICATOR = re.compile(r"^([|>])([+-]?)$")

# Plain scalars keep their text except for booleans, null, and integers.
# Floats are deliberately not coerced: YAML would read a version like
# 1.10 as the number 1.1 and destroy it.
_BOOLS = {"true": True, "True": True, "TRUE": True,
          "false": False, "False": False, "FALSE": False}
_NULLS = {"null", "Null", "NULL", "~"}

_ESCAPES = {"\\": "\\", '"': '"', "n": "\n", "t": "\t", "r": "\r", "0": "\0", "/": "/"}


def _strip_comment(content: str) -> str:
    """Cut a trailing comment; '#' only starts one outside quotes and after whitespace."""
    quote: str | None = None
    i = 0
    while i < len(content):
        ch = content[i]
        if quote == '"':
            if ch == "\\":
                i += 1
            elif ch == '"':
                quote = None
        elif quote == "'":
            if ch == "'":
                quote = None
        elif ch in "\"'":
            quote = ch
        elif ch == "#" and (i == 0 or content[i - 1] in " \t"):
            return content[:i].rstrip()
        i += 1
    return content.rstrip()


class _Parser:
    def __init__(self, text: str):
        self.lines = text.splitlines()

    def _measure(self, index: int) -> tuple[int, str]:
        line = self.lines[index]
        indent = 0
        for ch in line:
            if ch == " ":
                indent += 1
            elif ch == "\t":
                raise MalformedCff("tab character in indentation", index + 1)
            else:
                break
        return indent, _strip_comment(line[indent:])

    def _peek(self, start: int) -> tuple[int, int, str] | None:
        """Next effective line from ``start``: (index, indent, content)."""
        index = start
        while index < len(self.lines):
            indent, content = self._measure(index)
            if content:
                return index, indent, content
            index += 1
        return None

    # -- scalars ------------------------------------------------------------

    def _parse_quoted(self, text: str, line_no: int) -> tuple[str, str]:
        """Parse a leading quoted scalar; returns (value, remainder)."""
        quote = text[0]
        out: list[str] = []
        i = 1
        while i < len(text):
            ch = text[i]
            if quote == "'":
                if ch == "'":
                    if i + 1 < len(text) and text[i + 1] == "'":
                        out.append("'")
                        i += 2
                        continue
                    return "".join(out), text[i + 1:].strip()
                out.append(ch)
                i += 1
            else:
                if ch == "\\":
                    if i + 1 >= len(text):
                        raise MalformedCff("dangling escape in double-quoted scalar", line_no)
                    esc = text[i + 1]
                    if esc == "u":
                        hex_part = text[i + 2 : i + 6]
                        if len(hex_part) != 4:
                            raise MalformedCff("truncated \\u escape", line_no)
                        try:
                            out.append(chr(int(hex_part, 16)))
                        except ValueError:
                            raise MalformedCff("invalid \\u escape", line_no) from None
                        i += 6
                        continue
                    if esc not in _ESCAPES:
                        raise MalformedCff(f"unsupported escape \\{esc}", line_no)
                    out.append(_ESCAPES[esc])
                    i += 2
                    continue
                if ch == '"':
                    return "".join(out), text[i + 1:].strip()
                out.append(ch)
                i += 1
        raise MalformedCff("unterminated quoted scalar", line_no)

    def _parse_scalar(self, text: str, line_no: int) -> Any:
        if text.startswith(("'", '"')):
            value, rest = self._parse_quoted(text, line_no)
            if rest:
                raise MalformedCff(f"unexpected content after quoted scalar: {rest!r}", line_no)
            return value
        if text.startswith("["):
            return self._parse_flow_sequence(text, line_no)
        if text.startswith("{"):
            raise MalformedCff("flow mappings are not supported", line_no)
        if text in _BOOLS:
            return _BOOLS[text]
        if text in _NULLS:
            return None
        if _INT.match(text):
            return int(text)
        return text

    def _parse_flow_sequence(self, text: str, line_no: int) -> list[Any]:
        if not text.endswith("]"):
            raise MalformedCff("unterminated flow sequence", line_no)
        body = text[1:-1].strip()
        if not body:
            return []
        items: list[Any] = []
        current = body
        while True:
            current = current.lstrip()
            if current.startswith(("'", '"')):
                value, rest = self._parse_quoted(current, line_no)
                items.append(value)
                rest = rest.lstrip()
                if rest.startswith(","):
                    current = rest[1:]
                    continue
                if rest:
                    raise MalformedCff(f"unexpected content in flow sequence: {rest!r}", line_no)
                return items
            if current.startswith(("[", "{")):
                raise MalformedCff("nested flow collections are not supported", line_no)
            head, sep, tail = current.partition(",")
            items.append(self._parse_scalar(head.strip(), line_no))
            if not sep:
                return items
            current = tail

    # -- structure ----------------------------------------------------------

    def _split_key(self, content: str, line_no: int) -> tuple[str, str] | None:
        """Split a 'key: value' line; None when the line is not a mapping entry."""
        if content.startswith(("'", '"')):
            key, rest = self._parse_quoted(content, line_no)
            if not rest.startswith(":"):
                return None
            return key, rest[1:].strip()
        for i, ch in enumerate(content):
            if ch == ":" and (i + 1 == len(content) or content[i + 1] in " \t"):
                key = content[:i].strip()
                if not key:
                    raise MalformedCff("mapping entry without a key", line_no)
                return key, content[i + 1:].strip()
        return None

    def _parse_block_scalar(
        self, style: str, chomp: str, parent_indent: int, start: int
    ) -> tuple[str, int]:
        collected: list[tuple[int, str]] = []  # (indent or -1 for blank, raw text)
        index = start
        while index < len(self.lines):
            line = self.lines[index]
            if not line.strip():
                collected.append((-1, ""))
                index += 1
                continue
            # tabs are legal inside block-scalar content, so measure spaces only
            indent = len(line) - len(line.lstrip(" "))
            if indent <= parent_indent:
                break
            collected.append((indent, line))
            index += 1
        if all(ind == -1 for ind, _ in collected):
            return ("\n" * len(collected) if chomp == "+" else ""), index
        block_indent = next(ind for ind, _ in collected if ind >= 0)
        lines: list[str] = []
        for ind, raw in collected:
            if ind == -1:
                lines.append("")
            elif ind < block_indent:
                raise MalformedCff("bad indentation inside block scalar", start + 1)
            else:
                lines.append(raw[block_indent:])
        if style == "|":
            raw_text = "\n".join(lines)
        else:
            # folded: single newlines become spaces, blank lines become newlines
            parts: list[str] = []
            for ln in lines:
                if not ln:
                    parts.append("\n")
                elif parts and parts[-1] not in ("\n", ""):
                    parts.append(" " + ln)
                else:
                    parts.append(ln)
            raw_text = "".join(parts)
        core = raw_text.rstrip("\n")
        if chomp == "-":
            return core, index
        if chomp == "+":
            return raw_text + "\n", index
        return (core + "\n") if core else "", index

    def _parse_value(
        self, rest: str, parent_indent: int, index: int
    ) -> tuple[Any, int]:
        """Value after 'key:'; consumes extra lines for nested blocks."""
        line_no = index + 1
        if rest:
            block = _BLOCK_INDICATOR.match(rest)
            if block:
                return self._parse_block_scalar(
                    block.group(1), block.group(2), parent_indent, index + 1
                )
            if rest[0] in "|>":
                raise MalformedCff(
                    "block scalar indicators with options are not supported", line_no
                )
            return self._parse_scalar(rest, line_no), index + 1
        child = self._peek(index + 1)
        if child is not None and child[1] > parent_indent:
            return self._parse_node(child[1], index + 1)
        return None, index + 1

    def _parse_map(self, indent: int, start: int) -> tuple[dict[str, Any], int]:
        result: dict[str, Any] = {}
        index = start
        while True:
            nxt = self._peek(index)
            if nxt is None or nxt[1] < indent:
                break
            line_index, line_indent, content = nxt
            line_no = line_index + 1
            if line_indent > indent:
                raise MalformedCff("unexpected indentation", line_no)
            if content == "-" or content.startswith("- "):
                raise MalformedCff("sequence item where a mapping entry was expected", line_no)
            pair = self._split_key(content, line_no)
            if pair is None:
                raise MalformedCff("expected 'key: value'", line_no)
            key, rest = pair
            if key in result:
                raise MalformedCff(f"duplicate key {key!r}", line_no)
            value, index = self._parse_value(rest, line_indent, line_index)
            result[key] = value
        return result, index

    def _parse_seq(self, indent: int, start: int) -> tuple[list[Any], int]:
        items: list[Any] = []
        index = start
        while True:
            nxt = self._peek(index)
            if nxt is None or nxt[1] != indent:
                if nxt is not None and nxt[1] > indent:
                    raise MalformedCff("unexpected indentation", nxt[0] + 1)
                break
            line_index, _, content = nxt
            if content == "-":
                child = self._peek(line_index + 1)
                if child is not None and child[1] > indent:
                    value, index = self._parse_node(child[1], line_index + 1)
                else:
                    value, index = None, line_index + 1
                items.append(value)
            elif content.startswith("- "):
                # Blank out the dash so the item content keeps its true column,
                # then parse it as a regular node. Handles nested maps, nested
                # sequences, and plain items uniformly.
                raw = self.lines[line_index]
                dash = len(raw) - len(raw.lstrip(" "))
                self.lines[line_index] = raw[:dash] + " " + raw[dash + 1:]
                child = self._peek(line_index)
                assert child is not None
                value, index = self._parse_node(child[1], line_index)
                items.append(value)
            else:
                break
        return items, index

    def _parse_node(self, indent: int, start: int) -> tuple[Any, int]:
        nxt = self._peek(start)
        if nxt is None:
            return None, start
        line_index, _, content = nxt
        line_no = line_index + 1
        if content == "-" or content.startswith("- "):
            return self._parse_seq(indent, start)
        if self._split_key(content, line_no) is not None:
            return self._parse_map(indent, start)
        value = self._parse_scalar(content, line_no)
        follow = self._peek(line_index + 1)
        if follow is not None and follow[1] >= indent:
            raise MalformedCff(
                "multi-line plain scalars are not supported; use '|' or '>'",
                follow[0] + 1,
            )
        return value, line_index + 1

    def parse(self) -> Any:
        first = self._peek(0)
        if first is None:
            return {}
        start = 0
        if first[2] == "---" and first[1] == 0:
            start = first[0] + 1
            first = self._peek(start)
            if first is None:
                return {}
        if first[2] == "...":
            return {}
        value, index = self._parse_node(first[1], start)
        trailer = self._peek(index)
        if trailer is not None and trailer[2] not in ("...",):
            raise MalformedCff("content after the top-level node", trailer[0] + 1)
        return value


def loads(text: str) -> Any:
    """Parse the YAML subset; returns maps/lists/scalars or raises MalformedCff."""
    return _Parser(text).parse()
