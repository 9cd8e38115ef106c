"""Just enough CSS reading for the detectors.

Only sizing, ``@font-face``, ``@keyframes`` and transition declarations are
interpreted. There is no cascade and no selector matching.
"""
from __future__ import annotations

import re
from collections import Counter
from typing import Iterator, List, Optional, Tuple

_COMMENT = re.compile(r"/\*.*?(\*/|\Z)", re.S)
_URL = re.compile(r"""url\(\s*(?:"([^"]*)"|'([^']*)'|([^)\s]*))\s*\)""", re.I)
_PX = re.compile(r"^\s*(\d+(?:\.\d*)?|\.\d+)\s*px\s*(?:!\s*important\s*)?$", re.I)
_ATTR_LEN = re.compile(r"^\s*(\d+)(?:\.\d*)?\s*(?:px)?\s*$", re.I)
_TIME = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)m?s$", re.I)
_TIMING_FN = re.compile(
    r"^(ease|ease-in|ease-out|ease-in-out|linear|step-start|step-end|"
    r"steps\(.*\)|cubic-bezier\(.*\)|linear\(.*\)|allow-discrete|normal)$",
    re.I,
)
_KEYFRAMES = re.compile(r"^@(?:-[a-z]+-)?keyframes\b\s*(.*)$", re.I | re.S)


def strip_comments(text: str) -> str:
    return _COMMENT.sub(" ", text)


def _match_brace(text: str, start: int) -> Tuple[int, bool]:
    """Index just past the brace closing the one opened at ``start`` and
    whether it closed at all."""
    depth = 0
    i = start
    quote = None
    n = len(text)
    while i < n:
        c = text[i]
        if quote:
            if c == "\\":
                i += 1
            elif c == quote:
                quote = None
        elif c in "\"'":
            quote = c
        elif c == "{":
            depth += 1
        elif c == "}":
            depth -= 1
            if depth == 0:
                return i + 1, True
        i += 1
    return n, False


def iter_blocks(text: str, diagnostics: Optional[Counter] = None) -> Iterator[Tuple[str, str]]:
    """Yield ``(prelude, body)`` for each block at the top level of ``text``.

    Statement at-rules (``@import ...;``) are skipped. An unterminated block
    is still yielded, and counted under ``css_unterminated_block``.
    """
    i = 0
    n = len(text)
    while i < n:
        brace = text.find("{", i)
        if brace < 0:
            return
        prelude = text[i:brace]
        # Drop statements ending in ';' before this block (e.g. @import).
        semi = prelude.rfind(";")
        if semi >= 0:
            prelude = prelude[semi + 1:]
        end, closed = _match_brace(text, brace)
        if not closed and diagnostics is not None:
            diagnostics["css_unterminated_block"] += 1
        body = text[brace + 1:end - 1 if closed else end]
        yield prelude.strip(), body
        i = end


def declarations(body: str) -> List[Tuple[str, str]]:
    """Split a declaration block into lower-cased ``(property, value)`` pairs."""
    out = []
    for chunk in _split_top(body, ";"):
        name, sep, value = chunk.partition(":")
        if not sep:
            continue
        name = name.strip().lower()
        if name and re.fullmatch(r"-?[a-z][a-z0-9-]*", name):
            out.append((name, value.strip()))
    return out


def _split_top(text: str, sep: str) -> List[str]:
    """Split on ``sep`` outside parentheses and quotes."""
    parts, buf, depth, quote = [], [], 0, None
    for c in text:
        if quote:
            if c == quote:
                quote = None
        elif c in "\"'":
            quote = c
        elif c == "(":
            depth += 1
        elif c == ")":
            depth = max(0, depth - 1)
        elif c == sep and depth == 0:
            parts.append("".join(buf))
            buf = []
            continue
        buf.append(c)
    parts.append("".join(buf))
    return parts


def first_url(value: str) -> Optional[str]:
    m = _URL.search(value)
    if not m:
        return None
    url = next(g for g in m.groups() if g is not None)
    return url.strip() or None


def px_length(value: Optional[str]) -> Optional[int]:
    """An absolute CSS length in px, truncated to int; None for anything else
    (percentages, viewport units, ``auto``, unitless numbers)."""
    if value is None:
        return None
    m = _PX.match(value)
    return int(float(m.group(1))) if m else None


def attr_length(value: Optional[str]) -> Optional[int]:
    """HTML ``width``/``height`` attribute value: digits, optionally ``px``."""
    if value is None:
        return None
    m = _ATTR_LEN.match(value)
    return int(m.group(1)) if m else None


def transition_properties(value: str) -> List[str]:
    """Property names named by a ``transition`` shorthand value."""
    props = []
    for item in _split_top(value, ","):
        for token in item.split():
            if _TIME.match(token) or _TIMING_FN.match(token):
                continue
            props.append(token.lower())
            break
    return [p for p in props if p != "none"]


def keyframe_properties(body: str) -> List[str]:
    props = []
    for _, inner in iter_blocks(body):
        for name, _ in declarations(inner):
            if name not in props:
                props.append(name)
    return props


def parse_stylesheet(text: str, diagnostics: Optional[Counter] = None):
    """Collect font faces and animations from a stylesheet.

    Returns ``(fonts, animations)`` where fonts are dicts with ``family``,
    ``src`` and ``display`` keys, and animations are ``(selector, props,
    mechanism)`` tuples. Rules nested in ``@media``/``@supports`` are
    included.
    """
    diagnostics = diagnostics if diagnostics is not None else Counter()
    fonts: list = []
    anims: list = []
    _walk(strip_comments(text), fonts, anims, diagnostics, depth=0)
    return fonts, anims


def _walk(text, fonts, anims, diagnostics, depth):
    if depth > 8:
        diagnostics["css_nesting_too_deep"] += 1
        return
    for prelude, body in iter_blocks(text, diagnostics):
        low = prelude.lower()
        if low.startswith("@font-face"):
            decls = dict(declarations(body))
            family = decls.get("font-family", "").strip().strip("\"'")
            src = first_url(decls.get("src", ""))
            display = decls.get("font-display", "auto").strip().lower()
            if not family or not src:
                diagnostics["css_incomplete_font_face"] += 1
                continue
            fonts.append({"family": family, "src": src, "display": display})
        elif _KEYFRAMES.match(prelude):
            name = _KEYFRAMES.match(prelude).group(1).strip()
            props = keyframe_properties(body)
            if props:
                anims.append((f"@keyframes {name}", props, "keyframes"))
            else:
                diagnostics["css_empty_keyframes"] += 1
        elif low.startswith("@"):
            _walk(body, fonts, anims, diagnostics, depth + 1)
        else:
            props = rule_transitions(body)
            if props:
                anims.append((prelude, props, "transition"))


def rule_transitions(body: str) -> List[str]:
    """Transitioned properties named in one declaration block."""
    props: List[str] = []
    for name, value in declarations(body):
        if name in ("transition", "-webkit-transition", "-moz-transition"):
            found = transition_properties(value)
        elif name in ("transition-property", "-webkit-transition-property"):
            found = [p.strip().lower() for p in value.split(",") if p.strip()]
            found = [p for p in found if p != "none"]
        else:
            continue
        for p in found:
            if p not in props:
                props.append(p)
    return props
