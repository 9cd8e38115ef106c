"""Fetch a page and its subresources (one level, no script execution)."""
from __future__ import annotations

import logging
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Tuple
from urllib.error import URLError
from urllib.parse import urldefrag, urlsplit
from urllib.request import Request, urlopen

from .extract import ResourceRecord, referenced_urls, stylesheet_font_urls
from .imaging import sniff_image

log = logging.getLogger(__name__)

MOBILE_USER_AGENT = (
    "Mozilla/5.0 (Linux; Android 7.0; Moto G (4)) AppleWebKit/537.36 "
    "(KHTML, like Gecko) Chrome/90.0.4430.91 Mobile Safari/537.36"
)


class Unreachable(Exception):
    """The page itself could not be fetched."""


@dataclass(frozen=True)
class FetchConfig:
    timeout_s: float = 15.0
    max_resource_bytes: int = 8 * 1024 * 1024
    user_agent: str = MOBILE_USER_AGENT
    max_in_flight: int = 6
    politeness_delay_s: float = 0.0

    @classmethod
    def from_env(cls, **overrides) -> "FetchConfig":
        """Defaults, with politeness limits overridable through
        ``DOCPOLICY_MAX_IN_FLIGHT`` and ``DOCPOLICY_POLITENESS_DELAY``."""
        env = {}
        if "DOCPOLICY_MAX_IN_FLIGHT" in os.environ:
            env["max_in_flight"] = max(1, int(os.environ["DOCPOLICY_MAX_IN_FLIGHT"]))
        if "DOCPOLICY_POLITENESS_DELAY" in os.environ:
            env["politeness_delay_s"] = max(0.0, float(os.environ["DOCPOLICY_POLITENESS_DELAY"]))
        env.update(overrides)
        return cls(**env)


class HostGate:
    """At most one request per host at a time, spaced by ``delay`` seconds."""

    def __init__(self, delay: float = 0.0):
        self.delay = delay
        self._locks: Dict[str, threading.Lock] = {}
        self._last: Dict[str, float] = {}
        self._guard = threading.Lock()

    def _lock(self, host: str) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(host, threading.Lock())

    def run(self, url: str, fn):
        host = urlsplit(url).netloc
        with self._lock(host):
            wait = self._last.get(host, 0.0) + self.delay - time.monotonic()
            if wait > 0:
                time.sleep(wait)
            try:
                return fn()
            finally:
                self._last[host] = time.monotonic()


class FetchLimiter:
    """Politeness limits shared by every fetch that uses it: at most
    ``max_in_flight`` requests at once overall, and per host one at a time
    spaced by ``delay`` seconds."""

    def __init__(self, max_in_flight: int = 6, delay: float = 0.0):
        self.max_in_flight = max(1, max_in_flight)
        self._slots = threading.BoundedSemaphore(self.max_in_flight)
        self._gate = HostGate(delay)

    @classmethod
    def from_config(cls, cfg: FetchConfig) -> "FetchLimiter":
        return cls(cfg.max_in_flight, cfg.politeness_delay_s)

    def run(self, url: str, fn):
        # Host lock first, then a global slot: a slot is only ever held by
        # a request that is actually running.
        def guarded():
            with self._slots:
                return fn()
        return self._gate.run(url, guarded)


def to_url(target: str) -> str:
    """Accept an http(s)/file URL or a local path (a directory means its
    ``index.html``)."""
    if urlsplit(target).scheme in ("http", "https", "file"):
        return target
    path = Path(target)
    if path.is_dir():
        path = path / "index.html"
    return path.resolve().as_uri()


def _get(url: str, cfg: FetchConfig) -> Tuple[bytes, str, Optional[int]]:
    req = Request(url, headers={"User-Agent": cfg.user_agent})
    with urlopen(req, timeout=cfg.timeout_s) as resp:
        body = resp.read(cfg.max_resource_bytes + 1)
        ctype = resp.headers.get("Content-Type", "") or ""
        length = resp.headers.get("Content-Length")
    declared = int(length) if length and length.isdigit() else None
    return body, ctype, declared


def record_for(url: str, body: bytes, content_type: str = "", declared_length: Optional[int] = None,
               max_bytes: Optional[int] = None, keep_text: bool = False) -> ResourceRecord:
    """Build a ResourceRecord from a response body; image facts come from
    magic bytes, never from ``content_type``."""
    truncated = max_bytes is not None and len(body) > max_bytes
    size = declared_length if truncated else len(body)
    info = sniff_image(body)
    text = body.decode("utf-8", "replace") if keep_text and not truncated else None
    return ResourceRecord(
        url=url,
        bytes=size if size is not None else len(body),
        content_type=content_type,
        image_dims=info.dims,
        image_encoding=info.encoding,
        text=text,
    )


def fetch_page(target: str, config: Optional[FetchConfig] = None,
               limiter: Optional[FetchLimiter] = None) -> Tuple[str, bytes, Dict[str, ResourceRecord]]:
    """Fetch a page and the resources it references.

    Returns ``(url, html, resources)``. Raises :class:`Unreachable` when
    the HTML itself cannot be fetched; a failed subresource is simply left
    out of ``resources``. Pass one ``limiter`` to concurrent calls to make
    the politeness limits hold across all of them.
    """
    cfg = config or FetchConfig.from_env()
    limiter = limiter or FetchLimiter.from_config(cfg)
    url = to_url(target)
    try:
        html, _, _ = limiter.run(url, lambda: _get(url, cfg))
    except (URLError, OSError, ValueError) as exc:
        raise Unreachable(f"{url}: {exc}") from exc

    resources: Dict[str, ResourceRecord] = {}

    def grab(res_url: str, keep_text: bool = False) -> Optional[ResourceRecord]:
        fetch_url = urldefrag(res_url)[0]
        try:
            body, ctype, declared = limiter.run(fetch_url, lambda: _get(fetch_url, cfg))
        except (URLError, OSError, ValueError) as exc:
            log.debug("resource %s failed: %s", res_url, exc)
            return None
        return record_for(res_url, body, ctype, declared, cfg.max_resource_bytes, keep_text)

    refs = referenced_urls(html, url)
    with ThreadPoolExecutor(max_workers=limiter.max_in_flight) as pool:
        first = sorted(set(refs["media"] + refs["scripts"] + refs["fonts"]))
        sheets = sorted(set(refs["stylesheets"]))
        jobs = {u: pool.submit(grab, u) for u in first}
        jobs.update({u: pool.submit(grab, u, True) for u in sheets})
        for u, job in jobs.items():
            rec = job.result()
            if rec is not None:
                resources[u] = rec
        fonts = set()
        for u in sheets:
            rec = resources.get(u)
            if rec is not None and rec.text is not None:
                fonts.update(stylesheet_font_urls(rec.text, u))
        fonts -= set(resources)
        for u, job in {u: pool.submit(grab, u) for u in sorted(fonts)}.items():
            rec = job.result()
            if rec is not None:
                resources[u] = rec
    return url, html, resources
