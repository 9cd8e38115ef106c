"""HTTP forward proxy that adds Document-Policy headers to HTML responses.

Plain HTTP requests are forwarded and rewritten; CONNECT is tunneled
untouched (no TLS interception). Bodies are never modified.
"""
from __future__ import annotations

import http.client
import logging
import select
import socket
import threading
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import List, Optional, Tuple
from urllib.parse import urlsplit

from .headers import (
    DOCUMENT_POLICY,
    DOCUMENT_POLICY_REPORT_ONLY,
    merge_values,
    parse_headers,
)
from .model import PolicySet, validate_policy_set

log = logging.getLogger(__name__)

HOP_BY_HOP = {
    "connection", "keep-alive", "proxy-authenticate", "proxy-authorization",
    "te", "trailers", "transfer-encoding", "upgrade", "proxy-connection",
}
HTML_TYPES = ("text/html", "application/xhtml+xml")
CHUNK = 64 * 1024


@dataclass(frozen=True)
class ProxyConfig:
    policy: PolicySet
    report_only: bool = False
    upstream_timeout_s: float = 30.0

    @property
    def header_name(self) -> str:
        return DOCUMENT_POLICY_REPORT_ONLY if self.report_only else DOCUMENT_POLICY


def load_policy(source: str) -> PolicySet:
    """A policy from a file (one header value per line, ``#`` comments) or
    from an inline header value."""
    try:
        is_file = Path(source).is_file()
    except (OSError, ValueError):  # too long or odd bytes for a path
        is_file = False
    if is_file:
        lines = [ln.strip() for ln in Path(source).read_text().splitlines()]
        value = ", ".join(ln for ln in lines if ln and not ln.startswith("#"))
    else:
        value = source
    return parse_headers(value)


def is_html(content_type: Optional[str]) -> bool:
    if not content_type:
        return False
    return content_type.split(";", 1)[0].strip().lower() in HTML_TYPES


def inject(headers: List[Tuple[str, str]], content_type: Optional[str],
           config: ProxyConfig) -> List[Tuple[str, str]]:
    """Response headers after policy injection. Non-HTML responses and an
    empty policy leave ``headers`` as they are."""
    if not is_html(content_type) or not (config.policy.features or config.policy.unknown):
        return list(headers)
    name = config.header_name
    existing = [v for k, v in headers if k.lower() == name.lower()]
    try:
        value = merge_values(existing, config.policy)
    except ValueError:
        log.warning("unparseable upstream %s header %r; replacing it", name, existing)
        value = merge_values([], config.policy)
    kept = [(k, v) for k, v in headers if k.lower() != name.lower()]
    return kept + [(name, value)]


class PolicyProxyServer(ThreadingHTTPServer):
    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, address, config: ProxyConfig):
        self.config = config
        super().__init__(address, PolicyProxyHandler)

    def reload(self, config: ProxyConfig) -> None:
        validate_policy_set(config.policy)
        self.config = config  # single reference swap; handlers read it once


class PolicyProxyHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server: PolicyProxyServer

    def log_message(self, fmt, *args):
        log.debug("%s - %s", self.address_string(), fmt % args)

    def do_CONNECT(self):
        host, _, port = self.path.rpartition(":")
        try:
            upstream = socket.create_connection((host, int(port or 443)), timeout=self.server.config.upstream_timeout_s)
        except (OSError, ValueError):
            self.send_error(502, "upstream connect failed")
            return
        self.send_response(200, "Connection Established")
        self.send_header("Connection", "close")
        self.end_headers()
        self.close_connection = True
        _pipe(self.connection, upstream)

    def _forward(self):
        config = self.server.config
        url = urlsplit(self.path)
        if url.scheme != "http" or not url.hostname:
            self.send_error(400, "absolute http:// URL required")
            return
        target = url.path or "/"
        if url.query:
            target += "?" + url.query
        headers = {k: v for k, v in self.headers.items() if k.lower() not in HOP_BY_HOP}
        headers["Host"] = url.netloc
        headers["Connection"] = "close"
        length = int(self.headers.get("Content-Length") or 0)
        body = self.rfile.read(length) if length else None

        conn = http.client.HTTPConnection(url.hostname, url.port or 80, timeout=config.upstream_timeout_s)
        try:
            conn.request(self.command, target, body=body, headers=headers)
            resp = conn.getresponse()
        except (OSError, http.client.HTTPException) as exc:
            conn.close()
            self.send_error(502, f"upstream failed: {exc}")
            return
        try:
            out_headers = [(k, v) for k, v in resp.getheaders() if k.lower() not in HOP_BY_HOP]
            out_headers = inject(out_headers, resp.getheader("Content-Type"), config)
            self.send_response_only(resp.status, resp.reason)
            for k, v in out_headers:
                self.send_header(k, v)
            self.send_header("Connection", "close")
            self.end_headers()
            self.close_connection = True
            if self.command != "HEAD":
                while True:
                    chunk = resp.read1(CHUNK) if hasattr(resp, "read1") else resp.read(CHUNK)
                    if not chunk:
                        break
                    self.wfile.write(chunk)
        finally:
            conn.close()

    do_GET = do_POST = do_PUT = do_DELETE = do_HEAD = do_OPTIONS = do_PATCH = _forward


def _pipe(a: socket.socket, b: socket.socket) -> None:
    socks = [a, b]
    try:
        while True:
            ready, _, errored = select.select(socks, [], socks, 60)
            if errored or not ready:
                return
            for s in ready:
                data = s.recv(CHUNK)
                if not data:
                    return
                (b if s is a else a).sendall(data)
    except OSError:
        return
    finally:
        b.close()


def parse_listen(addr: str) -> Tuple[str, int]:
    host, _, port = addr.rpartition(":")
    return host or "127.0.0.1", int(port)


def start_proxy(listen_addr: str, ps: PolicySet, report_only: bool = False) -> Tuple[PolicyProxyServer, threading.Thread]:
    """Bind and serve in a background thread; call ``server.shutdown()`` to stop."""
    server = PolicyProxyServer(parse_listen(listen_addr), ProxyConfig(validate_policy_set(ps), report_only))
    thread = threading.Thread(target=server.serve_forever, name="policy-proxy", daemon=True)
    thread.start()
    return server, thread


def run_proxy(listen_addr: str, ps: PolicySet, mode: str = "enforce") -> None:
    """Serve until interrupted. ``mode`` is ``enforce`` or ``report-only``."""
    if mode not in ("enforce", "report-only"):
        raise ValueError(f"unknown proxy mode {mode!r}")
    config = ProxyConfig(validate_policy_set(ps), report_only=mode == "report-only")
    with PolicyProxyServer(parse_listen(listen_addr), config) as server:
        log.info("policy proxy on %s:%s", *server.server_address[:2])
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            pass
