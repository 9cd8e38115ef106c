import http.client
import socket
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from docpolicy.headers import parse_headers
from docpolicy.model import FeatureKind as F, PolicySet
from docpolicy.proxy import ProxyConfig, inject, is_html, load_policy, start_proxy

PNG = bytes(range(256)) * 64
HTML = b"<!doctype html><title>x</title>" + b"<p>hello</p>" * 5000

ROUTES = {
    "/page": (200, "text/html; charset=utf-8", HTML, []),
    "/img.png": (200, "image/png", PNG, []),
    "/has-policy": (200, "text/html", HTML, [("Document-Policy", "oversized-images=3.0, x-keep=?0")]),
    "/xhtml": (200, "application/xhtml+xml", b"<html/>", []),
    "/missing": (404, "text/html", b"nope", []),
}


class Stub(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    def log_message(self, *args):
        pass

    def do_GET(self):
        status, ctype, body, extra = ROUTES.get(self.path, ROUTES["/missing"])
        self.send_response(status)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        for k, v in extra:
            self.send_header(k, v)
        self.end_headers()
        self.wfile.write(body)

    def do_POST(self):
        body = self.rfile.read(int(self.headers["Content-Length"]))
        self.send_response(200)
        self.send_header("Content-Type", "application/octet-stream")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body[::-1])


@pytest.fixture(scope="module")
def upstream():
    srv = ThreadingHTTPServer(("127.0.0.1", 0), Stub)
    threading.Thread(target=srv.serve_forever, daemon=True).start()
    yield f"127.0.0.1:{srv.server_address[1]}"
    srv.shutdown()
    srv.server_close()


@pytest.fixture
def proxy():
    started = []

    def start(ps, report_only=False):
        server, _ = start_proxy("127.0.0.1:0", ps, report_only)
        started.append(server)
        return server

    yield start
    for s in started:
        s.shutdown()
        s.server_close()


def fetch(server, url, method="GET", body=None):
    conn = http.client.HTTPConnection(*server.server_address[:2], timeout=10)
    conn.request(method, url, body=body)
    resp = conn.getresponse()
    data = resp.read()
    conn.close()
    return resp, data


def test_html_gets_header(upstream, proxy):
    server = proxy(PolicySet.of(F.UNSIZED_MEDIA))
    resp, body = fetch(server, f"http://{upstream}/page")
    assert resp.status == 200
    assert resp.getheader("Document-Policy") == "unsized-media=?0"
    assert body == HTML


def test_xhtml_counts_as_html(upstream, proxy):
    resp, _ = fetch(proxy(PolicySet.of(F.UNSIZED_MEDIA)), f"http://{upstream}/xhtml")
    assert resp.getheader("Document-Policy") == "unsized-media=?0"


def test_image_passes_through(upstream, proxy):
    resp, body = fetch(proxy(PolicySet.of(F.UNSIZED_MEDIA)), f"http://{upstream}/img.png")
    assert body == PNG
    assert resp.getheader("Document-Policy") is None


def test_existing_header_merged(upstream, proxy):
    resp, _ = fetch(proxy(PolicySet.of(F.OVERSIZED_IMAGES)), f"http://{upstream}/has-policy")
    assert resp.getheaders().count(("Document-Policy", "oversized-images=2.0, x-keep=?0")) == 1
    assert [k for k, _ in resp.getheaders()].count("Document-Policy") == 1


def test_report_only(upstream, proxy):
    resp, _ = fetch(proxy(PolicySet.of(F.UNSIZED_MEDIA), report_only=True), f"http://{upstream}/page")
    assert resp.getheader("Document-Policy-Report-Only") == "unsized-media=?0"
    assert resp.getheader("Document-Policy") is None


def test_status_and_post_body_forwarded(upstream, proxy):
    server = proxy(PolicySet.of(F.UNSIZED_MEDIA))
    resp, _ = fetch(server, f"http://{upstream}/nothing-here")
    assert resp.status == 404
    resp, body = fetch(server, f"http://{upstream}/echo", "POST", b"abc123")
    assert body == b"321cba"


def test_upstream_down_gives_502(proxy):
    sock = socket.socket()
    sock.bind(("127.0.0.1", 0))
    port = sock.getsockname()[1]
    sock.close()
    resp, _ = fetch(proxy(PolicySet.of(F.UNSIZED_MEDIA)), f"http://127.0.0.1:{port}/")
    assert resp.status == 502


def test_relative_url_rejected(proxy):
    resp, _ = fetch(proxy(PolicySet.of(F.UNSIZED_MEDIA)), "/page")
    assert resp.status == 400


def test_connect_tunnels_bytes(proxy):
    echo = socket.socket()
    echo.bind(("127.0.0.1", 0))
    echo.listen(1)

    def serve():
        conn, _ = echo.accept()
        conn.sendall(conn.recv(100).upper())
        conn.close()

    threading.Thread(target=serve, daemon=True).start()
    server = proxy(PolicySet.of(F.UNSIZED_MEDIA))
    client = socket.create_connection(server.server_address[:2], timeout=10)
    port = echo.getsockname()[1]
    client.sendall(f"CONNECT 127.0.0.1:{port} HTTP/1.1\r\nHost: 127.0.0.1:{port}\r\n\r\n".encode())
    head = b""
    while b"\r\n\r\n" not in head:
        head += client.recv(1)
    assert head.startswith(b"HTTP/1.1 200")
    client.sendall(b"tunnel me")
    assert client.recv(100) == b"TUNNEL ME"
    client.close()
    echo.close()


def test_reload_swaps_policy(upstream, proxy):
    server = proxy(PolicySet.of(F.UNSIZED_MEDIA))
    server.reload(ProxyConfig(PolicySet.of(F.BLOCKING_SCRIPT)))
    resp, _ = fetch(server, f"http://{upstream}/page")
    assert resp.getheader("Document-Policy") == "blocking-script=?0"


def test_concurrent_requests(upstream, proxy):
    server = proxy(PolicySet.of(F.UNSIZED_MEDIA))
    results = []

    def one():
        resp, body = fetch(server, f"http://{upstream}/page")
        results.append((resp.getheader("Document-Policy"), body == HTML))

    threads = [threading.Thread(target=one) for _ in range(16)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert results == [("unsized-media=?0", True)] * 16


def test_inject_unit():
    cfg = ProxyConfig(PolicySet.of(F.UNSIZED_MEDIA))
    assert inject([("X", "1")], "image/png", cfg) == [("X", "1")]
    assert inject([("X", "1")], "text/html", cfg) == [("X", "1"), ("Document-Policy", "unsized-media=?0")]
    assert inject([], "text/html", ProxyConfig(PolicySet())) == []
    assert len(inject([("Document-Policy", "!!garbage")], "text/html", cfg)) == 1
    assert not is_html(None) and is_html("TEXT/HTML ; charset=x")


def test_load_policy(tmp_path):
    f = tmp_path / "policy.txt"
    f.write_text("# comment\nunsized-media=?0\n\noversized-images=2.5\n")
    assert load_policy(str(f)) == parse_headers("unsized-media=?0, oversized-images=2.5")
    assert load_policy("blocking-script=?0") == PolicySet.of(F.BLOCKING_SCRIPT)


def test_load_policy_long_inline_value():
    value = ", ".join(f"x-vendor-feature-{i}=?0" for i in range(40)) + ", unsized-media=?0"
    assert F.UNSIZED_MEDIA in load_policy(value)
