import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from docpolicy.extract import extract_snapshot
from docpolicy.fetch import FetchConfig, FetchLimiter, HostGate, Unreachable, fetch_page, to_url
from docpolicy.model import EncodingClass, FontDisplay
from docpolicy.synth import make_png


@pytest.fixture
def site(tmp_path):
    (tmp_path / "img").mkdir()
    (tmp_path / "css").mkdir()
    (tmp_path / "fonts").mkdir()
    (tmp_path / "img" / "a.png").write_bytes(make_png(400, 300))
    (tmp_path / "css" / "s.css").write_text("@font-face{font-family:X;src:url(../fonts/x.woff2);font-display:block}")
    (tmp_path / "fonts" / "x.woff2").write_bytes(b"wOF2" + bytes(996))
    (tmp_path / "app.js").write_text("var a = 1;\n")
    (tmp_path / "index.html").write_text(
        '<link rel=stylesheet href="css/s.css"><script src="app.js"></script>'
        '<img src="img/a.png"><img src="img/missing.png" width=10 height=10>'
    )
    return tmp_path


def test_local_file_matches_http(site, serve_dir):
    url_f, html_f, res_f = fetch_page(str(site))
    url_h, html_h, res_h = fetch_page(serve_dir(site))
    snap_f = extract_snapshot(html_f, url_f, res_f)
    snap_h = extract_snapshot(html_h, url_h, res_h)
    assert html_f == html_h
    assert replace(snap_f, url="x") == replace(snap_h, url="x")


def test_resources_are_read(site):
    snap = extract_snapshot(*_fetched(site))
    a, missing = snap.media
    assert (a.natural_width_px, a.natural_height_px) == (400, 300)
    assert a.encoding_class is EncodingClass.LOSSLESS
    assert a.encoded_bytes == len((site / "img" / "a.png").read_bytes())
    assert missing.natural_width_px is None and missing.encoded_bytes is None
    (font,) = snap.fonts
    assert font.font_display is FontDisplay.BLOCK and font.encoded_bytes == 1000
    (script,) = snap.scripts
    assert script.encoded_bytes == len("var a = 1;\n")


def test_missing_image_over_http(site, serve_dir):
    url, html, res = fetch_page(serve_dir(site))
    snap = extract_snapshot(html, url, res)
    assert snap.media[1].encoded_bytes is None and snap.media[1].natural_width_px is None


def _fetched(site):
    url, html, res = fetch_page(str(site))
    return html, url, res


def test_timeout_is_unreachable(silent_port):
    with pytest.raises(Unreachable):
        fetch_page(f"http://127.0.0.1:{silent_port}/", FetchConfig(timeout_s=0.3))


def test_missing_page_is_unreachable(tmp_path):
    with pytest.raises(Unreachable):
        fetch_page(str(tmp_path / "nope.html"))


def test_to_url(tmp_path):
    assert to_url("http://a.test/") == "http://a.test/"
    assert to_url(str(tmp_path)).endswith("/index.html")
    assert to_url(str(tmp_path)).startswith("file://")


def test_env_overrides(monkeypatch):
    monkeypatch.setenv("DOCPOLICY_MAX_IN_FLIGHT", "2")
    monkeypatch.setenv("DOCPOLICY_POLITENESS_DELAY", "0.25")
    cfg = FetchConfig.from_env()
    assert cfg.max_in_flight == 2 and cfg.politeness_delay_s == 0.25
    assert "Mobile" in cfg.user_agent


def test_host_gate_serializes_per_host():
    import threading
    import time

    gate = HostGate(delay=0.05)
    active = []
    peak = []
    lock = threading.Lock()

    def work():
        with lock:
            active.append(1)
            peak.append(len(active))
        time.sleep(0.01)
        with lock:
            active.pop()

    threads = [threading.Thread(target=gate.run, args=("http://h.test/x", work)) for _ in range(4)]
    start = time.monotonic()
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert max(peak) == 1
    assert time.monotonic() - start >= 0.15


class _Counting:
    def __init__(self):
        self.lock = threading.Lock()
        self.now = self.peak = self.total = 0

    def handler(self):
        counter = self

        class Handler(BaseHTTPRequestHandler):
            def do_GET(self):
                with counter.lock:
                    counter.now += 1
                    counter.total += 1
                    counter.peak = max(counter.peak, counter.now)
                time.sleep(0.03)
                with counter.lock:
                    counter.now -= 1
                if self.path == "/":
                    body = "".join(f'<img src="/{i}.png" width=10 height=10>' for i in range(4)).encode()
                    ctype = "text/html"
                else:
                    body, ctype = make_png(10, 10), "image/png"
                self.send_response(200)
                self.send_header("Content-Type", ctype)
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

            def log_message(self, *args):
                pass

        return Handler


def test_shared_limiter_caps_requests_across_pages():
    counter = _Counting()
    servers = [ThreadingHTTPServer(("127.0.0.1", 0), counter.handler()) for _ in range(5)]
    for srv in servers:
        threading.Thread(target=srv.serve_forever, daemon=True).start()
    try:
        urls = [f"http://127.0.0.1:{srv.server_address[1]}/" for srv in servers]
        cfg = FetchConfig(max_in_flight=2)
        limiter = FetchLimiter.from_config(cfg)
        with ThreadPoolExecutor(5) as pool:
            pages = list(pool.map(lambda u: fetch_page(u, cfg, limiter), urls))
    finally:
        for srv in servers:
            srv.shutdown()
            srv.server_close()
    assert all(len(res) == 4 for _, _, res in pages)
    assert counter.total == 25
    assert counter.peak <= 2
