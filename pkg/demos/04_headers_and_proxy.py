"""
Policy headers and the injecting proxy
======================================

Serialize a policy set to a ``Document-Policy`` header, parse it back,
and put the proxy in front of a tiny local site.
"""
import http.client
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from docpolicy import FeatureKind, PolicySet, parse_headers, serialize_headers
from docpolicy.proxy import start_proxy

ps = PolicySet.of(FeatureKind.UNSIZED_MEDIA, (FeatureKind.OVERSIZED_IMAGES, 2))
[(name, value)] = serialize_headers(ps)
print(f"{name}: {value}")
assert parse_headers(value) == ps

# Unknown items survive a round trip untouched
print(parse_headers("unsized-media=?0, vendor-thing=?0").unknown)


class Site(BaseHTTPRequestHandler):
    def do_GET(self):
        body = b"<!doctype html><p>hi</p>" if self.path == "/" else b"\x89PNG..."
        self.send_response(200)
        self.send_header("Content-Type", "text/html" if self.path == "/" else "image/png")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


site = ThreadingHTTPServer(("127.0.0.1", 0), Site)
threading.Thread(target=site.serve_forever, daemon=True).start()
proxy, _ = start_proxy("127.0.0.1:0", ps)
origin = f"http://127.0.0.1:{site.server_address[1]}"

for path in ("/", "/logo.png"):
    conn = http.client.HTTPConnection(*proxy.server_address[:2])
    conn.request("GET", origin + path)
    resp = conn.getresponse()
    resp.read()
    print(f"{path:10s} {resp.getheader('Content-Type'):10s} Document-Policy: {resp.getheader('Document-Policy')}")
    conn.close()

proxy.shutdown()
site.shutdown()
