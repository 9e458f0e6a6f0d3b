import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from causaforge.providers import HttpProvider, MockProvider, prompt_fingerprint


class _ChatHandler(BaseHTTPRequestHandler):
    """Chat-completions endpoint double; records request bodies and headers."""

    seen: list[dict] = []

    def do_POST(self):
        length = int(self.headers["Content-Length"])
        body = json.loads(self.rfile.read(length))
        _ChatHandler.seen.append(
            {"body": body, "authorization": self.headers.get("Authorization")}
        )
        reply = {
            "choices": [
                {"message": {"content": f"echo: {body['messages'][0]['content'][:40]}"}}
            ]
        }
        payload = json.dumps(reply).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def log_message(self, *args):
        pass


@pytest.fixture()
def chat_server():
    _ChatHandler.seen = []
    server = HTTPServer(("127.0.0.1", 0), _ChatHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}/v1/chat/completions"
    server.shutdown()


class TestHttpProvider:
    def test_wire_protocol_shape(self, chat_server, monkeypatch):
        monkeypatch.setenv("CAUSAFORGE_API_KEY", "sk-test-123")
        provider = HttpProvider(chat_server)
        text = provider.complete("hello provider", model_tag="gpt-4")
        assert text == "echo: hello provider"
        request = _ChatHandler.seen[0]
        assert request["body"] == {
            "model": "gpt-4",
            "messages": [{"role": "user", "content": "hello provider"}],
        }
        assert request["authorization"] == "Bearer sk-test-123"

    def test_custom_key_env(self, chat_server, monkeypatch):
        monkeypatch.delenv("CAUSAFORGE_API_KEY", raising=False)
        monkeypatch.setenv("OTHER_KEY", "sk-other")
        provider = HttpProvider(chat_server, api_key_env="OTHER_KEY")
        provider.complete("x")
        assert _ChatHandler.seen[-1]["authorization"] == "Bearer sk-other"

    def test_no_key_no_header(self, chat_server, monkeypatch):
        monkeypatch.delenv("CAUSAFORGE_API_KEY", raising=False)
        HttpProvider(chat_server).complete("x")
        assert _ChatHandler.seen[-1]["authorization"] is None


class TestFingerprints:
    def test_fingerprint_is_sha256_of_utf8(self):
        import hashlib

        assert prompt_fingerprint("abc") == hashlib.sha256(b"abc").hexdigest()

    def test_mock_without_fixture_or_synthesis_fails_loudly(self):
        provider = MockProvider(synthesize=False)
        with pytest.raises(KeyError):
            provider.complete("anything")
