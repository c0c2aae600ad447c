"""Language server: publishes diagnostics and offers the reorder action.

Speaks JSON-RPC over a binary stream pair (stdio in production, pipes in
tests) with Content-Length framing and full-document synchronization.
Each change schedules a debounced analysis; a newer version supersedes an
in-flight one, and published diagnostics always correspond to a version
no older than anything published before.
"""
from __future__ import annotations

import json
import logging
import os
import threading
import urllib.parse
import urllib.request
from dataclasses import dataclass
from typing import Optional

from .config import Config, generate_default_config, load_config
from .pipeline import AnalysisResult, analyze_source
from .reorder import RefusedOnSyntaxError, reorder_program
from .syntax import W_ORDER

logger = logging.getLogger(__name__)

LSP_ERROR = 1
LSP_WARNING = 2

REORDER_COMMAND = "ezasp.reorder"
INIT_CONFIG_COMMAND = "ezasp.initConfig"
REORDER_ACTION_TITLE = "Reorder program (Easy ASP)"


def path_for_uri(uri: str) -> Optional[str]:
    parsed = urllib.parse.urlparse(uri)
    if parsed.scheme != "file":
        return None
    return urllib.request.url2pathname(parsed.path)


def uri_for_path(path: str) -> str:
    return "file://" + urllib.request.pathname2url(os.path.abspath(path))


def diagnostic_to_lsp(diagnostic) -> dict:
    return {
        "range": {
            "start": {
                "line": diagnostic.span.start.line,
                "character": diagnostic.span.start.column,
            },
            "end": {"line": diagnostic.span.end.line, "character": diagnostic.span.end.column},
        },
        "severity": LSP_ERROR if diagnostic.severity == "error" else LSP_WARNING,
        "code": diagnostic.code,
        "source": "ezasp",
        "message": diagnostic.message,
    }


@dataclass
class DocumentState:
    uri: str
    version: int
    text: str
    analysis: Optional[AnalysisResult] = None
    analysis_version: int = -1


class LanguageServer:
    def __init__(self, reader, writer, debounce_ms: int = 200):
        self.reader = reader
        self.writer = writer
        self.debounce_ms = debounce_ms
        self.documents: dict = {}
        self._write_lock = threading.Lock()
        self._state_lock = threading.RLock()
        self._timers: dict = {}
        self._last_published_version: dict = {}
        self._request_counter = 0
        self._exited = False

    # -- framing

    def _read_message(self) -> Optional[dict]:
        content_length = None
        while True:
            line = self.reader.readline()
            if not line:
                return None
            line = line.strip()
            if not line:
                break
            if line.lower().startswith(b"content-length:"):
                content_length = int(line.split(b":", 1)[1].strip())
        if content_length is None:
            return None
        body = self.reader.read(content_length)
        if len(body) < content_length:
            return None
        return json.loads(body.decode("utf-8"))

    def _send(self, payload: dict) -> None:
        body = json.dumps(payload).encode("utf-8")
        frame = b"Content-Length: %d\r\n\r\n" % len(body) + body
        with self._write_lock:
            self.writer.write(frame)
            self.writer.flush()

    def _respond(self, request_id, result) -> None:
        self._send({"jsonrpc": "2.0", "id": request_id, "result": result})

    def _respond_error(self, request_id, code: int, message: str) -> None:
        self._send({"jsonrpc": "2.0", "id": request_id, "error": {"code": code, "message": message}})

    def _notify(self, method: str, params) -> None:
        self._send({"jsonrpc": "2.0", "method": method, "params": params})

    def _request(self, method: str, params) -> None:
        self._request_counter += 1
        self._send(
            {"jsonrpc": "2.0", "id": f"ezasp-{self._request_counter}", "method": method, "params": params}
        )

    # -- main loop

    def serve_forever(self) -> None:
        while not self._exited:
            message = self._read_message()
            if message is None:
                break
            try:
                self._dispatch(message)
            except Exception:  # never crash the session
                logger.exception("failed to handle message")
                if "id" in message and "method" in message:
                    self._respond_error(message["id"], -32603, "internal error")
        self.wait_idle()

    def wait_idle(self) -> None:
        """Block until every scheduled analysis has run (used on shutdown
        and by tests)."""
        while True:
            with self._state_lock:
                timers = list(self._timers.values())
                self._timers.clear()
            if not timers:
                return
            for timer in timers:
                if not timer.cancel_requested:
                    timer.timer.join()

    def _dispatch(self, message: dict) -> None:
        method = message.get("method")
        if method is None:
            return  # response to one of our own requests
        params = message.get("params") or {}
        request_id = message.get("id")
        if method == "initialize":
            self._respond(request_id, self._initialize_result())
        elif method == "shutdown":
            self._respond(request_id, None)
        elif method == "exit":
            self._exited = True
        elif method == "textDocument/didOpen":
            doc = params["textDocument"]
            self._on_open_or_change(doc["uri"], doc.get("version", 0), doc["text"])
        elif method == "textDocument/didChange":
            doc = params["textDocument"]
            changes = params.get("contentChanges") or []
            if changes:
                self._on_open_or_change(doc["uri"], doc.get("version", 0), changes[-1]["text"])
        elif method == "textDocument/didClose":
            uri = params["textDocument"]["uri"]
            with self._state_lock:
                self.documents.pop(uri, None)
                self._last_published_version.pop(uri, None)
            self._notify(
                "textDocument/publishDiagnostics", {"uri": uri, "diagnostics": []}
            )
        elif method == "textDocument/codeAction":
            self._respond(request_id, self.code_action_reorder(params["textDocument"]["uri"]))
        elif method == "workspace/executeCommand":
            self._execute_command(request_id, params)
        elif request_id is not None:
            self._respond_error(request_id, -32601, f"method not found: {method}")

    def _initialize_result(self) -> dict:
        return {
            "capabilities": {
                "textDocumentSync": {"openClose": True, "change": 1},  # full sync
                "codeActionProvider": True,
                "executeCommandProvider": {
                    "commands": [REORDER_COMMAND, INIT_CONFIG_COMMAND]
                },
            },
            "serverInfo": {"name": "ezasp", "version": "0.1.0"},
        }

    # -- analysis

    def _config_for_uri(self, uri: str) -> Config:
        path = path_for_uri(uri)
        if path is None:
            return Config()
        return load_config(os.path.dirname(os.path.abspath(path)))

    def _on_open_or_change(self, uri: str, version: int, text: str) -> None:
        with self._state_lock:
            doc = self.documents.get(uri)
            if doc is None:
                doc = DocumentState(uri, version, text)
                self.documents[uri] = doc
            else:
                doc.version = max(version, doc.version)
                doc.text = text
            scheduled_version = doc.version
            pending = self._timers.pop(uri, None)
        if pending is not None:
            pending.cancel_requested = True
            pending.timer.cancel()
        if self.debounce_ms <= 0:
            self._analyze_now(uri, scheduled_version)
            return
        handle = _TimerHandle()
        handle.timer = threading.Timer(
            self.debounce_ms / 1000.0, self._analyze_now, args=(uri, scheduled_version)
        )
        handle.timer.daemon = True
        with self._state_lock:
            self._timers[uri] = handle
            handle.timer.start()

    def _analyze_now(self, uri: str, version: int) -> None:
        with self._state_lock:
            doc = self.documents.get(uri)
            if doc is None or doc.version != version:
                return  # superseded or closed
            text = doc.text
        path = path_for_uri(uri) or uri
        try:
            config = self._config_for_uri(uri)
            result = analyze_source(text, path, config)
        except Exception:
            logger.exception("analysis failed for %s", uri)
            self._publish(uri, version, [])
            return
        with self._state_lock:
            doc = self.documents.get(uri)
            if doc is None or doc.version != version:
                return
            doc.analysis = result
            doc.analysis_version = version
        self._publish(uri, version, [diagnostic_to_lsp(d) for d in result.diagnostics])

    def _publish(self, uri: str, version: int, diagnostics: list) -> None:
        with self._state_lock:
            last = self._last_published_version.get(uri, -1)
            if version < last:
                return  # never publish stale results after newer ones
            self._last_published_version[uri] = version
        self._notify(
            "textDocument/publishDiagnostics",
            {"uri": uri, "version": version, "diagnostics": diagnostics},
        )

    def _current_analysis(self, uri: str) -> Optional[AnalysisResult]:
        with self._state_lock:
            doc = self.documents.get(uri)
            if doc is None:
                return None
            if doc.analysis is not None and doc.analysis_version == doc.version:
                return doc.analysis
            version, text = doc.version, doc.text
        path = path_for_uri(uri) or uri
        result = analyze_source(text, path, self._config_for_uri(uri))
        with self._state_lock:
            doc = self.documents.get(uri)
            if doc is not None and doc.version == version:
                doc.analysis = result
                doc.analysis_version = version
        return result

    # -- reorder code action

    def code_action_reorder(self, uri: str) -> list:
        """Offer the whole-document reorder edit.

        Offered exactly when the document has at least one ordering
        warning, no syntax errors, and the auto-reorder toggle is on.
        """
        analysis = self._current_analysis(uri)
        if analysis is None:
            return []
        config = self._config_for_uri(uri)
        if not config.auto_reorder_enabled:
            return []
        if analysis.program.syntax_errors:
            return []
        if not any(d.code == W_ORDER for d in analysis.diagnostics):
            return []
        edit = self._reorder_edit(uri, analysis)
        if edit is None:
            return []
        return [
            {
                "title": REORDER_ACTION_TITLE,
                "kind": "source",
                "diagnostics": [
                    diagnostic_to_lsp(d) for d in analysis.diagnostics if d.code == W_ORDER
                ],
                "edit": edit,
            }
        ]

    def _reorder_edit(self, uri: str, analysis: AnalysisResult) -> Optional[dict]:
        try:
            new_source, _ = reorder_program(analysis.program)
        except RefusedOnSyntaxError:
            return None
        text = analysis.program.source
        lines = text.split("\n")
        end = {"line": len(lines) - 1, "character": len(lines[-1])}
        return {
            "changes": {
                uri: [
                    {
                        "range": {"start": {"line": 0, "character": 0}, "end": end},
                        "newText": new_source,
                    }
                ]
            }
        }

    # -- commands

    def _execute_command(self, request_id, params: dict) -> None:
        command = params.get("command")
        arguments = params.get("arguments") or []
        if command == REORDER_COMMAND:
            uri = arguments[0] if arguments else None
            analysis = self._current_analysis(uri) if uri else None
            edit = self._reorder_edit(uri, analysis) if analysis is not None else None
            if edit is None:
                self._notify(
                    "window/showMessage",
                    {"type": 1, "message": "cannot reorder: fix syntax errors first"},
                )
                self._respond(request_id, None)
                return
            self._request("workspace/applyEdit", {"edit": edit})
            self._respond(request_id, None)
        elif command == INIT_CONFIG_COMMAND:
            target = arguments[0] if arguments else "."
            directory = path_for_uri(target) or target
            if os.path.isfile(directory):
                directory = os.path.dirname(directory)
            try:
                path = generate_default_config(directory)
            except Exception as err:
                self._notify("window/showMessage", {"type": 1, "message": str(err)})
                self._respond(request_id, None)
                return
            self._respond(request_id, path)
        elif request_id is not None:
            self._respond_error(request_id, -32602, f"unknown command: {command}")


@dataclass
class _TimerHandle:
    timer: Optional[threading.Timer] = None
    cancel_requested: bool = False
