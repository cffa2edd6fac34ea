"""Client for an external detector worker process.

The worker speaks newline-delimited JSON (UTF-8, one object per line) over
its stdin/stdout. The worker opens with a hello message, the client replies,
then requests and responses alternate one at a time:

    worker  -> {"type":"hello","version":1,"name":"<worker-name>"}
    client  -> {"type":"hello","version":1}
    client  -> {"type":"detect","id":N,"width":W,"height":H,"channels":1|3,
                "format":"png-base64","data":"<base64 PNG>"}
    worker  -> {"type":"detections","id":N,"detections":[{"x":..,"y":..,"w":..,"h":..,"score":..}]}
            |  {"type":"error","id":N,"message":"..."}
    client  -> {"type":"shutdown"}        (worker exits 0)

Transport failures raise distinct exceptions; the tracker maps any of them
to "no detection this frame".
"""

from __future__ import annotations

import base64
import json
import queue
import shlex
import subprocess
import threading
from typing import Optional

import numpy as np

from ..geometry import BBox, Detection
from ..pngio import encode_png
from .base import DetectContext

PROTOCOL_VERSION = 1
DEFAULT_TIMEOUT = 5.0


class ExternError(Exception):
    """Base class for external-worker transport failures."""


class WorkerCrashError(ExternError):
    pass


class WorkerTimeoutError(ExternError):
    pass


class MalformedResponseError(ExternError):
    pass


class ResponseIdMismatchError(ExternError):
    pass


class WorkerReportedError(ExternError):
    """The worker answered with an error message instead of detections."""


_EOF = object()


class ExternDetector:
    """Spawn a worker process and forward detect requests to it.

    One request in flight at a time; not safe for concurrent use from
    multiple threads. Use close() (or a with-block) to shut the worker down.
    """

    def __init__(self, command: str | list[str], timeout: float = DEFAULT_TIMEOUT):
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        self._proc = subprocess.Popen(
            argv,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            encoding="utf-8",
            bufsize=1,
        )
        self.timeout = timeout
        self._next_id = 0
        self._lines: queue.Queue = queue.Queue()
        self._reader = threading.Thread(target=self._pump, daemon=True)
        self._reader.start()
        try:
            self.worker_name = self._handshake()
        except ExternError:
            self._proc.kill()
            self._proc.wait()
            raise

    def _pump(self):
        try:
            for line in self._proc.stdout:
                self._lines.put(line)
        finally:
            self._lines.put(_EOF)

    def _read_message(self) -> dict:
        try:
            line = self._lines.get(timeout=self.timeout)
        except queue.Empty:
            raise WorkerTimeoutError(f"no response within {self.timeout}s") from None
        if line is _EOF:
            code = self._proc.poll()
            raise WorkerCrashError(f"worker closed its stdout (exit code {code})")
        try:
            msg = json.loads(line)
        except json.JSONDecodeError as e:
            raise MalformedResponseError(f"response is not valid JSON: {line!r}") from e
        if not isinstance(msg, dict) or "type" not in msg:
            raise MalformedResponseError(f"response is not a protocol object: {line!r}")
        return msg

    def _send(self, obj: dict) -> None:
        try:
            self._proc.stdin.write(json.dumps(obj) + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as e:
            raise WorkerCrashError(f"worker stdin closed: {e}") from e

    def _handshake(self) -> str:
        msg = self._read_message()
        if msg.get("type") != "hello" or msg.get("version") != PROTOCOL_VERSION:
            raise MalformedResponseError(f"bad handshake: {msg!r}")
        self._send({"type": "hello", "version": PROTOCOL_VERSION})
        return str(msg.get("name", ""))

    def detect(self, patch: np.ndarray, context: DetectContext | None = None) -> list[Detection]:
        h, w = patch.shape[0], patch.shape[1]
        channels = 1 if patch.ndim == 2 else patch.shape[2]
        req_id = self._next_id
        self._next_id += 1
        self._send({
            "type": "detect",
            "id": req_id,
            "width": w,
            "height": h,
            "channels": channels,
            "format": "png-base64",
            "data": base64.b64encode(encode_png(patch)).decode("ascii"),
        })
        msg = self._read_message()
        if msg.get("id") != req_id:
            raise ResponseIdMismatchError(f"expected id {req_id}, got {msg.get('id')!r}")
        if msg.get("type") == "error":
            raise WorkerReportedError(str(msg.get("message", "")))
        if msg.get("type") != "detections" or not isinstance(msg.get("detections"), list):
            raise MalformedResponseError(f"unexpected response: {msg!r}")
        dets = []
        for item in msg["detections"]:
            try:
                dets.append(Detection(
                    BBox(float(item["x"]), float(item["y"]), float(item["w"]), float(item["h"])),
                    float(item["score"]),
                ))
            except (KeyError, TypeError, ValueError) as e:
                raise MalformedResponseError(f"bad detection entry {item!r}: {e}") from e
        dets.sort(key=lambda d: -d.score)
        return dets

    def close(self) -> Optional[int]:
        """Ask the worker to shut down; kill it if it does not comply."""
        if self._proc.poll() is None:
            try:
                self._send({"type": "shutdown"})
            except WorkerCrashError:
                pass
            try:
                self._proc.wait(timeout=self.timeout)
            except subprocess.TimeoutExpired:
                self._proc.kill()
                self._proc.wait()
        return self._proc.returncode

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False
