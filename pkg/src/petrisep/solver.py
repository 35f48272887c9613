"""Driving an external SMT solver over SMT-LIB2 text.

The solver is always a child process reading SMT-LIB2 on stdin: natively
`z3 -in`, or the bundled Node shim around the z3-solver npm package when
no native binary is on PATH. Models are parsed from get-value output and
re-evaluated locally with exact integer arithmetic before being accepted,
so a misbehaving or misparsed solver can never smuggle in a bad vector.
"""

from __future__ import annotations

import os
import queue
import shutil
import subprocess
import threading
import time
from collections import deque
from dataclasses import dataclass
from importlib import resources
from typing import Optional, Sequence

from .formula import Formula, evaluate, to_smt


class SolverError(Exception):
    """Base for everything that can go wrong outside the theory itself."""


class SolverNotFoundError(SolverError):
    pass


class SolverProcessError(SolverError):
    pass


class SolverParseError(SolverError):
    pass


class SolverTimeoutError(SolverError):
    pass


class SolverUnknownError(SolverError):
    """The solver answered 'unknown'; never to be conflated with unsat."""


@dataclass
class SolverConfig:
    command: Optional[tuple[str, ...]] = None  # None: discover automatically
    timeout_ms: int = 15_000  # per solver query
    minimize: bool = True  # shrink the |k| sum of each model before use
    incremental: bool = True  # keep one child alive, use push/pop
    retries: int = 2  # respawn-and-replay attempts after a hung query

    def __post_init__(self):
        if self.timeout_ms <= 0:
            raise ValueError("timeout must be positive")
        if self.retries < 0:
            raise ValueError("retries must be non-negative")
        if self.command is not None:
            self.command = tuple(self.command)

    def resolved_command(self) -> tuple[str, ...]:
        return self.command if self.command else discover_solver()


def shim_path() -> str:
    return str(resources.files("petrisep").joinpath("_z3wasm.mjs"))


_npm_root_cache: list = []  # [Optional[str]] once computed


def _npm_global_root() -> Optional[str]:
    if _npm_root_cache:
        return _npm_root_cache[0]
    root: Optional[str] = None
    npm = shutil.which("npm")
    if npm:
        try:
            out = subprocess.run(
                [npm, "root", "-g"], capture_output=True, text=True, timeout=60
            )
            if out.returncode == 0 and out.stdout.strip():
                root = out.stdout.strip()
        except (OSError, subprocess.TimeoutExpired):
            root = None
    _npm_root_cache.append(root)
    return root


def discover_solver() -> tuple[str, ...]:
    """Prefer a native z3 binary; fall back to node + bundled WASM shim."""
    z3 = shutil.which("z3")
    if z3:
        return (z3, "-in")
    node = shutil.which("node")
    shim = shim_path()
    if node and os.path.exists(shim):
        return (node, shim)
    raise SolverNotFoundError(
        "no SMT solver available: put z3 on PATH, or install node and the "
        "z3-solver npm package (npm install -g z3-solver)"
    )


def solver_environment(command: Sequence[str]) -> dict[str, str]:
    env = dict(os.environ)
    if any(str(a).endswith("_z3wasm.mjs") for a in command):
        root = _npm_global_root()
        if root:
            prev = env.get("NODE_PATH")
            env["NODE_PATH"] = root if not prev else prev + os.pathsep + root
    return env


# -- s-expression parsing ---------------------------------------------


def tokenize_sexpr(text: str) -> list[str]:
    out = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "()":
            out.append(ch)
            i += 1
            continue
        if ch == '"':
            j = i + 1
            while j < n:
                if text[j] == '"':
                    if j + 1 < n and text[j + 1] == '"':
                        j += 2
                        continue
                    break
                j += 1
            out.append(text[i : j + 1])
            i = j + 1
            continue
        j = i
        while j < n and not text[j].isspace() and text[j] not in '()"':
            j += 1
        out.append(text[i:j])
        i = j
    return out


def parse_sexprs(text: str) -> list:
    toks = tokenize_sexpr(text)
    pos = 0

    def one():
        nonlocal pos
        tok = toks[pos]
        pos += 1
        if tok == "(":
            items = []
            while pos < len(toks) and toks[pos] != ")":
                items.append(one())
            if pos >= len(toks):
                raise SolverParseError(f"unbalanced s-expression in {text!r}")
            pos += 1
            return items
        if tok == ")":
            raise SolverParseError(f"unexpected ')' in {text!r}")
        return tok

    out = []
    while pos < len(toks):
        out.append(one())
    return out


def _sexpr_int(x) -> int:
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError:
            raise SolverParseError(f"expected an integer, got {x!r}")
    if isinstance(x, list) and len(x) == 2 and x[0] == "-":
        return -_sexpr_int(x[1])
    raise SolverParseError(f"expected an integer, got {x!r}")


def parse_model(text: str, names: Sequence[str]) -> dict[str, int]:
    """Extract variable values from get-value output like ((k0 5) (k1 (- 3)))."""
    values: dict[str, int] = {}
    for expr in parse_sexprs(text):
        if not isinstance(expr, list):
            continue
        for pair in expr:
            if isinstance(pair, list) and len(pair) == 2 and isinstance(pair[0], str):
                values[pair[0]] = _sexpr_int(pair[1])
    missing = [n for n in names if n not in values]
    if missing:
        raise SolverParseError(f"model output lacked values for {missing}: {text!r}")
    return {n: values[n] for n in names}


# -- session ------------------------------------------------------------

_EOF = object()


class SmtSession:
    """One solver dialogue; base assertions persist across check() calls.

    begin(n) opens a fresh problem over n integer unknowns (reusing the
    child process in incremental mode via (reset)). add() asserts at the
    base level; check(extra) decides base + extra, returning a model dict
    or None for unsat. The extra formulas live in a scoped frame, so they
    vanish after the call.
    """

    def __init__(self, cfg: SolverConfig):
        self.cfg = cfg
        self.command = cfg.resolved_command()
        self.queries = 0
        self._proc: Optional[subprocess.Popen] = None
        self._lines: Optional[queue.Queue] = None
        self._stderr_tail: deque = deque(maxlen=50)
        self._names: list[str] = []
        self._aux: list[str] = []
        self._base: list[Formula] = []
        self._sync = 0

    # -- lifecycle ----------------------------------------------------

    def begin(self, nvars: int, prefix: str = "k") -> None:
        if nvars < 1:
            raise ValueError("need at least one unknown")
        self._names = [f"{prefix}{i}" for i in range(nvars)]
        self._aux = [f"abs_{prefix}{i}" for i in range(nvars)]
        self._base = []
        if self.cfg.incremental:
            if self._proc is None:
                self._spawn()
            else:
                self._send("(reset)")
            self._send(self._preamble())

    @property
    def names(self) -> list[str]:
        return list(self._names)

    def close(self) -> None:
        proc = self._proc
        self._proc = None
        if proc is None:
            return
        try:
            proc.stdin.write("(exit)\n")
            proc.stdin.flush()
        except (OSError, ValueError):
            pass
        try:
            proc.wait(timeout=5)
        except subprocess.TimeoutExpired:
            proc.kill()
            proc.wait()

    def __enter__(self) -> "SmtSession":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # -- problem construction -------------------------------------------

    def add(self, f: Formula) -> None:
        self._base.append(f)
        if self.cfg.incremental:
            self._send(f"(assert {to_smt(f, self._names)})")

    def check(self, extra: Sequence[Formula] = ()) -> Optional[dict[str, int]]:
        """Decide base + extra. Returns a model dict or None for unsat.

        With minimization enabled the returned model has the smallest
        possible sum of |k(i)|, found by binary search over plain
        check-sat queries (no optimizing solver needed).
        """
        if not self._names:
            raise SolverError("call begin() before check()")
        extra = list(extra)
        self.queries += 1
        if self.cfg.incremental:
            # The WASM backend can wedge (alive, never answering); the
            # session state is fully replayable, so respawn and retry.
            attempt = 0
            while True:
                try:
                    model = self._check_incremental(extra)
                    break
                except (SolverTimeoutError, SolverUnknownError):
                    # Wedged or gave up; both are cured more often than
                    # not by a fresh child (accumulated lemmas gone).
                    attempt += 1
                    if attempt > self.cfg.retries:
                        raise
                    self._replay()
        else:
            model = self._check_oneshot(extra)
        if model is not None:
            assignment = [model[n] for n in self._names]
            for f in self._base + extra:
                if not evaluate(f, assignment):
                    raise SolverParseError(
                        f"model {assignment} fails local re-evaluation; "
                        "refusing to trust the solver output"
                    )
        return model

    # -- shared emission -------------------------------------------------

    def _preamble(self) -> str:
        # Solver-side timeout below the pipe deadline, so a hard query
        # comes back as 'unknown' instead of a killed process. The old
        # simplex core (arith.solver 2) is far more predictable than the
        # default on the integer problems this package emits.
        budget = max(500, self.cfg.timeout_ms - 2000)
        lines = [
            f"(set-option :timeout {budget})",
            "(set-option :smt.arith.solver 2)",
            "(set-logic ALL)",
        ]
        for name in self._names:
            lines.append(f"(declare-const {name} Int)")
        for name, aux in zip(self._names, self._aux):
            lines.append(f"(declare-const {aux} Int)")
            lines.append(f"(assert (>= {aux} {name}))")
            lines.append(f"(assert (>= {aux} (- {name})))")
        return "\n".join(lines)

    def _abs_sum(self, model: dict[str, int]) -> int:
        return sum(abs(model[n]) for n in self._names)

    def _cap_assert(self, cap: int) -> str:
        total = self._aux[0] if len(self._aux) == 1 else "(+ " + " ".join(self._aux) + ")"
        return f"(assert (<= {total} {cap}))"

    # -- incremental mode ---------------------------------------------

    def _spawn(self) -> None:
        env = solver_environment(self.command)
        try:
            self._proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE,
                text=True,
                env=env,
            )
        except OSError as exc:
            raise SolverProcessError(f"cannot start solver {self.command}: {exc}")
        self._lines = queue.Queue()
        self._stderr_tail = deque(maxlen=50)
        threading.Thread(
            target=self._drain, args=(self._proc.stdout, self._lines), daemon=True
        ).start()
        threading.Thread(
            target=self._drain_err, args=(self._proc.stderr,), daemon=True
        ).start()

    def _drain(self, stream, sink: queue.Queue) -> None:
        for line in stream:
            sink.put(line.rstrip("\n"))
        sink.put(_EOF)

    def _drain_err(self, stream) -> None:
        for line in stream:
            self._stderr_tail.append(line.rstrip("\n"))

    def _kill(self) -> None:
        proc = self._proc
        self._proc = None
        if proc is not None:
            proc.kill()
            proc.wait()

    def _replay(self) -> None:
        """Fresh child rebuilt to the current base-level state."""
        self._kill()
        self._spawn()
        self._send(self._preamble())
        for f in self._base:
            self._send(f"(assert {to_smt(f, self._names)})")

    def _send(self, text: str) -> None:
        if self._proc is None:
            raise SolverProcessError("solver process is not running")
        try:
            self._proc.stdin.write(text + "\n")
            self._proc.stdin.flush()
        except (OSError, ValueError) as exc:
            err = "\n".join(self._stderr_tail)
            self._kill()
            raise SolverProcessError(f"solver pipe closed: {exc}\n{err}")

    def _exchange(self, cmd: str) -> list[str]:
        """Send cmd, read output lines until the sync marker comes back."""
        self._sync += 1
        mark = f"::sync-{self._sync}::"
        self._send(f'{cmd}\n(echo "{mark}")')
        deadline = time.monotonic() + self.cfg.timeout_ms / 1000.0
        lines: list[str] = []
        while True:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                self._kill()
                raise SolverTimeoutError(f"no answer within {self.cfg.timeout_ms} ms")
            try:
                line = self._lines.get(timeout=remaining)
            except queue.Empty:
                self._kill()
                raise SolverTimeoutError(f"no answer within {self.cfg.timeout_ms} ms")
            if line is _EOF:
                err = "\n".join(self._stderr_tail)
                self._kill()
                raise SolverProcessError(f"solver exited unexpectedly\n{err}")
            line = line.strip()
            if line == mark:
                return lines
            if line:
                lines.append(line)

    def _plain_check(self) -> Optional[dict[str, int]]:
        lines = self._exchange("(check-sat)")
        status = next((l for l in lines if l in ("sat", "unsat", "unknown")), None)
        if status is None:
            raise SolverProcessError(f"no sat/unsat answer: {lines!r}")
        if status == "unsat":
            return None
        if status == "unknown":
            raise SolverUnknownError("solver answered 'unknown'")
        vlines = self._exchange(f"(get-value ({' '.join(self._names)}))")
        errors = [l for l in vlines if l.startswith("(error")]
        if errors:
            raise SolverProcessError(f"get-value failed: {errors!r}")
        return parse_model("\n".join(vlines), self._names)

    def _check_incremental(self, extra: list[Formula]) -> Optional[dict[str, int]]:
        self._send("(push 1)")
        try:
            for f in extra:
                self._send(f"(assert {to_smt(f, self._names)})")
            model = self._plain_check()
            if model is None or not self.cfg.minimize:
                return model
            # Shrink the |k| sum: probe caps in nested frames so failed
            # probes leave no trace.
            best = model
            lo, hi = 0, self._abs_sum(model) - 1
            while lo <= hi:
                mid = (lo + hi) // 2
                self._send("(push 1)")
                self._send(self._cap_assert(mid))
                try:
                    probe = self._plain_check()
                except SolverUnknownError:
                    # Minimization is best effort; keep the incumbent.
                    break
                finally:
                    if self._proc is not None:
                        self._send("(pop 1)")
                if probe is None:
                    lo = mid + 1
                else:
                    best = probe
                    hi = self._abs_sum(probe) - 1
            return best
        finally:
            if self._proc is not None:
                self._send("(pop 1)")

    # -- one-shot mode ---------------------------------------------------

    def _script(self, extra: list[Formula], cap: Optional[int]) -> str:
        parts = [self._preamble()]
        for f in self._base + extra:
            parts.append(f"(assert {to_smt(f, self._names)})")
        if cap is not None:
            parts.append(self._cap_assert(cap))
        parts.append("(check-sat)")
        parts.append(f"(get-value ({' '.join(self._names)}))")
        return "\n".join(parts) + "\n"

    def _oneshot_query(
        self, extra: list[Formula], cap: Optional[int]
    ) -> Optional[dict[str, int]]:
        env = solver_environment(self.command)
        attempt = 0
        while True:
            try:
                run = subprocess.run(
                    self.command,
                    input=self._script(extra, cap),
                    capture_output=True,
                    text=True,
                    timeout=self.cfg.timeout_ms / 1000.0,
                    env=env,
                )
                break
            except OSError as exc:
                raise SolverProcessError(f"cannot start solver {self.command}: {exc}")
            except subprocess.TimeoutExpired:
                attempt += 1
                if attempt > self.cfg.retries:
                    raise SolverTimeoutError(
                        f"no answer within {self.cfg.timeout_ms} ms"
                    )
        lines = [l.strip() for l in run.stdout.splitlines() if l.strip()]
        status = next((l for l in lines if l in ("sat", "unsat", "unknown")), None)
        if status is None:
            raise SolverProcessError(
                f"no sat/unsat answer from solver (exit {run.returncode}): "
                f"{run.stdout!r} {run.stderr!r}"
            )
        if status == "unsat":
            return None
        if status == "unknown":
            raise SolverUnknownError("solver answered 'unknown'")
        idx = lines.index(status)
        tail = lines[idx + 1 :]
        errors = [l for l in tail if l.startswith("(error")]
        if errors:
            raise SolverProcessError(f"get-value failed: {errors!r}")
        return parse_model("\n".join(tail), self._names)

    def _check_oneshot(self, extra: list[Formula]) -> Optional[dict[str, int]]:
        model = self._oneshot_query(extra, None)
        if model is None or not self.cfg.minimize:
            return model
        best = model
        lo, hi = 0, self._abs_sum(model) - 1
        while lo <= hi:
            mid = (lo + hi) // 2
            try:
                probe = self._oneshot_query(extra, mid)
            except SolverUnknownError:
                break
            if probe is None:
                lo = mid + 1
            else:
                best = probe
                hi = self._abs_sum(probe) - 1
        return best
