"""Result persistence: run manifests and the delimited support-value format.

Every output file embeds its manifest as '#'-prefixed header lines followed
by a CSV table "u_1,...,u_m,h,stderr".  Floats are written with repr
precision so a read back is bit-exact.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .bodies import SampledSupport
from .errors import ParseError


@dataclass(frozen=True)
class RunManifest:
    command: str
    body_hash: str = ""
    split: str = ""
    rule: str = ""
    seed: int | None = None
    version: str = field(default_factory=lambda: __version__)
    wall_time_s: float | None = None

    def to_lines(self) -> list[str]:
        pairs = [
            ("command", self.command),
            ("body_hash", self.body_hash),
            ("split", self.split),
            ("rule", self.rule),
            ("seed", "" if self.seed is None else str(self.seed)),
            ("version", self.version),
            ("wall_time_s", "" if self.wall_time_s is None else f"{self.wall_time_s:.3f}"),
        ]
        return [f"# {k}: {v}" for k, v in pairs]

    @staticmethod
    def parse_lines(lines) -> dict:
        out = {}
        for line in lines:
            body = line.lstrip("#").strip()
            if ":" in body:
                k, v = body.split(":", 1)
                out[k.strip()] = v.strip()
        return out


def hash_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()[:16]


def hash_body_dict(spec: dict) -> str:
    return hash_bytes(json.dumps(spec, sort_keys=True).encode())


class Stopwatch:
    def __enter__(self):
        self._t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self._t0


def write_support_csv(path, sampled: SampledSupport, manifest: RunManifest) -> None:
    m = sampled.directions.shape[1] if len(sampled) else sampled.dim
    header = ",".join(f"u_{i + 1}" for i in range(m)) + ",h,stderr"
    lines = manifest.to_lines() + [header]
    err = sampled.stderr
    for i in range(len(sampled)):
        cells = [repr(float(c)) for c in sampled.directions[i]]
        cells.append(repr(float(sampled.values[i])))
        cells.append("" if err is None else repr(float(err[i])))
        lines.append(",".join(cells))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_support_csv(path) -> tuple[SampledSupport, dict]:
    with open(path, encoding="utf-8") as fh:
        raw = [line.rstrip("\n") for line in fh if line.strip()]
    manifest_lines = [l for l in raw if l.startswith("#")]
    table = [l for l in raw if not l.startswith("#")]
    if not table:
        raise ParseError(f"{path}: no header row found")
    header = table[0].split(",")
    if len(header) < 3 or header[-2:] != ["h", "stderr"]:
        raise ParseError(f"{path}: unexpected header {table[0]!r}")
    m = len(header) - 2
    dirs, vals, errs = [], [], []
    has_err = False
    for line in table[1:]:
        cells = line.split(",")
        if len(cells) != m + 2:
            raise ParseError(f"{path}: row has {len(cells)} cells, expected {m + 2}")
        dirs.append([float(c) for c in cells[:m]])
        vals.append(float(cells[m]))
        if cells[m + 1] != "":
            has_err = True
            errs.append(float(cells[m + 1]))
        else:
            errs.append(0.0)
    meta = RunManifest.parse_lines(manifest_lines)
    sampled = SampledSupport(
        m,
        np.array(dirs).reshape(-1, m),
        np.array(vals),
        np.array(errs) if has_err else None,
        dict(meta),
    )
    return sampled, meta
