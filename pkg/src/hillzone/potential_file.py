"""Potential definition files (YAML).

Schema::

    representation: fourier | piecewise | sampled
    fourier:                  # representation: fourier; rows [n, re, im]
      - [1, 1.0, 0.0]
      - [-1, 1.0, 0.0]
    pieces:                   # representation: piecewise; must tile [0, 1)
      - interval: [0.0, 1.0]
        poly_re: [0.0]        # coefficients of increasing power of global x
        poly_im: [0.5, -1.0]
    samples: grid.csv         # representation: sampled; columns x,re,im,
                              # x = j/N with N a power of two; path is
                              # relative to this file
    smoothness_s: 0           # optional, default 0
    jumps:                    # optional
      - {location: 0.0, component: im, order: 0, size: 1.0}
    normalize: true           # optional, subtract the mean (default true)

Every error names the file, the line and the offending key.
"""

from __future__ import annotations

import csv
import math
import os

import numpy as np
import yaml

from .errors import ConfigError, HillzoneError
from .potential import (Jump, PeriodicPotential, fourier_potential, normalize,
                        piecewise_potential, sampled_potential)

KEYS = {"representation", "fourier", "pieces", "samples", "smoothness_s", "jumps", "normalize"}


class _Where:
    """Maps key paths such as ``pieces[1].interval`` to source lines."""

    def __init__(self, path: str, root):
        self.path = path
        self.lines = {}
        if root is not None:
            self._walk(root, "")

    def _walk(self, node, prefix):
        self.lines[prefix] = node.start_mark.line + 1
        if isinstance(node, yaml.MappingNode):
            for k, v in node.value:
                key = f"{prefix}.{k.value}" if prefix else str(k.value)
                self.lines[key] = k.start_mark.line + 1
                self._walk(v, key)
                self.lines[key] = k.start_mark.line + 1
        elif isinstance(node, yaml.SequenceNode):
            for i, v in enumerate(node.value):
                self._walk(v, f"{prefix}[{i}]")

    def __call__(self, key: str) -> str:
        probe = key
        while probe and probe not in self.lines:
            probe = probe.rsplit(".", 1)[0] if "." in probe else probe.rsplit("[", 1)[0]
        line = self.lines.get(probe, 1)
        return f"{self.path}:{line}: key '{key}'"


def _num(value, where, key, kind=float):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {value!r}", where(key))
    if kind is int:
        if float(value) != int(value):
            raise ConfigError(f"expected an integer, got {value!r}", where(key))
        return int(value)
    if not math.isfinite(float(value)):
        raise ConfigError(f"non-finite value {value!r}", where(key))
    return float(value)


def _list(value, where, key):
    if not isinstance(value, list):
        raise ConfigError(f"expected a list, got {type(value).__name__}", where(key))
    return value


def _fourier(data, where):
    rows = _list(data.get("fourier"), where, "fourier")
    coeffs = {}
    for i, row in enumerate(rows):
        key = f"fourier[{i}]"
        if not isinstance(row, list) or len(row) != 3:
            raise ConfigError("each row must be [n, re, im]", where(key))
        n = _num(row[0], where, key, int)
        if n in coeffs:
            raise ConfigError(f"duplicate index {n}", where(key))
        coeffs[n] = complex(_num(row[1], where, key), _num(row[2], where, key))
    return coeffs


def _pieces(data, where):
    rows = _list(data.get("pieces"), where, "pieces")
    if not rows:
        raise ConfigError("at least one piece is required", where("pieces"))
    spans, polys = [], []
    for i, row in enumerate(rows):
        key = f"pieces[{i}]"
        if not isinstance(row, dict):
            raise ConfigError("each piece must be a mapping", where(key))
        extra = set(row) - {"interval", "poly_re", "poly_im"}
        if extra:
            raise ConfigError(f"unknown keys {sorted(extra)}", where(key))
        iv = _list(row.get("interval"), where, f"{key}.interval")
        if len(iv) != 2:
            raise ConfigError("interval must be [start, end]", where(f"{key}.interval"))
        a, b = (_num(v, where, f"{key}.interval") for v in iv)
        re = [_num(v, where, f"{key}.poly_re") for v in _list(row.get("poly_re", [0.0]), where,
                                                               f"{key}.poly_re")]
        im = [_num(v, where, f"{key}.poly_im") for v in _list(row.get("poly_im", [0.0]), where,
                                                               f"{key}.poly_im")]
        deg = max(len(re), len(im), 1)
        re += [0.0] * (deg - len(re))
        im += [0.0] * (deg - len(im))
        spans.append((a, b, key))
        polys.append([complex(x, y) for x, y in zip(re, im)])
    expect = 0.0
    for a, b, key in spans:
        if abs(a - expect) > 1e-12 or b <= a:
            raise ConfigError(f"pieces must tile [0, 1) in order; expected start {expect}",
                              where(f"{key}.interval"))
        expect = b
    if abs(expect - 1.0) > 1e-12:
        raise ConfigError(f"pieces end at {expect}, not 1", where(f"{spans[-1][2]}.interval"))
    return [a for a, _, _ in spans], polys


def _samples(data, where, base):
    rel = data.get("samples")
    if not isinstance(rel, str):
        raise ConfigError("samples must be a CSV path", where("samples"))
    path = rel if os.path.isabs(rel) else os.path.join(base, rel)
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    except OSError as exc:
        raise ConfigError(f"cannot read samples file: {exc.strerror}", where("samples")) from exc
    if rows and not _is_number(rows[0][0]):
        rows = rows[1:]
    vals = []
    for i, r in enumerate(rows):
        if len(r) != 3 or not all(_is_number(x) for x in r):
            raise ConfigError(f"{path}: row {i + 1} is not x,re,im", where("samples"))
        vals.append([float(x) for x in r])
    arr = np.array(vals).reshape(-1, 3)
    N = len(arr)
    if N < 8 or N & (N - 1):
        raise ConfigError(f"{path}: {N} samples; need a power of two >= 8", where("samples"))
    if np.max(np.abs(arr[:, 0] - np.arange(N) / N)) > 1e-9:
        raise ConfigError(f"{path}: x column must be the uniform grid j/{N}", where("samples"))
    return arr[:, 1] + 1j * arr[:, 2]


def _is_number(text: str) -> bool:
    try:
        float(text)
        return True
    except ValueError:
        return False


def _jumps(data, where):
    out = []
    for i, row in enumerate(_list(data.get("jumps", []) or [], where, "jumps")):
        key = f"jumps[{i}]"
        if not isinstance(row, dict) or set(row) != {"location", "component", "order", "size"}:
            raise ConfigError("jump needs exactly location, component, order, size", where(key))
        try:
            out.append(Jump(_num(row["location"], where, f"{key}.location"), row["component"],
                            _num(row["order"], where, f"{key}.order", int),
                            _num(row["size"], where, f"{key}.size")))
        except HillzoneError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc), where(key)) from exc
    return out


def parse_potential(text: str, path: str = "<string>", base: str = ".") -> PeriodicPotential:
    """Build a potential from YAML text."""
    try:
        root = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        line = exc.problem_mark.line + 1 if exc.problem_mark else 1
        raise ConfigError(f"YAML syntax error: {exc.problem}", f"{path}:{line}") from exc
    where = _Where(path, root)
    if not isinstance(data, dict):
        raise ConfigError("top level must be a mapping", f"{path}:1")
    unknown = sorted(set(map(str, data)) - KEYS)
    if unknown:
        raise ConfigError(f"unknown key (allowed: {sorted(KEYS)})", where(unknown[0]))
    rep = data.get("representation")
    if rep not in ("fourier", "piecewise", "sampled"):
        raise ConfigError(f"representation must be fourier, piecewise or sampled; got {rep!r}",
                          where("representation"))
    needed = {"fourier": "fourier", "piecewise": "pieces", "sampled": "samples"}[rep]
    if needed not in data:
        raise ConfigError(f"representation {rep} needs key '{needed}'", where("representation"))
    s = _num(data.get("smoothness_s", 0), where, "smoothness_s", int)
    if s < 0:
        raise ConfigError("smoothness_s must be non-negative", where("smoothness_s"))
    jumps = _jumps(data, where)
    norm = data.get("normalize", True)
    if not isinstance(norm, bool):
        raise ConfigError("normalize must be true or false", where("normalize"))
    try:
        if rep == "fourier":
            q = fourier_potential(_fourier(data, where), s, jumps)
        elif rep == "piecewise":
            bps, polys = _pieces(data, where)
            q = piecewise_potential(bps, polys, s, jumps)
        else:
            q = sampled_potential(_samples(data, where, base), s, jumps)
    except ConfigError:
        raise
    except HillzoneError as exc:
        raise ConfigError(str(exc), where(rep if rep != "piecewise" else "pieces")) from exc
    return normalize(q) if norm else q


def load_potential(path: str) -> PeriodicPotential:
    """Read and parse a potential file."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read potential file: {exc.strerror}", path) from exc
    return parse_potential(text, path, os.path.dirname(os.path.abspath(path)))
