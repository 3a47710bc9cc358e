"""Text formats: word files, operator files, CSV tables and SVG contour plots.

All numeric output is printed with 17 significant digits so repeated runs are
byte-identical and fixtures stay stable.  SVG output carries one version
comment line; everything after it is deterministic.
"""

from __future__ import annotations

import math
import os
from typing import Optional

import numpy as np

from . import __version__
from .errors import ValidationError
from .operators import (
    FULL_AXIS,
    HALF_AXIS,
    BandOperatorSpec,
    DiagonalSpec,
)
from .spectra import ResolventField, SpectralSet
from .words import Alphabet, FiniteWord, PeriodicWord


def fmt_float(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def fmt_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return fmt_float(z.real)
    if z.real == 0:
        return f"{fmt_float(z.imag)}j"
    sign = "+" if z.imag >= 0 else "-"
    return f"{fmt_float(z.real)}{sign}{fmt_float(abs(z.imag))}j"


def parse_complex(text: str, where: str = "value") -> complex:
    try:
        return complex(text.strip())
    except ValueError:
        raise ValidationError(f"{where}: cannot parse complex literal {text.strip()!r}")


def atomic_write(path: str, text: str):
    """Write via a temp file and rename, so readers never see partial output."""
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as f:
        f.write(text)
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# Word files
# ---------------------------------------------------------------------------

def dump_word_lines(word: FiniteWord, period: Optional[int] = None) -> list:
    lines = ["alphabet: " + ",".join(fmt_complex(z) for z in word.alphabet.letters)]
    if period is not None:
        lines.append(f"period: {period}")
    lines.append("letters: " + " ".join(str(i) for i in word.indices))
    return lines


def dump_word_file(source) -> str:
    """Line format: an alphabet header, an optional period, then the indices."""
    if isinstance(source, PeriodicWord):
        lines = dump_word_lines(source.word, source.period)
    elif isinstance(source, FiniteWord):
        lines = dump_word_lines(source)
    else:
        raise ValidationError(
            "source: only periodic words and finite words serialize to word files")
    return "\n".join(lines) + "\n"


def _parse_word_lines(lines, offset=0):
    alphabet = None
    period = None
    indices = None
    for i, raw in lines:
        line = raw.strip()
        if not line:
            continue
        if ":" not in line:
            raise ValidationError(f"line {i + offset}: field missing ':' separator")
        key, _, rest = line.partition(":")
        key = key.strip()
        rest = rest.strip()
        if key == "alphabet":
            letters = [parse_complex(tok, f"line {i + offset}: alphabet")
                       for tok in rest.split(",") if tok.strip()]
            alphabet = Alphabet(tuple(letters))
        elif key == "period":
            try:
                period = int(rest)
            except ValueError:
                raise ValidationError(f"line {i + offset}: period: not an integer")
        elif key == "letters":
            try:
                indices = tuple(int(tok) for tok in rest.split())
            except ValueError:
                raise ValidationError(f"line {i + offset}: letters: not integer indices")
        else:
            raise ValidationError(f"line {i + offset}: unknown field {key!r}")
    if alphabet is None:
        raise ValidationError("word file: missing 'alphabet' field")
    if indices is None:
        raise ValidationError("word file: missing 'letters' field")
    word = FiniteWord(indices, alphabet)
    return word, period


def parse_word_file(text: str):
    """Returns a PeriodicWord when a period is declared, else the finite word."""
    word, period = _parse_word_lines(list(enumerate(text.splitlines(), start=1)))
    if period is None:
        return word
    if period != len(word):
        raise ValidationError("period: does not match the number of letters")
    return PeriodicWord(word)


# ---------------------------------------------------------------------------
# Operator files
# ---------------------------------------------------------------------------

def dump_operator_file(spec: BandOperatorSpec, potentials: dict) -> str:
    """Structured text: domain, one diagonal line per offset, inline potentials.

    ``potentials`` names the sources referenced by the diagonals; only periodic
    potentials serialize.
    """
    by_id = {id(src): name for name, src in potentials.items()}
    lines = [f"domain: {spec.domain}"]
    for d in spec.diagonals:
        bits = [f"offset={d.offset}"]
        if d.const != 0 or d.source is None:
            bits.append(f"const={fmt_complex(d.const)}")
        if d.source is not None:
            name = by_id.get(id(d.source))
            if name is None:
                raise ValidationError(
                    f"potentials: diagonal at offset {d.offset} uses an unnamed source")
            bits.append(f"potential={name}")
            if d.shift:
                bits.append(f"shift={d.shift}")
        lines.append("diagonal: " + " ".join(bits))
    for name, src in potentials.items():
        if not isinstance(src, PeriodicWord):
            raise ValidationError(
                f"potential {name}: only periodic potentials serialize to operator files")
        lines.append(f"potential {name}:")
        lines.extend(dump_word_lines(src.word, src.period))
        lines.append("end")
    return "\n".join(lines) + "\n"


def parse_operator_file(text: str):
    """Inverse of dump_operator_file; errors carry line and field names."""
    lines = text.splitlines()
    domain = None
    diag_rows = []   # (line_no, {field: value})
    potentials = {}
    i = 0
    while i < len(lines):
        line = lines[i].strip()
        lineno = i + 1
        i += 1
        if not line or line.startswith("#"):
            continue
        if line.startswith("domain:"):
            domain = line.partition(":")[2].strip()
            if domain not in (FULL_AXIS, HALF_AXIS):
                raise ValidationError(f"line {lineno}: domain: must be 'Z' or 'N'")
        elif line.startswith("diagonal:"):
            fields = {}
            for tok in line.partition(":")[2].split():
                if "=" not in tok:
                    raise ValidationError(
                        f"line {lineno}: diagonal: token {tok!r} is not key=value")
                key, _, val = tok.partition("=")
                fields[key] = val
            if "offset" not in fields:
                raise ValidationError(f"line {lineno}: diagonal: missing offset")
            diag_rows.append((lineno, fields))
        elif line.startswith("potential ") and line.endswith(":"):
            name = line[len("potential "):-1].strip()
            body = []
            while i < len(lines) and lines[i].strip() != "end":
                body.append((i + 1, lines[i]))
                i += 1
            if i >= len(lines):
                raise ValidationError(f"line {lineno}: potential {name}: missing 'end'")
            i += 1
            word, period = _parse_word_lines(body)
            if period is None:
                raise ValidationError(
                    f"line {lineno}: potential {name}: needs a period field")
            if period != len(word):
                raise ValidationError(
                    f"line {lineno}: potential {name}: period does not match letters")
            potentials[name] = PeriodicWord(word)
        else:
            raise ValidationError(f"line {lineno}: unrecognized directive {line!r}")
    if domain is None:
        raise ValidationError("operator file: missing 'domain' field")
    diags = []
    for lineno, fields in diag_rows:
        try:
            offset = int(fields["offset"])
        except ValueError:
            raise ValidationError(f"line {lineno}: offset: not an integer")
        const = parse_complex(fields["const"], f"line {lineno}: const") \
            if "const" in fields else 0j
        source = None
        shift = 0
        if "potential" in fields:
            name = fields["potential"]
            if name not in potentials:
                raise ValidationError(
                    f"line {lineno}: potential: undefined name {name!r}")
            source = potentials[name]
            if "shift" in fields:
                try:
                    shift = int(fields["shift"])
                except ValueError:
                    raise ValidationError(f"line {lineno}: shift: not an integer")
        diags.append(DiagonalSpec(offset, const, source, shift))
    return BandOperatorSpec(tuple(diags), domain), potentials


# ---------------------------------------------------------------------------
# CSV tables
# ---------------------------------------------------------------------------

def field_csv(fld: ResolventField) -> str:
    """Header re,im,nu,nu_adj,bound; one row per node, row-major from the
    lower-left corner."""
    re = fld.grid.re_axis()
    im = fld.grid.im_axis()
    rows = ["re,im,nu,nu_adj,bound"]
    for iy in range(fld.grid.ny):
        for ix in range(fld.grid.nx):
            adj = "" if fld.nu_adjoint is None else fmt_float(fld.nu_adjoint[iy, ix])
            rows.append(",".join([
                fmt_float(re[ix]), fmt_float(im[iy]),
                fmt_float(fld.nu[iy, ix]), adj,
                fmt_float(fld.bound[iy, ix]),
            ]))
    return "\n".join(rows) + "\n"


def spectral_set_csv(sset: SpectralSet, with_theta: bool = False) -> str:
    if with_theta and sset.theta_index is None:
        raise ValidationError("theta_index: the set carries no phase indices")
    rows = ["re,im,theta_index" if with_theta else "re,im"]
    for t, z in enumerate(sset.points):
        row = [fmt_float(z.real), fmt_float(z.imag)]
        if with_theta:
            row.append(str(int(sset.theta_index[t])))
        rows.append(",".join(row))
    return "\n".join(rows) + "\n"


def parse_spectral_set_csv(text: str) -> SpectralSet:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValidationError("csv: empty point file")
    start = 1 if lines[0].lstrip()[0].isalpha() else 0
    pts = []
    for lineno, line in enumerate(lines[start:], start=start + 1):
        cells = line.split(",")
        if len(cells) < 2:
            raise ValidationError(f"line {lineno}: need at least re,im columns")
        try:
            pts.append(complex(float(cells[0]), float(cells[1])))
        except ValueError:
            raise ValidationError(f"line {lineno}: re/im: not numeric")
    return SpectralSet(np.asarray(pts, dtype=complex))


def hausdorff_csv_row(m, eps, report) -> str:
    return ",".join([str(m), fmt_float(float(eps)), fmt_float(report.directed_ab),
                     fmt_float(report.directed_ba), fmt_float(report.distance)])


def sigma_table_csv(rows) -> str:
    out = ["rep_col,sigma_min"]
    out.extend(f"{col},{fmt_float(sig)}" for col, sig in rows)
    return "\n".join(out) + "\n"


def symbol_matrix_text(sm) -> str:
    """Plain-text dump of one symbol matrix, for debugging."""
    rows = [f"# p={sm.p} theta={fmt_float(sm.theta)}"]
    for i in range(sm.p):
        rows.append(" ".join(fmt_complex(z) for z in sm.matrix[i]))
    return "\n".join(rows) + "\n"


# ---------------------------------------------------------------------------
# SVG rendering
# ---------------------------------------------------------------------------

def _color(t: float) -> str:
    """Light-to-dark blue ramp for t in [0, 1]."""
    t = min(max(t, 0.0), 1.0)
    r = round(235 - 200 * t)
    g = round(242 - 190 * t)
    b = round(255 - 120 * t)
    return f"#{r:02x}{g:02x}{b:02x}"


def field_svg(fld: ResolventField, sublevels=()) -> str:
    """Cells colored by log10 of the bound, with contour paths on top.

    The color mapping is presentation only; holes render as light gray.
    """
    grid = fld.grid
    re = grid.re_axis()
    im = grid.im_axis()
    dx = re[1] - re[0]
    dy = im[1] - im[0]
    width = grid.re_max - grid.re_min
    height = grid.im_max - grid.im_min

    logs = np.full_like(fld.bound, np.nan)
    finite = np.isfinite(fld.bound) & (fld.bound > 0)
    logs[finite] = np.log10(fld.bound[finite])
    if finite.any():
        lo, hi = float(logs[finite].min()), float(logs[finite].max())
    else:
        lo, hi = 0.0, 1.0
    span = hi - lo if hi > lo else 1.0

    def x_of(v):
        return fmt_float(v)

    def y_of(v):
        return fmt_float(-v)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- subspec {__version__} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{fmt_float(grid.re_min)} {fmt_float(-grid.im_max)} '
        f'{fmt_float(width)} {fmt_float(height)}">',
    ]
    for iy in range(grid.ny):
        for ix in range(grid.nx):
            v = fld.bound[iy, ix]
            if np.isnan(v):
                fill = "#dddddd"
            elif np.isinf(v):
                fill = _color(1.0)
            else:
                fill = _color((logs[iy, ix] - lo) / span)
            x0 = re[ix] - dx / 2
            y0 = im[iy] + dy / 2
            parts.append(
                f'<rect x="{x_of(x0)}" y="{y_of(y0)}" width="{fmt_float(dx)}" '
                f'height="{fmt_float(dy)}" fill="{fill}"/>')
    for _eps, sset in sublevels:
        for poly in sset.polylines:
            if len(poly) < 2:
                continue
            d = "M " + " L ".join(f"{x_of(z.real)},{y_of(z.imag)}" for z in poly)
            parts.append(f'<path d="{d}" fill="none" stroke="#c03020" '
                         f'stroke-width="{fmt_float(min(dx, dy) / 3)}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
