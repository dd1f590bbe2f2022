"""Matrix text files and certificate documents.

Matrix file::

    name: A
    rows: 2
    cols: 3
    1 0 -1/2
    0 1 3

The ``name`` line is optional.  Entries are integers, ``p/q`` rationals or
decimals; a single decimal anywhere makes the matrix a float matrix.  Blank
lines and ``#`` comments are ignored.  :func:`format_matrix` writes the
canonical form, which :func:`parse_matrix` reads back byte for byte.
"""

import hashlib
import json
import re
from fractions import Fraction

import numpy as np

from .certify import Certificate, Tier
from .conditions import Outcome, Verdict

CERTIFICATE_VERSION = "cpdunique-certificate/1"

_INT = re.compile(r"[+-]?\d+\Z")
_RATIONAL = re.compile(r"[+-]?\d+/\d+\Z")
_DECIMAL = re.compile(r"[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?\Z")


class MatrixFileError(ValueError):
    """Malformed matrix file; ``line`` and ``column`` are 1-based."""

    def __init__(self, message, source="<string>", line=None, column=None):
        where = source
        if line is not None:
            where += f":{line}"
            if column is not None:
                where += f":{column}"
        super().__init__(f"{where}: {message}")
        self.source, self.line, self.column = source, line, column


def _token(text, source, line, column):
    if _INT.match(text):
        return int(text)
    if _RATIONAL.match(text):
        p, q = text.split("/")
        if int(q) == 0:
            raise MatrixFileError(f"zero denominator in {text!r}", source, line, column)
        return Fraction(int(p), int(q))
    if _DECIMAL.match(text):
        return float(text)
    raise MatrixFileError(f"not a number: {text!r}", source, line, column)


def parse_matrix(text, source="<string>"):
    """Parse a matrix file.  Returns ``(name, matrix)``; name may be None.

    Exact files give object arrays of ints/Fractions, files with decimals
    give float64 arrays.
    """
    header = {}
    entries = []
    body_started = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        key, sep, value = line.partition(":")
        if sep and not body_started and key.strip() in ("name", "rows", "cols"):
            key = key.strip()
            if key in header:
                raise MatrixFileError(f"duplicate {key!r} line", source, lineno, 1)
            value = value.strip()
            if key != "name":
                if not _INT.match(value) or int(value) < 0:
                    after = raw.index(":") + 1
                    col = after + len(raw[after:]) - len(raw[after:].lstrip()) + 1
                    raise MatrixFileError(f"{key} must be a non-negative integer, got {value!r}",
                                          source, lineno, col)
                value = int(value)
            header[key] = value
            continue
        if sep:
            raise MatrixFileError(f"unexpected header {key.strip()!r}", source, lineno, 1)
        body_started = True
        row = []
        for m in re.finditer(r"\S+", line):
            row.append(_token(m.group(), source, lineno, m.start() + 1))
        entries.append((lineno, row))

    for key in ("rows", "cols"):
        if key not in header:
            raise MatrixFileError(f"missing '{key}:' header", source)
    rows, cols = header["rows"], header["cols"]
    if len(entries) != rows:
        last = entries[-1][0] if entries else None
        raise MatrixFileError(f"expected {rows} data rows, found {len(entries)}", source, last)
    for lineno, row in entries:
        if len(row) != cols:
            raise MatrixFileError(f"expected {cols} entries, found {len(row)}", source, lineno)

    flat = [x for _, row in entries for x in row]
    if any(isinstance(x, float) for x in flat):
        M = np.array([float(x) for x in flat], dtype=np.float64).reshape(rows, cols)
    else:
        M = np.empty(rows * cols, dtype=object)
        M[:] = flat
        M = M.reshape(rows, cols)
    return header.get("name"), M


def read_matrix(path):
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read(), str(path))


def _format_entry(x):
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not np.isfinite(x):
            raise ValueError("matrix entries must be finite")
        return repr(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(int(x))


def format_matrix(M, name=None):
    """Canonical text form of M (exact or float)."""
    M = np.asarray(M)
    if M.ndim != 2:
        raise ValueError("expected a matrix")
    float_mode = M.dtype != object
    lines = [] if name is None else [f"name: {name}"]
    lines += [f"rows: {M.shape[0]}", f"cols: {M.shape[1]}"]
    for row in M:
        if float_mode:
            row = [float(x) for x in row]
        lines.append(" ".join(_format_entry(x) for x in row))
    return "\n".join(lines) + "\n"


def write_matrix(path, M, name=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_matrix(M, name))


# ---------------------------------------------------------------- certificates

def _encode_scalar(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    raise TypeError(f"cannot encode {type(x).__name__}")


def _decode_scalar(x):
    if isinstance(x, str):
        return Fraction(x)
    return x


def _encode_outcome(o):
    return {
        "verdict": o.verdict.value,
        "witness": None if o.witness is None else [_encode_scalar(x) for x in o.witness],
        "detail": o.detail,
    }


def _decode_outcome(d):
    witness = None if d["witness"] is None else tuple(_decode_scalar(x) for x in d["witness"])
    return Outcome(Verdict(d["verdict"]), witness, d["detail"])


def certificate_to_dict(cert):
    return {
        "dims": list(cert.dims),
        "R": cert.R,
        "mode": cert.mode,
        "sfs": cert.sfs,
        "tol": cert.tol,
        "ranks": dict(sorted(cert.ranks.items())),
        "kranks": dict(sorted(cert.kranks.items())),
        "m_values": dict(sorted(cert.m_values.items())),
        "necessary": cert.necessary.value,
        "fired": list(cert.fired),
        "unique_factors": list(cert.unique_factors),
        "tier": cert.tier.value,
        "conditions": {k: _encode_outcome(v) for k, v in sorted(cert.conditions.items())},
    }


def certificate_from_dict(d):
    return Certificate(
        dims=tuple(d["dims"]),
        R=d["R"],
        mode=d["mode"],
        ranks=dict(d["ranks"]),
        kranks=dict(d["kranks"]),
        m_values=dict(d["m_values"]),
        conditions={k: _decode_outcome(v) for k, v in d["conditions"].items()},
        fired=list(d["fired"]),
        tier=Tier(d["tier"]),
        unique_factors=list(d["unique_factors"]),
        necessary=Verdict(d["necessary"]),
        sfs=d["sfs"],
        tol=d["tol"],
    )


def inputs_digest(named_blobs):
    """sha256 over (label, bytes) pairs, in the given order."""
    h = hashlib.sha256()
    for label, blob in named_blobs:
        data = blob.encode("utf-8") if isinstance(blob, str) else blob
        h.update(label.encode("utf-8") + b"\0" + str(len(data)).encode() + b"\0" + data)
    return h.hexdigest()


def summarize(cert):
    """Human-readable summary lines for a certificate."""
    roles = sorted(cert.ranks)
    lines = [
        f"dims {'x'.join(map(str, cert.dims))}, R = {cert.R}, {cert.mode} arithmetic"
        + (", symmetric frontal slices" if cert.sfs else ""),
        "ranks   " + " ".join(f"{r}={cert.ranks[r]}" for r in roles),
        "k-ranks " + " ".join(f"{r}={cert.kranks[r]}" for r in roles),
        "m       " + " ".join(f"{r}={cert.m_values[r]}" for r in roles),
        f"necessary conditions: {cert.necessary.value}",
        "fired: " + (", ".join(cert.fired) if cert.fired else "none"),
    ]
    if cert.unique_factors:
        lines.append("uniquely determined factors: " + ", ".join(cert.unique_factors))
    tier = cert.tier.value
    if cert.tier is Tier.NECESSARY_VIOLATED:
        tier += " (not unique, provided the decomposition has minimal length)"
    lines.append(f"conclusion: {tier}")
    return lines


def certificate_document(cert, digest):
    return {
        "version": CERTIFICATE_VERSION,
        "inputs_sha256": digest,
        "certificate": certificate_to_dict(cert),
        "summary": summarize(cert),
    }


def dumps_document(doc):
    """Stable JSON text: fixed key order, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def loads_document(text):
    """Parse a certificate document; returns ``(certificate, digest)``."""
    doc = json.loads(text)
    if doc.get("version") != CERTIFICATE_VERSION:
        raise ValueError(f"unsupported certificate version {doc.get('version')!r}")
    return certificate_from_dict(doc["certificate"]), doc["inputs_sha256"]
