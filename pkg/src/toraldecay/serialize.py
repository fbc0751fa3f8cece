"""Deterministic CSV/JSON emission with config-hash provenance headers.

Every emitted file starts from a plain dict config; the hash covers the
sorted JSON of that dict, so identical configurations rerun to
byte-identical files. Floats are written with repr (shortest round-trip
form), which is stable across processes and thread counts.
"""

import csv
import hashlib
import io
import json

from ._version import __version__
from .errors import InputError


def config_hash(config):
    """First 16 hex digits of sha256 over canonical sorted JSON."""
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


def format_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, complex):
        return repr(v)
    return str(v)


def meta_block(config, seed=None):
    lines = ["# config: %s" % config_hash(config)]
    if seed is not None:
        lines.append("# seed: %d" % seed)
    lines.append("# version: %s" % __version__)
    return lines


def render_csv(columns, rows, config, seed=None, footer=None):
    """CSV text: '#' metadata block, header row, data rows, optional footer."""
    buf = io.StringIO()
    for line in meta_block(config, seed):
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    if footer:
        for line in footer:
            buf.write("# %s\n" % line)
    return buf.getvalue()


def write_csv(path, columns, rows, config, seed=None, footer=None):
    text = render_csv(columns, rows, config, seed=seed, footer=footer)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def render_json(obj):
    return json.dumps(obj, sort_keys=True, indent=2, default=_json_default) + "\n"


def _json_default(obj):
    if hasattr(obj, "tolist"):
        return obj.tolist()
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError("not JSON serializable: %r" % (obj,))


def write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render_json(obj))
    return path


def read_targets_csv(path):
    """One target value per data row (first column); '#' lines are comments."""
    values = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            first = line.split(",")[0].strip()
            try:
                values.append(float(first))
            except ValueError:
                continue  # header row
    if not values:
        raise InputError("no numeric targets found in %s" % path)
    return values
