"""Flat count tables shared by evolution and oracle dumps (JSON and CSV)."""
from __future__ import annotations

import csv
import io
import json
from typing import Iterable

from . import __version__
from .spectra import DiagramType, LengthType

COLUMNS = ["variant", "model", "g_or_h", "k", "l", "b_spec", "n_or_p_spec", "count"]


def type_row(t: DiagramType | LengthType, model: str, count: int) -> dict:
    """One table row; length rows carry the backbone count in ``b_spec``."""
    if model == "length":
        lt = t if isinstance(t, LengthType) else LengthType.of(t)
        b_spec, spec, l = str(lt.backbones), lt.p, 0
    else:
        b_spec, spec, l = repr(t.b), t.n, t.l
    return {
        "variant": t.orientability.value,
        "model": model,
        "g_or_h": t.genus,
        "k": t.k,
        "l": l,
        "b_spec": b_spec,
        "n_or_p_spec": repr(spec),
        "count": str(count),
    }


def sort_rows(rows: Iterable[dict]) -> list[dict]:
    return sorted(rows, key=lambda r: tuple(str(r[c]).zfill(8) if isinstance(r[c], int) else str(r[c]) for c in COLUMNS))


def header(command: str, config: dict) -> dict:
    return {"tool": "chordgf", "version": __version__, "command": command, "config": config}


def dumps_json(head: dict, body: dict) -> str:
    return json.dumps({"header": head, **body}, sort_keys=True, indent=1) + "\n"


def dumps_csv(head: dict, rows: list[dict]) -> str:
    buf = io.StringIO()
    buf.write("# " + json.dumps(head, sort_keys=True) + "\n")
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def loads_json_rows(text: str) -> list[dict]:
    return json.loads(text)["rows"]
