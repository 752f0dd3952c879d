"""JSON/CSV serialisation for states, probability tables and Kronecker scans."""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .errors import InvalidInput
from .kronecker import TripletLabel
from .rates import ProbTable

SCAN_HEADER = ["n", "alpha2", "beta2", "gamma2", "g"]
PROB_HEADER = ["n", "alpha2", "beta2", "gamma2", "p"]


def fmt_double(x: float) -> str:
    return format(float(x), ".17g")


# states -----------------------------------------------------------------------

def state_from_obj(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "psi" not in obj:
        raise InvalidInput('state JSON must be an object with a "psi" field')
    amps = obj["psi"]
    if not isinstance(amps, list) or len(amps) != 8:
        raise InvalidInput('"psi" must hold 8 [re, im] pairs')
    out = np.zeros(8, dtype=complex)
    for i, pair in enumerate(amps):
        if isinstance(pair, (int, float)) and not isinstance(pair, bool):
            pair = [pair, 0.0]
        if not isinstance(pair, list) or len(pair) != 2 or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair):
            raise InvalidInput(f"amplitude {i} is not an [re, im] pair")
        out[i] = complex(pair[0], pair[1])
    if not np.isfinite(out).all():
        raise InvalidInput("non-finite amplitude")
    return out.reshape(2, 2, 2)


def state_to_obj(psi) -> dict:
    flat = np.asarray(psi, dtype=complex).reshape(8)
    return {"psi": [[float(z.real), float(z.imag)] for z in flat]}


def parse_state(text: str) -> np.ndarray:
    try:
        obj = json.loads(text)
    except ValueError as exc:
        raise InvalidInput(f"malformed state JSON: {exc}") from None
    return state_from_obj(obj)


def dump_state(psi) -> str:
    return json.dumps(state_to_obj(psi))


# probability tables -------------------------------------------------------------

def probtable_to_json(tab: ProbTable) -> str:
    rows = [f'{{"alpha2": {t.alpha2}, "beta2": {t.beta2}, "gamma2": {t.gamma2}, "p": {fmt_double(p)}}}'
            for t, p in sorted(tab.entries.items())]
    return '{"n": %d, "entries": [%s]}' % (tab.n, ", ".join(rows))


def probtable_from_json(text: str) -> ProbTable:
    obj = json.loads(text)
    n = int(obj["n"])
    tab = ProbTable(n)
    for e in obj["entries"]:
        tab.entries[TripletLabel(int(e["alpha2"]), int(e["beta2"]), int(e["gamma2"]), n)] = float(e["p"])
    return tab


def probtable_to_csv(tab: ProbTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PROB_HEADER)
    for t, p in sorted(tab.entries.items()):
        w.writerow([tab.n, t.alpha2, t.beta2, t.gamma2, fmt_double(p)])
    return buf.getvalue()


def probtable_from_csv(text: str) -> ProbTable:
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows:
        raise InvalidInput("empty probability CSV")
    n = int(rows[0]["n"])
    tab = ProbTable(n)
    for r in rows:
        tab.entries[TripletLabel(int(r["alpha2"]), int(r["beta2"]), int(r["gamma2"]), n)] = float(r["p"])
    return tab


# Kronecker scans ----------------------------------------------------------------

def scan_to_csv(scan) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCAN_HEADER)
    for t, g in scan:
        w.writerow([t.n, t.alpha2, t.beta2, t.gamma2, g])
    return buf.getvalue()


def scan_from_csv(text: str) -> list:
    rdr = csv.reader(io.StringIO(text))
    if next(rdr) != SCAN_HEADER:
        raise InvalidInput("unexpected scan CSV header")
    return [(TripletLabel(int(a), int(b), int(c), int(n)), int(g)) for n, a, b, c, g in rdr]


def scan_to_json(scan) -> str:
    return json.dumps([{"n": t.n, "alpha2": t.alpha2, "beta2": t.beta2, "gamma2": t.gamma2, "g": g}
                       for t, g in scan])


def scan_from_json(text: str) -> list:
    return [(TripletLabel(e["alpha2"], e["beta2"], e["gamma2"], e["n"]), int(e["g"])) for e in json.loads(text)]
