"""The fixture suite plus a seeded random sweep through every auditor."""

from __future__ import annotations

from collections import Counter
from contextlib import nullcontext
from importlib import resources

from ..support import mutation
from .config import RunConfig
from .lang import parse
from .session import EXIT_FAIL, EXIT_OK, report, run

FIXTURES = ("F1", "F2", "F3")
CODIMENSION = {"F1": 1, "F2": 2, "F3": 3}
SHAPES = ((1, 1, 1), (1, 2, 1), (2, 2, 1), (2, 3, 1))


def fixture_text(name: str) -> str:
    return resources.files("cisupport.cli").joinpath("fixtures", f"{name}.cis").read_text()


def random_sweep(name: str, count: int, seed: int) -> str:
    """Script lines generating ``count`` random modules and auditing each one."""
    c = CODIMENSION[name]
    lines = ["set Esweep = empty;", "module ksweep = k;"]
    for i in range(count):
        s = seed * 1000 + 100 * FIXTURES.index(name) + i
        r, q, d = SHAPES[i % len(SHAPES)]
        m = f"R{i}"
        lines += [f"module {m} = random ({r}, {q}, {d}, {s});",
                  f"complexity {m};",
                  f"audit gar {m} mod Esweep;",
                  f"audit murthy {m} ksweep mod Esweep;",
                  f"audit symmetry {m} ksweep mod Esweep;",
                  f"audit hw {m} ksweep;"]
        if c >= 2:
            lines.append(f"audit gar {m} level {c - 1};")
    return "\n".join(lines) + "\n"


def _gate(rep: dict, c: int) -> dict | None:
    """Generator sanity check: random modules have complexity at most ``c``."""
    if not rep["command"].startswith("complexity R") or "result" not in rep:
        return None
    cx = rep["result"]["cx"]
    body = {"verdict": "PASS" if cx <= c else "FAIL",
            "evidence": [{"cx": cx, "c": c}] + ([] if cx <= c else [{"witness": {"kind": "complexity", "cx": cx}}])}
    return report("gate " + rep["command"], rep["inputs"], rep["window"], rep["seed"], body)


def audit_all(cfg: RunConfig, fixtures=FIXTURES, mutate: str | None = None) -> tuple[list[dict], int]:
    """Run every fixture with its random sweep; the last report is the verdict summary."""
    reports: list[dict] = []
    code = EXIT_OK
    with mutation(mutate) if mutate else nullcontext():
        for name in fixtures:
            text = fixture_text(name) + random_sweep(name, cfg.random_per_ring, cfg.seed)
            reps, rc = run(parse(text), cfg, source=name)
            for rep in reps:
                reports.append(rep)
                g = _gate(rep, CODIMENSION[name])
                if g is not None:
                    reports.append(g)
                    if g["verdict"] == "FAIL":
                        rc = max(rc, EXIT_FAIL)
            if rc != EXIT_OK:
                code = rc if code == EXIT_OK else max(code, rc)
    counts = Counter(r["verdict"] for r in reports if "verdict" in r)
    errors = sum(1 for r in reports if "error" in r)
    summary = {"counts": {k: counts[k] for k in ("PASS", "FAIL", "INAPPLICABLE", "WINDOW-LIMITED")},
               "errors": errors}
    inputs = {"fixtures": list(fixtures), "random_per_ring": cfg.random_per_ring,
              "mutation": mutate}
    reports.append(report("audit-all", inputs, cfg.window, cfg.seed, {"result": summary}))
    return reports, code
