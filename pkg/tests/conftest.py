import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

settings.register_profile("ffgs", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ffgs")

sys.path.insert(0, str(Path(__file__).resolve().parent))

TITLES = {
    1: "Hopf axiom suite", 2: "factorization into dominant + closed immersion",
    3: "rank exactness over a field", 4: "flat closure", 5: "Cartier duality",
    6: "contraction functoriality", 7: "torsor extension round trip", 8: "prolongation pipeline",
    9: "closure of dominated torsors", 10: "Tate-Oort models", 11: "CLI golden files",
}


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    RESULTS = mod.RESULTS
    terminalreporter.section("acceptance criteria")
    for n in sorted(TITLES):
        ok, detail = RESULTS.get(n, (None, "not run"))
        tag = "PASS" if ok else ("FAIL" if ok is False else "SKIP")
        terminalreporter.write_line(f"criterion {n:2d} [{tag}] {TITLES[n]}: {detail}")
