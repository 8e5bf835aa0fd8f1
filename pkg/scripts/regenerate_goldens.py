"""Rewrite the golden reports in tests/golden from the bundled datasets.

    python scripts/regenerate_goldens.py

Run only after an intentional change to the report format or the tests.
"""

import json
from pathlib import Path

from pairdiff.report import RunConfig, bundled_dataset, render_report, run_suite
from pairdiff.sample import Kind

GOLDEN = Path(__file__).resolve().parents[1] / "tests" / "golden"
TIMESTAMP = "2020-01-01 00:00:00 UTC"
CASES = {
    "lgd_report.txt": ("lgd_synthetic.csv", Kind.UNIT_INTERVAL),
    "pd_report.txt": ("pd_synthetic.csv", Kind.PROBABILITY),
}


def main():
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for out, (data, mode) in CASES.items():
        cfg = RunConfig(str(bundled_dataset(data)), mode=mode, seed=23, iterations=999, timestamp=TIMESTAMP)
        doc = run_suite(cfg)
        (GOLDEN / out).write_text(render_report(doc), encoding="utf-8")
        if mode is Kind.UNIT_INTERVAL:
            summary = json.dumps(doc.summary.as_dict(), indent=2, sort_keys=True)
            (GOLDEN / "lgd_summary.json").write_text(summary + "\n", encoding="utf-8")
        print("wrote", GOLDEN / out)


if __name__ == "__main__":
    main()
