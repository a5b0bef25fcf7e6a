"""Classify every shipped fixture and print the verdict table.

Each fixture is a concrete trilinear form: the bilinear Hilbert transform,
the twisted paraproduct, the triangular Hilbert transform, staircase
multiplier forms, and the non-Hoelder model forms.  The classifier
decomposes the dual four-subspace module exactly and reports the admissible
exponent cases plus the literature status.

Run:  python demos/01_classify_fixtures.py
"""

from sblq.classify import FACT_DESCRIPTIONS, classify
from sblq.fixtures import SHIPPED_FIXTURES, shipped_fixture


def main():
    print(f"{'fixture':22s} {'summands':34s} {'cases':10s} status")
    print("-" * 92)
    for name in SHIPPED_FIXTURES:
        verdict = classify(shipped_fixture(name))
        summands = " + ".join(s.render() for s in verdict.summands)
        cases = ",".join(c.tag for c in verdict.cases) or "-"
        print(f"{name:22s} {summands:34s} {cases:10s} {verdict.status.render()}")
    print()
    print("status citations:")
    for key, note in sorted(FACT_DESCRIPTIONS.items()):
        print(f"  {key:18s} {note}")


if __name__ == "__main__":
    main()
