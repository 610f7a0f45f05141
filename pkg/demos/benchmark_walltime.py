"""Wall-time scaling of the probe pipeline (inspection only, no pass/fail).

Emits CSV of wall time against system dimension N, rank cutoff k, and
deviation qubits m.  Asymptotic query-complexity claims are not checkable on
a dense simulator; this table just shows where the desk-scale cost goes.

Run: python demos/benchmark_walltime.py > walltime.csv
"""
import sys
import time

import numpy as np

from qgld import GradientEncoding, InverseExpectationRequest, qgld_expectation
from qgld.io import render_csv


def timed_run(n, k, m, rng):
    gauss = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, _ = np.linalg.qr(gauss)
    values = 0.8 + 0.4 * np.arange(n) + rng.uniform(0.0, 0.25, size=n)
    x = (q * values) @ q.conj().T
    phi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    phi /= np.linalg.norm(phi)
    start = time.perf_counter()
    qgld_expectation(InverseExpectationRequest(x=x, phi=phi, k=k, enc=GradientEncoding(m=m)))
    return time.perf_counter() - start


def main():
    rng = np.random.default_rng(99)
    rows = []
    for n in (4, 8, 16, 32, 64):
        for k in {max(1, n // 4), n}:
            for m in (1, 4):
                rows.append([n, k, m, timed_run(n, k, m, rng)])
    sys.stdout.write(render_csv(["N", "k", "m", "wall_seconds"], rows))


if __name__ == "__main__":
    main()
