import pathlib
import subprocess
import sys

import pytest

from pricedquery import kernels

SCRIPT = pathlib.Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"


@pytest.mark.skipif(kernels.compiled_backend is None, reason="compiled kernels are not built")
def test_benchmark_runs_and_backends_agree():
    out = subprocess.run([sys.executable, str(SCRIPT), "--max-n", "5", "--repeat", "1"],
                         capture_output=True, text=True, check=True)
    lines = out.stdout.splitlines()
    assert lines[0].split()[0] == "kernel"
    assert len(lines) == 1 + 2 * 4
