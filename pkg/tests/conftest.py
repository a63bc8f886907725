import os

# single-threaded BLAS: the suite is dominated by many small factorizations,
# where thread fan-out is a large slowdown on few-core machines
for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
    os.environ.setdefault(_var, "1")

from threadpoolctl import threadpool_limits  # noqa: E402

import _acceptance_report  # noqa: E402

_limits = threadpool_limits(limits=1)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_report.LINES:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_report.LINES:
            terminalreporter.write_line(line)
