import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from acceptance_log import RESULTS  # noqa: E402


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, secs, detail = RESULTS[n]
        line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'} ({secs:.2f} s)"
        terminalreporter.write_line(line + (f"  {detail}" if detail else ""))
