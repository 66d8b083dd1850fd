"""Run every named verification suite and print a one-line verdict for each."""
import sys
import time

from cyclering.qseries import SUITES, verify_suite


def main():
    failed = 0
    for name in SUITES:
        t0 = time.perf_counter()
        rep = verify_suite(name)
        dt = time.perf_counter() - t0
        print(f"{name:16s} {'PASS' if rep.passed else 'FAIL'}  ({len(rep.checks)} checks, {dt:.1f}s)")
        if not rep.passed:
            failed += 1
            for c in rep.checks:
                if not c["passed"]:
                    print("   ", c)
    return 2 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
