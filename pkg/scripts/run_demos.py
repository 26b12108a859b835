"""Run every shipped demo and print its report. Exit status is the worst seen."""

import sys

from intransitive.cli import DEMOS, main


def run(decimal=False):
    worst = 0
    for name in DEMOS:
        print(f"=== {name}")
        argv = ["demo", name] + (["--decimal"] if decimal else [])
        worst = max(worst, main(argv))
        print()
    return worst


if __name__ == "__main__":
    sys.exit(run("--decimal" in sys.argv[1:]))
