#!/usr/bin/env python3
"""Show a genuinely diverging small object argument: the generator {1 -> 2}
on finite sets grows one fresh cell per stage when applied to the identity."""

import argparse

from awfs_forge.arrows import ArrowObject
from awfs_forge.fixtures import finmap
from awfs_forge.lifting import GeneratorDiagram
from awfs_forge.soa import NonConvergence, run_soa


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-steps", type=int, default=10)
    args = parser.parse_args()

    j = ArrowObject(finmap(1, 2, [0]))
    gen = run_soa(GeneratorDiagram.discrete({"j": j}), max_steps=args.max_steps)
    try:
        gen.record(finmap(1, 1, [0]))
        print("converged (unexpected for this generator)")
    except NonConvergence as exc:
        print(f"non-convergent after {args.max_steps} stages")
        print(f"stage sizes: {exc.trace}")


if __name__ == "__main__":
    main()
