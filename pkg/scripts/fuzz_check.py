#!/usr/bin/env python3
"""
Differential fuzzing: solver vs. exhaustive oracle on random desk-scale problems.

Checks, per instance:
1. Propagation optimum equals the oracle optimum
2. The recovered solution evaluates to the optimum
3. The enumerated optima equal the oracle's optimal set
4. A second random elimination order gives the same optimum

Usage:
    uv run python scripts/fuzz_check.py [--count N] [--seed S] [--keep DIR]

Options:
    --count     Number of random problems (default: 200)
    --seed      Random seed (default: 0)
    --keep      Write every failing instance as a problem file into DIR
"""

import argparse
import os
import random
import sys
from typing import Optional

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from vbsopt.oracle import brute_solve, random_problem  # noqa: E402
from vbsopt.problem_file import serialize_problem  # noqa: E402
from vbsopt.propagation import SolveOptions, solve  # noqa: E402


class FuzzCheck:
    def __init__(self, count: int, seed: int, max_variables: int, keep_dir: Optional[str] = None):
        self.count = count
        self.seed = seed
        self.max_variables = max_variables
        self.keep_dir = keep_dir
        self.rng = random.Random(seed)
        self.failures = 0

    def run_all(self) -> bool:
        print("=" * 60)
        print("🧪 Solver vs. oracle fuzzing")
        print("=" * 60)
        print(f"Instances: {self.count}  Seed: {self.seed}  Max variables: {self.max_variables}")
        print()

        for i in range(self.count):
            problem = random_problem(self.rng, max_variables=self.max_variables)
            problems = self.check_instance(problem)
            if problems:
                self.failures += 1
                print(f"  ❌ instance {i}: {'; '.join(problems)}")
                self.keep(i, problem)
            elif (i + 1) % 50 == 0:
                print(f"  ✅ {i + 1} instances checked")

        print()
        print("=" * 60)
        if self.failures:
            print(f"❌ {self.failures} of {self.count} instances diverged")
        else:
            print("✅ ALL INSTANCES AGREE!")
        print("=" * 60)
        return self.failures == 0

    def check_instance(self, problem) -> list[str]:
        names = [v.name for v in problem.variables]
        order = tuple(self.rng.sample(names, len(names)))
        other = tuple(self.rng.sample(names, len(names)))
        result = solve(problem, SolveOptions(order=order, all_optima=True))
        oracle = brute_solve(problem)

        problems = []
        if result.optimum != oracle.optimum:
            problems.append(f"optimum {result.optimum} != oracle {oracle.optimum}")
        if problem.evaluate(result.solution) != oracle.optimum:
            problems.append(f"solution {result.solution} is not optimal")
        if set(result.all_optima or ()) != set(oracle.argopt):
            problems.append(f"{len(result.all_optima or ())} optima enumerated, oracle has {len(oracle.argopt)}")
        if solve(problem, SolveOptions(order=other)).optimum != result.optimum:
            problems.append(f"order {','.join(other)} changes the optimum")
        return problems

    def keep(self, index: int, problem) -> None:
        if not self.keep_dir:
            return
        os.makedirs(self.keep_dir, exist_ok=True)
        path = os.path.join(self.keep_dir, f"fuzz_{self.seed}_{index}.vbs")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(serialize_problem(problem))
        print(f"     saved {path}")


def main():
    parser = argparse.ArgumentParser(description="Compare the propagation solver with the exhaustive oracle")
    parser.add_argument("--count", type=int, default=200, help="Number of random problems")
    parser.add_argument("--seed", type=int, default=0, help="Random seed")
    parser.add_argument("--max-variables", type=int, default=6, help="Largest number of variables per problem")
    parser.add_argument("--keep", default=None, help="Directory for failing instances")
    args = parser.parse_args()

    checker = FuzzCheck(count=args.count, seed=args.seed, max_variables=args.max_variables, keep_dir=args.keep)
    success = checker.run_all()
    sys.exit(0 if success else 1)


if __name__ == "__main__":
    main()
