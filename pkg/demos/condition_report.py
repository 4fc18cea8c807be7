"""Which noise laws are admissible for which targets.

Prints the condition report for a few (jump law, target) pairings: a
Weibull law that clears the hazard-rate route, a Lomax law that fails
the x*hazard growth test but is saved by the tail-index comparison, a
borderline Lomax index that is too close to call, and an exponential
law that fails everything heavy-tailed.  No drift field is built; the
checks only probe the two densities.
"""

from llmc.jumps import Exponential, Lomax, Weibull, check_conditions
from llmc.targets import builtin_target


PAIRS = [
    (Weibull(alpha=0.5, beta=1.0), "f1"),
    (Lomax(alpha=1.0), "f3"),
    (Lomax(alpha=1.95), "f3"),
    (Exponential(rate=1.0), "f3"),
]


def main():
    for jump, name in PAIRS:
        report = check_conditions(jump, builtin_target(name))
        print(report.to_text())
        print()


if __name__ == "__main__":
    main()
