"""
The `verify` cross-check suite: every computation path checked against the
others, in a fixed order.
"""
import logging
import time
from dataclasses import dataclass, field
from typing import Optional

from utils import cremona, fan, mixed_volume, polytope
from utils.exact_core import RationalMatrix, gaussian_solve

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"


@dataclass(frozen=True)
class CheckResult:
    name: str
    n_range: tuple
    status: str
    counterexample: Optional[str] = None


@dataclass
class VerifyReport:
    max_n: int
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.status == PASS for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_payload(self) -> dict:
        return {
            "max_n": self.max_n,
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "n_range": list(c.n_range),
                    "status": c.status,
                    "counterexample": c.counterexample,
                }
                for c in self.checks
            ],
        }


def check_volume_oracle(ns: range) -> Optional[str]:
    """Triangulation oracle, closed form and orthant sum agree on a*delta_n + b*(-delta_n)."""
    for n in ns:
        simplex = polytope.standard_simplex(n)
        negative = polytope.negate(simplex)
        for a in range(4):
            for b in range(4):
                body = polytope.minkowski_sum(polytope.dilate(simplex, a), polytope.dilate(negative, b))
                oracle = polytope.volume(body)
                closed = polytope.volume_closed_form(a, b, n)
                orthants = sum(cell.cell_volume for cell in polytope.orthant_decomposition(a, b, n))
                if not oracle == closed == orthants:
                    return f"(a, b, n) = ({a}, {b}, {n}): oracle {oracle}, closed form {closed}, orthant sum {orthants}"
    return None


def check_multidegree_paths(ns: range) -> Optional[str]:
    for n in ns:
        paths = mixed_volume.multidegrees_all_paths(n)
        if not paths["paths_agree"]:
            return f"n = {n}: {paths}"
    return None


def check_segre_consistency(ns: range) -> Optional[str]:
    """Formula, conversion from multidegrees, hypergeometric form and tail closed forms."""
    for n in ns:
        formula = cremona.segre_numbers_standard(n)
        conversion = cremona.segre_from_multidegrees(cremona.multidegrees_standard(n))
        hypergeometric = cremona.segre_numbers_hypergeometric(n)
        if not formula == conversion == hypergeometric:
            return f"n = {n}: formula {formula.numbers}, conversion {conversion.numbers}, hypergeometric {hypergeometric.numbers}"
        for m, value in cremona.segre_tail_closed_forms(n).items():
            if formula.numbers[n - m] != value:
                return f"n = {n}: s_(n-{m}) = {formula.numbers[n - m]} but the closed form gives {value}"
        for degree in range(2, 7):
            back = cremona.multidegrees_from_segre(formula, degree)
            if cremona.segre_from_multidegrees(back) != formula:
                return f"n = {n}, degree {degree}: round trip through multidegrees changed {formula.numbers}"
        product = cremona.conversion_matrix(n, n).matmul(cremona.conversion_matrix_inverse(n, n))
        if product != RationalMatrix.identity(n + 1):
            return f"n = {n}: conversion matrix times its closed-form inverse is not the identity"
    return None


def check_standard_minors(ns: range) -> Optional[str]:
    for n in ns:
        minors = cremona.maximal_minors(cremona.standard_matrix(n))
        for i, minor in enumerate(minors):
            expected = tuple(0 if t == i else 1 for t in range(n + 1))
            terms = minor.terms
            if len(terms) != 1 or expected not in terms or abs(terms[expected]) != 1:
                return f"n = {n}: minor {i} is {minor!r}"
    return None


def check_worked_example() -> Optional[str]:
    minors = cremona.maximal_minors(cremona.example_matrix())
    for i, (minor, component) in enumerate(zip(minors, cremona.example_components())):
        if minor != component and minor != -component:
            return f"minor {i} is {minor!r}, expected +/- {component!r}"
    degrees = cremona.MultidegreeSequence(3, (1, 3, 2, 1), 3)
    segre = cremona.segre_from_multidegrees(degrees)
    if segre.numbers != (-37, 7):
        return f"Segre numbers of (1, 3, 2, 1) are {segre.numbers}"
    solved = gaussian_solve(cremona.conversion_matrix(3, 3), degrees.degrees)
    if solved is None or [int(x) for x in solved] != [-1, 0, 7, -37]:
        return f"exact inversion of the conversion matrix gives {solved}"
    if cremona.inverse_multidegrees(degrees).degrees != (1, 2, 3, 1):
        return "inverse multidegrees of (1, 3, 2, 1) are not (1, 2, 3, 1)"
    return None


def check_base_locus(ns: range) -> Optional[str]:
    for n in ns:
        count = len(cremona.base_components(n))
        s = cremona.segre_numbers_standard(n)
        if count != n * (n + 1) // 2 or count != s.numbers[n - 2]:
            return f"n = {n}: {count} components, s_(n-2) = {s.numbers[n - 2]}"
        if n >= 3:
            ranks = cremona.chow_ranks(n)
            if ranks[-1] != (n - 2, count) or any(rank != 1 for _, rank in ranks[:-1]):
                return f"n = {n}: Chow ranks {ranks}"
    return None


def check_fan(ns: range) -> Optional[str]:
    for n in ns:
        cells = fan.common_refinement(n)
        pairs = {cell.pair for cell in cells}
        if len(cells) != n * (n + 1):
            return f"n = {n}: {len(cells)} refinement cells"
        if pairs != fan.sample_pair_labels(n):
            return f"n = {n}: cells {sorted(pairs)} disagree with the grid sample"
        if {(j, i) for i, j in pairs} != pairs:
            return f"n = {n}: cells are not symmetric under negation"
        if not fan.interior_disjoint(n):
            return f"n = {n}: two cells overlap"
        covered, box = fan.covering_check(n)
        if covered != box:
            return f"n = {n}: cells cover volume {covered} of {box}"
    return None


def _run_check(report: VerifyReport, name: str, ns: range, check) -> None:
    started = time.perf_counter()
    counterexample = check(ns) if ns is not None else check()
    elapsed = time.perf_counter() - started
    n_range = (ns.start, ns.stop - 1) if ns is not None and len(ns) else ()
    status = PASS if counterexample is None else FAIL
    report.checks.append(CheckResult(name, n_range, status, counterexample))
    logger.debug(f"Check {name} took {elapsed:.2f}s")
    if status == PASS:
        logger.info(f"Check {name} passed")
    else:
        logger.warning(f"Check {name} failed: {counterexample}")


def verify(max_n: int) -> VerifyReport:
    """Runs every cross-check up to max_n. Failures are recorded, never raised."""
    if max_n < 2:
        raise ValueError(f"verify needs max_n >= 2 (got {max_n})")
    report = VerifyReport(max_n)
    _run_check(report, "volume_oracle", range(1, min(max_n, 5) + 1), check_volume_oracle)
    _run_check(report, "multidegree_paths", range(2, min(max_n, 8) + 1), check_multidegree_paths)
    _run_check(report, "segre_consistency", range(2, max_n + 1), check_segre_consistency)
    _run_check(report, "standard_minors", range(1, min(max_n, 6) + 1), check_standard_minors)
    _run_check(report, "worked_example", None, check_worked_example)
    _run_check(report, "base_locus", range(2, max_n + 1), check_base_locus)
    _run_check(report, "fan", range(2, min(max_n, 3) + 1), check_fan)
    return report
