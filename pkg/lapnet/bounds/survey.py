# lapnet/bounds/survey.py
import itertools
import logging
from dataclasses import dataclass

import numpy as np
from tqdm import tqdm

from .lower_bounds import check_convex, lower_bound_unweighted, lower_bound_weighted
from ..graph.weighted_graph import enumerate_connected_unweighted, graph_spectrum
from ..performance.functions import PerformanceFunction
from ..utils.errors import ModelValidationError
from ..utils.parallel import ordered_map

logger = logging.getLogger(__name__)

DEFAULT_SURVEY_MAX_NODES = 6
# Labeled connected graphs on n nodes (OEIS A001187).
LABELED_CONNECTED_COUNTS = {2: 1, 3: 4, 4: 38, 5: 728, 6: 26704, 7: 1866256}
CHUNK_SIZE = 4096


@dataclass(frozen=True)
class SurveyRecord:
    edges: tuple
    n_edges: int
    max_degree: int
    rho: float
    bound_unweighted: float
    bound_weighted: float
    equality_expected: bool

    @property
    def r1(self):
        return self.rho / self.bound_unweighted


@dataclass(frozen=True)
class SurveyResult:
    """Per-graph records of one enumeration, sorted by r₁."""
    n: int
    records: tuple

    def ratios(self):
        return np.array([r.r1 for r in self.records])

    def fraction_below(self, threshold):
        ratios = self.ratios()
        return float(np.mean(ratios < threshold)) if ratios.size else 0.0

    def cdf(self):
        """Rows (r₁, fraction of graphs with ratio ≤ r₁)."""
        ratios = self.ratios()
        count = len(ratios)
        return [(float(r), (i + 1) / count) for i, r in enumerate(ratios)]


def _chunks(iterable, size):
    iterator = iter(iterable)
    while True:
        chunk = list(itertools.islice(iterator, size))
        if not chunk:
            return
        yield chunk


def survey_ratio_r1(s, K, n, allow_large=False, threads=None, progress=False):
    """
    r₁ = ρ / (unweighted lower bound) over every labeled connected graph on n
    nodes.

    ρ is computed from the spectrum, with one φ evaluation per eigenvalue.
    Graphs are evaluated in chunks across `threads` workers; the result is
    sorted by r₁, so it does not depend on the evaluation order.

    Raises:
        ModelValidationError: n outside 3..6 (3..7 with allow_large).
        ConvexityError: φ is not convex on (λ̃, n].
    """
    limit = 7 if allow_large else DEFAULT_SURVEY_MAX_NODES
    if not 3 <= n <= limit:
        raise ModelValidationError(f"survey supports 3 <= n <= {limit}, got {n}", field="n")
    pf = PerformanceFunction("state_feedback", s, K=K)
    check_convex(pf, n)

    def evaluate(g):
        eigenvalues = graph_spectrum(g).nonzero_index_eigenvalues
        rho = float(sum(pf(float(lam)) for lam in eigenvalues))
        unweighted = lower_bound_unweighted(pf, n, g.n_edges, g.max_degree, check=False)
        weighted = lower_bound_weighted(pf, n, g.total_weight, check=False)
        return SurveyRecord(edges=tuple((i, j) for i, j, _ in g.edges), n_edges=g.n_edges,
                            max_degree=g.max_degree, rho=rho, bound_unweighted=unweighted.value,
                            bound_weighted=weighted.value, equality_expected=unweighted.equality_expected)

    records = []
    with tqdm(total=LABELED_CONNECTED_COUNTS.get(n), desc=f"graphs n={n}", disable=not progress) as bar:
        for chunk in _chunks(enumerate_connected_unweighted(n), CHUNK_SIZE):
            records.extend(ordered_map(evaluate, chunk, threads=threads))
            bar.update(len(chunk))
    records.sort(key=lambda r: (r.r1, r.edges))
    result = SurveyResult(n=n, records=tuple(records))
    logger.info(f"Survey n={n}: {len(records)} graphs, {100 * result.fraction_below(2.0):.1f}% with r1 < 2")
    return result
