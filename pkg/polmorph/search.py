"""Bounded searches for isogeny and embedding type matrices.

Candidates are the integer matrices with entries in [-bound, bound]. The
search fixes columns one at a time and keeps only columns whose pairings
c_i . G . c_j with the columns already fixed match the target form, so the
pairwise Gram conditions prune the tree early. Results are sorted by their
row-major entries, which makes the output independent of the worker count.
"""

import itertools
import logging
from multiprocessing import Pool
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from beartype import beartype

from polmorph._config import DEFAULT_BOUND, DEFAULT_JOBS
from polmorph.exact_core import block_diagonal
from polmorph.morphism_types import check_embedding_type
from polmorph.schemas import IntMatrix, PolarizationType
from polmorph.symplectic import gram_matrix, product_type, type_divides

logger = logging.getLogger(__name__)

Column = Tuple[int, ...]


def _candidate_columns(size: int, bound: int) -> np.ndarray:
    values = range(-bound, bound + 1)
    return np.array(list(itertools.product(values, repeat=size)), dtype=np.int64).reshape(-1, size)


def _extend(
    chosen: List[np.ndarray],
    pools: Sequence[np.ndarray],
    gram: np.ndarray,
    target: np.ndarray,
    out: List[Column],
) -> None:
    j = len(chosen)
    if j == len(pools):
        out.append(tuple(int(x) for x in np.stack(chosen, axis=1).ravel()))
        return
    pool = pools[j]
    if j:
        # (c_i^T G) for every fixed column i, against every candidate
        pairings = np.stack([c @ gram for c in chosen]) @ pool.T
        mask = np.all(pairings == target[:j, j:j + 1], axis=0)
        pool = pool[mask]
    for col in pool:
        chosen.append(col)
        _extend(chosen, pools, gram, target, out)
        chosen.pop()


def _search_chunk(args: Tuple[list, list, list, list]) -> List[Column]:
    # Runs in a worker process; arguments are plain lists so they pickle cheaply.
    first, rest, gram, target = args
    pools = [np.array(first, dtype=np.int64).reshape(-1, len(gram))]
    pools += [np.array(p, dtype=np.int64).reshape(-1, len(gram)) for p in rest]
    out: List[Column] = []
    _extend([], pools, np.array(gram, dtype=np.int64), np.array(target, dtype=np.int64), out)
    return out


def _gram_search(
    gram: IntMatrix,
    target: IntMatrix,
    bound: int,
    constraints: Optional[Mapping[int, Sequence[int]]],
    jobs: int,
) -> List[Column]:
    size = gram.rows
    if size == 0:
        return [()]
    free = _candidate_columns(size, bound)
    pools = []
    for j in range(size):
        fixed = (constraints or {}).get(j)
        pools.append(free if fixed is None else np.array([list(fixed)], dtype=np.int64))
    rest = [p.tolist() for p in pools[1:]]
    g = gram.to_rows()
    t = target.to_rows()
    first = pools[0].tolist()
    chunks = [first[i::jobs] for i in range(jobs)] if jobs > 1 else [first]
    tasks = [(chunk, rest, g, t) for chunk in chunks if chunk]
    logger.debug("searching %d first columns in %d chunk(s)", len(first), len(tasks))
    if jobs > 1:
        with Pool(processes=jobs) as pool:
            results = pool.map(_search_chunk, tasks)
    else:
        results = [_search_chunk(task) for task in tasks]
    hits = sorted(itertools.chain.from_iterable(results))
    logger.debug("search finished with %d solution(s)", len(hits))
    return hits


def _to_matrix(entries: Column, size: int) -> IntMatrix:
    return IntMatrix(rows=size, cols=size, entries=entries)


@beartype
def search_gram_solutions(
    gram: IntMatrix,
    target: IntMatrix,
    bound: int = DEFAULT_BOUND,
    column_constraints: Optional[Dict[int, Tuple[int, ...]]] = None,
    jobs: int = DEFAULT_JOBS,
) -> List[IntMatrix]:
    """All square m with entries in [-bound, bound] and tm . gram . m == target.

    No saturation or type condition is applied; this is the raw solution set
    that the isogeny and embedding searches filter.
    """
    hits = _gram_search(gram, target, bound, column_constraints, jobs)
    return [_to_matrix(h, gram.rows) for h in hits]


@beartype
def search_isogeny_matrices(
    d: PolarizationType,
    e: PolarizationType,
    bound: int = DEFAULT_BOUND,
    jobs: int = DEFAULT_JOBS,
) -> List[IntMatrix]:
    """All isogeny type matrices from ``d`` to ``e`` with entries in [-bound, bound].

    Returns an empty list straight away when e does not divide d, since the
    Gram equation has no integral solution then.

    Args:
        d: Source polarization type
        e: Target polarization type
        bound: Entry radius
        jobs: Worker processes; the result does not depend on it

    Returns:
        Matrices in lexicographic order of their row-major entries
    """
    if not type_divides(e, d):
        logger.info("type %s does not divide %s; no isogeny types exist", e, d)
        return []
    size = 2 * d.dim
    hits = _gram_search(gram_matrix(e), gram_matrix(d), bound, None, jobs)
    return [_to_matrix(h, size) for h in hits]


@beartype
def search_embedding_matrices(
    d: PolarizationType,
    d_comp: PolarizationType,
    e: PolarizationType,
    bound: int = DEFAULT_BOUND,
    column_constraints: Optional[Dict[int, Tuple[int, ...]]] = None,
    jobs: int = DEFAULT_JOBS,
) -> List[IntMatrix]:
    """All embedding type matrices for (d, d_comp, e) with entries in [-bound, bound].

    Args:
        d: Type of the subvariety
        d_comp: Type of the complement
        e: Ambient type
        bound: Entry radius for the free columns
        column_constraints: Columns fixed in advance, by column index
        jobs: Worker processes; the result does not depend on it

    Returns:
        Matrices passing check_embedding_type, in lexicographic order
    """
    if e.dim != d.dim + d_comp.dim or not type_divides(e, product_type(d, d_comp)):
        logger.info("no embedding types for (%s, %s) in %s", d, d_comp, e)
        return []
    size = 2 * e.dim
    target = block_diagonal(gram_matrix(d), gram_matrix(d_comp))
    hits = _gram_search(gram_matrix(e), target, bound, column_constraints, jobs)
    matrices = [_to_matrix(h, size) for h in hits]
    return [m for m in matrices if check_embedding_type(d, d_comp, e, m).valid]
