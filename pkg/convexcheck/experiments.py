"""
    Sampling experiments on two-hidden-layer MLPs with Gaussian parameters: how often a
    random network is convex on the box, compared with how often it satisfies the ICNN sign
    constraint, whose probability is 1 / 2^{n2 (n1 + 1)} for widths (n1, n2).

    Results are xarray Datasets over the widths, exported by io_tools.save_table.
"""
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm
from xarray import Dataset

from .checker import CheckOptions, Status, check_convexity
from .constants import DEFAULT_HALFWIDTH, MAX_HIDDEN, MAX_INPUT_DIM
from .errors import GuardRailError
from .network import Architecture, sample_gaussian, is_icnn
from .regions import DomainBox
from .tools import Timer, get_num_cores


@dataclass(frozen=True)
class ExperimentConfig:
    d: int = 2
    width_range: tuple = (2, 7)
    draws: int = 10 ** 4
    seed: int = 0
    box_halfwidth: float = DEFAULT_HALFWIDTH
    skip: bool = False
    timing: bool = True

    def __post_init__(self):
        lo, hi = (int(w) for w in self.width_range)
        object.__setattr__(self, 'width_range', (lo, hi))

        if self.draws < 1:
            raise ValueError(f"Number of draws must be positive. Given {self.draws}")
        if not 1 <= lo <= hi:
            raise ValueError(f"Illegal width range {self.width_range}")
        if not self.box_halfwidth > 0:
            raise ValueError(f"Box half-width must be positive. Given {self.box_halfwidth}")
        if self.d > MAX_INPUT_DIM:
            raise GuardRailError(f"Input dimension {self.d} exceeds the limit {MAX_INPUT_DIM}")
        if 2 * hi > MAX_HIDDEN:
            raise GuardRailError(f"Widths up to {hi} give {2 * hi} hidden neurons, more than "
                                 f"the limit {MAX_HIDDEN}")

    @property
    def widths(self):
        return list(range(self.width_range[0], self.width_range[1] + 1))

    @property
    def box(self):
        return DomainBox.cube(self.box_halfwidth, self.d)


@dataclass(frozen=True)
class HeatmapCell:
    n1: int
    n2: int
    convex_count: int
    icnn_count: int
    inconclusive_count: int
    draws: int
    icnn_expected: float
    seconds: Optional[float] = None

    @property
    def ratio(self):
        """Convex draws per ICNN draw (inf when no ICNN was drawn)."""
        return self.convex_count / self.icnn_count if self.icnn_count else np.inf


def icnn_probability(n1, n2):
    """Probability that Gaussian W_2 (n2 x n1) and w_3 (n2) are all non-negative."""
    return 0.5 ** (n2 * (n1 + 1))


def draw_seed(seed, n1, n2, index):
    """Per-draw seed sequence; results do not depend on how draws are scheduled."""
    return [int(seed), int(n1), int(n2), int(index)]


def classify_draw(config, n1, n2, index, opts=None, halfwidth=None):
    """(status value, is_icnn) of one sampled network."""
    arch = Architecture(config.d, (n1, n2), skip=config.skip)
    net = sample_gaussian(arch, draw_seed(config.seed, n1, n2, index))

    box = config.box if halfwidth is None else DomainBox.cube(halfwidth, config.d)
    status = check_convexity(net, box, opts).status
    return status.value, is_icnn(net)


def run_cell(config, n1, n2, opts=None, n_jobs=None):
    """Classify `config.draws` networks of widths (n1, n2) in a pool of workers."""
    n_jobs = get_num_cores() if n_jobs is None else n_jobs

    with Timer(f"cell ({n1}, {n2})", verbose=False) as timer:
        results = Parallel(n_jobs=n_jobs)(delayed(classify_draw)(config, n1, n2, i, opts)
                                          for i in range(config.draws))

    statuses = [status for status, _ in results]
    return HeatmapCell(n1=n1, n2=n2,
                       convex_count=statuses.count(Status.CONVEX.value),
                       icnn_count=sum(icnn for _, icnn in results),
                       inconclusive_count=statuses.count(Status.INCONCLUSIVE.value),
                       draws=config.draws,
                       icnn_expected=config.draws * icnn_probability(n1, n2),
                       seconds=timer.interval if config.timing else None)


def cells_to_dataset(cells, config):
    """Gather heatmap cells into a Dataset over dims (n1, n2)."""
    widths = config.widths
    shape = (len(widths), len(widths))
    fields = {name: np.zeros(shape, dtype=int)
              for name in ('draws', 'convex', 'icnn', 'inconclusive')}
    expected = np.full(shape, np.nan)
    seconds = np.full(shape, np.nan)

    for cell in cells:
        i, j = widths.index(cell.n1), widths.index(cell.n2)
        fields['draws'][i, j] = cell.draws
        fields['convex'][i, j] = cell.convex_count
        fields['icnn'][i, j] = cell.icnn_count
        fields['inconclusive'][i, j] = cell.inconclusive_count
        expected[i, j] = cell.icnn_expected
        if cell.seconds is not None:
            seconds[i, j] = cell.seconds

    dims = ('n1', 'n2')
    data_vars = {
        'draws': (dims, fields['draws'], {'long_name': 'sampled networks'}),
        'convex': (dims, fields['convex'], {'long_name': 'networks certified convex'}),
        'icnn': (dims, fields['icnn'], {'long_name': 'networks satisfying the ICNN constraint'}),
        'inconclusive': (dims, fields['inconclusive'], {'long_name': 'inconclusive checks'}),
        'icnn_expected': (dims, expected, {'long_name': 'expected ICNN count',
                                           'formula': 'draws / 2**(n2 * (n1 + 1))'}),
        'seconds': (dims, seconds, {'long_name': 'wall time', 'units': 's'}),
    }
    coords = {'n1': ('n1', widths, {'long_name': 'width of the first hidden layer'}),
              'n2': ('n2', widths, {'long_name': 'width of the second hidden layer'})}

    return Dataset(data_vars, coords=coords,
                   attrs={'input_dimension': config.d, 'seed': config.seed,
                          'box_halfwidth': config.box_halfwidth, 'skip': int(config.skip)})


def run_heatmap(config, opts=None, n_jobs=None, progress=False):
    """One HeatmapCell per (n1, n2) in the width range, as an xarray Dataset."""
    pairs = [(n1, n2) for n1 in config.widths for n2 in config.widths]

    cells = []
    for n1, n2 in tqdm(pairs, desc="heatmap", file=sys.stderr, disable=not progress):
        cells.append(run_cell(config, n1, n2, opts, n_jobs))
    return cells_to_dataset(cells, config)


def box_size_ablation(config, halfwidths, n1=2, n2=2, opts=None, n_jobs=None, progress=False):
    """
    Fraction of convex and inconclusive draws of widths (n1, n2) as the cube [-R, R]^d
    grows. The same networks are checked on every box.
    """
    n_jobs = get_num_cores() if n_jobs is None else n_jobs
    halfwidths = [float(r) for r in halfwidths]

    convex, inconclusive = [], []
    for radius in tqdm(halfwidths, desc="box size", file=sys.stderr, disable=not progress):
        results = Parallel(n_jobs=n_jobs)(
            delayed(classify_draw)(config, n1, n2, i, opts, radius) for i in range(config.draws))
        statuses = [status for status, _ in results]
        convex.append(statuses.count(Status.CONVEX.value) / config.draws)
        inconclusive.append(statuses.count(Status.INCONCLUSIVE.value) / config.draws)

    return Dataset({'convex_fraction': ('halfwidth', np.array(convex)),
                    'inconclusive_fraction': ('halfwidth', np.array(inconclusive))},
                   coords={'halfwidth': ('halfwidth', halfwidths, {'long_name': 'box half-width'})},
                   attrs={'n1': n1, 'n2': n2, 'draws': config.draws, 'seed': config.seed})


def timing_ablation(config, widths, opts=None, progress=False):
    """
    Mean wall time of one convexity check for architectures (n, n), measured draw by draw
    in a single thread, with the mean number of cells.
    """
    opts = opts if opts is not None else CheckOptions()
    widths = [int(n) for n in widths]

    mean_seconds, mean_cells = [], []
    for n in tqdm(widths, desc="timing", file=sys.stderr, disable=not progress):
        arch = Architecture(config.d, (n, n), skip=config.skip)
        seconds, cells = [], []
        for i in range(config.draws):
            net = sample_gaussian(arch, draw_seed(config.seed, n, n, i))
            with Timer(verbose=False) as timer:
                report = check_convexity(net, config.box, opts)
            seconds.append(timer.interval)
            cells.append(report.cell_count)
        mean_seconds.append(float(np.mean(seconds)))
        mean_cells.append(float(np.mean(cells)))

    return Dataset({'seconds': ('width', np.array(mean_seconds), {'units': 's'}),
                    'cells': ('width', np.array(mean_cells))},
                   coords={'width': ('width', widths)},
                   attrs={'draws': config.draws, 'seed': config.seed,
                          'box_halfwidth': config.box_halfwidth})
