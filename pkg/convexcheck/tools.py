import os
import sys
import time

import numpy as np
from joblib import cpu_count


class Timer(object):
    # Simple class to perform profiling and check code performance
    def __init__(self, title="", verbose=True):
        self.title = title
        self.verbose = verbose
        self.interval = None

    def __enter__(self):
        self.start = time.time()
        return self

    def __exit__(self, *args):
        self.interval = time.time() - self.start
        if self.verbose:
            info("{}: time elapsed: {:.3f} s".format(self.title, self.interval))


def info(message):
    """Print an informational message on stderr (stdout is reserved for reports)."""
    print("Info: {}".format(message), file=sys.stderr)


def get_num_cores():
    """
    Returns the number of workers for pools: half the logical CPUs (physical cores),
    capped by the environment variable CONVEXCHECK_THREADS when it is set.
    """
    cores = int(np.ceil(0.5 * cpu_count()))

    cap = os.environ.get('CONVEXCHECK_THREADS')
    if cap is not None:
        try:
            cap = int(cap)
        except ValueError:
            raise ValueError("CONVEXCHECK_THREADS must be a positive integer. "
                             "Given {}".format(cap))
        if cap < 1:
            raise ValueError("CONVEXCHECK_THREADS must be a positive integer. "
                             "Given {}".format(cap))
        cores = min(cores, cap)

    return max(cores, 1)


def parse_range(text):
    """
    Parse an inclusive integer range written 'a..b' (or a single integer 'a').

    Examples:
    _________
      parse_range('2..7') -> (2, 7)
      parse_range('3') -> (3, 3)
    """
    text = str(text).strip()
    try:
        if '..' in text:
            lo, hi = text.split('..', 1)
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError:
        raise ValueError("Illegal range '{}' - expecting 'a..b' or 'a'".format(text))

    if lo > hi:
        raise ValueError("Illegal range '{}' - lower bound exceeds upper bound".format(text))
    return lo, hi


def uniform_points(rng, lo, hi, size):
    """Uniform samples in the axis-aligned box [lo, hi] with shape (size, d)."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    return lo + (hi - lo) * rng.random((size, lo.size))
