import os
import warnings

import numpy as np

from convexcheck.experiments import ExperimentConfig, box_size_ablation
from convexcheck.io_tools import ensure_parent

warnings.filterwarnings('ignore')


def main():
    config = ExperimentConfig(d=2, width_range=(2, 2), draws=2000, seed=0)

    # domain half-widths [-R, R]^2
    halfwidths = np.geomspace(0.25, 32.0, 8)

    dataset = box_size_ablation(config, halfwidths, n1=2, n2=2, progress=True)
    print(dataset.to_dataframe())

    file_name = os.path.join('../results/', f'box_size_ablation_seed{config.seed}.csv')
    dataset.to_dataframe().to_csv(ensure_parent(file_name))


if __name__ == '__main__':
    main()
