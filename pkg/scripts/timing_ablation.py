import os
import warnings

from convexcheck.experiments import ExperimentConfig, timing_ablation
from convexcheck.io_tools import ensure_parent

warnings.filterwarnings('ignore')


def main():
    for d in [2, 3]:
        config = ExperimentConfig(d=d, width_range=(2, 2), draws=50, seed=0)

        dataset = timing_ablation(config, widths=range(2, 9), progress=True)
        print(f"input dimension {d}")
        print(dataset.to_dataframe())

        file_name = os.path.join('../results/', f'timing_ablation_d{d}.csv')
        dataset.to_dataframe().to_csv(ensure_parent(file_name))


if __name__ == '__main__':
    main()
