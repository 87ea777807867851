import os
import warnings

from convexcheck.experiments import ExperimentConfig, run_heatmap
from convexcheck.io_tools import save_table, ensure_parent

warnings.filterwarnings('ignore')


def main():
    # Two-hidden-layer standard MLPs in dimension 2, widths 2..7, Gaussian parameters
    config = ExperimentConfig(d=2, width_range=(2, 7), draws=10 ** 4, seed=0,
                              box_halfwidth=3.0, skip=False)

    output_path = '../results/'
    file_name = os.path.join(output_path, f'heatmap_d{config.d}_seed{config.seed}.nc')

    dataset = run_heatmap(config, progress=True)

    # convex draws per ICNN draw for every (n1, n2)
    dataset['ratio'] = dataset.convex / dataset.icnn.where(dataset.icnn > 0)
    print(dataset.ratio.to_pandas())

    save_table(dataset, ensure_parent(file_name))
    save_table(dataset, file_name.replace('.nc', '.csv'))


if __name__ == '__main__':
    main()
