import warnings

from tqdm import tqdm

from convexcheck.checker import verify_one_hidden_layer_theorem

warnings.filterwarnings('ignore')


def main():
    trials = 200

    # one-hidden-layer networks are convex iff their last layer is non-negative
    with tqdm(total=trials, desc="one hidden layer") as progress:
        summary = verify_one_hidden_layer_theorem(trials, seed=0, d=2, width=4,
                                                  halfwidth=10.0, progress=progress)

    print(f"passed {summary.passed}/{summary.trials}, failed {summary.failed}, "
          f"inconclusive {summary.inconclusive}")
    print(f"screened: {summary.screened_colinear} colinear, "
          f"{summary.screened_vacuous} with a hyperplane outside the box "
          f"({summary.attempts} draws)")
    if summary.failures:
        print(f"failing draws: {summary.failures}")


if __name__ == '__main__':
    main()
